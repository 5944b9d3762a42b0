#ifndef ERGLAB_WEIGHTS_HPP
#define ERGLAB_WEIGHTS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "erglab/indexing.hpp"

namespace erglab {

/// One product-cosine term: amplitude * prod_i cos(2 pi freq_i k_i + phase_i).
struct TrigTerm {
  double amplitude = 0.0;
  std::vector<double> frequency;  // one per variable, in [0, 1)
  std::vector<double> phase;
};

/// Finite trigonometric polynomial in d integer variables.
struct TrigPolynomial {
  int dim = 1;
  std::vector<TrigTerm> terms;

  double operator()(std::span<const std::int64_t> k) const;
  /// sum of |amplitude|, an exact sup bound for the values
  double amplitude_bound() const;
  /// sum of the constant terms (all frequencies zero) evaluated once
  double constant_part() const;
};

TrigPolynomial make_trig_polynomial(int dim, std::vector<TrigTerm> terms);

/// Strictly increasing positive integers j_1 < j_2 < ... with the growth
/// ratio sup j_k / k recorded.
struct Subsequence {
  std::vector<std::int64_t> j;
  double ratio_bound = 0.0;
};

Subsequence make_subsequence(std::vector<std::int64_t> j);

enum class WeightKind { constant, trig, subsequence, product, custom };

/// Bounded weight sequence over integer (multi-)indices. The declared bound
/// is trusted lazily: every evaluation checks |value| <= bound and throws
/// if the declaration was wrong.
struct WeightSequence {
  WeightKind kind = WeightKind::constant;
  int dim = 1;
  double bound = 0.0;

  double constant_value = 0.0;                    // constant
  TrigPolynomial poly;                            // trig
  std::vector<std::int64_t> members;              // subsequence (sorted)
  std::vector<WeightSequence> factors;            // product, one per variable
  std::function<double(std::span<const std::int64_t>)> custom_eval;  // custom

  double eval(std::span<const std::int64_t> k) const;
  double eval1(std::int64_t k) const;
  bool separable() const;
};

WeightSequence constant_weights(double value);
WeightSequence trig_weights(TrigPolynomial poly);
WeightSequence subsequence_to_weights(const Subsequence& s);
WeightSequence product_weights(std::vector<WeightSequence> factors);
WeightSequence custom_weights(
    int dim, double bound,
    std::function<double(std::span<const std::int64_t>)> eval);

/// Mean absolute deviation of alpha from the model psi over a box horizon,
/// plus the same value at dyadic sub-horizons for trend inspection.
/// Conventions: half_open sums k = 1..N-1 over 1/N (one parameter),
/// inclusive sums k = 1..n over 1/|n| (boxes). The one-argument overload
/// picks half_open for dim 1 and inclusive otherwise.
struct DeviationReport {
  double value = 0.0;
  std::vector<std::pair<std::vector<std::int64_t>, double>> curve;
};

DeviationReport besicovich_deviation(const WeightSequence& alpha,
                                     const TrigPolynomial& psi,
                                     const MultiIndex& N,
                                     Convention convention);
DeviationReport besicovich_deviation(const WeightSequence& alpha,
                                     const TrigPolynomial& psi,
                                     const MultiIndex& N);

}  // namespace erglab

#endif
