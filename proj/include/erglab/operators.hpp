#ifndef ERGLAB_OPERATORS_HPP
#define ERGLAB_OPERATORS_HPP

#include <cstdint>
#include <vector>

#include "erglab/bundle.hpp"

namespace erglab {

/// Slack used by all certificate inequalities.
inline constexpr double kCertTol = 1e-12;

/// Which contraction conditions held when the operator was built.
/// All three together make the operator an L1/Linf (hence every Lp)
/// contraction: entries >= 0, row sums <= 1, and mu-weighted column sums
/// bounded by mu.
struct ContractionCertificate {
  bool nonnegative = false;
  bool row_sums = false;
  bool column_sums = false;
  bool dunford_schwartz() const { return nonnegative && row_sums && column_sums; }
};

/// One square matrix per fiber, acting atom-wise: (Tf)(w) = T_w f(w).
struct FiberedOperator {
  std::vector<Matrix> matrices;
  ContractionCertificate certificate;

  Index base_points() const { return static_cast<Index>(matrices.size()); }
  const Matrix& fiber(Index w) const { return matrices[static_cast<size_t>(w)]; }
};

/// Builds the operator and records which certificate conditions the given
/// matrices satisfy. Shape mismatches throw; certificate failures do not
/// (they are recorded as false and gate theorem modes later).
FiberedOperator make_fibered_operator(const Bundle& bundle,
                                      std::vector<Matrix> matrices);

BundleFunction apply(const FiberedOperator& T, const BundleFunction& f);
BundleFunction power_apply(const FiberedOperator& T, const BundleFunction& f,
                           std::int64_t k);

/// Full re-validation at a given exponent: per-fiber certificate booleans
/// plus a probe-based lower bound on the operator norm at p per base point.
struct OperatorValidation {
  double p = 2.0;
  std::vector<bool> fiber_nonnegative;
  std::vector<bool> fiber_row_sums;
  std::vector<bool> fiber_column_sums;
  Vector norm_probe;      // max ||Tg||_p / ||g||_p over the probe set
  bool ds_valid = false;  // all three conditions on every fiber
  bool p_only_valid = false;  // nonneg + row sums + probe <= 1 + tol
};

OperatorValidation validate(const FiberedOperator& T, const Bundle& bundle,
                            double p);

enum class OperatorKind { identity, cyclic, random_markov, random_strict };

/// Seeded generators; every kind returns an operator whose certificate
/// passes on the given bundle.
///   identity       exact identity matrices
///   cyclic         cyclic shift, entries damped by min(1, mu_to/mu_from)
///   random_markov  random stochastic rows, columns rescaled to fit mu
///   random_strict  strictly positive, substochastic rows, rescaled
FiberedOperator generate_operator(OperatorKind kind, std::uint64_t seed,
                                  const Bundle& bundle);

// ---- conditional expectation ----------------------------------------------

/// Per-fiber partition into disjoint nonempty blocks of atom indices
/// covering the whole fiber. Blocks never span base points.
struct SubalgebraPartition {
  std::vector<std::vector<std::vector<Index>>> blocks;
};

SubalgebraPartition make_partition(
    const Bundle& bundle, std::vector<std::vector<std::vector<Index>>> blocks);
SubalgebraPartition singleton_partition(const Bundle& bundle);
SubalgebraPartition whole_fiber_partition(const Bundle& bundle);
SubalgebraPartition random_partition(const Bundle& bundle, std::uint64_t seed);

/// Block average: on each block the mu-weighted mean of f over the block.
/// Positive, linear, idempotent, mass preserving, and a module map over
/// block-constant scalars.
BundleFunction conditional_expectation(const Bundle& bundle,
                                       const SubalgebraPartition& part,
                                       const BundleFunction& f);

/// Indicator of one partition block (handy for building block-constant g).
BundleFunction block_indicator(const Bundle& bundle,
                               const SubalgebraPartition& part, Index w,
                               size_t block);

}  // namespace erglab

#endif
