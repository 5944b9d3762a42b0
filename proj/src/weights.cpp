#include "erglab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace erglab {

double TrigPolynomial::operator()(std::span<const std::int64_t> k) const {
  if (static_cast<int>(k.size()) != dim)
    throw std::invalid_argument("trig polynomial: index dimension mismatch");
  double v = 0.0;
  for (const TrigTerm& t : terms) {
    double prod = t.amplitude;
    for (int i = 0; i < dim; ++i)
      prod *= std::cos(2.0 * std::numbers::pi * t.frequency[static_cast<size_t>(i)] *
                           static_cast<double>(k[static_cast<size_t>(i)]) +
                       t.phase[static_cast<size_t>(i)]);
    v += prod;
  }
  return v;
}

double TrigPolynomial::amplitude_bound() const {
  double b = 0.0;
  for (const TrigTerm& t : terms) b += std::fabs(t.amplitude);
  return b;
}

double TrigPolynomial::constant_part() const {
  double c = 0.0;
  for (const TrigTerm& t : terms) {
    bool constant = true;
    for (double f : t.frequency) constant = constant && f == 0.0;
    if (!constant) continue;
    double prod = t.amplitude;
    for (double ph : t.phase) prod *= std::cos(ph);
    c += prod;
  }
  return c;
}

TrigPolynomial make_trig_polynomial(int dim, std::vector<TrigTerm> terms) {
  if (dim < 1) throw std::invalid_argument("trig polynomial: dim < 1");
  for (const TrigTerm& t : terms) {
    if (static_cast<int>(t.frequency.size()) != dim ||
        static_cast<int>(t.phase.size()) != dim)
      throw std::invalid_argument(
          "trig polynomial: term frequency/phase length must equal dim");
    for (double f : t.frequency)
      if (!(f >= 0.0) || !(f < 1.0))
        throw std::invalid_argument(
            "trig polynomial: frequencies live in [0, 1)");
    if (!std::isfinite(t.amplitude))
      throw std::invalid_argument("trig polynomial: non-finite amplitude");
  }
  return TrigPolynomial{dim, std::move(terms)};
}

Subsequence make_subsequence(std::vector<std::int64_t> j) {
  if (j.empty()) throw std::invalid_argument("subsequence: empty");
  double ratio = 0.0;
  std::int64_t prev = 0;
  for (size_t k = 0; k < j.size(); ++k) {
    if (j[k] <= prev)
      throw std::invalid_argument(
          "subsequence: entries must be strictly increasing positive "
          "integers");
    prev = j[k];
    ratio = std::max(ratio, static_cast<double>(j[k]) /
                                static_cast<double>(k + 1));
  }
  return Subsequence{std::move(j), ratio};
}

bool WeightSequence::separable() const {
  return dim == 1 || kind == WeightKind::product ||
         kind == WeightKind::constant;
}

double WeightSequence::eval(std::span<const std::int64_t> k) const {
  if (static_cast<int>(k.size()) != dim)
    throw std::invalid_argument("weights: index dimension mismatch");
  double v = 0.0;
  switch (kind) {
    case WeightKind::constant:
      v = constant_value;
      break;
    case WeightKind::trig:
      v = poly(k);
      break;
    case WeightKind::subsequence:
      v = std::binary_search(members.begin(), members.end(), k[0]) ? 1.0 : 0.0;
      break;
    case WeightKind::product: {
      v = 1.0;
      for (size_t i = 0; i < factors.size(); ++i)
        v *= factors[i].eval1(k[i]);
      break;
    }
    case WeightKind::custom:
      v = custom_eval(k);
      break;
  }
  if (!(std::fabs(v) <= bound + 1e-12 * (1.0 + std::fabs(bound))))
    throw std::runtime_error("weights: declared bound " +
                             std::to_string(bound) +
                             " violated by value " + std::to_string(v));
  return v;
}

double WeightSequence::eval1(std::int64_t k) const {
  const std::int64_t idx[1] = {k};
  return eval(std::span<const std::int64_t>(idx, 1));
}

WeightSequence constant_weights(double value) {
  WeightSequence w;
  w.kind = WeightKind::constant;
  w.dim = 1;
  w.bound = std::fabs(value);
  w.constant_value = value;
  return w;
}

WeightSequence trig_weights(TrigPolynomial poly) {
  WeightSequence w;
  w.kind = WeightKind::trig;
  w.dim = poly.dim;
  w.bound = poly.amplitude_bound();
  w.poly = std::move(poly);
  return w;
}

WeightSequence subsequence_to_weights(const Subsequence& s) {
  WeightSequence w;
  w.kind = WeightKind::subsequence;
  w.dim = 1;
  w.bound = 1.0;
  w.members = s.j;
  return w;
}

WeightSequence product_weights(std::vector<WeightSequence> factors) {
  if (factors.empty())
    throw std::invalid_argument("product weights: no factors");
  WeightSequence w;
  w.kind = WeightKind::product;
  w.dim = static_cast<int>(factors.size());
  w.bound = 1.0;
  for (const WeightSequence& f : factors) {
    if (f.dim != 1)
      throw std::invalid_argument(
          "product weights: every factor must be one-parameter");
    w.bound *= f.bound;
  }
  w.factors = std::move(factors);
  return w;
}

WeightSequence custom_weights(
    int dim, double bound,
    std::function<double(std::span<const std::int64_t>)> eval) {
  if (dim < 1) throw std::invalid_argument("custom weights: dim < 1");
  if (!(bound >= 0.0))
    throw std::invalid_argument("custom weights: bound must be >= 0");
  WeightSequence w;
  w.kind = WeightKind::custom;
  w.dim = dim;
  w.bound = bound;
  w.custom_eval = std::move(eval);
  return w;
}

namespace {

// averaged |alpha - psi| over the box cut at `cut`, under the convention
double box_deviation(const WeightSequence& alpha, const TrigPolynomial& psi,
                     const std::vector<std::int64_t>& cut,
                     Convention convention) {
  const int d = static_cast<int>(cut.size());
  if (convention == Convention::half_open) {
    const std::int64_t N = cut[0];
    double s = 0.0;
    for (std::int64_t k = 1; k < N; ++k) {
      const std::int64_t idx[1] = {k};
      std::span<const std::int64_t> sp(idx, 1);
      s += std::fabs(alpha.eval(sp) - psi(sp));
    }
    return s / static_cast<double>(N);
  }

  // inclusive box 1..n_i in odometer order, first coordinate fastest
  std::vector<std::int64_t> k(static_cast<size_t>(d), 1);
  double s = 0.0;
  std::int64_t count = 0;
  bool done = false;
  while (!done) {
    std::span<const std::int64_t> sp(k.data(), k.size());
    s += std::fabs(alpha.eval(sp) - psi(sp));
    ++count;
    int axis = 0;
    while (axis < d) {
      if (k[static_cast<size_t>(axis)] < cut[static_cast<size_t>(axis)]) {
        ++k[static_cast<size_t>(axis)];
        break;
      }
      k[static_cast<size_t>(axis)] = 1;
      ++axis;
    }
    done = axis == d;
  }
  return s / static_cast<double>(count);
}

}  // namespace

DeviationReport besicovich_deviation(const WeightSequence& alpha,
                                     const TrigPolynomial& psi,
                                     const MultiIndex& N,
                                     Convention convention) {
  if (alpha.dim != N.dim() || psi.dim != N.dim())
    throw std::invalid_argument("besicovich_deviation: dimension mismatch");
  if (convention == Convention::from_zero)
    throw std::invalid_argument(
        "besicovich_deviation: use half_open or inclusive");
  if (convention == Convention::half_open && N.dim() != 1)
    throw std::invalid_argument(
        "besicovich_deviation: half_open needs one parameter");
  if (convention == Convention::half_open && N.n[0] < 2)
    throw std::invalid_argument("besicovich_deviation: horizon too small");

  DeviationReport rep;
  // dyadic sub-horizons 2, 4, ... clipped at N, then N itself
  std::vector<std::vector<std::int64_t>> cuts;
  std::int64_t h = 2;
  const std::int64_t hmax = N.min_component();
  while (h < hmax) {
    std::vector<std::int64_t> cut(N.n.size());
    for (size_t i = 0; i < N.n.size(); ++i) cut[i] = std::min(h, N.n[i]);
    cuts.push_back(std::move(cut));
    h *= 2;
  }
  cuts.push_back(N.n);

  for (const auto& cut : cuts)
    rep.curve.emplace_back(cut, box_deviation(alpha, psi, cut, convention));
  rep.value = rep.curve.back().second;
  return rep;
}

DeviationReport besicovich_deviation(const WeightSequence& alpha,
                                     const TrigPolynomial& psi,
                                     const MultiIndex& N) {
  return besicovich_deviation(
      alpha, psi, N,
      N.dim() == 1 ? Convention::half_open : Convention::inclusive);
}

}  // namespace erglab
