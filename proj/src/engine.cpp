#include "erglab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace erglab {

double q_dual(double p) {
  if (!(p > 1.0) || std::isinf(p))
    throw std::invalid_argument("q_dual: p must be finite and > 1");
  return p / (p - 1.0);
}

std::vector<MultiIndex> dyadic_schedule(int d, std::int64_t max) {
  if (d < 1) throw std::invalid_argument("dyadic_schedule: d < 1");
  if (max < 2) throw std::invalid_argument("dyadic_schedule: max < 2");
  std::vector<MultiIndex> out;
  for (std::int64_t h = 2; h <= max; h *= 2)
    out.push_back(MultiIndex(std::vector<std::int64_t>(
        static_cast<size_t>(d), h)));
  return out;
}

namespace {

BundleFunction zeros_shaped(const BundleFunction& f) {
  BundleFunction z = f;
  for (auto& v : z.values) v.setZero();
  return z;
}

void axpy(BundleFunction& acc, double c, const BundleFunction& x) {
  for (Index w = 0; w < acc.base_points(); ++w)
    if (c == 1.0)
      acc.fiber(w) += x.fiber(w);
    else
      acc.fiber(w) += c * x.fiber(w);
}

double max_abs_diff(const BundleFunction& f, const BundleFunction& g) {
  double m = 0.0;
  for (Index w = 0; w < f.base_points(); ++w)
    m = std::max(m, (f.fiber(w) - g.fiber(w)).cwiseAbs().maxCoeff());
  return m;
}

void require_ds(const FiberedOperator& T, const char* where) {
  if (!T.certificate.dunford_schwartz())
    throw HypothesisError(std::string(where) +
                          ": operator lacks the contraction certificate");
}

void require_ds_all(std::span<const FiberedOperator> Ts, const char* where) {
  if (Ts.empty())
    throw std::invalid_argument(std::string(where) + ": no operators");
  for (const FiberedOperator& T : Ts) require_ds(T, where);
}

std::int64_t steps_for(std::int64_t n, Convention conv) {
  return conv == Convention::inclusive ? n : n - 1;
}

// shared one-parameter accumulation; gates live in the public wrappers
BundleFunction one_param_average(const FiberedOperator& T,
                                 const BundleFunction& f,
                                 const WeightSequence* alpha, std::int64_t n,
                                 Convention conv) {
  if (n < 1) throw std::invalid_argument("average: horizon must be >= 1");
  if (alpha && alpha->dim != 1)
    throw std::invalid_argument("average: weights must be one-parameter");
  BundleFunction acc;
  if (conv == Convention::from_zero) {
    acc = f;
    if (alpha) {
      const double w0 = alpha->eval1(0);
      acc = zeros_shaped(f);
      axpy(acc, w0, f);
    }
  } else {
    acc = zeros_shaped(f);
  }
  BundleFunction u = f;
  const std::int64_t steps = steps_for(n, conv);
  for (std::int64_t k = 1; k <= steps; ++k) {
    u = apply(T, u);
    axpy(acc, alpha ? alpha->eval1(k) : 1.0, u);
  }
  return (1.0 / static_cast<double>(n)) * acc;
}

void validate_1d_schedule(std::span<const std::int64_t> schedule) {
  if (schedule.empty())
    throw std::invalid_argument("maximal: empty schedule");
  std::int64_t prev = 0;
  for (std::int64_t s : schedule) {
    if (s <= prev)
      throw std::invalid_argument(
          "maximal: schedule must be strictly increasing, >= 1");
    prev = s;
  }
}

void require_maximal_p(double p) {
  if (std::isnan(p) || std::isinf(p) || p <= 1.0)
    throw HypothesisError(
        "maximal: the bound needs finite p > 1 (q = p/(p-1))");
}

void finish_ratios(const Bundle& bundle, AverageTrace& tr,
                   const BundleFunction& f, double factor, double p) {
  tr.p = p;
  tr.bound_factor = factor;
  BaseScalar base = lp_norm(bundle, f, p);
  tr.rhs = BaseScalar{factor * base.values};
  double worst = 0.0;
  for (const BaseScalar& mn : tr.running_max_norms) {
    for (Index w = 0; w < mn.values.size(); ++w) {
      const double lhs = mn.values[w];
      const double rhs = tr.rhs.values[w];
      double ratio;
      if (rhs > 0.0)
        ratio = lhs / rhs;
      else
        ratio = lhs <= 1e-300 ? 0.0 : std::numeric_limits<double>::infinity();
      worst = std::max(worst, ratio);
    }
  }
  tr.max_ratio = worst;
}

AverageTrace one_param_maximal(const Bundle& bundle, const FiberedOperator& T,
                               const BundleFunction& f,
                               const WeightSequence* alpha,
                               std::span<const std::int64_t> schedule,
                               double p, Convention conv, double factor) {
  require_maximal_p(p);
  validate_1d_schedule(schedule);
  require_shaped(bundle, f, "maximal");

  const BundleFunction g = abs(f);
  BundleFunction u = g;
  BundleFunction acc =
      conv == Convention::from_zero ? g : zeros_shaped(g);

  AverageTrace tr;
  bool first = true;
  size_t si = 0;
  auto record = [&](std::int64_t n) {
    BundleFunction avg = (1.0 / static_cast<double>(n)) * acc;
    if (first) {
      tr.running_max = avg;
      first = false;
    } else {
      tr.running_max = sup(tr.running_max, avg);
    }
    tr.horizons.push_back(MultiIndex{n});
    tr.average_norms.push_back(lp_norm(bundle, avg, p));
    tr.running_max_norms.push_back(lp_norm(bundle, tr.running_max, p));
    tr.averages.push_back(std::move(avg));
  };
  auto drain = [&](std::int64_t steps_done) {
    while (si < schedule.size() &&
           steps_for(schedule[si], conv) == steps_done)
      record(schedule[si++]);
  };

  drain(0);
  for (std::int64_t k = 1; si < schedule.size(); ++k) {
    u = apply(T, u);
    axpy(acc, alpha ? alpha->eval1(k) : 1.0, u);
    drain(k);
  }
  finish_ratios(bundle, tr, f, factor, p);
  return tr;
}

// raw box sum; axis_w[i] == nullptr means weight 1 along that axis
BundleFunction box_sum(std::span<const FiberedOperator> Ts,
                       const BundleFunction& f, const MultiIndex& n,
                       const std::vector<const WeightSequence*>& axis_w) {
  BundleFunction g = f;
  for (int i = static_cast<int>(Ts.size()) - 1; i >= 0; --i) {
    BundleFunction u = g;
    BundleFunction acc = zeros_shaped(g);
    const WeightSequence* w = axis_w[static_cast<size_t>(i)];
    for (std::int64_t k = 1; k <= n.n[static_cast<size_t>(i)]; ++k) {
      u = apply(Ts[static_cast<size_t>(i)], u);
      axpy(acc, w ? w->eval1(k) : 1.0, u);
    }
    g = std::move(acc);
  }
  return g;
}

// odometer enumeration for non-separable weights; chain[i] holds
// T_i^{k_i}(chain[i+1]) with chain[d] = f
BundleFunction enumerated_weighted_sum(std::span<const FiberedOperator> Ts,
                                       const BundleFunction& f,
                                       const WeightSequence& alpha,
                                       const MultiIndex& n) {
  if (n.volume() > kEnumerationBudget)
    throw std::runtime_error(
        "weighted box average: non-separable weights over " +
        std::to_string(n.volume()) +
        " points exceeds the enumeration budget (" +
        std::to_string(kEnumerationBudget) + ")");
  const int d = static_cast<int>(Ts.size());
  std::vector<BundleFunction> chain(static_cast<size_t>(d) + 1);
  chain[static_cast<size_t>(d)] = f;
  for (int i = d - 1; i >= 0; --i)
    chain[static_cast<size_t>(i)] =
        apply(Ts[static_cast<size_t>(i)], chain[static_cast<size_t>(i) + 1]);
  std::vector<std::int64_t> k(static_cast<size_t>(d), 1);
  BundleFunction acc = zeros_shaped(f);
  for (;;) {
    axpy(acc, alpha.eval(k), chain[0]);
    int axis = 0;
    while (axis < d &&
           k[static_cast<size_t>(axis)] == n.n[static_cast<size_t>(axis)])
      ++axis;
    if (axis == d) break;
    ++k[static_cast<size_t>(axis)];
    chain[static_cast<size_t>(axis)] =
        apply(Ts[static_cast<size_t>(axis)], chain[static_cast<size_t>(axis)]);
    for (int i = axis - 1; i >= 0; --i) {
      k[static_cast<size_t>(i)] = 1;
      chain[static_cast<size_t>(i)] =
          apply(Ts[static_cast<size_t>(i)], chain[static_cast<size_t>(i) + 1]);
    }
  }
  return acc;
}

BundleFunction weighted_box_average(std::span<const FiberedOperator> Ts,
                                    const BundleFunction& f,
                                    const WeightSequence* alpha,
                                    const MultiIndex& n) {
  const int d = static_cast<int>(Ts.size());
  if (n.dim() != d)
    throw std::invalid_argument("box average: horizon dimension mismatch");
  const double inv = 1.0 / static_cast<double>(n.volume());
  if (!alpha) {
    std::vector<const WeightSequence*> axis_w(static_cast<size_t>(d),
                                              nullptr);
    return inv * box_sum(Ts, f, n, axis_w);
  }
  if (alpha->dim != d)
    throw std::invalid_argument("box average: weight dimension mismatch");
  if (alpha->kind == WeightKind::constant) {
    std::vector<const WeightSequence*> axis_w(static_cast<size_t>(d),
                                              nullptr);
    return (alpha->constant_value * inv) * box_sum(Ts, f, n, axis_w);
  }
  if (d == 1) {
    std::vector<const WeightSequence*> axis_w{alpha};
    return inv * box_sum(Ts, f, n, axis_w);
  }
  if (alpha->kind == WeightKind::product) {
    std::vector<const WeightSequence*> axis_w;
    for (const WeightSequence& fac : alpha->factors) axis_w.push_back(&fac);
    return inv * box_sum(Ts, f, n, axis_w);
  }
  return inv * enumerated_weighted_sum(Ts, f, *alpha, n);
}

void validate_box_schedule(std::span<const MultiIndex> schedule, int d) {
  if (schedule.empty())
    throw std::invalid_argument("maximal: empty schedule");
  for (const MultiIndex& h : schedule)
    if (h.dim() != d)
      throw std::invalid_argument("maximal: schedule dimension mismatch");
  for (size_t i = 1; i < schedule.size(); ++i)
    for (int c = 0; c < d; ++c)
      if (schedule[i].n[static_cast<size_t>(c)] <
          schedule[i - 1].n[static_cast<size_t>(c)])
        throw std::invalid_argument(
            "maximal: box schedule must be componentwise nondecreasing");
}

AverageTrace box_maximal(const Bundle& bundle,
                         std::span<const FiberedOperator> Ts,
                         const BundleFunction& f, const WeightSequence* alpha,
                         std::span<const MultiIndex> schedule, double p,
                         bool abs_of_average, double factor) {
  require_maximal_p(p);
  validate_box_schedule(schedule, static_cast<int>(Ts.size()));
  require_shaped(bundle, f, "maximal");

  const BundleFunction g = abs_of_average ? f : abs(f);
  AverageTrace tr;
  bool first = true;
  for (const MultiIndex& n : schedule) {
    BundleFunction avg = weighted_box_average(Ts, g, alpha, n);
    BundleFunction contender = abs_of_average ? abs(avg) : avg;
    if (first) {
      tr.running_max = contender;
      first = false;
    } else {
      tr.running_max = sup(tr.running_max, contender);
    }
    tr.horizons.push_back(n);
    tr.average_norms.push_back(lp_norm(bundle, avg, p));
    tr.running_max_norms.push_back(lp_norm(bundle, tr.running_max, p));
    tr.averages.push_back(std::move(avg));
  }
  finish_ratios(bundle, tr, f, factor, p);
  return tr;
}

}  // namespace

BundleFunction cesaro_average(const FiberedOperator& T,
                              const BundleFunction& f, std::int64_t n,
                              Convention conv) {
  require_ds(T, "cesaro_average");
  return one_param_average(T, f, nullptr, n, conv);
}

BundleFunction weighted_average(const FiberedOperator& T,
                                const BundleFunction& f,
                                const WeightSequence& alpha, std::int64_t N,
                                Convention conv) {
  require_ds(T, "weighted_average");
  return one_param_average(T, f, &alpha, N, conv);
}

BundleFunction subsequence_average(const FiberedOperator& T,
                                   const BundleFunction& f,
                                   const Subsequence& s, std::int64_t N) {
  require_ds(T, "subsequence_average");
  if (N < 1) throw std::invalid_argument("subsequence_average: N < 1");
  if (N > 1 && s.j.back() < N - 1)
    throw std::invalid_argument(
        "subsequence_average: stored subsequence ends at " +
        std::to_string(s.j.back()) + ", horizon needs membership up to " +
        std::to_string(N - 1));
  BundleFunction acc = zeros_shaped(f);
  BundleFunction u = f;
  std::int64_t power = 0;
  for (std::int64_t j : s.j) {
    if (j > N - 1) break;
    while (power < j) {
      u = apply(T, u);
      ++power;
    }
    axpy(acc, 1.0, u);
  }
  return (1.0 / static_cast<double>(N)) * acc;
}

BundleFunction multiparameter_average(std::span<const FiberedOperator> Ts,
                                      const BundleFunction& f,
                                      const MultiIndex& n) {
  require_ds_all(Ts, "multiparameter_average");
  return weighted_box_average(Ts, f, nullptr, n);
}

BundleFunction weighted_multiparameter_average(
    std::span<const FiberedOperator> Ts, const BundleFunction& f,
    const WeightSequence& alpha, const MultiIndex& n) {
  require_ds_all(Ts, "weighted_multiparameter_average");
  return weighted_box_average(Ts, f, &alpha, n);
}

AverageTrace cesaro_maximal(const Bundle& bundle, const FiberedOperator& T,
                            const BundleFunction& f,
                            std::span<const std::int64_t> schedule,
                            double p) {
  require_ds(T, "cesaro_maximal");
  require_maximal_p(p);
  return one_param_maximal(bundle, T, f, nullptr, schedule, p,
                           Convention::from_zero, q_dual(p));
}

AverageTrace weighted_maximal(const Bundle& bundle, const FiberedOperator& T,
                              const BundleFunction& f,
                              const WeightSequence& alpha,
                              std::span<const std::int64_t> schedule,
                              double p) {
  require_ds(T, "weighted_maximal");
  require_maximal_p(p);
  if (alpha.dim != 1)
    throw std::invalid_argument("weighted_maximal: weights must be "
                                "one-parameter");
  return one_param_maximal(bundle, T, f, &alpha, schedule, p,
                           Convention::half_open, q_dual(p) * alpha.bound);
}

AverageTrace multiparameter_maximal(const Bundle& bundle,
                                    std::span<const FiberedOperator> Ts,
                                    const BundleFunction& f,
                                    std::span<const MultiIndex> schedule,
                                    double p) {
  require_ds_all(Ts, "multiparameter_maximal");
  require_maximal_p(p);
  const double qd = std::pow(q_dual(p), static_cast<double>(Ts.size()));
  return box_maximal(bundle, Ts, f, nullptr, schedule, p, false, qd);
}

AverageTrace weighted_multiparameter_maximal(
    const Bundle& bundle, std::span<const FiberedOperator> Ts,
    const BundleFunction& f, const WeightSequence& alpha,
    std::span<const MultiIndex> schedule, double p) {
  require_ds_all(Ts, "weighted_multiparameter_maximal");
  require_maximal_p(p);
  const double qd = std::pow(q_dual(p), static_cast<double>(Ts.size()));
  return box_maximal(bundle, Ts, f, &alpha, schedule, p, true,
                     alpha.bound * qd);
}

// ---- oracles ---------------------------------------------------------

FiberOracle cesaro_projection(const Matrix& T) {
  const Index m = T.rows();
  FiberOracle fo;
  const Matrix A = Matrix::Identity(m, m) - T;
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
  const double tol = 1e-9 * std::max(1.0, smax);

  int r = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] <= tol) ++r;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > tol && sigma[i] < 1e-5 * std::max(1.0, smax)) {
      fo.flagged = true;
      fo.note = "near-singular fixed cluster";
    }
  fo.fixed_dim = r;

  if (r == 0) {
    fo.projection = Matrix::Zero(m, m);
  } else {
    const Matrix U = svd.matrixV().rightCols(r);   // ker(I - T)
    const Matrix W = svd.matrixU().rightCols(r);   // ker((I - T)^T)
    const Matrix M = W.transpose() * U;
    Eigen::JacobiSVD<Matrix> msvd(M);
    const Vector& ms = msvd.singularValues();
    fo.pairing_condition =
        ms[r - 1] > 0.0 ? ms[0] / ms[r - 1]
                        : std::numeric_limits<double>::infinity();
    if (!(fo.pairing_condition < 1e12)) {
      fo.flagged = true;
      fo.note = "ill-conditioned fixed/cofixed pairing";
      fo.projection = Matrix::Zero(m, m);
    } else {
      fo.projection = U * M.fullPivLu().solve(W.transpose());
    }
  }

  if (m <= 64) {
    Eigen::EigenSolver<Matrix> es(T, false);
    if (es.info() != Eigen::Success) {
      fo.flagged = true;
      fo.note = "eigensolver failed";
    } else {
      double second = 0.0;
      for (Index i = 0; i < m; ++i) {
        const std::complex<double> lam = es.eigenvalues()[i];
        fo.eigenvalues.push_back(lam);
        if (std::abs(lam - 1.0) <= 1e-8) continue;
        second = std::max(second, std::abs(lam));
        if (std::abs(lam) >= 1.0 - 1e-6) fo.has_unimodular_nonfixed = true;
      }
      fo.spectral_gap = 1.0 - second;
    }
  } else {
    fo.spectral_gap = std::numeric_limits<double>::quiet_NaN();
  }
  return fo;
}

double measured_spectral_gap(const FiberedOperator& T) {
  double g = std::numeric_limits<double>::infinity();
  for (const Matrix& m : T.matrices) {
    if (m.rows() > 64)
      throw std::invalid_argument(
          "measured_spectral_gap: fiber too large for a dense eigensolve");
    g = std::min(g, cesaro_projection(m).spectral_gap);
  }
  return g;
}

PowerAverageResult power_average_limit(const FiberedOperator& T,
                                       const BundleFunction& f,
                                       std::int64_t K0, int max_doublings,
                                       double tol) {
  if (K0 < 1) throw std::invalid_argument("power_average_limit: K0 < 1");
  BundleFunction u = power_apply(T, f, K0);
  auto window_avg = [&](std::int64_t len) {
    BundleFunction acc = zeros_shaped(u);
    for (std::int64_t i = 0; i < len; ++i) {
      axpy(acc, 1.0, u);
      u = apply(T, u);
    }
    return (1.0 / static_cast<double>(len)) * acc;
  };

  PowerAverageResult res;
  std::int64_t len = K0;
  BundleFunction prev = window_avg(len);
  for (int dbl = 1; dbl <= max_doublings; ++dbl) {
    len *= 2;
    BundleFunction cur = window_avg(len);
    res.last_delta = max_abs_diff(prev, cur);
    res.doublings_used = dbl;
    if (res.last_delta <= tol) {
      res.limit = std::move(cur);
      res.converged = true;
      return res;
    }
    prev = std::move(cur);
  }
  res.limit = std::move(prev);
  res.converged = false;
  return res;
}

namespace {

bool term_resonates(const std::vector<std::complex<double>>& eigs,
                    double freq) {
  const std::complex<double> plus =
      std::polar(1.0, 2.0 * std::numbers::pi * freq);
  const std::complex<double> minus = std::conj(plus);
  for (const std::complex<double>& lam : eigs) {
    if (std::abs(lam) < 1.0 - 1e-6) continue;
    if (std::abs(lam - plus) < 1e-6 || std::abs(lam - minus) < 1e-6)
      return true;
  }
  return false;
}

// Closed-form limit data for a weight sequence: the constant part c0 and
// the trig polynomials to scan for resonances. axis == -1 marks the
// genuine d-variable polynomial (term frequency i faces operator i);
// axis == i marks a one-parameter product factor facing operator i alone.
struct WeightLimitInfo {
  double c0 = 1.0;
  std::vector<std::pair<int, const TrigPolynomial*>> polys;
  std::string why_not;
};

bool weight_limit_info(const WeightSequence& w, WeightLimitInfo& info) {
  switch (w.kind) {
    case WeightKind::constant:
      info.c0 *= w.constant_value;
      return true;
    case WeightKind::trig:
      info.c0 *= w.poly.constant_part();
      info.polys.emplace_back(-1, &w.poly);
      return true;
    case WeightKind::product: {
      for (size_t i = 0; i < w.factors.size(); ++i) {
        const WeightSequence& fac = w.factors[i];
        if (fac.kind == WeightKind::constant) {
          info.c0 *= fac.constant_value;
        } else if (fac.kind == WeightKind::trig) {
          info.c0 *= fac.poly.constant_part();
          info.polys.emplace_back(static_cast<int>(i), &fac.poly);
        } else {
          info.why_not = "no closed-form limit for this weight kind";
          return false;
        }
      }
      return true;
    }
    default:
      info.why_not = "no closed-form limit for this weight kind";
      return false;
  }
}

}  // namespace

OracleResult oracle_limit(const Bundle& bundle,
                          std::span<const FiberedOperator> Ts,
                          const BundleFunction& f, OracleMode mode,
                          const WeightSequence* alpha, bool cross_check) {
  if (Ts.empty()) throw std::invalid_argument("oracle_limit: no operators");
  require_shaped(bundle, f, "oracle_limit");
  const int d = static_cast<int>(Ts.size());
  const bool box_mode = mode == OracleMode::multiparameter ||
                        mode == OracleMode::weighted_multiparameter;
  if (!box_mode && d != 1)
    throw std::invalid_argument("oracle_limit: one operator expected");

  OracleResult res;
  auto flag = [&](const std::string& note) {
    res.flagged = true;
    if (res.note.find(note) != std::string::npos) return;
    if (!res.note.empty()) res.note += "; ";
    res.note += note;
  };

  // multiplier in front of the projected function
  double c0 = 1.0;
  WeightLimitInfo winfo;
  if (mode == OracleMode::weighted ||
      mode == OracleMode::weighted_multiparameter) {
    if (!alpha)
      throw std::invalid_argument("oracle_limit: weighted mode needs weights");
    if (!weight_limit_info(*alpha, winfo))
      flag(winfo.why_not);
    else
      c0 = winfo.c0;
  } else if (mode == OracleMode::subsequence) {
    if (!alpha || alpha->kind != WeightKind::subsequence)
      throw std::invalid_argument(
          "oracle_limit: subsequence mode needs indicator weights");
    const auto& j = alpha->members;
    const size_t L = j.size();
    const double dens =
        static_cast<double>(L) / static_cast<double>(j.back());
    const size_t half = L / 2;
    if (half == 0) {
      flag("subsequence too short to estimate a density");
    } else {
      const double dens2 = static_cast<double>(half) /
                           static_cast<double>(j[half - 1]);
      if (std::fabs(dens - dens2) > 1e-6 * std::max(1.0, dens))
        flag("subsequence density did not stabilize");
      c0 = dens;
    }
  }

  bool small = true;
  for (Index w = 0; w < bundle.base_points(); ++w)
    small = small && bundle.fiber(w).atom_count() <= 12;

  // eigen-projection route
  std::vector<std::vector<FiberOracle>> fo;
  if (small) {
    double min_gap = std::numeric_limits<double>::infinity();
    fo.resize(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
      for (Index w = 0; w < bundle.base_points(); ++w) {
        FiberOracle o =
            cesaro_projection(Ts[static_cast<size_t>(i)].fiber(w));
        if (o.flagged) flag(o.note);
        if (mode == OracleMode::subsequence && o.has_unimodular_nonfixed)
          flag("subsequence limit needs aperiodic fibers");
        for (const auto& [axis, tp] : winfo.polys) {
          if (axis != -1 && axis != i) continue;
          for (const TrigTerm& t : tp->terms) {
            const size_t coord =
                axis == -1 ? static_cast<size_t>(i) : size_t{0};
            const double freq = t.frequency[coord];
            if (freq != 0.0 && term_resonates(o.eigenvalues, freq))
              flag("weight frequency resonates with a unimodular "
                   "eigenvalue");
          }
        }
        min_gap = std::min(min_gap, o.spectral_gap);
        fo[static_cast<size_t>(i)].push_back(std::move(o));
      }
    }
    res.min_gap = min_gap;

    BundleFunction g = f;
    for (int i = d - 1; i >= 0; --i) {
      BundleFunction h = g;
      for (Index w = 0; w < bundle.base_points(); ++w)
        h.fiber(w) =
            fo[static_cast<size_t>(i)][static_cast<size_t>(w)].projection *
            g.fiber(w);
      g = std::move(h);
    }
    res.limit = c0 * g;
    res.available = !res.flagged;
  }

  // power-average route: fallback for large fibers, cross-check otherwise
  if (!small || (cross_check && !res.flagged)) {
    BundleFunction g = f;
    bool conv = true;
    for (int i = d - 1; i >= 0 && conv; --i) {
      PowerAverageResult pr =
          power_average_limit(Ts[static_cast<size_t>(i)], g);
      conv = conv && pr.converged;
      g = std::move(pr.limit);
    }
    BundleFunction power_limit = c0 * g;
    if (!small) {
      res.limit = std::move(power_limit);
      res.available = conv && !res.flagged;
      if (!conv) flag("power-average oracle did not converge");
    } else if (conv) {
      res.cross_checked = true;
      res.cross_delta = max_abs_diff(res.limit, power_limit);
      if (!(res.cross_delta <= 1e-8)) {
        flag("oracle routes disagree");
        res.available = false;
      }
    }
  }
  return res;
}

// ---- theorem checks ---------------------------------------------------

std::string check_kind_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::cesaro: return "cesaro";
    case CheckKind::besicovich: return "besicovich";
    case CheckKind::subsequence: return "subsequence";
    case CheckKind::multi: return "multi";
    case CheckKind::multi_weighted: return "multi-weighted";
  }
  return "?";
}

CheckOutcome theorem_check(CheckKind kind, const CheckInputs& in,
                           std::span<const MultiIndex> horizons,
                           const CheckThresholds& th,
                           std::uint64_t seed_label) {
  CheckOutcome out;
  TheoremVerdict& v = out.verdict;
  v.check = check_kind_name(kind);
  v.seed = seed_label;
  auto refuse = [&](const std::string& why) {
    v.refused = true;
    v.pass = false;
    v.reason = why;
    return out;
  };

  if (!in.bundle) throw std::invalid_argument("theorem_check: no bundle");
  const Bundle& bundle = *in.bundle;
  if (horizons.empty()) return refuse("empty horizon schedule");
  if (std::isnan(in.p) || std::isinf(in.p) || in.p <= 1.0)
    return refuse("the maximal bound needs finite p > 1");

  const bool box_mode =
      kind == CheckKind::multi || kind == CheckKind::multi_weighted;
  const int d = horizons[0].dim();
  if (!box_mode && d != 1) return refuse("one-parameter check needs scalar "
                                         "horizons");
  if (in.ops.size() != static_cast<size_t>(box_mode ? d : 1))
    return refuse("operator count does not match the horizon dimension");

  // certificate gates
  std::string gate_note;
  if (kind == CheckKind::cesaro) {
    if (!in.ops[0].certificate.dunford_schwartz()) {
      OperatorValidation rep = validate(in.ops[0], bundle, in.p);
      if (!rep.p_only_valid)
        return refuse("operator lacks the contraction certificate and "
                      "fails the p-norm probe gate");
      gate_note = "p-only gate (probe norms <= 1)";
    }
  } else {
    for (const FiberedOperator& T : in.ops)
      if (!T.certificate.dunford_schwartz())
        return refuse("operator lacks the contraction certificate");
  }

  if (kind == CheckKind::besicovich &&
      (!in.alpha || in.alpha->dim != 1))
    return refuse("besicovich check needs one-parameter weights");
  if (kind == CheckKind::subsequence && !in.subseq)
    return refuse("subsequence check needs a subsequence");
  if (kind == CheckKind::multi_weighted &&
      (!in.alpha || in.alpha->dim != d))
    return refuse("weighted box check needs d-parameter weights");

  // maximal trace
  AverageTrace trace;
  const double q = q_dual(in.p);
  std::optional<WeightSequence> indicator;
  const WeightSequence* alpha = in.alpha ? &*in.alpha : nullptr;
  switch (kind) {
    case CheckKind::cesaro: {
      std::vector<std::int64_t> sched;
      for (const MultiIndex& h : horizons) sched.push_back(h.n[0]);
      trace = one_param_maximal(bundle, in.ops[0], in.f, nullptr, sched,
                                in.p, Convention::from_zero, q);
      break;
    }
    case CheckKind::besicovich: {
      std::vector<std::int64_t> sched;
      for (const MultiIndex& h : horizons) sched.push_back(h.n[0]);
      trace = one_param_maximal(bundle, in.ops[0], in.f, alpha, sched, in.p,
                                Convention::half_open, q * alpha->bound);
      break;
    }
    case CheckKind::subsequence: {
      indicator = subsequence_to_weights(*in.subseq);
      alpha = &*indicator;
      std::vector<std::int64_t> sched;
      for (const MultiIndex& h : horizons) sched.push_back(h.n[0]);
      trace = one_param_maximal(bundle, in.ops[0], in.f, alpha, sched, in.p,
                                Convention::half_open, q * alpha->bound);
      break;
    }
    case CheckKind::multi:
      trace = multiparameter_maximal(bundle, in.ops, in.f, horizons, in.p);
      break;
    case CheckKind::multi_weighted:
      trace = weighted_multiparameter_maximal(bundle, in.ops, in.f, *alpha,
                                              horizons, in.p);
      break;
  }
  v.max_ratio = trace.max_ratio;

  // oracle + tail at the final horizon, on the same quantity the trace
  // averaged (|f| everywhere except the weighted box mode)
  OracleMode omode = OracleMode::cesaro;
  if (kind == CheckKind::besicovich) omode = OracleMode::weighted;
  if (kind == CheckKind::subsequence) omode = OracleMode::subsequence;
  if (kind == CheckKind::multi) omode = OracleMode::multiparameter;
  if (kind == CheckKind::multi_weighted)
    omode = OracleMode::weighted_multiparameter;
  const BundleFunction compared =
      kind == CheckKind::multi_weighted ? in.f : abs(in.f);
  out.oracle = oracle_limit(bundle, in.ops, compared, omode, alpha);
  v.oracle_flagged = out.oracle.flagged || !out.oracle.available;

  bool tail_ok = true;
  if (!v.oracle_flagged) {
    double dev = 0.0;
    const BundleFunction& last = trace.averages.back();
    for (Index w = 0; w < last.base_points(); ++w)
      dev = std::max(dev, (last.fiber(w) - out.oracle.limit.fiber(w))
                              .cwiseAbs()
                              .maxCoeff());
    v.tail_dev = dev;
    tail_ok = dev <= th.tail_threshold;
  }
  if (v.oracle_flagged) {
    tail_ok = !th.require_oracle;
    if (!out.oracle.note.empty()) v.reason = "oracle: " + out.oracle.note;
  }
  if (!gate_note.empty())
    v.reason = v.reason.empty() ? gate_note : v.reason + "; " + gate_note;

  v.pass = trace.max_ratio <= 1.0 + th.ratio_tol && tail_ok;
  out.trace = std::move(trace);
  return out;
}

}  // namespace erglab
