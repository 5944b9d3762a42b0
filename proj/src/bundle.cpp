#include "erglab/bundle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace erglab {

namespace {

// Ascending-index sum so results do not depend on any library reduction
// order. Used for every measure-weighted accumulation in this module.
double ordered_sum(const Vector& v) {
  double s = 0.0;
  for (Index i = 0; i < v.size(); ++i) s += v[i];
  return s;
}

void require_positive_finite(const Vector& v, const char* what) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0)
      throw std::invalid_argument(std::string(what) + " must be finite and" +
                                  " strictly positive (entry " +
                                  std::to_string(i) + ")");
  }
}

}  // namespace

double BaseSpace::total_mass() const { return ordered_sum(lambda); }
double Fiber::total_mass() const { return ordered_sum(mu); }

BaseSpace make_base_space(Vector lambda) {
  if (lambda.size() == 0)
    throw std::invalid_argument("base space needs at least one point");
  require_positive_finite(lambda, "base weight lambda");
  return BaseSpace{std::move(lambda)};
}

Fiber make_fiber(Vector mu) {
  if (mu.size() == 0)
    throw std::invalid_argument("fiber needs at least one atom");
  require_positive_finite(mu, "atom weight mu");
  return Fiber{std::move(mu)};
}

Bundle make_bundle(Vector lambda, std::vector<Vector> mus) {
  BaseSpace base = make_base_space(std::move(lambda));
  if (static_cast<Index>(mus.size()) != base.size())
    throw std::invalid_argument("bundle: fiber count " +
                                std::to_string(mus.size()) +
                                " does not match base size " +
                                std::to_string(base.size()));
  std::vector<Fiber> fibers;
  fibers.reserve(mus.size());
  for (auto& mu : mus) fibers.push_back(make_fiber(std::move(mu)));
  return Bundle{std::move(base), std::move(fibers)};
}

BundleFunction zeros_like(const Bundle& bundle) {
  return constant_like(bundle, 0.0);
}

BundleFunction constant_like(const Bundle& bundle, double value) {
  BundleFunction f;
  f.values.reserve(static_cast<size_t>(bundle.base_points()));
  for (Index w = 0; w < bundle.base_points(); ++w)
    f.values.push_back(Vector::Constant(bundle.fiber(w).atom_count(), value));
  return f;
}

FiberIdempotent make_idempotent(const Bundle& bundle,
                                std::vector<Vector> values) {
  if (static_cast<Index>(values.size()) != bundle.base_points())
    throw std::invalid_argument("idempotent: base size mismatch");
  for (Index w = 0; w < bundle.base_points(); ++w) {
    const Vector& v = values[static_cast<size_t>(w)];
    if (v.size() != bundle.fiber(w).atom_count())
      throw std::invalid_argument("idempotent: fiber size mismatch at base " +
                                  std::to_string(w));
    for (Index a = 0; a < v.size(); ++a)
      if (v[a] != 0.0 && v[a] != 1.0)
        throw std::invalid_argument(
            "idempotent entries must be exactly 0 or 1");
  }
  return FiberIdempotent{std::move(values)};
}

FiberIdempotent full_idempotent(const Bundle& bundle) {
  std::vector<Vector> values;
  for (Index w = 0; w < bundle.base_points(); ++w)
    values.push_back(Vector::Ones(bundle.fiber(w).atom_count()));
  return FiberIdempotent{std::move(values)};
}

bool shaped_like(const Bundle& bundle, const BundleFunction& f) {
  if (f.base_points() != bundle.base_points()) return false;
  for (Index w = 0; w < bundle.base_points(); ++w)
    if (f.fiber(w).size() != bundle.fiber(w).atom_count()) return false;
  return true;
}

void require_shaped(const Bundle& bundle, const BundleFunction& f,
                    const char* where) {
  if (!shaped_like(bundle, f))
    throw std::invalid_argument(std::string(where) +
                                ": function shape does not match bundle");
}

void require_same_shape(const BundleFunction& f, const BundleFunction& g,
                        const char* where) {
  bool ok = f.base_points() == g.base_points();
  for (Index w = 0; ok && w < f.base_points(); ++w)
    ok = f.fiber(w).size() == g.fiber(w).size();
  if (!ok)
    throw std::invalid_argument(std::string(where) + ": shape mismatch");
}

bool bitwise_equal(const BundleFunction& f, const BundleFunction& g) {
  if (f.base_points() != g.base_points()) return false;
  for (Index w = 0; w < f.base_points(); ++w) {
    if (f.fiber(w).size() != g.fiber(w).size()) return false;
    for (Index a = 0; a < f.fiber(w).size(); ++a)
      if (f.fiber(w)[a] != g.fiber(w)[a]) return false;
  }
  return true;
}

BaseScalar bundle_measure(const Bundle& bundle, const FiberIdempotent& e) {
  if (static_cast<Index>(e.values.size()) != bundle.base_points())
    throw std::invalid_argument("bundle_measure: base size mismatch");
  Vector out(bundle.base_points());
  for (Index w = 0; w < bundle.base_points(); ++w) {
    const Vector& ind = e.values[static_cast<size_t>(w)];
    const Vector& mu = bundle.fiber(w).mu;
    if (ind.size() != mu.size())
      throw std::invalid_argument("bundle_measure: fiber size mismatch");
    double s = 0.0;
    for (Index a = 0; a < mu.size(); ++a)
      if (ind[a] == 1.0) s += mu[a];
    out[w] = s;
  }
  return BaseScalar{std::move(out)};
}

BaseScalar integral(const Bundle& bundle, const BundleFunction& f) {
  require_shaped(bundle, f, "integral");
  Vector out(bundle.base_points());
  for (Index w = 0; w < bundle.base_points(); ++w) {
    const Vector& mu = bundle.fiber(w).mu;
    const Vector& v = f.fiber(w);
    double s = 0.0;
    for (Index a = 0; a < mu.size(); ++a) s += v[a] * mu[a];
    out[w] = s;
  }
  return BaseScalar{std::move(out)};
}

BaseScalar lp_norm(const Bundle& bundle, const BundleFunction& f, double p) {
  require_shaped(bundle, f, "lp_norm");
  if (std::isnan(p) || p < 1.0)
    throw std::invalid_argument("lp_norm: p must be >= 1, got " +
                                std::to_string(p));
  Vector out(bundle.base_points());
  const bool is_inf = std::isinf(p);
  for (Index w = 0; w < bundle.base_points(); ++w) {
    const Vector& mu = bundle.fiber(w).mu;
    const Vector& v = f.fiber(w);
    if (is_inf) {
      double m = 0.0;
      for (Index a = 0; a < v.size(); ++a) m = std::max(m, std::fabs(v[a]));
      out[w] = m;
    } else if (p == 1.0) {
      double s = 0.0;
      for (Index a = 0; a < v.size(); ++a) s += std::fabs(v[a]) * mu[a];
      out[w] = s;
    } else if (p == 2.0) {
      double s = 0.0;
      for (Index a = 0; a < v.size(); ++a) s += v[a] * v[a] * mu[a];
      out[w] = std::sqrt(s);
    } else {
      double s = 0.0;
      for (Index a = 0; a < v.size(); ++a)
        s += std::pow(std::fabs(v[a]), p) * mu[a];
      out[w] = std::pow(s, 1.0 / p);
    }
  }
  return BaseScalar{std::move(out)};
}

BaseScalar rho_metric(const Bundle& bundle, const BundleFunction& f,
                      const BundleFunction& g) {
  require_shaped(bundle, f, "rho_metric");
  require_shaped(bundle, g, "rho_metric");
  Vector out(bundle.base_points());
  for (Index w = 0; w < bundle.base_points(); ++w) {
    const Vector& mu = bundle.fiber(w).mu;
    const Vector& a = f.fiber(w);
    const Vector& b = g.fiber(w);
    double s = 0.0;
    for (Index i = 0; i < mu.size(); ++i) {
      const double d = std::fabs(a[i] - b[i]);
      s += d / (1.0 + d) * mu[i];
    }
    out[w] = s;
  }
  return BaseScalar{std::move(out)};
}

BundleFunction sup(const BundleFunction& f, const BundleFunction& g) {
  require_same_shape(f, g, "sup");
  BundleFunction out = f;
  for (Index w = 0; w < f.base_points(); ++w)
    out.fiber(w) = f.fiber(w).cwiseMax(g.fiber(w));
  return out;
}

BundleFunction inf(const BundleFunction& f, const BundleFunction& g) {
  require_same_shape(f, g, "inf");
  BundleFunction out = f;
  for (Index w = 0; w < f.base_points(); ++w)
    out.fiber(w) = f.fiber(w).cwiseMin(g.fiber(w));
  return out;
}

BundleFunction abs(const BundleFunction& f) {
  BundleFunction out = f;
  for (auto& v : out.values) v = v.cwiseAbs();
  return out;
}

BundleFunction operator+(const BundleFunction& f, const BundleFunction& g) {
  require_same_shape(f, g, "operator+");
  BundleFunction out = f;
  for (Index w = 0; w < f.base_points(); ++w) out.fiber(w) += g.fiber(w);
  return out;
}

BundleFunction operator-(const BundleFunction& f, const BundleFunction& g) {
  require_same_shape(f, g, "operator-");
  BundleFunction out = f;
  for (Index w = 0; w < f.base_points(); ++w) out.fiber(w) -= g.fiber(w);
  return out;
}

BundleFunction operator*(double c, const BundleFunction& f) {
  BundleFunction out = f;
  for (auto& v : out.values) v *= c;
  return out;
}

BundleFunction scale(const BaseScalar& g, const BundleFunction& f) {
  return scale(g.values, f);
}

BundleFunction scale(const Vector& base_values, const BundleFunction& f) {
  if (base_values.size() != f.base_points())
    throw std::invalid_argument("scale: base size mismatch");
  BundleFunction out = f;
  for (Index w = 0; w < f.base_points(); ++w) out.fiber(w) *= base_values[w];
  return out;
}

bool leq(const BundleFunction& f, const BundleFunction& g, double tol) {
  require_same_shape(f, g, "leq");
  for (Index w = 0; w < f.base_points(); ++w)
    for (Index a = 0; a < f.fiber(w).size(); ++a)
      if (f.fiber(w)[a] > g.fiber(w)[a] + tol) return false;
  return true;
}

BundleFunction bundle_sup(std::span<const BundleFunction> fs) {
  if (fs.empty()) throw std::invalid_argument("bundle_sup: empty family");
  BundleFunction out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = sup(out, fs[i]);
  return out;
}

BundleFunction bundle_inf(std::span<const BundleFunction> fs) {
  if (fs.empty()) throw std::invalid_argument("bundle_inf: empty family");
  BundleFunction out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = inf(out, fs[i]);
  return out;
}

OrderConvergenceReport order_convergence_report(
    std::span<const BundleFunction> fs, const BundleFunction& limit,
    double tail_fraction) {
  if (fs.empty())
    throw std::invalid_argument("order_convergence_report: empty sequence");
  if (!(tail_fraction > 0.0) || !(tail_fraction <= 1.0))
    throw std::invalid_argument(
        "order_convergence_report: tail_fraction must be in (0, 1]");

  const size_t H = fs.size();
  const Index B = limit.base_points();

  // deviation of each f_m, per base point
  std::vector<Vector> dev(H);
  for (size_t m = 0; m < H; ++m) {
    require_same_shape(fs[m], limit, "order_convergence_report");
    Vector d(B);
    for (Index w = 0; w < B; ++w)
      d[w] = (fs[m].fiber(w) - limit.fiber(w)).cwiseAbs().maxCoeff();
    dev[m] = std::move(d);
  }

  // suffix maxima, so the tail curve is nonincreasing by construction
  std::vector<Vector> tail_per_base(H);
  tail_per_base[H - 1] = dev[H - 1];
  for (size_t m = H - 1; m-- > 0;)
    tail_per_base[m] = dev[m].cwiseMax(tail_per_base[m + 1]);

  OrderConvergenceReport report;
  report.tail.resize(H);
  for (size_t m = 0; m < H; ++m) report.tail[m] = tail_per_base[m].maxCoeff();

  size_t idx = static_cast<size_t>(
      std::ceil(tail_fraction * static_cast<double>(H)));
  idx = std::min(std::max<size_t>(idx, 1), H);
  report.tail_index = idx;
  report.tail_value = report.tail[idx - 1];
  report.per_base_tail = tail_per_base[idx - 1];
  return report;
}

}  // namespace erglab
