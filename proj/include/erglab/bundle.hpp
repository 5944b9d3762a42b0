#ifndef ERGLAB_BUNDLE_HPP
#define ERGLAB_BUNDLE_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace erglab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Finite base space: points 0..B-1 with strictly positive weights lambda.
struct BaseSpace {
  Vector lambda;
  Index size() const { return lambda.size(); }
  double total_mass() const;
};

/// One fiber: a finite atomic measure space with strictly positive atom
/// weights mu.
struct Fiber {
  Vector mu;
  Index atom_count() const { return mu.size(); }
  double total_mass() const;
};

/// A bundle attaches one fiber to every base point.
struct Bundle {
  BaseSpace base;
  std::vector<Fiber> fibers;

  Index base_points() const { return base.size(); }
  const Fiber& fiber(Index w) const { return fibers[static_cast<size_t>(w)]; }
};

BaseSpace make_base_space(Vector lambda);
Fiber make_fiber(Vector mu);
Bundle make_bundle(Vector lambda, std::vector<Vector> mus);

/// Section of the bundle: one real vector per base point, sized like the
/// fiber there. This is the working element of the function lattice.
struct BundleFunction {
  std::vector<Vector> values;

  Index base_points() const { return static_cast<Index>(values.size()); }
  Vector& fiber(Index w) { return values[static_cast<size_t>(w)]; }
  const Vector& fiber(Index w) const { return values[static_cast<size_t>(w)]; }
};

/// One real number per base point (values of norms, measures, metrics).
struct BaseScalar {
  Vector values;
};

/// Indicator section: every entry exactly 0.0 or 1.0.
struct FiberIdempotent {
  std::vector<Vector> values;
};

BundleFunction zeros_like(const Bundle& bundle);
BundleFunction constant_like(const Bundle& bundle, double value);
FiberIdempotent make_idempotent(const Bundle& bundle,
                                std::vector<Vector> values);
FiberIdempotent full_idempotent(const Bundle& bundle);

bool shaped_like(const Bundle& bundle, const BundleFunction& f);
void require_shaped(const Bundle& bundle, const BundleFunction& f,
                    const char* where);
void require_same_shape(const BundleFunction& f, const BundleFunction& g,
                        const char* where);
bool bitwise_equal(const BundleFunction& f, const BundleFunction& g);

// ---- measure, norm, metric ------------------------------------------------

/// mu-hat(e) per base point: sum of atom weights where the indicator is 1.
BaseScalar bundle_measure(const Bundle& bundle, const FiberIdempotent& e);

/// Integral of f against the fiber measures, per base point (signed).
BaseScalar integral(const Bundle& bundle, const BundleFunction& f);

/// Vector-valued p-norm: per base point (sum |f_a|^p mu_a)^(1/p).
/// p must be >= 1; p = infinity gives the atom-wise max of |f|.
BaseScalar lp_norm(const Bundle& bundle, const BundleFunction& f, double p);

/// Vector-valued metric of convergence in measure:
/// rho(f, g) = integral of |f-g| / (1 + |f-g|), per base point.
BaseScalar rho_metric(const Bundle& bundle, const BundleFunction& f,
                      const BundleFunction& g);

// ---- lattice --------------------------------------------------------------

BundleFunction sup(const BundleFunction& f, const BundleFunction& g);
BundleFunction inf(const BundleFunction& f, const BundleFunction& g);
BundleFunction abs(const BundleFunction& f);
BundleFunction operator+(const BundleFunction& f, const BundleFunction& g);
BundleFunction operator-(const BundleFunction& f, const BundleFunction& g);
BundleFunction operator*(double c, const BundleFunction& f);

/// Module action of base scalars: (g . f)(w) = g(w) * f(w).
BundleFunction scale(const BaseScalar& g, const BundleFunction& f);

/// Restriction by a base idempotent: zero out base points where g(w) = 0.
BundleFunction scale(const Vector& base_values, const BundleFunction& f);

/// f <= g atom-wise everywhere (with slack tol).
bool leq(const BundleFunction& f, const BundleFunction& g, double tol = 0.0);

/// Pointwise supremum / infimum of a nonempty finite family.
BundleFunction bundle_sup(std::span<const BundleFunction> fs);
BundleFunction bundle_inf(std::span<const BundleFunction> fs);

// ---- order convergence ----------------------------------------------------

/// Finite-horizon order-convergence diagnostic for f_1..f_H against a
/// candidate limit: t_n = sup over m in [n, H] of the max absolute
/// deviation (over all base points and atoms) of f_m from the limit.
struct OrderConvergenceReport {
  std::vector<double> tail;  // tail[i] = t_{i+1}, nonincreasing
  double tail_value;         // tail at the requested fraction of H
  std::size_t tail_index;    // the 1-based n it was read at
  Vector per_base_tail;      // same t_n split per base point
};

OrderConvergenceReport order_convergence_report(
    std::span<const BundleFunction> fs, const BundleFunction& limit,
    double tail_fraction = 0.5);

}  // namespace erglab

#endif
