#ifndef ERGLAB_ENGINE_HPP
#define ERGLAB_ENGINE_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "erglab/bundle.hpp"
#include "erglab/indexing.hpp"
#include "erglab/operators.hpp"
#include "erglab/weights.hpp"

namespace erglab {

/// Thrown when a theorem-mode entry point is invoked outside its
/// hypotheses (missing certificate, p out of range, ...).
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Conjugate exponent q = p / (p - 1); the maximal-inequality constant.
double q_dual(double p);

/// Diagonal dyadic schedule (2, 4, ..., <= max) of d-dimensional boxes.
std::vector<MultiIndex> dyadic_schedule(int d, std::int64_t max);

/// Full-enumeration budget for non-separable weighted box averages.
inline constexpr std::int64_t kEnumerationBudget = 10'000'000;

// ---- averages ---------------------------------------------------------
// All averages accumulate the sum term by term in ascending index order
// and divide exactly once at the end.

/// (1/n) sum of T^k f over the convention's range. Requires the full
/// contraction certificate.
BundleFunction cesaro_average(const FiberedOperator& T,
                              const BundleFunction& f, std::int64_t n,
                              Convention conv = Convention::from_zero);

/// (1/N) sum of alpha(k) T^k f, k = 1..N-1 under half_open. N = 1 gives
/// the empty sum 0.
BundleFunction weighted_average(const FiberedOperator& T,
                                const BundleFunction& f,
                                const WeightSequence& alpha, std::int64_t N,
                                Convention conv = Convention::half_open);

/// (1/N) sum of T^{j_m} f over the stored members j_m <= N-1. The stored
/// subsequence must reach N-1, otherwise membership below N is unknown.
BundleFunction subsequence_average(const FiberedOperator& T,
                                   const BundleFunction& f,
                                   const Subsequence& s, std::int64_t N);

/// (1/|n|) sum over the box k = (1..n_1) x ... x (1..n_d) of
/// T_1^{k_1}( ... (T_d^{k_d} f)). Ts[0] acts outermost.
BundleFunction multiparameter_average(std::span<const FiberedOperator> Ts,
                                      const BundleFunction& f,
                                      const MultiIndex& n);

/// Same box average with weights alpha(k). Separable alpha (product of
/// one-parameter factors, or d = 1) runs in O(sum n_i) applications;
/// anything else enumerates the box, guarded by kEnumerationBudget.
BundleFunction weighted_multiparameter_average(
    std::span<const FiberedOperator> Ts, const BundleFunction& f,
    const WeightSequence& alpha, const MultiIndex& n);

// ---- running maximal functions ----------------------------------------

/// Averages and the running pointwise maximum along a schedule, with the
/// maximal-inequality right-hand side at exponent p.
struct AverageTrace {
  std::vector<MultiIndex> horizons;
  std::vector<BundleFunction> averages;
  std::vector<BaseScalar> average_norms;      // p-norm per horizon
  std::vector<BaseScalar> running_max_norms;  // p-norm of the running max
  BundleFunction running_max;                 // at the final horizon
  BaseScalar rhs;           // bound_factor * ||f||_p per base point
  double bound_factor = 0;  // q, q b, q^d, or b q^d
  double p = 0;
  double max_ratio = 0;     // worst running_max_norm / rhs anywhere
};

/// sup over the schedule of s_n(|f|); bound q ||f||_p. p in (1, inf).
AverageTrace cesaro_maximal(const Bundle& bundle, const FiberedOperator& T,
                            const BundleFunction& f,
                            std::span<const std::int64_t> schedule, double p);

/// sup of weighted averages of |f|; bound q b ||f||_p.
AverageTrace weighted_maximal(const Bundle& bundle, const FiberedOperator& T,
                              const BundleFunction& f,
                              const WeightSequence& alpha,
                              std::span<const std::int64_t> schedule,
                              double p);

/// sup of box averages of |f|; bound q^d ||f||_p. Schedule must be
/// componentwise nondecreasing.
AverageTrace multiparameter_maximal(const Bundle& bundle,
                                    std::span<const FiberedOperator> Ts,
                                    const BundleFunction& f,
                                    std::span<const MultiIndex> schedule,
                                    double p);

/// sup of |weighted box averages of f|; bound b q^d ||f||_p.
AverageTrace weighted_multiparameter_maximal(
    const Bundle& bundle, std::span<const FiberedOperator> Ts,
    const BundleFunction& f, const WeightSequence& alpha,
    std::span<const MultiIndex> schedule, double p);

// ---- limit oracles -----------------------------------------------------

/// Oblique projection onto ker(I - T) along ran(I - T) for one fiber,
/// with spectral diagnostics. The projection is the exact limit of the
/// Cesaro averages of T (periodic fibers included).
struct FiberOracle {
  Matrix projection;
  int fixed_dim = 0;
  double pairing_condition = 1.0;
  double spectral_gap = 1.0;  // 1 - max |lambda| away from the 1-cluster
  bool has_unimodular_nonfixed = false;
  std::vector<std::complex<double>> eigenvalues;
  bool flagged = false;
  std::string note;
};

FiberOracle cesaro_projection(const Matrix& T);

/// min over fibers of 1 - |second eigenvalue|.
double measured_spectral_gap(const FiberedOperator& T);

/// Long-run window average (1/K) sum_{k=K}^{2K-1} T^k f with doubling K
/// until two successive windows agree. Reports non-convergence instead of
/// guessing (periodic operators land here).
struct PowerAverageResult {
  BundleFunction limit;
  bool converged = false;
  int doublings_used = 0;
  double last_delta = std::numeric_limits<double>::quiet_NaN();
};

PowerAverageResult power_average_limit(const FiberedOperator& T,
                                       const BundleFunction& f,
                                       std::int64_t K0 = 100000,
                                       int max_doublings = 2,
                                       double tol = 1e-10);

enum class OracleMode { cesaro, weighted, subsequence, multiparameter,
                        weighted_multiparameter };

/// Independent limit prediction for the averaging modes. Fibers of size
/// <= 12 use the eigen-projection route; larger fibers fall back to the
/// power-average route. Weighted modes multiply by the constant part of
/// the weight and are flagged when a nonzero frequency resonates with a
/// unimodular eigenvalue (no limit claimed in that case).
struct OracleResult {
  BundleFunction limit;
  bool available = false;
  bool flagged = false;
  std::string note;
  double min_gap = std::numeric_limits<double>::quiet_NaN();
  bool cross_checked = false;
  double cross_delta = std::numeric_limits<double>::quiet_NaN();
};

OracleResult oracle_limit(const Bundle& bundle,
                          std::span<const FiberedOperator> Ts,
                          const BundleFunction& f, OracleMode mode,
                          const WeightSequence* alpha = nullptr,
                          bool cross_check = false);

// ---- theorem checks ----------------------------------------------------

enum class CheckKind { cesaro, besicovich, subsequence, multi,
                       multi_weighted };

struct CheckInputs {
  const Bundle* bundle = nullptr;
  std::vector<FiberedOperator> ops;  // one, or d for box modes
  BundleFunction f;
  std::optional<WeightSequence> alpha;
  std::optional<Subsequence> subseq;
  double p = 2.0;
};

struct CheckThresholds {
  double ratio_tol = 1e-10;
  double tail_threshold = 0.05;
  bool require_oracle = false;  // flagged oracle fails instead of skipping
};

struct TheoremVerdict {
  std::string check;
  bool pass = false;
  bool refused = false;
  std::string reason;
  double max_ratio = 0.0;
  double tail_dev = std::numeric_limits<double>::quiet_NaN();
  bool oracle_flagged = false;
  std::uint64_t seed = 0;
};

struct CheckOutcome {
  TheoremVerdict verdict;
  std::optional<AverageTrace> trace;
  OracleResult oracle;
};

/// Runs one maximal-inequality + convergence check. Hypothesis failures
/// (missing certificate, bad p, missing weights) come back as refusals,
/// never as silent passes. Cesaro checks accept operators that only pass
/// the probe-based p-norm gate; every other mode needs the full
/// certificate.
CheckOutcome theorem_check(CheckKind kind, const CheckInputs& in,
                           std::span<const MultiIndex> horizons,
                           const CheckThresholds& thresholds,
                           std::uint64_t seed_label);

std::string check_kind_name(CheckKind kind);

}  // namespace erglab

#endif
