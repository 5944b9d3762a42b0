// Acceptance gate: one line per criterion, exit code 0 iff all pass.
// Each criterion drives the library against an independent test-side
// oracle; criterion 9 shells out to the CLI on the bundled configs.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "erglab/bundle.hpp"
#include "erglab/engine.hpp"
#include "erglab/operators.hpp"
#include "erglab/rng.hpp"
#include "erglab/weights.hpp"

using namespace erglab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

Bundle random_bundle(Rng& rng, Index base_points, Index max_atoms) {
  Vector lambda(base_points);
  for (Index w = 0; w < base_points; ++w) lambda[w] = rng.uniform(0.25, 4.0);
  std::vector<Vector> mus;
  for (Index w = 0; w < base_points; ++w) {
    const Index m = rng.uniform_int(1, max_atoms);
    Vector mu(m);
    for (Index a = 0; a < m; ++a) mu[a] = rng.uniform(0.1, 3.0);
    mus.push_back(std::move(mu));
  }
  return make_bundle(std::move(lambda), std::move(mus));
}

BundleFunction random_function(Rng& rng, const Bundle& b) {
  BundleFunction f = zeros_like(b);
  for (Index w = 0; w < b.base_points(); ++w)
    for (Index a = 0; a < f.fiber(w).size(); ++a)
      f.values[static_cast<size_t>(w)][a] = rng.uniform(-2.0, 2.0);
  return f;
}

double max_abs_dev(const BundleFunction& a, const BundleFunction& b) {
  double m = 0.0;
  for (Index w = 0; w < a.base_points(); ++w)
    m = std::max(m, (a.fiber(w) - b.fiber(w)).cwiseAbs().maxCoeff());
  return m;
}

bool same_bits(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<size_t>(a.size())) == 0;
}

std::vector<std::int64_t> dyadic_ints(std::int64_t max) {
  std::vector<std::int64_t> s;
  for (std::int64_t n = 2; n <= max; n *= 2) s.push_back(n);
  return s;
}

constexpr double kGolden = 0.6180339887498949;

WeightSequence golden_weights() {
  return trig_weights(make_trig_polynomial(1, {TrigTerm{1.0, {kGolden}, {0.0}}}));
}

constexpr OperatorKind kAllKinds[] = {
    OperatorKind::random_markov, OperatorKind::random_strict,
    OperatorKind::cyclic, OperatorKind::identity};
constexpr OperatorKind kRandomKinds[] = {
    OperatorKind::random_markov, OperatorKind::random_strict,
    OperatorKind::cyclic};

// ---- 1. fiberwise decomposition ----------------------------------------

Outcome criterion1() {
  const auto t0 = Clock::now();
  const Index bases[] = {1, 3, 5};
  for (int i = 0; i < 200; ++i) {
    Rng rng = substream(9101, "acc/c1/" + std::to_string(i));
    const Bundle b = random_bundle(rng, bases[i % 3], 8);
    const FiberedOperator T = generate_operator(kAllKinds[i % 4], rng.next(), b);
    const BundleFunction f = random_function(rng, b);
    const BundleFunction g = apply(T, f);
    for (Index w = 0; w < b.base_points(); ++w) {
      // the fiber product, summed in the same canonical ascending order
      const Matrix& m = T.fiber(w);
      const Vector& v = f.fiber(w);
      Vector want(m.rows());
      for (Index r = 0; r < m.rows(); ++r) {
        double s = 0.0;
        for (Index c = 0; c < m.cols(); ++c) s += m(r, c) * v[c];
        want[r] = s;
      }
      if (!same_bits(g.fiber(w), want))
        return {false, fmt("fiber product mismatch, instance %d base %ld", i,
                           static_cast<long>(w))};
      // the same fiber through the library on a one-point sub-bundle
      Vector lam(1);
      lam[0] = b.base.lambda[w];
      const Bundle sub = make_bundle(lam, {b.fiber(w).mu});
      const FiberedOperator Tw = make_fibered_operator(sub, {m});
      BundleFunction fw;
      fw.values = {v};
      if (!same_bits(apply(Tw, fw).fiber(0), g.fiber(w)))
        return {false, fmt("sub-bundle apply mismatch, instance %d base %ld",
                           i, static_cast<long>(w))};
    }
  }
  const double dt = seconds_since(t0);
  return {dt < 5.0,
          fmt("200 operators, global vs per-fiber apply bitwise, %.2fs "
              "(budget 5s)", dt)};
}

// ---- 2. one-parameter maximal bound -------------------------------------

Outcome criterion2() {
  const auto t0 = Clock::now();
  const double ps[] = {1.5, 2.0, 4.0};
  const std::vector<std::int64_t> sched = dyadic_ints(4096);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng = substream(9102, "acc/c2/" + std::to_string(i));
    const Bundle b = random_bundle(rng, 1 + 2 * (i % 3), 8);
    const FiberedOperator T =
        generate_operator(kRandomKinds[i % 3], rng.next(), b);
    const BundleFunction f = random_function(rng, b);
    const AverageTrace tr = cesaro_maximal(b, T, f, sched, ps[i % 3]);
    worst = std::max(worst, tr.max_ratio);
    if (!(tr.max_ratio <= 1.0 + 1e-10))
      return {false, fmt("ratio %.17g > 1+1e-10 at instance %d (p=%g)",
                         tr.max_ratio, i, ps[i % 3])};
  }
  const double dt = seconds_since(t0);
  return {dt < 60.0,
          fmt("1000 instances, worst ratio %.12g <= 1+1e-10, %.2fs "
              "(budget 60s)", worst, dt)};
}

// ---- 3. weighted maximal bound ------------------------------------------

Outcome criterion3() {
  const auto t0 = Clock::now();
  const double ps[] = {1.5, 2.0, 4.0};
  const std::vector<std::int64_t> sched = dyadic_ints(4096);

  const WeightSequence golden = golden_weights();
  std::vector<std::int64_t> j;
  for (std::int64_t k = 1; k <= 2048; ++k) j.push_back(2 * k);
  const WeightSequence even = subsequence_to_weights(make_subsequence(j));

  double worst_trig = 0.0, worst_sub = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng = substream(9103, "acc/c3/" + std::to_string(i));
    const Bundle b = random_bundle(rng, 1 + 2 * (i % 3), 8);
    const FiberedOperator T =
        generate_operator(kRandomKinds[i % 3], rng.next(), b);
    const BundleFunction f = random_function(rng, b);

    const AverageTrace tg = weighted_maximal(b, T, f, golden, sched, ps[i % 3]);
    worst_trig = std::max(worst_trig, tg.max_ratio);
    if (!(tg.max_ratio <= 1.0 + 1e-10))
      return {false, fmt("trig ratio %.17g > 1+1e-10 at instance %d",
                         tg.max_ratio, i)};

    const AverageTrace ts = weighted_maximal(b, T, f, even, sched, ps[i % 3]);
    worst_sub = std::max(worst_sub, ts.max_ratio);
    if (!(ts.max_ratio <= 1.0 + 1e-10))
      return {false, fmt("subsequence ratio %.17g > 1+1e-10 at instance %d",
                         ts.max_ratio, i)};
  }
  return {true,
          fmt("1000 instances each; worst ratio trig %.12g, j_k=2k %.12g, "
              "%.2fs", worst_trig, worst_sub, seconds_since(t0))};
}

// ---- 4. multiparameter maximal bound ------------------------------------

Outcome criterion4() {
  const auto t0 = Clock::now();
  const double irr[] = {kGolden, 0.41421356237309515, 0.7320508075688772};

  auto axis_weights = [&](int d) {
    std::vector<WeightSequence> factors;
    for (int i = 0; i < d; ++i)
      factors.push_back(trig_weights(
          make_trig_polynomial(1, {TrigTerm{1.0, {irr[i]}, {0.0}}})));
    return product_weights(std::move(factors));
  };

  double worst = 0.0;
  auto sweep = [&](int d, std::int64_t max, int count,
                   const char* tag) -> std::string {
    const std::vector<MultiIndex> sched = dyadic_schedule(d, max);
    const WeightSequence alpha = axis_weights(d);
    for (int i = 0; i < count; ++i) {
      Rng rng = substream(9104, fmt("acc/c4/%s/%d", tag, i));
      const Bundle b = random_bundle(rng, 1 + 2 * (i % 3), 8);
      std::vector<FiberedOperator> Ts;
      for (int k = 0; k < d; ++k)
        Ts.push_back(
            generate_operator(kRandomKinds[(i + k) % 3], rng.next(), b));
      const BundleFunction f = random_function(rng, b);

      const AverageTrace tp = multiparameter_maximal(b, Ts, f, sched, 2.0);
      worst = std::max(worst, tp.max_ratio);
      if (!(tp.max_ratio <= 1.0 + 1e-10))
        return fmt("d=%d plain ratio %.17g > 1+1e-10 at instance %d", d,
                   tp.max_ratio, i);

      const AverageTrace tw =
          weighted_multiparameter_maximal(b, Ts, f, alpha, sched, 2.0);
      worst = std::max(worst, tw.max_ratio);
      if (!(tw.max_ratio <= 1.0 + 1e-10))
        return fmt("d=%d weighted ratio %.17g > 1+1e-10 at instance %d", d,
                   tw.max_ratio, i);
    }
    return {};
  };

  std::string bad = sweep(2, 64, 250, "d2");
  if (bad.empty()) bad = sweep(3, 16, 100, "d3");
  if (!bad.empty()) return {false, bad};
  const double dt = seconds_since(t0);
  return {dt < 120.0,
          fmt("250 d=2 + 100 d=3 instances, plain and weighted, worst "
              "ratio %.12g, %.2fs (budget 120s)", worst, dt)};
}

// ---- 5. convergence against the limit oracle -----------------------------

double trig_term_average(const TrigTerm& t, std::int64_t N) {
  // (1/N) sum_{k=1}^{N-1} amp cos(2 pi theta k + phase), geometric form
  const double omega = 2.0 * std::numbers::pi * t.frequency[0];
  if (t.frequency[0] == 0.0)
    return t.amplitude * std::cos(t.phase[0]) *
           static_cast<double>(N - 1) / static_cast<double>(N);
  const std::complex<double> z = std::polar(1.0, omega);
  const std::complex<double> s =
      z * (std::pow(z, static_cast<double>(N - 1)) - 1.0) / (z - 1.0);
  return t.amplitude * (std::polar(1.0, t.phase[0]) * s).real() /
         static_cast<double>(N);
}

Outcome criterion5() {
  const auto t0 = Clock::now();

  // (a) tail of the running averages against the projection oracle at
  // n = 2^14, for operators with measured spectral gap >= 0.1
  const std::vector<std::int64_t> sched = dyadic_ints(16384);
  const double n_last = 16384.0;
  double worst_tail = 0.0;
  double scale_lo = std::numeric_limits<double>::infinity(), scale_hi = 0.0;
  int accepted = 0;
  std::string bad;
  for (std::uint64_t draw = 0; accepted < 100; ++draw) {
    if (draw > 5000) {
      bad = "could not draw 100 operators with gap >= 0.1";
      break;
    }
    Rng rng = substream(9105, "acc/c5a/" + std::to_string(draw));
    const Bundle b = random_bundle(rng, 1 + (accepted % 3), 6);
    const FiberedOperator T =
        generate_operator(OperatorKind::random_markov, rng.next(), b);
    if (measured_spectral_gap(T) < 0.1) continue;
    ++accepted;
    const BundleFunction f = random_function(rng, b);
    const OracleResult ora = oracle_limit(
        b, std::span<const FiberedOperator>(&T, 1), abs(f), OracleMode::cesaro);
    if (!ora.available) {
      bad = fmt("oracle unavailable at draw %llu: %s",
                static_cast<unsigned long long>(draw), ora.note.c_str());
      break;
    }
    const AverageTrace tr = cesaro_maximal(b, T, f, sched, 2.0);
    const double dev = max_abs_dev(tr.averages.back(), ora.limit);
    worst_tail = std::max(worst_tail, dev);
    scale_lo = std::min(scale_lo, dev * n_last);
    scale_hi = std::max(scale_hi, dev * n_last);
  }
  const bool pass_a = bad.empty() && worst_tail < 1e-6;

  // (b) weighted averages of the identity against the closed-form
  // exponential-sum value at N = 10^4
  double worst_closed = 0.0;
  for (int i = 0; i < 20; ++i) {
    Rng rng = substream(9106, "acc/c5b/" + std::to_string(i));
    const Bundle b = random_bundle(rng, 1 + (i % 3), 6);
    const BundleFunction f = random_function(rng, b);
    std::vector<TrigTerm> terms;
    const int nt = static_cast<int>(rng.uniform_int(1, 3));
    for (int t = 0; t < nt; ++t)
      terms.push_back(TrigTerm{rng.uniform(-1.5, 1.5),
                               {t == 0 ? 0.0 : rng.uniform(0.05, 0.95)},
                               {rng.uniform(0.0, 2.0 * std::numbers::pi)}});
    const TrigPolynomial poly = make_trig_polynomial(1, terms);
    const FiberedOperator id = generate_operator(OperatorKind::identity, 1, b);
    const std::int64_t N = 10000;
    const BundleFunction got = weighted_average(id, f, trig_weights(poly), N);
    double c = 0.0;
    for (const TrigTerm& t : poly.terms) c += trig_term_average(t, N);
    worst_closed = std::max(worst_closed, max_abs_dev(got, c * f));
  }
  const bool pass_b = worst_closed <= 1e-10;

  std::string detail =
      bad.empty()
          ? fmt("tail at n=16384: max %.3g vs gate 1e-06%s, n*dev in "
                "[%.2g, %.2g]; ",
                worst_tail, pass_a ? "" : " (Cesaro error decays like 1/n; "
                "the gate sits orders of magnitude below that envelope)",
                scale_lo, scale_hi)
          : bad + "; ";
  detail += fmt("closed-form weighted identity: max dev %.3g vs gate 1e-10, "
                "%.1fs", worst_closed, seconds_since(t0));
  return {pass_a && pass_b, detail};
}

// ---- 6. conditional expectation axioms ----------------------------------

Outcome criterion6() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Rng rng = substream(9107, "acc/c6/" + std::to_string(i));
    const Bundle b = random_bundle(rng, 1 + (i % 4), 8);
    const SubalgebraPartition part = random_partition(b, rng.next());
    const BundleFunction f = random_function(rng, b);
    const BundleFunction Ef = conditional_expectation(b, part, f);

    auto worst_base = [&](const BaseScalar& s) {
      return s.values.cwiseAbs().maxCoeff();
    };

    const double idem = max_abs_dev(conditional_expectation(b, part, Ef), Ef);
    if (idem > 1e-12) return {false, fmt("idempotence dev %.3g, triple %d", idem, i)};

    const BundleFunction Eabs = conditional_expectation(b, part, abs(f));
    double neg = 0.0;
    for (Index w = 0; w < b.base_points(); ++w)
      neg = std::min(neg, Eabs.fiber(w).minCoeff());
    if (neg < -1e-12) return {false, fmt("positivity dev %.3g, triple %d", -neg, i)};

    BaseScalar mass = integral(b, Ef);
    mass.values -= integral(b, f).values;
    const double md = worst_base(mass);
    if (md > 1e-12) return {false, fmt("mass dev %.3g, triple %d", md, i)};

    BundleFunction h = zeros_like(b);
    for (Index w = 0; w < b.base_points(); ++w)
      for (const auto& block : part.blocks[static_cast<size_t>(w)]) {
        const double c = rng.uniform(-2.0, 2.0);
        for (Index a : block) h.values[static_cast<size_t>(w)][a] = c;
      }
    BundleFunction hf = f, hEf = Ef;
    for (Index w = 0; w < b.base_points(); ++w) {
      hf.fiber(w) = h.fiber(w).cwiseProduct(f.fiber(w));
      hEf.fiber(w) = h.fiber(w).cwiseProduct(Ef.fiber(w));
    }
    const double mod = max_abs_dev(conditional_expectation(b, part, hf), hEf);
    if (mod > 1e-12) return {false, fmt("module dev %.3g, triple %d", mod, i)};

    const BundleFunction one = constant_like(b, 1.0);
    const double unit = max_abs_dev(conditional_expectation(b, part, one), one);
    if (unit > 1e-12) return {false, fmt("unit dev %.3g, triple %d", unit, i)};

    const BaseScalar n1f = lp_norm(b, f, 1.0), n1E = lp_norm(b, Ef, 1.0);
    double contr = 0.0;
    for (Index w = 0; w < b.base_points(); ++w)
      contr = std::max(contr, n1E.values[w] - n1f.values[w]);
    if (contr > 1e-12) return {false, fmt("L1 excess %.3g, triple %d", contr, i)};

    worst = std::max({worst, idem, -neg, md, mod, unit, contr});
  }
  return {true, fmt("200 triples, all six axioms, worst dev %.3g <= 1e-12, "
                    "%.2fs", worst, seconds_since(t0))};
}

// ---- 7. order structure --------------------------------------------------

Outcome criterion7() {
  const auto t0 = Clock::now();
  for (int i = 0; i < 500; ++i) {
    Rng rng = substream(9109, "acc/c7/" + std::to_string(i));
    const Bundle b = random_bundle(rng, 1 + (i % 4), 8);
    const int count = static_cast<int>(rng.uniform_int(2, 6));
    std::vector<BundleFunction> fam;
    for (int k = 0; k < count; ++k) fam.push_back(random_function(rng, b));
    const BundleFunction gs = bundle_sup(fam);
    const BundleFunction gi = bundle_inf(fam);
    for (Index w = 0; w < b.base_points(); ++w) {
      Vector es = fam[0].fiber(w), ei = fam[0].fiber(w);
      for (int k = 1; k < count; ++k) {
        es = es.cwiseMax(fam[static_cast<size_t>(k)].fiber(w));
        ei = ei.cwiseMin(fam[static_cast<size_t>(k)].fiber(w));
      }
      if (!same_bits(gs.fiber(w), es) || !same_bits(gi.fiber(w), ei))
        return {false, fmt("sup/inf fiber mismatch, family %d base %ld", i,
                           static_cast<long>(w))};
    }
  }

  // f_m = f + (1/m) 1 with f = 0: deviations are exactly 1/m, so the
  // tail curve must be exactly 1/n
  for (int i = 0; i < 20; ++i) {
    Rng rng = substream(9110, "acc/c7tail/" + std::to_string(i));
    const Bundle b = random_bundle(rng, 1 + (i % 4), 8);
    const BundleFunction f = zeros_like(b);
    const BundleFunction one = constant_like(b, 1.0);
    std::vector<BundleFunction> fs;
    for (int m = 1; m <= 64; ++m)
      fs.push_back(f + (1.0 / static_cast<double>(m)) * one);
    const OrderConvergenceReport rep = order_convergence_report(fs, f);
    for (size_t n = 0; n < rep.tail.size(); ++n)
      if (rep.tail[n] != 1.0 / static_cast<double>(n + 1))
        return {false, fmt("tail[%zu] = %.17g, want exactly %.17g", n,
                           rep.tail[n], 1.0 / static_cast<double>(n + 1))};
  }
  return {true, fmt("500 sup/inf families bitwise; tail curve exactly 1/n "
                    "on 20 bundles, %.2fs", seconds_since(t0))};
}

// ---- 8. oracle cross-validation ------------------------------------------

Outcome criterion8() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Rng rng = substream(9111, "acc/c8/" + std::to_string(i));
    const Index m = 2 + (i % 11);
    Vector lam(1);
    lam[0] = rng.uniform(0.5, 2.0);
    Vector mu(m);
    for (Index a = 0; a < m; ++a) mu[a] = rng.uniform(0.1, 3.0);
    const Bundle b = make_bundle(lam, {mu});

    FiberedOperator T;
    if (i % 2) {
      T = generate_operator(OperatorKind::random_strict, rng.next(), b);
    } else {
      for (int tries = 0;; ++tries) {
        T = generate_operator(OperatorKind::random_markov, rng.next(), b);
        if (measured_spectral_gap(T) >= 0.1) break;
        if (tries > 50)
          return {false, fmt("no well-mixing operator at seed %d", i)};
      }
    }
    const BundleFunction f = random_function(rng, b);
    const OracleResult r =
        oracle_limit(b, std::span<const FiberedOperator>(&T, 1), abs(f),
                     OracleMode::cesaro, nullptr, true);
    if (!r.available || !r.cross_checked)
      return {false, fmt("oracle not cross-checked at seed %d: %s", i,
                         r.note.c_str())};
    worst = std::max(worst, r.cross_delta);
    if (!(r.cross_delta <= 1e-8))
      return {false, fmt("routes disagree by %.3g at seed %d", r.cross_delta, i)};
  }
  return {true, fmt("100 seeds, fibers 2..12, worst route delta %.3g <= "
                    "1e-08, %.1fs", worst, seconds_since(t0))};
}

// ---- 9. bundled-config determinism ---------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file())
      out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + ERGLAB_BIN_PATH + "\" " + args +
                          " > \"" + log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome criterion9() {
  const auto t0 = Clock::now();
  const char* names[] = {"cesaro_p2.json", "besicovich_p2.json",
                         "multi_d2_p2.json"};
  const fs::path work = fs::temp_directory_path() / "erglab_acceptance";
  std::error_code ec;
  fs::remove_all(work, ec);
  fs::create_directories(work);

  for (const char* name : names) {
    const fs::path cfg = fs::path(ERGLAB_CONFIG_DIR) / name;
    if (!fs::exists(cfg)) return {false, fmt("missing config %s", name)};
    fs::path outs[2];
    for (int r = 0; r < 2; ++r) {
      outs[r] = work / (std::string(name) + "." + std::to_string(r));
      const int rc = run_cli("run \"" + cfg.string() + "\" --out \"" +
                                 outs[r].string() + "\"",
                             work / (std::string(name) + ".log" +
                                     std::to_string(r)));
      if (rc != 0)
        return {false, fmt("%s run %d exited %d (see %s)", name, r, rc,
                           (work / (std::string(name) + ".log" +
                                    std::to_string(r))).string().c_str())};
    }
    const auto a = dir_bytes(outs[0]), bb = dir_bytes(outs[1]);
    if (a.empty()) return {false, fmt("%s produced no artifacts", name)};
    if (a != bb) return {false, fmt("%s outputs differ between runs", name)};

    if (std::string(name) == "cesaro_p2.json") {
      // identity operator: the ratio column must sit at 1/q = 0.5
      std::istringstream csv(a.at("cesaro_trace.csv"));
      std::string line;
      std::getline(csv, line);  // header
      while (std::getline(csv, line)) {
        const double ratio = std::strtod(
            line.substr(line.find_last_of(',') + 1).c_str(), nullptr);
        if (!(ratio <= 0.5 + 1e-9))
          return {false, fmt("identity ratio %.17g > 0.5 + eps", ratio)};
      }
    }
  }
  const double dt = seconds_since(t0);
  return {dt < 300.0,
          fmt("3 configs x 2 runs byte-identical, identity ratio column at "
              "0.5, %.1fs (budget 300s)", dt)};
}

}  // namespace

int main() {
  struct Row {
    const char* label;
    Outcome (*fn)();
  };
  const Row rows[] = {
      {"fiberwise decomposition", criterion1},
      {"one-parameter maximal bound", criterion2},
      {"weighted maximal bound", criterion3},
      {"multiparameter maximal bound", criterion4},
      {"convergence vs limit oracle", criterion5},
      {"conditional expectation axioms", criterion6},
      {"order structure", criterion7},
      {"oracle cross-validation", criterion8},
      {"bundled-config determinism", criterion9},
  };
  const auto t0 = Clock::now();
  int passed = 0;
  for (size_t i = 0; i < std::size(rows); ++i) {
    Outcome oc;
    try {
      oc = rows[i].fn();
    } catch (const std::exception& e) {
      oc = {false, std::string("exception: ") + e.what()};
    }
    passed += oc.pass ? 1 : 0;
    std::printf("[%s] criterion %zu: %s -- %s\n", oc.pass ? "PASS" : "FAIL",
                i + 1, rows[i].label, oc.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/9 criteria passed (%.1fs total)\n", passed,
              seconds_since(t0));
  return passed == 9 ? 0 : 1;
}
