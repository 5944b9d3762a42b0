#include "erglab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "erglab/parallel.hpp"
#include "erglab/rng.hpp"

namespace erglab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ParsedCheck parse_check_name(const std::string& name,
                             const ExperimentConfig& cfg) {
  ParsedCheck pc;
  std::string rest;
  if (name.rfind("multi-weighted", 0) == 0) {
    pc.kind = CheckKind::multi_weighted;
    rest = name.substr(14);
  } else if (name.rfind("multi", 0) == 0) {
    pc.kind = CheckKind::multi;
    rest = name.substr(5);
  } else if (name.rfind("cesaro", 0) == 0) {
    pc.kind = CheckKind::cesaro;
    rest = name.substr(6);
  } else if (name.rfind("besicovich", 0) == 0) {
    pc.kind = CheckKind::besicovich;
    rest = name.substr(10);
  } else if (name.rfind("subsequence", 0) == 0) {
    pc.kind = CheckKind::subsequence;
    rest = name.substr(11);
  } else {
    throw ConfigError("checks", "unknown check \"" + name + "\"");
  }

  const bool box =
      pc.kind == CheckKind::multi || pc.kind == CheckKind::multi_weighted;
  pc.p = cfg.p;
  pc.d = box ? static_cast<int>(cfg.operators.size()) : 1;

  for (const std::string& tok : split(rest, '-')) {
    if (tok.empty()) continue;
    try {
      if (tok[0] == 'p' && tok.size() > 1) {
        size_t used = 0;
        pc.p = std::stod(tok.substr(1), &used);
        if (used + 1 != tok.size()) throw std::invalid_argument(tok);
        continue;
      }
      if (tok[0] == 'd' && tok.size() > 1) {
        size_t used = 0;
        pc.d = std::stoi(tok.substr(1), &used);
        if (used + 1 != tok.size()) throw std::invalid_argument(tok);
        if (!box && pc.d != 1)
          throw ConfigError("checks", "check \"" + name +
                                          "\" is one-parameter; d must be 1");
        continue;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      // falls through to the diagnostic below
    }
    throw ConfigError("checks", "unknown modifier \"" + tok +
                                    "\" in check \"" + name + "\"");
  }
  if (pc.d < 1)
    throw ConfigError("checks", "check \"" + name + "\": d must be >= 1");
  return pc;
}

std::vector<MultiIndex> build_horizons(const ExperimentConfig& cfg, int d,
                                       std::optional<std::int64_t> clamp) {
  if (cfg.horizons.dyadic) {
    std::int64_t max = cfg.horizons.max;
    if (clamp) max = std::min(max, *clamp);
    if (max < 2)
      throw ConfigError("horizons.max", "no dyadic horizons below " +
                                            std::to_string(max + 1));
    return dyadic_schedule(d, max);
  }
  std::vector<MultiIndex> out;
  for (const auto& entry : cfg.horizons.list) {
    if (static_cast<int>(entry.size()) != d)
      throw ConfigError("horizons.values",
                        "entry has " + std::to_string(entry.size()) +
                            " components, the check needs " +
                            std::to_string(d));
    if (clamp &&
        *std::max_element(entry.begin(), entry.end()) > *clamp)
      continue;
    out.push_back(MultiIndex{entry});
  }
  if (out.empty())
    throw ConfigError("horizons.values", "no horizons survive the clamp");
  if (d == 1) {
    std::sort(out.begin(), out.end(),
              [](const MultiIndex& a, const MultiIndex& b) {
                return a.n[0] < b.n[0];
              });
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    for (size_t i = 1; i < out.size(); ++i)
      for (int c = 0; c < d; ++c)
        if (out[i].n[static_cast<size_t>(c)] <
            out[i - 1].n[static_cast<size_t>(c)])
          throw ConfigError("horizons.values",
                            "box horizons must be componentwise "
                            "nondecreasing");
  }
  return out;
}

FiberedOperator instantiate_operator(const ExperimentConfig& cfg,
                                     size_t slot, int instance) {
  const OperatorSpec& spec = cfg.operators.at(slot);
  if (spec.custom) return make_fibered_operator(cfg.bundle, spec.matrices);
  const std::string label =
      "run/op/" + std::to_string(instance) + "/" + std::to_string(slot);
  const std::uint64_t child = substream(cfg.seed, label).next();
  return generate_operator(spec.kind, child, cfg.bundle);
}

BundleFunction instance_function(const ExperimentConfig& cfg, int instance) {
  if (cfg.function) return *cfg.function;
  Rng rng = substream(cfg.seed, "run/f/" + std::to_string(instance));
  BundleFunction f = zeros_like(cfg.bundle);
  for (Index w = 0; w < cfg.bundle.base_points(); ++w)
    for (Index a = 0; a < f.fiber(w).size(); ++a)
      f.values[static_cast<size_t>(w)][a] = rng.uniform(-1.0, 1.0);
  return f;
}

namespace {

std::string tail_or_na(double tail_dev) {
  return std::isnan(tail_dev) ? std::string("n/a") : format_real(tail_dev);
}

TheoremVerdict aggregate(const std::string& name,
                         const std::vector<CheckOutcome>& outcomes,
                         std::uint64_t seed) {
  TheoremVerdict agg;
  agg.check = name;
  agg.seed = seed;
  agg.pass = true;
  std::set<std::string> reasons;
  for (const CheckOutcome& oc : outcomes) {
    const TheoremVerdict& v = oc.verdict;
    agg.pass = agg.pass && v.pass && !v.refused;
    agg.refused = agg.refused || v.refused;
    agg.oracle_flagged = agg.oracle_flagged || v.oracle_flagged;
    agg.max_ratio = std::max(agg.max_ratio, v.max_ratio);
    if (!std::isnan(v.tail_dev))
      agg.tail_dev = std::isnan(agg.tail_dev)
                         ? v.tail_dev
                         : std::max(agg.tail_dev, v.tail_dev);
    if (!v.reason.empty()) reasons.insert(v.reason);
  }
  std::string joined;
  for (const std::string& r : reasons) {
    if (!joined.empty()) joined += "; ";
    joined += r;
  }
  agg.reason = joined;
  return agg;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts,
                   std::ostream& out) {
  if (cfg.checks.empty())
    throw ConfigError("checks", "no checks configured");

  const std::filesystem::path out_dir =
      opts.out_override ? *opts.out_override : cfg.out_dir;
  std::filesystem::create_directories(out_dir);

  CheckThresholds th;
  th.ratio_tol = cfg.ratio_tol;
  if (cfg.tail_threshold) th.tail_threshold = *cfg.tail_threshold;

  std::vector<VerdictRecord> records;
  bool all_pass = true;

  for (const std::string& name : cfg.checks) {
    const ParsedCheck pc = parse_check_name(name, cfg);
    const std::vector<MultiIndex> horizons =
        build_horizons(cfg, pc.d, opts.horizon_max);
    const bool box = pc.kind == CheckKind::multi ||
                     pc.kind == CheckKind::multi_weighted;

    std::vector<CheckOutcome> outcomes(
        static_cast<size_t>(cfg.instances));
    parallel_for(static_cast<size_t>(cfg.instances), [&](size_t i) {
      CheckInputs in;
      in.bundle = &cfg.bundle;
      const size_t slots = box ? cfg.operators.size() : size_t{1};
      for (size_t j = 0; j < slots && j < cfg.operators.size(); ++j)
        in.ops.push_back(
            instantiate_operator(cfg, j, static_cast<int>(i)));
      in.f = instance_function(cfg, static_cast<int>(i));
      in.alpha = cfg.weights;
      in.subseq = cfg.subseq;
      in.p = pc.p;
      outcomes[i] = theorem_check(pc.kind, in, horizons, th, cfg.seed);
    });

    TheoremVerdict agg = aggregate(name, outcomes, cfg.seed);
    all_pass = all_pass && agg.pass;

    if (outcomes[0].trace)
      write_trace_csv(out_dir / (name + "_trace.csv"), *outcomes[0].trace);

    if (!opts.quiet) {
      const char* tag = agg.refused ? "[REFUSED]"
                        : agg.pass  ? "[PASS]"
                                    : "[FAIL]";
      out << tag << " " << name << " max_ratio=" << format_real(agg.max_ratio)
          << " tail_dev=" << tail_or_na(agg.tail_dev);
      if (!agg.reason.empty()) out << " (" << agg.reason << ")";
      out << "\n";
    }

    records.push_back(VerdictRecord{std::move(agg), cfg.instances});
  }

  write_verdicts_file(out_dir / "verdicts.json", records);
  write_summary_file(out_dir / "summary.json", records);
  if (!opts.quiet)
    out << (all_pass ? "all checks passed" : "some checks failed") << "\n";
  return all_pass ? 0 : 1;
}

int validate_experiment(const ExperimentConfig& cfg, const RunOptions& opts,
                        std::ostream& out) {
  const std::filesystem::path out_dir =
      opts.out_override ? *opts.out_override : cfg.out_dir;
  std::filesystem::create_directories(out_dir);

  std::vector<OperatorValidation> reports;
  bool ok = true;
  for (size_t j = 0; j < cfg.operators.size(); ++j) {
    const FiberedOperator op = instantiate_operator(cfg, j, 0);
    OperatorValidation rep = validate(op, cfg.bundle, cfg.p);
    ok = ok && (rep.ds_valid || rep.p_only_valid);
    if (!opts.quiet) {
      out << "operator " << j << ": certificate "
          << (rep.ds_valid ? "full" : rep.p_only_valid ? "p-only" : "failed")
          << ", max probe norm " << format_real(rep.norm_probe.maxCoeff())
          << "\n";
    }
    reports.push_back(std::move(rep));
  }
  write_validation_file(out_dir / "validation.json", reports);
  if (!opts.quiet)
    out << (ok ? "operators valid" : "operator validation failed") << "\n";
  return ok ? 0 : 1;
}

}  // namespace erglab
