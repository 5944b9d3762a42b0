#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "erglab/experiments.hpp"
#include "erglab/rng.hpp"

namespace {

using namespace erglab;

std::vector<Index> parse_sizes(const std::string& csv) {
  std::vector<Index> sizes;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) sizes.push_back(static_cast<Index>(std::stoll(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (sizes.empty())
    throw ConfigError("fiber-sizes", "expected a comma-separated list");
  return sizes;
}

int gen_bundle(const std::string& out, std::uint64_t seed,
               std::int64_t base_points, const std::string& sizes_csv) {
  std::vector<Index> sizes = parse_sizes(sizes_csv);
  Rng lam_rng = substream(seed, "gen/bundle/lambda");
  Vector lambda(base_points);
  for (Index w = 0; w < base_points; ++w)
    lambda[w] = lam_rng.uniform(0.5, 2.0);
  std::vector<Vector> mus;
  for (Index w = 0; w < base_points; ++w) {
    Rng mu_rng = substream(seed, "gen/bundle/mu/" + std::to_string(w));
    const Index m = sizes[static_cast<size_t>(w) % sizes.size()];
    Vector mu(m);
    for (Index a = 0; a < m; ++a) mu[a] = mu_rng.uniform(0.5, 2.0);
    mus.push_back(std::move(mu));
  }
  write_bundle_file(out, make_bundle(std::move(lambda), std::move(mus)));
  return 0;
}

int gen_operator(const std::string& out, const std::string& bundle_path,
                 const std::string& kind_name, std::uint64_t seed) {
  OperatorKind kind;
  if (kind_name == "identity") kind = OperatorKind::identity;
  else if (kind_name == "cyclic") kind = OperatorKind::cyclic;
  else if (kind_name == "random_markov") kind = OperatorKind::random_markov;
  else if (kind_name == "random_strict") kind = OperatorKind::random_strict;
  else throw ConfigError("kind", "unknown operator kind \"" + kind_name + "\"");
  const Bundle bundle = read_bundle_file(bundle_path);
  write_operator_file(out, generate_operator(kind, seed, bundle).matrices);
  return 0;
}

int gen_weights(const std::string& out, const std::string& kind_name,
                std::uint64_t seed, double value, int terms, bool golden,
                std::int64_t stride, std::int64_t count) {
  if (kind_name == "constant") {
    write_weights_file(out, constant_weights(value));
    return 0;
  }
  if (kind_name == "trig") {
    std::vector<TrigTerm> parsed;
    if (golden) {
      parsed.push_back(TrigTerm{1.0, {0.6180339887498949}, {0.0}});
    } else {
      Rng rng = substream(seed, "gen/weights/trig");
      for (int t = 0; t < terms; ++t) {
        TrigTerm term;
        term.amplitude = rng.uniform(-1.0, 1.0);
        term.frequency = {t == 0 ? 0.0 : rng.uniform()};
        term.phase = {t == 0 ? 0.0 : rng.uniform(0.0, 6.283185307179586)};
        parsed.push_back(std::move(term));
      }
    }
    write_weights_file(
        out, trig_weights(make_trig_polynomial(1, std::move(parsed))));
    return 0;
  }
  if (kind_name == "subsequence") {
    if (stride < 1 || count < 1)
      throw ConfigError("stride", "stride and count must be >= 1");
    std::vector<std::int64_t> j;
    for (std::int64_t m = 1; m <= count; ++m) j.push_back(stride * m);
    write_weights_file(out, subsequence_to_weights(make_subsequence(j)));
    return 0;
  }
  throw ConfigError("kind", "unknown weight kind \"" + kind_name + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite measure-bundle averaging laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions opts;
  std::string out_override;
  std::int64_t horizon_max = 0;

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check operator certificates");
  validate_cmd->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  validate_cmd->add_option("--out", out_override, "output directory");
  validate_cmd->add_flag("--quiet", opts.quiet, "suppress progress output");

  CLI::App* run_cmd =
      app.add_subcommand("run", "run the configured theorem checks");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  run_cmd->add_option("--out", out_override, "output directory");
  run_cmd->add_option("--horizon-max", horizon_max,
                      "clamp the horizon schedule");
  run_cmd->add_flag("--quiet", opts.quiet, "suppress progress output");

  CLI::App* gen_cmd = app.add_subcommand("gen", "write example inputs");
  std::string gen_what, gen_out, gen_bundle_path;
  std::string gen_kind = "random_markov";
  std::string fiber_sizes = "3";
  std::uint64_t gen_seed = 0;
  std::int64_t base_points = 2, stride = 2, count = 8192;
  double value = 1.0;
  int terms = 3;
  bool golden = false;
  gen_cmd->add_option("what", gen_what, "bundle | operator | weights")
      ->required();
  gen_cmd->add_option("--out", gen_out, "output file")->required();
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--base-points", base_points, "bundle base points");
  gen_cmd->add_option("--fiber-sizes", fiber_sizes,
                      "comma list, cycled over base points");
  gen_cmd->add_option("--bundle", gen_bundle_path, "bundle file (operator)");
  gen_cmd->add_option("--kind", gen_kind, "operator or weight kind");
  gen_cmd->add_option("--value", value, "constant weight value");
  gen_cmd->add_option("--terms", terms, "trig term count");
  gen_cmd->add_flag("--golden", golden,
                    "single cosine at the golden rotation number");
  gen_cmd->add_option("--stride", stride, "subsequence stride");
  gen_cmd->add_option("--count", count, "subsequence length");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed() || run_cmd->parsed()) {
      if (!out_override.empty()) opts.out_override = out_override;
      if (horizon_max > 0) opts.horizon_max = horizon_max;
      const ExperimentConfig cfg = parse_config_file(config_path);
      return validate_cmd->parsed()
                 ? validate_experiment(cfg, opts, std::cout)
                 : run_experiment(cfg, opts, std::cout);
    }
    if (gen_what == "bundle")
      return gen_bundle(gen_out, gen_seed, base_points, fiber_sizes);
    if (gen_what == "operator") {
      if (gen_bundle_path.empty())
        throw ConfigError("bundle", "gen operator needs --bundle");
      if (gen_kind == "random_markov" || gen_kind == "identity" ||
          gen_kind == "cyclic" || gen_kind == "random_strict")
        return gen_operator(gen_out, gen_bundle_path, gen_kind, gen_seed);
      throw ConfigError("kind",
                        "unknown operator kind \"" + gen_kind + "\"");
    }
    if (gen_what == "weights") {
      std::string kind = gen_kind == "random_markov" ? "trig" : gen_kind;
      return gen_weights(gen_out, kind, gen_seed, value, terms, golden,
                         stride, count);
    }
    throw ConfigError("what", "expected bundle, operator or weights");
  } catch (const erglab::ConfigError& e) {
    std::cerr << "erglab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "erglab: " << e.what() << "\n";
    return 1;
  }
}
