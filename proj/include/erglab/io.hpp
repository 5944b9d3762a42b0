#ifndef ERGLAB_IO_HPP
#define ERGLAB_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "erglab/bundle.hpp"
#include "erglab/engine.hpp"
#include "erglab/operators.hpp"
#include "erglab/weights.hpp"

namespace erglab {

/// Config problems name the offending field so the CLI can print a usable
/// diagnostic (exit code 2).
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_, const std::string& what_)
      : std::runtime_error("config field \"" + field_ + "\": " + what_),
        field(std::move(field_)) {}
};

/// 17 significant digits: enough for an exact double round trip, and the
/// same bytes on every run.
std::string format_real(double x);

/// Write via a temporary file in the same directory, then rename.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

// ---- bundle / function / operator / partition / weights files ----------

Bundle read_bundle_file(const std::filesystem::path& path);
void write_bundle_file(const std::filesystem::path& path, const Bundle& b);

BundleFunction read_function_file(const std::filesystem::path& path);
void write_function_file(const std::filesystem::path& path,
                         const BundleFunction& f);

std::vector<Matrix> read_operator_file(const std::filesystem::path& path);
void write_operator_file(const std::filesystem::path& path,
                         const std::vector<Matrix>& matrices);

std::vector<std::vector<std::vector<Index>>> read_partition_file(
    const std::filesystem::path& path);
void write_partition_file(
    const std::filesystem::path& path,
    const std::vector<std::vector<std::vector<Index>>>& blocks);

WeightSequence read_weights_file(const std::filesystem::path& path);
void write_weights_file(const std::filesystem::path& path,
                        const WeightSequence& w);
std::string weights_to_json(const WeightSequence& w);

// ---- experiment config --------------------------------------------------

struct OperatorSpec {
  bool custom = false;
  OperatorKind kind = OperatorKind::identity;
  std::vector<Matrix> matrices;  // custom only
};

struct HorizonSpec {
  bool dyadic = true;
  std::int64_t max = 16384;
  std::vector<std::vector<std::int64_t>> list;  // when !dyadic
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  double p = 2.0;
  Bundle bundle;
  std::vector<OperatorSpec> operators;
  std::optional<WeightSequence> weights;
  std::optional<Subsequence> subseq;  // set when weights are an indicator
  HorizonSpec horizons;
  std::vector<std::string> checks;
  int instances = 1;
  std::optional<double> tail_threshold;
  double ratio_tol = 1e-10;
  std::optional<BundleFunction> function;
  std::string out_dir = "erglab_out";
};

/// Parses and validates; file references inside the config resolve
/// relative to the config file's directory. Throws ConfigError.
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// ---- result writers ------------------------------------------------------

/// One verdict row in the verdicts file.
struct VerdictRecord {
  TheoremVerdict verdict;
  int instances = 1;
};

void write_verdicts_file(const std::filesystem::path& path,
                         const std::vector<VerdictRecord>& records);

/// Trace CSV: one row per (horizon, base point); d horizon columns
/// (named "horizon" for d = 1, else n1..nd), then base_point,
/// norm_p_of_average, norm_p_of_running_max, bound_rhs, ratio.
void write_trace_csv(const std::filesystem::path& path,
                     const AverageTrace& trace);

void write_validation_file(const std::filesystem::path& path,
                           const std::vector<OperatorValidation>& reports);

void write_summary_file(const std::filesystem::path& path,
                        const std::vector<VerdictRecord>& records);

}  // namespace erglab

#endif
