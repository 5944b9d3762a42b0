#ifndef ERGLAB_EXPERIMENTS_HPP
#define ERGLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "erglab/engine.hpp"
#include "erglab/io.hpp"

namespace erglab {

struct RunOptions {
  std::optional<std::string> out_override;
  std::optional<std::int64_t> horizon_max;
  bool quiet = false;
};

/// A check name is the mode followed by optional "-"-separated modifiers:
/// "cesaro", "besicovich-p1.5", "multi-d2-p2", "multi-weighted-d2",
/// "subsequence-p4". pX overrides the config exponent, dN the box
/// dimension (box modes default to the number of configured operators).
struct ParsedCheck {
  CheckKind kind = CheckKind::cesaro;
  double p = 2.0;
  int d = 1;
};

ParsedCheck parse_check_name(const std::string& name,
                             const ExperimentConfig& cfg);

/// Horizon schedule for a d-dimensional check, honoring --horizon-max.
std::vector<MultiIndex> build_horizons(const ExperimentConfig& cfg, int d,
                                       std::optional<std::int64_t> clamp);

/// Operator for one config slot and one instance. Random kinds draw from
/// the substream "run/op/<instance>/<slot>"; identity, cyclic and custom
/// operators are the same for every instance.
FiberedOperator instantiate_operator(const ExperimentConfig& cfg,
                                     size_t slot, int instance);

/// The function under test: the configured one, or a uniform [-1, 1]
/// draw from the substream "run/f/<instance>".
BundleFunction instance_function(const ExperimentConfig& cfg, int instance);

/// Runs every configured check across the configured instances, writes
/// verdicts.json, summary.json and one trace CSV per check (instance 0)
/// into the output directory. Returns the process exit code: 0 when all
/// checks pass, 1 otherwise.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts,
                   std::ostream& out);

/// Validates the instance-0 operators at the config exponent and writes
/// validation.json. Exit 0 when every operator is at least probe-valid.
int validate_experiment(const ExperimentConfig& cfg, const RunOptions& opts,
                        std::ostream& out);

}  // namespace erglab

#endif
