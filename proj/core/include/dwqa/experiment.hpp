#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwqa/continuous_opt.hpp"
#include "dwqa/encoding.hpp"
#include "dwqa/mc_annealers.hpp"
#include "dwqa/observables.hpp"
#include "dwqa/potential.hpp"
#include "dwqa/tebd.hpp"

namespace dwqa {

/// Rejected configuration; keys lists the offending entries.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys = {})
      : std::runtime_error(what), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

enum class ProtocolKind { SA, SQA, SVMC, TEBD, Classical };

std::string to_string(ProtocolKind kind);
ProtocolKind protocol_from_string(const std::string& name);

struct EncodingConfig {
  int n = 211;
  double lambda = 1.0;
  double coupling_j = 1.0;
  double boundary_h = 2.0;
  FieldMode field_mode = FieldMode::Gradient;
};

struct ClassicalConfig {
  Algorithm algorithm = Algorithm::DifferentialEvolution;
  int de_popsize = 10;
  BhParams bh{};
  /// Defaults to the grid step of the encoding block when absent.
  std::optional<double> success_radius;
};

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::SA;
  SaParams sa{};
  SqaParams sqa{};
  SvmcParams svmc{};
  TebdParams tebd{};
  ClassicalConfig classical{};
};

struct RunsConfig {
  int n_runs = 20;
  int n_reads = 1000;  // SA/SVMC reads per run; initial points per run for classical
  std::uint64_t seed = 1;
  int n_resamples = kDefaultResamples;
};

/// Sweep values are t_MCS (sa/sqa/svmc), t_a (tebd) or t_max (classical).
struct ExperimentConfig {
  PotentialSpec potential{};
  EncodingConfig encoding{};
  ProtocolConfig protocol{};
  std::vector<double> sweep;
  RunsConfig runs{};
  std::string output_dir = "out";

  /// Throws ConfigError listing every offending key. Single-shot commands
  /// (anneal) may pass require_sweep = false.
  static ExperimentConfig from_json(const std::string& text, bool require_sweep = true);
  std::string to_json() const;
  void validate(bool require_sweep = true) const;
};

ChainInstance build_chain(const ExperimentConfig& config);

/// Per-run seed for sweep point p and run r.
std::uint64_t point_seed(std::uint64_t base, std::size_t sweep_index, std::size_t run_index);

struct PointResult {
  ObservableRecord record;
  double wall_time = 0.0;  // solver time only
  double truncation_error = 0.0;
  int max_bond = 0;
  std::optional<std::string> error;
};

struct ExperimentResult {
  std::vector<PointResult> points;
  double e0 = 0.0;
  std::size_t degeneracy = 0;
  bool partial_failure() const;
};

/// Worker count from DWQA_WORKERS, else 1.
int default_workers();

ExperimentResult run_experiment(const ExperimentConfig& config, int workers = default_workers());

/// Writes curve.csv, summary.json and provenance.json into dir.
void write_bundle(const ExperimentConfig& config, const ExperimentResult& result,
                  const std::filesystem::path& dir);

/// Curve file contents: the observable columns followed by e_abs, e_abs_se,
/// truncation_error and status.
std::string curve_csv(const ExperimentResult& result);

/// FNV-1a 64 of the canonical config text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

std::string code_version();

}  // namespace dwqa
