#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dwqa/encoding.hpp"
#include "dwqa/exact.hpp"
#include "dwqa/mc_annealers.hpp"

namespace dwqa {

inline constexpr int kDefaultResamples = 1000;

struct ObservableRecord {
  std::string protocol;
  double t_a_or_mcs = 0.0;
  double rho = 0.0;
  double rho_se = 0.0;
  double p_const = 0.0;
  double p_const_se = 0.0;
  double e_res = 0.0;
  double e_res_se = 0.0;
  double p_gs = 0.0;
  double p_gs_se = 0.0;
  std::optional<double> e_abs;  // absent when no sample decodes
  double e_abs_se = 0.0;
};

/// (1/2N) sum_i (1 - s_i s_{i+1}) for one configuration.
double config_kink_density(const SpinConfig& config);

double kink_density(std::span<const SpinConfig> batch);
/// Fraction of samples that are correctly oriented single-kink states.
double constraint_probability(std::span<const SpinConfig> batch, const ChainInstance& chain);
/// (mean energy - e0) / N over all samples.
double residual_energy(std::span<const SpinConfig> batch, const ChainInstance& chain, double e0);
double ground_state_probability(std::span<const SpinConfig> batch,
                                std::span<const SpinConfig> ground_set);
/// |mean V(decoded x)| over the decodable samples; absent when there are none.
std::optional<double> absolute_error_constrained(std::span<const SpinConfig> batch,
                                                 const ChainInstance& chain,
                                                 const Potential& potential);

using Statistic = std::function<double(std::span<const double>)>;

double mean_of(std::span<const double> values);

/// Standard deviation of the statistic over with-replacement resamples.
double bootstrap_stderr(std::span<const double> values, const Statistic& statistic,
                        int n_resamples, std::uint64_t seed);
double bootstrap_stderr(std::span<const double> values, int n_resamples, std::uint64_t seed);

/// Record for a set of independent runs. rho and e_res errors resample
/// individual samples; p_const and p_gs errors resample per-run fractions.
ObservableRecord summarize_runs(const std::string& protocol, double t_a_or_mcs,
                                std::span<const RunBatch> runs, const ChainInstance& chain,
                                const GroundState& ground, const Potential* potential,
                                int n_resamples, std::uint64_t seed);

/// CSV header and rows: protocol, t_a_or_mcs, rho, rho_se, p_const, p_const_se,
/// e_res, e_res_se, p_gs, p_gs_se (optionally followed by e_abs, e_abs_se).
std::string observable_csv_header(bool with_e_abs = false);
std::string observable_csv_row(const ObservableRecord& record, bool with_e_abs = false);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

}  // namespace dwqa
