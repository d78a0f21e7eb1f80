#include "dwqa/observables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "dwqa/rng.hpp"

namespace dwqa {

namespace {

// E - e0, with configurations inside the degeneracy tolerance counted as ground states.
double excess_energy(const ChainInstance& chain, const SpinConfig& c, double e0) {
  const double excess = classical_energy(chain, c) - e0;
  return excess > kDegeneracyTolerance ? excess : 0.0;
}

void require_nonempty(std::span<const SpinConfig> batch) {
  if (batch.empty()) throw std::invalid_argument("empty sample batch");
}

bool is_constrained(const SpinConfig& c) { return domain_wall_bond(c).has_value(); }

double fraction(std::span<const SpinConfig> batch, const auto& pred) {
  require_nonempty(batch);
  double hits = 0.0;
  for (const auto& c : batch) hits += pred(c) ? 1.0 : 0.0;
  return hits / static_cast<double>(batch.size());
}

bool in_set(const SpinConfig& c, std::span<const SpinConfig> sorted_set) {
  return std::binary_search(sorted_set.begin(), sorted_set.end(), c);
}

}  // namespace

double config_kink_density(const SpinConfig& config) {
  return static_cast<double>(kink_count(config)) / static_cast<double>(config.size());
}

double kink_density(std::span<const SpinConfig> batch) {
  require_nonempty(batch);
  double sum = 0.0;
  for (const auto& c : batch) sum += config_kink_density(c);
  return sum / static_cast<double>(batch.size());
}

double constraint_probability(std::span<const SpinConfig> batch, const ChainInstance& chain) {
  for (const auto& c : batch)
    if (static_cast<int>(c.size()) != chain.n_spins())
      throw std::invalid_argument("sample length does not match the chain");
  return fraction(batch, is_constrained);
}

double residual_energy(std::span<const SpinConfig> batch, const ChainInstance& chain, double e0) {
  require_nonempty(batch);
  double sum = 0.0;
  for (const auto& c : batch) sum += excess_energy(chain, c, e0);
  return sum / static_cast<double>(batch.size()) / chain.n_spins();
}

double ground_state_probability(std::span<const SpinConfig> batch,
                                std::span<const SpinConfig> ground_set) {
  if (ground_set.empty()) throw std::invalid_argument("empty ground set");
  std::vector<SpinConfig> sorted(ground_set.begin(), ground_set.end());
  std::sort(sorted.begin(), sorted.end());
  return fraction(batch, [&](const SpinConfig& c) { return in_set(c, sorted); });
}

std::optional<double> absolute_error_constrained(std::span<const SpinConfig> batch,
                                                 const ChainInstance& chain,
                                                 const Potential& potential) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& c : batch) {
    if (auto x = decode(chain, c)) {
      sum += potential.value(*x);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return std::abs(sum / static_cast<double>(count));
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty values");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double bootstrap_stderr(std::span<const double> values, const Statistic& statistic,
                        int n_resamples, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap needs at least one value");
  if (n_resamples < 100) throw std::invalid_argument("bootstrap needs >= 100 resamples");
  Rng rng(seed);
  const auto n = values.size();
  std::vector<double> buf(n);
  std::vector<double> stats(static_cast<std::size_t>(n_resamples));
  for (auto& st : stats) {
    for (auto& b : buf) b = values[rng.below(n)];
    st = statistic(buf);
  }
  const double m = mean_of(stats);
  double var = 0.0;
  for (double st : stats) var += (st - m) * (st - m);
  return std::sqrt(var / static_cast<double>(stats.size() - 1));
}

double bootstrap_stderr(std::span<const double> values, int n_resamples, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap needs at least one value");
  if (n_resamples < 100) throw std::invalid_argument("bootstrap needs >= 100 resamples");
  // Mean statistic without the std::function indirection.
  Rng rng(seed);
  const auto n = values.size();
  std::vector<double> stats(static_cast<std::size_t>(n_resamples));
  for (auto& st : stats) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += values[rng.below(n)];
    st = s / static_cast<double>(n);
  }
  const double m = mean_of(stats);
  double var = 0.0;
  for (double st : stats) var += (st - m) * (st - m);
  return std::sqrt(var / static_cast<double>(stats.size() - 1));
}

ObservableRecord summarize_runs(const std::string& protocol, double t_a_or_mcs,
                                std::span<const RunBatch> runs, const ChainInstance& chain,
                                const GroundState& ground, const Potential* potential,
                                int n_resamples, std::uint64_t seed) {
  if (runs.empty()) throw std::invalid_argument("no runs to summarize");
  std::vector<SpinConfig> gs = ground.ground_set;
  std::sort(gs.begin(), gs.end());
  const int n = chain.n_spins();

  std::vector<double> rho_v, eres_v, eabs_v, pconst_runs, pgs_runs;
  for (const auto& run : runs) {
    require_nonempty(run.samples);
    double c_hits = 0.0, g_hits = 0.0;
    for (const auto& c : run.samples) {
      rho_v.push_back(config_kink_density(c));
      eres_v.push_back(excess_energy(chain, c, ground.e0) / n);
      const auto x = decode(chain, c);
      if (x) {
        c_hits += 1.0;
        if (potential) eabs_v.push_back(potential->value(*x));
      }
      if (in_set(c, gs)) g_hits += 1.0;
    }
    const double m = static_cast<double>(run.samples.size());
    pconst_runs.push_back(c_hits / m);
    pgs_runs.push_back(g_hits / m);
  }

  ObservableRecord r;
  r.protocol = protocol;
  r.t_a_or_mcs = t_a_or_mcs;
  r.rho = mean_of(rho_v);
  r.e_res = mean_of(eres_v);
  r.p_const = mean_of(pconst_runs);
  r.p_gs = mean_of(pgs_runs);
  r.rho_se = bootstrap_stderr(rho_v, n_resamples, derive_seed(seed, {0}));
  r.e_res_se = bootstrap_stderr(eres_v, n_resamples, derive_seed(seed, {1}));
  r.p_const_se = bootstrap_stderr(pconst_runs, n_resamples, derive_seed(seed, {2}));
  r.p_gs_se = bootstrap_stderr(pgs_runs, n_resamples, derive_seed(seed, {3}));
  if (!eabs_v.empty()) {
    r.e_abs = std::abs(mean_of(eabs_v));
    r.e_abs_se = bootstrap_stderr(eabs_v, n_resamples, derive_seed(seed, {4}));
  }
  return r;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string observable_csv_header(bool with_e_abs) {
  std::string h = "protocol,t_a_or_mcs,rho,rho_se,p_const,p_const_se,e_res,e_res_se,p_gs,p_gs_se";
  if (with_e_abs) h += ",e_abs,e_abs_se";
  return h;
}

std::string observable_csv_row(const ObservableRecord& r, bool with_e_abs) {
  std::string s = r.protocol;
  for (double v : {r.t_a_or_mcs, r.rho, r.rho_se, r.p_const, r.p_const_se, r.e_res, r.e_res_se,
                   r.p_gs, r.p_gs_se}) {
    s += ',';
    s += format_double(v);
  }
  if (with_e_abs) {
    s += ',';
    if (r.e_abs) s += format_double(*r.e_abs);
    s += ',';
    if (r.e_abs) s += format_double(r.e_abs_se);
  }
  return s;
}

}  // namespace dwqa
