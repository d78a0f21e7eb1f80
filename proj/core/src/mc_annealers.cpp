#include "dwqa/mc_annealers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

#include "dwqa/schedule.hpp"

namespace dwqa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroCos = 1e-12;
// exp(-x) is below the 2^-53 resolution of Rng::uniform() past this point.
constexpr double kRejectExponent = 37.0;

bool metropolis_accept(double x, Rng& rng) {
  if (x <= 0.0) return true;
  if (x > kRejectExponent) return false;
  return rng.uniform() < std::exp(-x);
}

std::vector<std::int8_t> random_spins(int n, Rng& rng) {
  std::vector<std::int8_t> s(static_cast<std::size_t>(n));
  for (auto& v : s) v = rng.spin();
  return s;
}

SpinConfig to_config(const std::vector<std::int8_t>& s) {
  return SpinConfig(std::vector<std::int8_t>(s.begin(), s.end()));
}

double anneal_parameter(int t, int t_mcs) {
  return static_cast<double>(t) / static_cast<double>(t_mcs - 1);
}

// One Monte Carlo step: N single-spin Metropolis updates at uniformly random
// sites, inverse temperature beta.
void metropolis_sweep(std::vector<std::int8_t>& s, std::span<const double> g, double j,
                      double beta, Rng& rng) {
  const int n = static_cast<int>(s.size());
  for (int step = 0; step < n; ++step) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int nb = (i > 0 ? s[i - 1] : 0) + (i + 1 < n ? s[i + 1] : 0);
    const double de = -2.0 * s[i] * (g[i] - j * nb);
    if (metropolis_accept(beta * de, rng)) s[i] = static_cast<std::int8_t>(-s[i]);
  }
}

}  // namespace

void SaParams::validate() const {
  if (t_mcs < 2) throw std::invalid_argument("SA t_mcs must be >= 2");
  if (!(t1 > 0.0)) throw std::invalid_argument("SA t1 must be > 0");
  if (!(t0 > t1)) throw std::invalid_argument("SA t0 must exceed t1");
}

double SaParams::temperature(int t) const {
  const double u = anneal_parameter(t, t_mcs);
  return (1.0 - u) * t0 + u * t1;
}

void SqaParams::validate() const {
  if (t_mcs < 2) throw std::invalid_argument("SQA t_mcs must be >= 2");
  if (trotter_m < 2) throw std::invalid_argument("SQA trotter_m must be >= 2");
  if (!(beta > 0.0)) throw std::invalid_argument("SQA beta must be > 0");
  if (!(a_floor > 0.0)) throw std::invalid_argument("SQA a_floor must be > 0");
}

double SqaParams::replica_coupling(double s) const {
  const double m = trotter_m;
  const double a = std::max(LinearAnnealing::transverse(s), a_floor);
  return m / (2.0 * beta) * std::log(std::tanh(beta * a / (2.0 * m)));
}

std::string to_string(SvmcUpdate rule) { return rule == SvmcUpdate::TFD ? "tfd" : "uniform"; }

SvmcUpdate svmc_update_from_string(const std::string& name) {
  if (name == "tfd") return SvmcUpdate::TFD;
  if (name == "uniform") return SvmcUpdate::Uniform;
  throw std::invalid_argument("unknown SVMC update rule: " + name);
}

void SvmcParams::validate() const {
  if (t_mcs < 2) throw std::invalid_argument("SVMC t_mcs must be >= 2");
  if (!(temperature > 0.0)) throw std::invalid_argument("SVMC temperature must be > 0");
}

double tfd_half_width(double s) {
  const double a = LinearAnnealing::transverse(s);
  const double b = LinearAnnealing::problem(s);
  const double r = (b <= a) ? 1.0 : a / b;
  return r * kPi;
}

SpinConfig project_rotors(const RotorConfig& rotors, Rng& rng) {
  std::vector<std::int8_t> s(rotors.angles.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = std::cos(rotors.angles[i]);
    if (std::abs(c) <= kZeroCos)
      s[i] = rng.spin();
    else
      s[i] = c > 0.0 ? std::int8_t{1} : std::int8_t{-1};
  }
  return to_config(s);
}

RunBatch sa_run(const ChainInstance& chain, const SaParams& params, int n_reads,
                std::uint64_t seed) {
  params.validate();
  if (n_reads < 1) throw std::invalid_argument("n_reads must be >= 1");
  const auto g = chain.local_fields();
  const double j = chain.coupling_j();
  RunBatch out;
  out.seed = seed;
  out.protocol = "sa";
  out.schedule = {{"t_mcs", params.t_mcs}, {"t0", params.t0}, {"t1", params.t1}};
  out.samples.reserve(static_cast<std::size_t>(n_reads));
  for (int r = 0; r < n_reads; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    auto s = random_spins(chain.n_spins(), rng);
    for (int t = 0; t < params.t_mcs; ++t)
      metropolis_sweep(s, g, j, 1.0 / params.temperature(t), rng);
    out.samples.push_back(to_config(s));
  }
  return out;
}

RunBatch sqa_run(const ChainInstance& chain, const SqaParams& params, std::uint64_t seed) {
  params.validate();
  const int n = chain.n_spins();
  const int m = params.trotter_m;
  const auto g = chain.local_fields();
  const double j = chain.coupling_j();
  // Replica energies are weighted by beta / M.
  const double w = params.beta / m;

  Rng rng(derive_seed(seed, {0}));
  std::vector<std::int8_t> s(static_cast<std::size_t>(n) * m);
  for (auto& v : s) v = rng.spin();
  auto at = [&](int k, int i) -> std::int8_t& { return s[static_cast<std::size_t>(k) * n + i]; };

  for (int t = 0; t < params.t_mcs; ++t) {
    const double sp = anneal_parameter(t, params.t_mcs);
    const double half_b = LinearAnnealing::problem(sp) / 2.0;
    const double kc = params.replica_coupling(sp);
    if (kc > 0.0) throw std::logic_error("SQA replica coupling became positive");
    for (std::size_t step = 0; step < s.size(); ++step) {
      const auto site = rng.below(s.size());
      const int k = static_cast<int>(site / static_cast<std::size_t>(n));
      const int i = static_cast<int>(site % static_cast<std::size_t>(n));
      const int up = (k + 1) % m;
      const int dn = (k + m - 1) % m;
      {
        const int nb = (i > 0 ? at(k, i - 1) : 0) + (i + 1 < n ? at(k, i + 1) : 0);
        const double local = half_b * (g[i] - j * nb) + kc * (at(up, i) + at(dn, i));
        const double x = -2.0 * at(k, i) * local * w;
        if (metropolis_accept(x, rng)) at(k, i) = static_cast<std::int8_t>(-at(k, i));
      }
    }
  }

  RunBatch out;
  out.seed = seed;
  out.protocol = "sqa";
  out.schedule = {{"t_mcs", params.t_mcs},
                  {"trotter_m", params.trotter_m},
                  {"beta", params.beta},
                  {"a_floor", params.a_floor}};
  out.samples.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    out.samples.push_back(to_config(std::vector<std::int8_t>(s.begin() + static_cast<std::ptrdiff_t>(k) * n,
                                                             s.begin() + static_cast<std::ptrdiff_t>(k + 1) * n)));
  return out;
}

RunBatch svmc_run(const ChainInstance& chain, const SvmcParams& params, int n_reads,
                  std::uint64_t seed) {
  params.validate();
  if (n_reads < 1) throw std::invalid_argument("n_reads must be >= 1");
  const int n = chain.n_spins();
  const auto g = chain.local_fields();
  const double j = chain.coupling_j();
  const double beta = 1.0 / params.temperature;

  RunBatch out;
  out.seed = seed;
  out.protocol = "svmc";
  out.schedule = {{"t_mcs", params.t_mcs},
                  {"temperature", params.temperature},
                  {"tfd", params.update_rule == SvmcUpdate::TFD ? 1.0 : 0.0}};
  out.samples.reserve(static_cast<std::size_t>(n_reads));

  for (int r = 0; r < n_reads; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    RotorConfig rot{std::vector<double>(static_cast<std::size_t>(n), kPi / 2.0)};
    auto& th = rot.angles;
    std::vector<double> c(th.size()), sn(th.size());
    for (std::size_t i = 0; i < th.size(); ++i) {
      c[i] = std::cos(th[i]);
      sn[i] = std::sin(th[i]);
    }
    for (int t = 0; t < params.t_mcs; ++t) {
      const double sp = anneal_parameter(t, params.t_mcs);
      const double half_a = LinearAnnealing::transverse(sp) / 2.0;
      const double half_b = LinearAnnealing::problem(sp) / 2.0;
      const double width = tfd_half_width(sp);
      for (int step = 0; step < n; ++step) {
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        double prop;
        if (params.update_rule == SvmcUpdate::Uniform) {
          prop = rng.uniform(0.0, kPi);
        } else {
          prop = std::clamp(th[i] + rng.uniform(-width, width), 0.0, kPi);
        }
        const double cp = std::cos(prop);
        const double spn = std::sin(prop);
        const double nb = (i > 0 ? c[i - 1] : 0.0) + (i + 1 < n ? c[i + 1] : 0.0);
        const double de = half_b * (g[i] - j * nb) * (cp - c[i]) - half_a * (spn - sn[i]);
        if (metropolis_accept(beta * de, rng)) {
          th[i] = prop;
          c[i] = cp;
          sn[i] = spn;
        }
      }
    }
    out.samples.push_back(project_rotors(rot, rng));
  }
  return out;
}

FixedTemperatureRun metropolis_fixed(const ChainInstance& chain, double temperature,
                                     int n_sweeps, std::uint64_t seed, int sample_every) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (n_sweeps < 1) throw std::invalid_argument("n_sweeps must be >= 1");
  const auto g = chain.local_fields();
  const double j = chain.coupling_j();
  Rng rng(derive_seed(seed, {0}));
  auto s = random_spins(chain.n_spins(), rng);
  FixedTemperatureRun out;
  out.energies.reserve(static_cast<std::size_t>(n_sweeps));
  for (int t = 0; t < n_sweeps; ++t) {
    metropolis_sweep(s, g, j, 1.0 / temperature, rng);
    auto cfg = to_config(s);
    out.energies.push_back(classical_energy(chain, cfg));
    if (sample_every > 0 && (t + 1) % sample_every == 0) out.samples.push_back(std::move(cfg));
  }
  return out;
}

}  // namespace dwqa
