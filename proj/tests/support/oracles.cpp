#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "dwqa/rng.hpp"

namespace dwqa::oracle {

SpinConfig config_from_index(int n_spins, std::size_t index) {
  SpinConfig c(static_cast<std::size_t>(n_spins));
  for (int i = 0; i < n_spins; ++i) {
    const auto bit = (index >> (n_spins - 1 - i)) & 1u;
    c.set(static_cast<std::size_t>(i), bit ? std::int8_t{1} : std::int8_t{-1});
  }
  return c;
}

std::vector<Level> enumerate_levels(const ChainInstance& chain) {
  const int n = chain.n_spins();
  std::vector<Level> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
    auto c = config_from_index(n, k);
    out.push_back({classical_energy(chain, c), std::move(c)});
  }
  std::sort(out.begin(), out.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.config < b.config;
  });
  return out;
}

ThermalPoint enumerate_thermal(const ChainInstance& chain, double temperature) {
  const auto levels = enumerate_levels(chain);
  const double e0 = levels.front().energy;
  double z = 0.0, e = 0.0, gs = 0.0, cons = 0.0;
  for (const auto& l : levels) {
    const double w = std::exp(-(l.energy - e0) / temperature);
    z += w;
    e += w * l.energy;
    if (std::abs(l.energy - e0) <= kDegeneracyTolerance) gs += w;
    if (domain_wall_bond(l.config)) cons += w;
  }
  ThermalPoint p;
  p.temperature = temperature;
  p.internal_energy = e / z;
  p.p_gs = gs / z;
  p.p_const = cons / z;
  p.log_partition = std::log(z) - e0 / temperature;
  return p;
}

Eigen::VectorXd h0_diagonal(const ChainInstance& chain) {
  const int n = chain.n_spins();
  Eigen::VectorXd d(std::size_t{1} << n);
  for (Eigen::Index k = 0; k < d.size(); ++k)
    d(k) = classical_energy(chain, config_from_index(n, static_cast<std::size_t>(k)));
  return d;
}

Eigen::VectorXcd plus_state(int n_spins) {
  const auto dim = Eigen::Index{1} << n_spins;
  return Eigen::VectorXcd::Constant(dim, std::complex<double>(1.0 / std::sqrt(double(dim)), 0.0));
}

namespace {

// H(s) psi
Eigen::VectorXcd apply_h(const Eigen::VectorXd& diag, int n, double s, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd out = s * diag.cwiseProduct(psi);
  const double gx = -(1.0 - s);
  for (int i = 0; i < n; ++i) {
    const Eigen::Index mask = Eigen::Index{1} << (n - 1 - i);
    for (Eigen::Index k = 0; k < psi.size(); ++k) out(k) += gx * psi(k ^ mask);
  }
  return out;
}

}  // namespace

Eigen::VectorXcd integrate_anneal(const ChainInstance& chain, double t_a, int n_steps) {
  const int n = chain.n_spins();
  const auto diag = h0_diagonal(chain);
  const std::complex<double> mi(0.0, -1.0);
  const double h = t_a / n_steps;
  Eigen::VectorXcd psi = plus_state(n);
  for (int k = 0; k < n_steps; ++k) {
    const double t = k * h;
    auto rhs = [&](double tt, const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
      return mi * apply_h(diag, n, tt / t_a, v);
    };
    const Eigen::VectorXcd k1 = rhs(t, psi);
    const Eigen::VectorXcd k2 = rhs(t + h / 2, psi + (h / 2) * k1);
    const Eigen::VectorXcd k3 = rhs(t + h / 2, psi + (h / 2) * k2);
    const Eigen::VectorXcd k4 = rhs(t + h, psi + h * k3);
    psi += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

double dense_energy(const Eigen::VectorXcd& psi, const Eigen::VectorXd& diag) {
  return (psi.cwiseAbs2().array() * diag.array()).sum() / psi.squaredNorm();
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

ChainInstance random_chain(int n_spins, std::uint64_t seed, double amp) {
  Rng rng(seed);
  std::vector<double> fields(static_cast<std::size_t>(n_spins));
  for (auto& f : fields) f = rng.uniform(-amp, amp);
  const double j = rng.uniform(0.2, 1.5);
  const double h = j + rng.uniform(0.3, 2.0);
  const double lambda = rng.uniform(0.5, 1.5);
  return ChainInstance(std::move(fields), j, h, lambda, make_grid(-1.0, 1.0, n_spins),
                       FieldMode::Gradient);
}

}  // namespace dwqa::oracle
