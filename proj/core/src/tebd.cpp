#include "dwqa/tebd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwqa/schedule.hpp"

namespace dwqa {

void TebdParams::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("TEBD dt must be > 0");
  if (chi_max < 1) throw std::invalid_argument("TEBD chi_max must be >= 1");
  if (!(svd_cutoff >= 0.0)) throw std::invalid_argument("TEBD svd_cutoff must be >= 0");
  if (!(t_a >= dt)) throw std::invalid_argument("TEBD t_a must be >= dt");
}

int TebdParams::n_steps() const {
  // Guard against t_a / dt landing a hair above an integer.
  return static_cast<int>(std::ceil(t_a / dt - 1e-9));
}

MpsState init_plus_state(int n_spins) {
  if (n_spins < 2) throw std::invalid_argument("need at least two spins");
  const double a = 1.0 / std::sqrt(2.0);
  return MpsState::product(std::vector<std::array<std::complex<double>, 2>>(
      static_cast<std::size_t>(n_spins), {a, a}));
}

MpsState::Gate bond_gate(const ChainInstance& chain, int bond, double s, double tau) {
  const int n = chain.n_spins();
  const double half_b = LinearAnnealing::problem(s) / 2.0;
  const double half_a = LinearAnnealing::transverse(s) / 2.0;
  auto share = [n](int site) { return (site == 0 || site == n - 1) ? 1.0 : 0.5; };
  const int l = bond, r = bond + 1;
  const double zl = share(l) * half_b * chain.local_field(l);
  const double zr = share(r) * half_b * chain.local_field(r);
  const double xl = share(l) * half_a;
  const double xr = share(r) * half_a;
  const double zz = -half_b * chain.coupling_j();

  // Basis 2 * s_l + s_r, index 0 = down (sigma_z = -1).
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  for (int sl = 0; sl < 2; ++sl)
    for (int sr = 0; sr < 2; ++sr) {
      const double zlv = sl ? 1.0 : -1.0, zrv = sr ? 1.0 : -1.0;
      h(2 * sl + sr, 2 * sl + sr) = zl * zlv + zr * zrv + zz * zlv * zrv;
      h(2 * (1 - sl) + sr, 2 * sl + sr) -= xl;
      h(2 * sl + (1 - sr), 2 * sl + sr) -= xr;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
  Eigen::Vector4cd phase;
  for (int k = 0; k < 4; ++k) phase(k) = std::polar(1.0, -tau * es.eigenvalues()(k));
  const Eigen::Matrix4cd v = es.eigenvectors().cast<std::complex<double>>();
  return v * phase.asDiagonal() * v.adjoint();
}

MpsState tebd_anneal(const ChainInstance& chain, const TebdParams& params,
                     const TebdObserver& observer) {
  params.validate();
  const int n = chain.n_spins();
  const int steps = params.n_steps();
  const double tau = params.t_a / steps;
  const int n_bonds = n - 1;
  MpsState psi = init_plus_state(n);

  // Second-order splitting per step: half odd layer, full even layer, half
  // odd layer (odd = bonds 0, 2, 4, ...). The trailing half layer of one
  // step and the leading half layer of the next are fused into one gate.
  auto s_mid = [&](int k) { return (k + 0.5) / steps; };
  bool right = true;
  auto layer = [&](int parity, auto&& make_gate) {
    std::vector<int> bonds;
    for (int b = parity; b < n_bonds; b += 2) bonds.push_back(b);
    if (!right) std::reverse(bonds.begin(), bonds.end());
    for (int b : bonds) psi.apply_two_site(b, make_gate(b), params.chi_max, params.svd_cutoff, right);
    right = !right;
  };

  for (int k = 0; k < steps; ++k) {
    const double s = s_mid(k);
    if (k == 0) layer(0, [&](int b) { return bond_gate(chain, b, s, tau / 2.0); });
    layer(1, [&](int b) { return bond_gate(chain, b, s, tau); });
    if (k + 1 < steps && !observer) {
      const double s_next = s_mid(k + 1);
      layer(0, [&](int b) {
        return MpsState::Gate(bond_gate(chain, b, s_next, tau / 2.0) *
                              bond_gate(chain, b, s, tau / 2.0));
      });
    } else {
      layer(0, [&](int b) { return bond_gate(chain, b, s, tau / 2.0); });
      if (observer) observer(k, static_cast<double>(k + 1) / steps, psi);
      if (k + 1 < steps) layer(0, [&](int b) { return bond_gate(chain, b, s_mid(k + 1), tau / 2.0); });
    }
  }
  return psi;
}

std::vector<double> measure_bond_correlators(const MpsState& state) { return state.bond_zz(); }

double probability_of_config(const MpsState& state, const SpinConfig& config) {
  const double nrm = state.norm();
  return std::norm(state.amplitude(config)) / (nrm * nrm);
}

double constraint_probability(const MpsState& state) { return state.single_kink_weight(); }

double energy_expectation(const MpsState& state, const ChainInstance& chain) {
  const auto z = state.site_z();
  const auto zz = state.bond_zz();
  double e = 0.0;
  for (int i = 0; i < chain.n_spins(); ++i) e += chain.local_field(i) * z[static_cast<std::size_t>(i)];
  for (double c : zz) e -= chain.coupling_j() * c;
  return e;
}

TebdObservables measure_observables(const MpsState& state, const ChainInstance& chain,
                                    const GroundState& ground) {
  const int n = chain.n_spins();
  TebdObservables out;
  const auto zz = state.bond_zz();
  double kinks = 0.0;
  for (double c : zz) kinks += 1.0 - c;
  out.rho = kinks / (2.0 * n);
  out.energy = energy_expectation(state, chain);
  out.e_res = (out.energy - ground.e0) / n;
  out.p_const = constraint_probability(state);
  for (const auto& g : ground.ground_set) out.p_gs += probability_of_config(state, g);
  out.truncation_error = state.truncation_error();
  out.max_bond = state.max_bond_dimension();
  return out;
}

}  // namespace dwqa
