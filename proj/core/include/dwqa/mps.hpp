#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dwqa/encoding.hpp"

namespace dwqa {

/// Open-boundary MPS for spin-1/2 chains in mixed canonical form.
/// Physical index 0 is spin down (sigma_z = -1), 1 is spin up.
class MpsState {
 public:
  using Matrix = Eigen::MatrixXcd;
  using Tensor = std::array<Matrix, 2>;
  using Gate = Eigen::Matrix4cd;  // basis index 2 * s_left + s_right

  /// Product state from one normalized local spinor per site.
  static MpsState product(const std::vector<std::array<std::complex<double>, 2>>& local);
  static MpsState from_config(const SpinConfig& config);

  int n_sites() const { return static_cast<int>(sites_.size()); }
  const Tensor& site(int i) const { return sites_[static_cast<std::size_t>(i)]; }
  /// Bond dimension between sites i and i+1.
  int bond_dimension(int bond) const;
  int max_bond_dimension() const;
  int center() const { return center_; }
  double truncation_error() const { return truncation_error_; }

  void move_center(int site);
  /// Norm read off the orthogonality center.
  double norm() const;
  void normalize();

  /// Applies a two-site gate on (i, i+1). Moves the center into the pair
  /// first, truncates to chi_max keeping discarded weight <= cutoff, and
  /// leaves the center on i+1 (move_right) or i.
  void apply_two_site(int i, const Gate& gate, int chi_max, double cutoff, bool move_right);

  std::complex<double> amplitude(const SpinConfig& config) const;
  /// <sigma_z_i> for every site.
  std::vector<double> site_z() const;
  /// <sigma_z_i sigma_z_{i+1}> for every bond.
  std::vector<double> bond_zz() const;
  /// Sum over single-kink (down-block then up-block) configurations of |amplitude|^2.
  double single_kink_weight() const;

  /// Full state vector; site 0 is the most significant bit, 1 = up.
  Eigen::VectorXcd to_dense() const;

 private:
  std::vector<Tensor> sites_;
  int center_ = 0;
  double truncation_error_ = 0.0;

  void shift_right();
  void shift_left();
};

std::complex<double> overlap(const MpsState& bra, const MpsState& ket);

}  // namespace dwqa
