#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dwqa/potential.hpp"

namespace dwqa {

/// Classical Ising configuration, entries in {-1, +1}. Site 0 is the
/// chain's first site (site 1 in the usual 1-based notation).
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::size_t n, std::int8_t fill = -1);
  explicit SpinConfig(std::vector<std::int8_t> spins);
  SpinConfig(std::initializer_list<int> spins);

  std::size_t size() const { return spins_.size(); }
  std::int8_t operator[](std::size_t i) const { return spins_[i]; }
  void set(std::size_t i, std::int8_t value) { spins_[i] = value; }
  void flip(std::size_t i) { spins_[i] = static_cast<std::int8_t>(-spins_[i]); }
  std::span<const std::int8_t> spins() const { return spins_; }
  std::int8_t* data() { return spins_.data(); }

  /// '+'/'-' per site.
  std::string to_string() const;
  static SpinConfig from_string(std::string_view text);

  /// Lexicographic with -1 ordered before +1.
  auto operator<=>(const SpinConfig&) const = default;
  bool operator==(const SpinConfig&) const = default;

 private:
  std::vector<std::int8_t> spins_;
};

enum class FieldMode { Gradient, ExactDifference };

std::string to_string(FieldMode mode);
FieldMode field_mode_from_string(std::string_view name);

/// Domain-wall encoded chain
///   H_0 = lambda * sum_i h_i s_i - J sum_i s_i s_{i+1} + h (s_1 - s_N).
/// Immutable after construction.
class ChainInstance {
 public:
  ChainInstance(std::vector<double> fields, double coupling_j, double boundary_h, double lambda,
                Grid grid, FieldMode mode);

  int n_spins() const { return n_; }
  /// Raw problem fields h_i before the lambda weight.
  std::span<const double> fields() const { return fields_; }
  double coupling_j() const { return coupling_j_; }
  double boundary_h() const { return boundary_h_; }
  double lambda() const { return lambda_; }
  const Grid& grid() const { return grid_; }
  FieldMode field_mode() const { return mode_; }

  /// lambda * h_i; what actually enters the energy from the problem term.
  double problem_field(int site) const { return lambda_ * fields_[static_cast<std::size_t>(site)]; }

  /// Total longitudinal field on a site: lambda * h_i plus the boundary
  /// penalty (+h on the first site, -h on the last).
  double local_field(int site) const { return local_[static_cast<std::size_t>(site)]; }
  std::span<const double> local_fields() const { return local_; }

 private:
  int n_;
  std::vector<double> fields_;
  double coupling_j_;
  double boundary_h_;
  double lambda_;
  Grid grid_;
  FieldMode mode_;
  std::vector<double> local_;
};

ChainInstance build_chain(const Potential& potential, int n_spins, double lambda,
                          double coupling_j = 1.0, double boundary_h = 2.0,
                          FieldMode mode = FieldMode::Gradient);
ChainInstance build_chain(const PotentialSpec& spec, int n_spins, double lambda,
                          double coupling_j = 1.0, double boundary_h = 2.0,
                          FieldMode mode = FieldMode::Gradient);

double classical_energy(const ChainInstance& chain, const SpinConfig& config);
int kink_count(const SpinConfig& config);

/// Bond index j (1-based) when config is exactly down^j up^(N-j), 1 <= j <= N-1.
std::optional<int> domain_wall_bond(const SpinConfig& config);

std::optional<double> decode(const ChainInstance& chain, const SpinConfig& config);
SpinConfig encode(const ChainInstance& chain, double x);

/// down^j up^(N-j)
SpinConfig single_kink_config(int n_spins, int bond);

/// Chain JSON: {n, lambda, J, h, fields[], x_min, x_max, field_mode}.
std::string chain_to_json(const ChainInstance& chain);
ChainInstance chain_from_json(std::string_view text);

}  // namespace dwqa
