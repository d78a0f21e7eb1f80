#include "dwqa/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace dwqa {

SpinConfig::SpinConfig(std::size_t n, std::int8_t fill) : spins_(n, fill) {}

SpinConfig::SpinConfig(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (auto s : spins_) {
    if (s != 1 && s != -1) throw std::invalid_argument("SpinConfig: entries must be +1 or -1");
  }
}

SpinConfig::SpinConfig(std::initializer_list<int> spins) {
  spins_.reserve(spins.size());
  for (int s : spins) {
    if (s != 1 && s != -1) throw std::invalid_argument("SpinConfig: entries must be +1 or -1");
    spins_.push_back(static_cast<std::int8_t>(s));
  }
}

std::string SpinConfig::to_string() const {
  std::string out(spins_.size(), '-');
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] > 0) out[i] = '+';
  }
  return out;
}

SpinConfig SpinConfig::from_string(std::string_view text) {
  std::vector<std::int8_t> spins;
  spins.reserve(text.size());
  for (char c : text) {
    if (c == '+') {
      spins.push_back(1);
    } else if (c == '-') {
      spins.push_back(-1);
    } else {
      throw std::invalid_argument("SpinConfig: unexpected character in spin string");
    }
  }
  return SpinConfig(std::move(spins));
}

std::string to_string(FieldMode mode) {
  return mode == FieldMode::Gradient ? "gradient" : "exact_difference";
}

FieldMode field_mode_from_string(std::string_view name) {
  if (name == "gradient") return FieldMode::Gradient;
  if (name == "exact_difference") return FieldMode::ExactDifference;
  throw std::invalid_argument("unknown field_mode '" + std::string(name) +
                              "' (expected gradient|exact_difference)");
}

ChainInstance::ChainInstance(std::vector<double> fields, double coupling_j, double boundary_h,
                             double lambda, Grid grid, FieldMode mode)
    : n_(static_cast<int>(fields.size())),
      fields_(std::move(fields)),
      coupling_j_(coupling_j),
      boundary_h_(boundary_h),
      lambda_(lambda),
      grid_(std::move(grid)),
      mode_(mode) {
  if (n_ < 2) throw std::invalid_argument("chain: need at least 2 spins");
  if (!(coupling_j_ > 0.0)) throw std::invalid_argument("chain: coupling J must be > 0");
  if (!(boundary_h_ > coupling_j_)) {
    throw std::invalid_argument("chain: boundary field h must exceed coupling J");
  }
  if (!(lambda_ >= 0.0)) throw std::invalid_argument("chain: lambda must be >= 0");
  if (grid_.n_spins != n_) throw std::invalid_argument("chain: grid size does not match fields");

  local_.resize(fields_.size());
  for (int i = 0; i < n_; ++i) local_[static_cast<std::size_t>(i)] = problem_field(i);
  local_.front() += boundary_h_;
  local_.back() -= boundary_h_;
}

ChainInstance build_chain(const Potential& potential, int n_spins, double lambda,
                          double coupling_j, double boundary_h, FieldMode mode) {
  if (!(boundary_h > coupling_j)) {
    throw std::invalid_argument("build_chain: boundary_h must exceed coupling_j");
  }
  if (!(lambda >= 0.0)) throw std::invalid_argument("build_chain: lambda must be >= 0");
  Grid grid = make_grid(potential.x_min, potential.x_max, n_spins);

  const int n = n_spins;
  std::vector<double> h(static_cast<std::size_t>(n));
  h.front() = -potential.value(grid.x(1)) / 2.0;
  h.back() = potential.value(grid.x(n - 1)) / 2.0;
  for (int i = 2; i <= n - 1; ++i) {
    double hi = 0.0;
    if (mode == FieldMode::Gradient) {
      hi = -(grid.delta_x / 2.0) * potential.gradient(grid.x(i));
    } else {
      hi = -(potential.value(grid.x(i)) - potential.value(grid.x(i - 1))) / 2.0;
    }
    h[static_cast<std::size_t>(i - 1)] = hi;
  }
  return ChainInstance(std::move(h), coupling_j, boundary_h, lambda, std::move(grid), mode);
}

ChainInstance build_chain(const PotentialSpec& spec, int n_spins, double lambda,
                          double coupling_j, double boundary_h, FieldMode mode) {
  return build_chain(Potential::rastrigin(spec), n_spins, lambda, coupling_j, boundary_h, mode);
}

namespace {

void require_length(const ChainInstance& chain, const SpinConfig& config) {
  if (static_cast<int>(config.size()) != chain.n_spins()) {
    throw std::invalid_argument("config length " + std::to_string(config.size()) +
                                " does not match chain length " +
                                std::to_string(chain.n_spins()));
  }
}

}  // namespace

double classical_energy(const ChainInstance& chain, const SpinConfig& config) {
  require_length(chain, config);
  const auto s = config.spins();
  const auto g = chain.local_fields();
  double field = 0.0;
  double bonds = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) field += g[i] * s[i];
  for (std::size_t i = 0; i + 1 < s.size(); ++i) bonds += s[i] * s[i + 1];
  return field - chain.coupling_j() * bonds;
}

int kink_count(const SpinConfig& config) {
  int kinks = 0;
  for (std::size_t i = 0; i + 1 < config.size(); ++i) {
    if (config[i] != config[i + 1]) ++kinks;
  }
  return kinks;
}

std::optional<int> domain_wall_bond(const SpinConfig& config) {
  const std::size_t n = config.size();
  if (n < 2 || config[0] != -1 || config[n - 1] != 1) return std::nullopt;
  std::size_t j = 0;
  while (j < n && config[j] == -1) ++j;
  for (std::size_t i = j; i < n; ++i) {
    if (config[i] != 1) return std::nullopt;
  }
  return static_cast<int>(j);
}

std::optional<double> decode(const ChainInstance& chain, const SpinConfig& config) {
  require_length(chain, config);
  if (auto j = domain_wall_bond(config)) return chain.grid().x(*j);
  return std::nullopt;
}

SpinConfig single_kink_config(int n_spins, int bond) {
  if (bond < 1 || bond > n_spins - 1) {
    throw std::invalid_argument("single_kink_config: bond out of range");
  }
  SpinConfig config(static_cast<std::size_t>(n_spins), 1);
  for (int i = 0; i < bond; ++i) config.set(static_cast<std::size_t>(i), -1);
  return config;
}

SpinConfig encode(const ChainInstance& chain, double x) {
  const Grid& grid = chain.grid();
  const double x_min = grid.x(1);
  const double x_max = x_min + grid.delta_x * (chain.n_spins() - 1);
  if (!(x >= x_min && x <= x_max)) {
    throw std::invalid_argument("encode: x outside the search box");
  }
  int j = static_cast<int>(std::lround((x - x_min) / grid.delta_x)) + 1;
  j = std::clamp(j, 1, chain.n_spins() - 1);
  return single_kink_config(chain.n_spins(), j);
}

std::string chain_to_json(const ChainInstance& chain) {
  nlohmann::json j;
  j["n"] = chain.n_spins();
  j["lambda"] = chain.lambda();
  j["J"] = chain.coupling_j();
  j["h"] = chain.boundary_h();
  j["fields"] = std::vector<double>(chain.fields().begin(), chain.fields().end());
  j["x_min"] = chain.grid().x(1);
  j["x_max"] = chain.grid().x(1) + chain.grid().delta_x * (chain.n_spins() - 1);
  j["field_mode"] = to_string(chain.field_mode());
  return j.dump(2);
}

ChainInstance chain_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  for (const char* key : {"n", "lambda", "J", "h", "fields", "x_min", "x_max", "field_mode"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("chain json: missing key '") + key + "'");
  }
  const int n = j.at("n").get<int>();
  auto fields = j.at("fields").get<std::vector<double>>();
  if (static_cast<int>(fields.size()) != n) {
    throw std::invalid_argument("chain json: fields length does not match n");
  }
  Grid grid = make_grid(j.at("x_min").get<double>(), j.at("x_max").get<double>(), n);
  return ChainInstance(std::move(fields), j.at("J").get<double>(), j.at("h").get<double>(),
                       j.at("lambda").get<double>(), std::move(grid),
                       field_mode_from_string(j.at("field_mode").get<std::string>()));
}

}  // namespace dwqa
