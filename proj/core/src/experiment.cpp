#include "dwqa/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "dwqa/exact.hpp"
#include "dwqa/io.hpp"
#include "dwqa/rng.hpp"
#include "json.hpp"

#ifndef DWQA_VERSION
#define DWQA_VERSION "0.0.0"
#endif

namespace dwqa {

using json = nlohmann::ordered_json;

namespace {

// Reads typed fields from one config block and records every offending key.
class BlockReader {
 public:
  BlockReader(const json& root, const std::string& name, std::vector<std::string>& bad)
      : name_(name), bad_(bad) {
    if (!root.contains(name)) return;
    const auto& b = root.at(name);
    if (!b.is_object()) {
      bad_.push_back(name);
      return;
    }
    block_ = &b;
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!block_ || !block_->contains(key)) return;
    try {
      const auto& v = block_->at(key);
      if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("type");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() && !v.is_number_unsigned()) throw std::invalid_argument("type");
      } else {
        if (!v.is_number()) throw std::invalid_argument("type");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      bad_.push_back(name_ + "." + key);
    }
  }

  bool has(const std::string& key) const { return block_ && block_->contains(key); }
  void mark(const std::string& key) { seen_.insert(key); }
  void fail(const std::string& key) { bad_.push_back(name_ + "." + key); }

  void reject_unknown() {
    if (!block_) return;
    for (const auto& [k, v] : block_->items())
      if (!seen_.count(k)) bad_.push_back(name_ + "." + k);
  }

 private:
  std::string name_;
  std::vector<std::string>& bad_;
  const json* block_ = nullptr;
  std::set<std::string> seen_;
};

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["potential"] = {{"k", c.potential.k},
                    {"h0", c.potential.h0},
                    {"w0", c.potential.w0},
                    {"x_min", c.potential.x_min},
                    {"x_max", c.potential.x_max}};
  j["encoding"] = {{"n", c.encoding.n},
                   {"lambda", c.encoding.lambda},
                   {"J", c.encoding.coupling_j},
                   {"h", c.encoding.boundary_h},
                   {"field_mode", to_string(c.encoding.field_mode)}};
  json p;
  p["kind"] = to_string(c.protocol.kind);
  switch (c.protocol.kind) {
    case ProtocolKind::SA:
      p["t_mcs"] = c.protocol.sa.t_mcs;
      p["t0"] = c.protocol.sa.t0;
      p["t1"] = c.protocol.sa.t1;
      break;
    case ProtocolKind::SQA:
      p["t_mcs"] = c.protocol.sqa.t_mcs;
      p["trotter_m"] = c.protocol.sqa.trotter_m;
      p["beta"] = c.protocol.sqa.beta;
      p["a_floor"] = c.protocol.sqa.a_floor;
      break;
    case ProtocolKind::SVMC:
      p["t_mcs"] = c.protocol.svmc.t_mcs;
      p["temperature"] = c.protocol.svmc.temperature;
      p["update_rule"] = to_string(c.protocol.svmc.update_rule);
      break;
    case ProtocolKind::TEBD:
      p["t_a"] = c.protocol.tebd.t_a;
      p["dt"] = c.protocol.tebd.dt;
      p["chi_max"] = c.protocol.tebd.chi_max;
      p["svd_cutoff"] = c.protocol.tebd.svd_cutoff;
      break;
    case ProtocolKind::Classical: {
      const auto& cl = c.protocol.classical;
      p["algorithm"] = to_string(cl.algorithm);
      p["de_popsize"] = cl.de_popsize;
      p["bh_temperature"] = cl.bh.temperature;
      p["bh_a"] = cl.bh.a;
      p["bh_b"] = cl.bh.b;
      p["bh_local_t_max"] = cl.bh.local_t_max;
      if (cl.success_radius) p["success_radius"] = *cl.success_radius;
      break;
    }
  }
  j["protocol"] = p;
  j["sweep"] = c.sweep;
  j["runs"] = {{"n_runs", c.runs.n_runs},
               {"n_reads", c.runs.n_reads},
               {"seed", c.runs.seed},
               {"n_resamples", c.runs.n_resamples}};
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

double success_radius(const ExperimentConfig& c) {
  if (c.protocol.classical.success_radius) return *c.protocol.classical.success_radius;
  return (c.potential.x_max - c.potential.x_min) / (c.encoding.n - 1);
}

// Sweep value as an integer budget (t_MCS or t_max).
int as_budget(double v) { return static_cast<int>(std::llround(v)); }

PointResult run_point(const ExperimentConfig& c, const ChainInstance& chain,
                      const GroundState& ground, const Potential& pot, std::size_t index) {
  using Clock = std::chrono::steady_clock;
  const double value = c.sweep[index];
  const auto& pc = c.protocol;
  const std::string tag = to_string(pc.kind);
  const auto stats_seed = derive_seed(c.runs.seed, {0xB007, index});
  PointResult out;
  out.record.protocol = tag;
  out.record.t_a_or_mcs = value;

  if (pc.kind == ProtocolKind::TEBD) {
    TebdParams p = pc.tebd;
    p.t_a = value;
    const auto t0 = Clock::now();
    const auto psi = tebd_anneal(chain, p);
    out.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    const auto ob = measure_observables(psi, chain, ground);
    out.record.rho = ob.rho;
    out.record.p_const = ob.p_const;
    out.record.e_res = ob.e_res;
    out.record.p_gs = ob.p_gs;
    out.truncation_error = ob.truncation_error;
    out.max_bond = ob.max_bond;
    return out;
  }

  if (pc.kind == ProtocolKind::Classical) {
    const auto& cl = pc.classical;
    const int t_max = as_budget(value);
    const double radius = success_radius(c);
    std::vector<double> hits_per_run, f_all;
    double wall = 0.0;
    for (int r = 0; r < c.runs.n_runs; ++r) {
      double hits = 0.0;
      for (int i = 0; i < c.runs.n_reads; ++i) {
        const auto seed = derive_seed(point_seed(c.runs.seed, index, static_cast<std::size_t>(r)),
                                      {static_cast<std::uint64_t>(i)});
        Rng init(derive_seed(seed, {0}));
        const double x0 = init.uniform(c.potential.x_min, c.potential.x_max);
        OptRun run;
        switch (cl.algorithm) {
          case Algorithm::NelderMead:
            run = nelder_mead(pot.value, x0, t_max, kStepTolerance, radius);
            break;
          case Algorithm::ConjugateGradient:
            run = conjugate_gradient(pot.value, pot.gradient, x0, t_max, radius);
            break;
          case Algorithm::BasinHopping: {
            BhParams bh = cl.bh;
            bh.t_max = t_max;
            run = basin_hopping(pot.value, pot.gradient, x0, bh, derive_seed(seed, {1}), radius);
            break;
          }
          case Algorithm::DifferentialEvolution: {
            DeParams de;
            de.popsize = cl.de_popsize;
            de.g_max = t_max;
            run = differential_evolution(pot.value, c.potential.x_min, c.potential.x_max, de,
                                         derive_seed(seed, {1}), radius);
            break;
          }
        }
        wall += run.wall_time;
        hits += run.success ? 1.0 : 0.0;
        f_all.push_back(run.f_final);
      }
      hits_per_run.push_back(hits / c.runs.n_reads);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.wall_time = wall;
    out.record.rho = out.record.rho_se = nan;
    out.record.p_const = out.record.p_const_se = nan;
    out.record.e_res = out.record.e_res_se = nan;
    out.record.p_gs = mean_of(hits_per_run);
    out.record.p_gs_se = bootstrap_stderr(hits_per_run, c.runs.n_resamples, derive_seed(stats_seed, {3}));
    out.record.e_abs = std::abs(mean_of(f_all));
    out.record.e_abs_se = bootstrap_stderr(f_all, c.runs.n_resamples, derive_seed(stats_seed, {4}));
    return out;
  }

  std::vector<RunBatch> runs;
  runs.reserve(static_cast<std::size_t>(c.runs.n_runs));
  const auto t0 = Clock::now();
  for (int r = 0; r < c.runs.n_runs; ++r) {
    const auto seed = point_seed(c.runs.seed, index, static_cast<std::size_t>(r));
    switch (pc.kind) {
      case ProtocolKind::SA: {
        SaParams p = pc.sa;
        p.t_mcs = as_budget(value);
        runs.push_back(sa_run(chain, p, c.runs.n_reads, seed));
        break;
      }
      case ProtocolKind::SQA: {
        SqaParams p = pc.sqa;
        p.t_mcs = as_budget(value);
        runs.push_back(sqa_run(chain, p, seed));
        break;
      }
      case ProtocolKind::SVMC: {
        SvmcParams p = pc.svmc;
        p.t_mcs = as_budget(value);
        runs.push_back(svmc_run(chain, p, c.runs.n_reads, seed));
        break;
      }
      default: break;
    }
  }
  out.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  out.record = summarize_runs(tag, value, runs, chain, ground, &pot, c.runs.n_resamples, stats_seed);
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::SA: return "sa";
    case ProtocolKind::SQA: return "sqa";
    case ProtocolKind::SVMC: return "svmc";
    case ProtocolKind::TEBD: return "tebd";
    case ProtocolKind::Classical: return "classical";
  }
  return "";
}

ProtocolKind protocol_from_string(const std::string& name) {
  if (name == "sa") return ProtocolKind::SA;
  if (name == "sqa") return ProtocolKind::SQA;
  if (name == "svmc") return ProtocolKind::SVMC;
  if (name == "tebd") return ProtocolKind::TEBD;
  if (name == "classical") return ProtocolKind::Classical;
  throw std::invalid_argument("unknown protocol: " + name);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text, bool require_sweep) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  std::vector<std::string> bad;
  ExperimentConfig c;
  static const std::set<std::string> blocks = {"potential", "encoding", "protocol",
                                               "sweep",     "runs",     "output"};
  for (const auto& [k, v] : root.items())
    if (!blocks.count(k)) bad.push_back(k);

  BlockReader pot(root, "potential", bad);
  pot.get("k", c.potential.k);
  pot.get("h0", c.potential.h0);
  pot.get("w0", c.potential.w0);
  pot.get("x_min", c.potential.x_min);
  pot.get("x_max", c.potential.x_max);
  pot.reject_unknown();

  BlockReader enc(root, "encoding", bad);
  enc.get("n", c.encoding.n);
  enc.get("lambda", c.encoding.lambda);
  enc.get("J", c.encoding.coupling_j);
  enc.get("h", c.encoding.boundary_h);
  std::string mode = to_string(c.encoding.field_mode);
  enc.get("field_mode", mode);
  try {
    c.encoding.field_mode = field_mode_from_string(mode);
  } catch (const std::exception&) {
    enc.fail("field_mode");
  }
  enc.reject_unknown();

  BlockReader pr(root, "protocol", bad);
  std::string kind = "sa";
  pr.get("kind", kind);
  try {
    c.protocol.kind = protocol_from_string(kind);
  } catch (const std::exception&) {
    pr.fail("kind");
  }
  switch (c.protocol.kind) {
    case ProtocolKind::SA:
      pr.get("t_mcs", c.protocol.sa.t_mcs);
      pr.get("t0", c.protocol.sa.t0);
      pr.get("t1", c.protocol.sa.t1);
      break;
    case ProtocolKind::SQA:
      pr.get("t_mcs", c.protocol.sqa.t_mcs);
      pr.get("trotter_m", c.protocol.sqa.trotter_m);
      pr.get("beta", c.protocol.sqa.beta);
      pr.get("a_floor", c.protocol.sqa.a_floor);
      break;
    case ProtocolKind::SVMC: {
      pr.get("t_mcs", c.protocol.svmc.t_mcs);
      pr.get("temperature", c.protocol.svmc.temperature);
      std::string rule = to_string(c.protocol.svmc.update_rule);
      pr.get("update_rule", rule);
      try {
        c.protocol.svmc.update_rule = svmc_update_from_string(rule);
      } catch (const std::exception&) {
        pr.fail("update_rule");
      }
      break;
    }
    case ProtocolKind::TEBD:
      pr.get("t_a", c.protocol.tebd.t_a);
      pr.get("dt", c.protocol.tebd.dt);
      pr.get("chi_max", c.protocol.tebd.chi_max);
      pr.get("svd_cutoff", c.protocol.tebd.svd_cutoff);
      break;
    case ProtocolKind::Classical: {
      auto& cl = c.protocol.classical;
      std::string algo = to_string(cl.algorithm);
      pr.get("algorithm", algo);
      try {
        cl.algorithm = algorithm_from_string(algo);
      } catch (const std::exception&) {
        pr.fail("algorithm");
      }
      pr.get("de_popsize", cl.de_popsize);
      pr.get("bh_temperature", cl.bh.temperature);
      pr.get("bh_a", cl.bh.a);
      pr.get("bh_b", cl.bh.b);
      pr.get("bh_local_t_max", cl.bh.local_t_max);
      if (pr.has("success_radius")) {
        double r = 0.0;
        pr.get("success_radius", r);
        cl.success_radius = r;
      } else {
        pr.mark("success_radius");
      }
      break;
    }
  }
  pr.reject_unknown();

  if (root.contains("sweep")) {
    const auto& s = root.at("sweep");
    if (!s.is_array()) {
      bad.push_back("sweep");
    } else {
      for (const auto& v : s) {
        if (!v.is_number()) {
          bad.push_back("sweep");
          break;
        }
        c.sweep.push_back(v.get<double>());
      }
    }
  }

  BlockReader runs(root, "runs", bad);
  runs.get("n_runs", c.runs.n_runs);
  runs.get("n_reads", c.runs.n_reads);
  runs.get("seed", c.runs.seed);
  runs.get("n_resamples", c.runs.n_resamples);
  runs.reject_unknown();

  BlockReader out(root, "output", bad);
  out.get("dir", c.output_dir);
  out.reject_unknown();

  if (!bad.empty()) {
    std::string msg = "invalid config keys:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
  c.validate(require_sweep);
  return c;
}

std::string ExperimentConfig::to_json() const { return config_to_json(*this).dump(2) + "\n"; }

void ExperimentConfig::validate(bool require_sweep) const {
  std::vector<std::string> bad;
  auto check = [&](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const std::exception&) {
      bad.push_back(key);
    }
  };
  check("potential", [&] { potential.validate(); });
  check("encoding", [&] {
    if (encoding.n < 3 || !(encoding.lambda >= 0.0) || !(encoding.coupling_j > 0.0) ||
        !(encoding.boundary_h > encoding.coupling_j))
      throw std::invalid_argument("encoding");
  });
  if (require_sweep && sweep.empty()) bad.push_back("sweep");
  for (double v : sweep)
    if (!std::isfinite(v) || v <= 0.0) {
      bad.push_back("sweep");
      break;
    }
  // Each sweep value is substituted into the protocol before validation;
  // without a sweep the protocol block is checked as written.
  check("protocol", [&] {
    auto one = [&](std::optional<double> v) {
      switch (protocol.kind) {
        case ProtocolKind::SA: {
          auto p = protocol.sa;
          if (v) p.t_mcs = as_budget(*v);
          p.validate();
          break;
        }
        case ProtocolKind::SQA: {
          auto p = protocol.sqa;
          if (v) p.t_mcs = as_budget(*v);
          p.validate();
          break;
        }
        case ProtocolKind::SVMC: {
          auto p = protocol.svmc;
          if (v) p.t_mcs = as_budget(*v);
          p.validate();
          break;
        }
        case ProtocolKind::TEBD: {
          auto p = protocol.tebd;
          if (v) p.t_a = *v;
          p.validate();
          break;
        }
        case ProtocolKind::Classical: {
          const int budget = v ? as_budget(*v) : 1;
          if (budget < 1) throw std::invalid_argument("t_max");
          auto bh = protocol.classical.bh;
          bh.t_max = budget;
          bh.validate();
          DeParams de;
          de.popsize = protocol.classical.de_popsize;
          de.g_max = budget;
          de.validate();
          break;
        }
      }
    };
    if (sweep.empty()) one(std::nullopt);
    for (double v : sweep) one(v);
  });
  if (runs.n_runs < 1) bad.push_back("runs.n_runs");
  if (runs.n_reads < 1) bad.push_back("runs.n_reads");
  if (runs.n_resamples < 100) bad.push_back("runs.n_resamples");
  if (output_dir.empty()) bad.push_back("output.dir");
  if (!bad.empty()) {
    std::string msg = "invalid config values:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
}

ChainInstance build_chain(const ExperimentConfig& c) {
  return build_chain(c.potential, c.encoding.n, c.encoding.lambda, c.encoding.coupling_j,
                     c.encoding.boundary_h, c.encoding.field_mode);
}

std::uint64_t point_seed(std::uint64_t base, std::size_t sweep_index, std::size_t run_index) {
  return derive_seed(base, {sweep_index, run_index});
}

bool ExperimentResult::partial_failure() const {
  for (const auto& p : points)
    if (p.error) return true;
  return false;
}

int default_workers() {
  if (const char* env = std::getenv("DWQA_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
  config.validate();
  const auto chain = build_chain(config);
  const auto pot = Potential::rastrigin(config.potential);
  ExperimentResult result;
  GroundState ground;
  if (config.protocol.kind != ProtocolKind::Classical) {
    ground = ground_state_dp(chain);
    result.e0 = ground.e0;
    result.degeneracy = ground.ground_set.size();
  }
  const std::size_t n = config.sweep.size();
  result.points.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        result.points[i] = run_point(config, chain, ground, pot, i);
      } catch (const std::exception& e) {
        PointResult failed;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        failed.record.protocol = to_string(config.protocol.kind);
        failed.record.t_a_or_mcs = config.sweep[i];
        failed.record.rho = failed.record.rho_se = nan;
        failed.record.p_const = failed.record.p_const_se = nan;
        failed.record.e_res = failed.record.e_res_se = nan;
        failed.record.p_gs = failed.record.p_gs_se = nan;
        failed.error = e.what();
        result.points[i] = std::move(failed);
      }
    }
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int k = 1; k < w; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

std::string curve_csv(const ExperimentResult& result) {
  std::string out = observable_csv_header(true) + ",truncation_error,status\n";
  for (const auto& p : result.points) {
    out += observable_csv_row(p.record, true);
    out += ',';
    out += format_double(p.truncation_error);
    out += ',';
    if (p.error) {
      std::string msg = *p.error;
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ' ';
      out += "error: " + msg;
    } else {
      out += "ok";
    }
    out += '\n';
  }
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

std::string code_version() { return DWQA_VERSION; }

void write_bundle(const ExperimentConfig& config, const ExperimentResult& result,
                  const std::filesystem::path& dir) {
  write_text_file(dir / "curve.csv", curve_csv(result));

  json summary;
  summary["protocol"] = to_string(config.protocol.kind);
  summary["e0"] = result.e0;
  summary["degeneracy"] = result.degeneracy;
  json pts = json::array();
  for (const auto& p : result.points) {
    json jp;
    jp["t_a_or_mcs"] = p.record.t_a_or_mcs;
    jp["wall_time_s"] = p.wall_time;
    if (config.protocol.kind == ProtocolKind::TEBD) jp["max_bond"] = p.max_bond;
    jp["status"] = p.error ? "error" : "ok";
    if (p.error) jp["error"] = *p.error;
    pts.push_back(jp);
  }
  summary["points"] = pts;
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");

  json prov;
  prov["code_version"] = code_version();
  prov["config_hash"] = config_hash(config);
  prov["config"] = config_to_json(config);
  json seeds = json::array();
  for (std::size_t i = 0; i < config.sweep.size(); ++i) {
    json row;
    row["sweep_index"] = i;
    row["value"] = config.sweep[i];
    json rs = json::array();
    if (config.protocol.kind != ProtocolKind::TEBD)
      for (int r = 0; r < config.runs.n_runs; ++r)
        rs.push_back(point_seed(config.runs.seed, i, static_cast<std::size_t>(r)));
    row["run_seeds"] = rs;
    row["stats_seed"] = derive_seed(config.runs.seed, {0xB007, i});
    seeds.push_back(row);
  }
  prov["seeds"] = seeds;
  prov["seed_derivation"] =
      "run seed = derive_seed(seed, {sweep_index, run_index}); splitmix64 chain over the path";
  write_text_file(dir / "provenance.json", prov.dump(2) + "\n");
}

}  // namespace dwqa
