// dwqa command-line driver.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dwqa/analysis.hpp"
#include "dwqa/exact.hpp"
#include "dwqa/experiment.hpp"
#include "dwqa/io.hpp"
#include "dwqa/recipes.hpp"
#include "json.hpp"

using namespace dwqa;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

struct Options {
  std::string config;
  std::string chain;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string protocol;
  std::string algo;
  std::optional<double> x;
  // fit
  std::string curve, x_col = "t_a", y_col = "rho", model = "power_law", y_se_col;
  std::optional<double> lo, hi, max_x;
  bool weighted = false;
  // efftemp
  std::optional<double> energy;
  std::string samples;
  double t_phys = 1.0;
  double b_slope = 2.0;
  // reproduce
  std::string recipe;
  bool quick = false;
};

ExperimentConfig load_config(const Options& o, bool require_sweep = true) {
  if (o.config.empty()) throw ConfigError("--config is required");
  std::string text;
  try {
    text = read_text_file(o.config);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  auto c = ExperimentConfig::from_json(text, require_sweep);
  if (o.seed) c.runs.seed = *o.seed;
  return c;
}

ChainInstance load_chain(const Options& o) {
  if (!o.chain.empty()) {
    try {
      return chain_from_json(read_text_file(o.chain));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad chain file: ") + e.what());
    }
  }
  return build_chain(load_config(o, false));
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    write_text_file(o.out, text);
}

int cmd_encode(const Options& o) {
  const auto chain = build_chain(load_config(o, false));
  if (o.x) {
    const auto cfg = encode(chain, *o.x);
    json j{{"x", *o.x}, {"bond", *domain_wall_bond(cfg)}, {"decoded_x", *decode(chain, cfg)},
           {"spins", cfg.to_string()}};
    std::cout << j.dump(2) << "\n";
  }
  emit(o, chain_to_json(chain) + "\n");
  return kExitOk;
}

int cmd_exact(const Options& o) {
  const auto chain = load_chain(o);
  const auto s = spectrum_summary(chain);
  json j{{"e0", s.e0}, {"e1", s.e1}, {"n_enc", s.n_enc}, {"degeneracy", s.ground_set.size()}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_anneal(const Options& o) {
  auto c = load_config(o, false);
  c.protocol.kind = protocol_from_string(o.protocol);
  c.sweep.clear();
  c.validate(false);
  const auto chain = build_chain(c);
  std::vector<RunBatch> runs;
  for (int r = 0; r < c.runs.n_runs; ++r) {
    const auto seed = point_seed(c.runs.seed, 0, static_cast<std::size_t>(r));
    switch (c.protocol.kind) {
      case ProtocolKind::SA: runs.push_back(sa_run(chain, c.protocol.sa, c.runs.n_reads, seed)); break;
      case ProtocolKind::SQA: runs.push_back(sqa_run(chain, c.protocol.sqa, seed)); break;
      case ProtocolKind::SVMC: runs.push_back(svmc_run(chain, c.protocol.svmc, c.runs.n_reads, seed)); break;
      default: throw ConfigError("anneal supports sa, sqa and svmc", {"protocol"});
    }
  }
  emit(o, samples_csv(runs, chain));
  return kExitOk;
}

int cmd_tebd(const Options& o) {
  auto c = load_config(o);
  if (c.protocol.kind != ProtocolKind::TEBD) throw ConfigError("protocol.kind must be tebd", {"protocol.kind"});
  const auto res = run_experiment(c);
  std::vector<TebdCurveRow> rows;
  for (const auto& p : res.points)
    rows.push_back({p.record.t_a_or_mcs, p.record.rho, p.record.p_const, p.record.e_res,
                    p.record.p_gs, p.truncation_error});
  emit(o, tebd_curve_csv(rows));
  for (const auto& p : res.points)
    if (p.error) std::cerr << "t_a=" << p.record.t_a_or_mcs << ": " << *p.error << "\n";
  return res.partial_failure() ? kExitPartial : kExitOk;
}

int cmd_classical(const Options& o) {
  auto c = load_config(o);
  if (c.protocol.kind != ProtocolKind::Classical) c.protocol.kind = ProtocolKind::Classical;
  const auto algo = algorithm_from_string(o.algo);
  BenchmarkOptions bo;
  bo.de_popsize = c.protocol.classical.de_popsize;
  bo.bh = c.protocol.classical.bh;
  bo.success_radius = c.protocol.classical.success_radius.value_or(
      (c.potential.x_max - c.potential.x_min) / (c.encoding.n - 1));
  std::vector<int> budgets;
  for (double v : c.sweep) budgets.push_back(static_cast<int>(std::llround(v)));
  std::string csv = "algorithm,t_max,n_init,p_gs,e_abs,mean_wall_time\n";
  for (const auto& r : benchmark_sweep(c.potential, algo, c.runs.n_reads, budgets, c.runs.seed, bo))
    csv += o.algo + "," + std::to_string(r.t_max) + "," + std::to_string(r.n_init) + "," +
           format_double(r.p_gs) + "," + format_double(r.e_abs) + "," + format_double(r.mean_wall_time) + "\n";
  emit(o, csv);
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const auto c = load_config(o);
  const auto res = run_experiment(c);
  const std::string dir = o.out.empty() ? c.output_dir : o.out;
  write_bundle(c, res, dir);
  for (const auto& p : res.points)
    if (p.error) std::cerr << "point " << p.record.t_a_or_mcs << " failed: " << *p.error << "\n";
  std::cout << dir << "\n";
  return res.partial_failure() ? kExitPartial : kExitOk;
}

bool has_column(const CsvTable& t, const std::string& name) {
  return std::find(t.header.begin(), t.header.end(), name) != t.header.end();
}

std::vector<double> column_expr(const CsvTable& t, const std::string& expr) {
  // tebd curves name the abscissa t_a, sweep bundles t_a_or_mcs
  if (expr == "t_a" && !has_column(t, "t_a")) return t.numeric_column("t_a_or_mcs");
  if (expr.rfind("1-", 0) == 0) {
    auto v = t.numeric_column(expr.substr(2));
    for (auto& x : v) x = 1.0 - x;
    return v;
  }
  return t.numeric_column(expr);
}

int cmd_fit(const Options& o) {
  CsvTable t;
  try {
    t = CsvTable::parse(read_text_file(o.curve));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::vector<double> x, y, se;
  std::vector<double> xs, ys, ses;
  try {
    xs = column_expr(t, o.x_col);
    ys = column_expr(t, o.y_col);
    if (o.weighted) ses = t.numeric_column(o.y_se_col.empty() ? o.y_col + "_se" : o.y_se_col);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::isnan(xs[i]) || std::isnan(ys[i])) continue;  // failed rows
    x.push_back(xs[i]);
    y.push_back(ys[i]);
    if (o.weighted) se.push_back(ses[i]);
  }
  FitOptions fo;
  if (o.weighted) fo.y_stderr = se;
  const FitWindow w{o.lo.value_or(-INFINITY), o.hi.value_or(INFINITY)};
  FitResult r;
  switch (fit_model_from_string(o.model)) {
    case FitModel::PowerLaw: r = power_law_fit(x, y, w, fo); break;
    case FitModel::Exponential: r = exponential_fit(x, y, w, fo); break;
    case FitModel::LogLogSlope: {
      const double max_x = o.max_x.value_or(INFINITY);
      r = loglog_slope(x, y, [&](double a, double) { return w.contains(a) && a < max_x; }, fo);
      break;
    }
  }
  std::cout << r.to_json() << "\n";
  return kExitOk;
}

int cmd_efftemp(const Options& o) {
  const auto chain = load_chain(o);
  double e = 0.0;
  if (o.energy) {
    e = *o.energy;
  } else if (!o.samples.empty()) {
    const auto energies = CsvTable::parse(read_text_file(o.samples)).numeric_column("energy");
    if (energies.empty()) throw ConfigError("samples file has no rows");
    for (double v : energies) e += v;
    e /= static_cast<double>(energies.size());
  } else {
    throw ConfigError("one of --energy or --samples is required");
  }
  const double t_eff = effective_temperature(chain, e);
  json j{{"mean_energy", e}, {"t_eff", t_eff}, {"t_phys", o.t_phys}};
  try {
    j["s_star"] = freeze_out(t_eff, Schedule::linear(o.b_slope), o.t_phys);
  } catch (const std::exception& ex) {
    j["s_star"] = nullptr;
    j["s_star_note"] = ex.what();
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_reproduce(const Options& o) {
  const std::string dir = o.out.empty() ? "reproduce_" + o.recipe : o.out;
  RecipeOutput r;
  try {
    r = reproduce(o.recipe, dir, o.quick, default_workers());
  } catch (const UnknownRecipe& e) {
    throw ConfigError(e.what());
  }
  std::cout << r.results_json;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-wall encoded annealing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", code_version());
  Options o;

  auto add_seed = [&](CLI::App* s) {
    s->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; },
                                          "Override the config seed");
  };

  auto* encode_cmd = app.add_subcommand("encode", "Build the encoded chain and write chain JSON");
  encode_cmd->add_option("--config", o.config, "Experiment config JSON")->required();
  encode_cmd->add_option("--out", o.out, "Output chain JSON (stdout when omitted)");
  encode_cmd->add_option_function<double>("--x", [&](const double& v) { o.x = v; }, "Also encode this x");

  auto* exact_cmd = app.add_subcommand("exact", "Exact spectrum summary {e0, e1, n_enc, degeneracy}");
  auto* ex_grp = exact_cmd->add_option_group("source");
  ex_grp->add_option("--chain", o.chain, "Chain JSON");
  ex_grp->add_option("--config", o.config, "Experiment config JSON");
  ex_grp->require_option(1);

  auto* anneal_cmd = app.add_subcommand("anneal", "Run a Monte Carlo protocol and write samples.csv");
  anneal_cmd->add_option("--protocol", o.protocol)->required()->check(CLI::IsMember({"sa", "sqa", "svmc"}));
  anneal_cmd->add_option("--config", o.config)->required();
  anneal_cmd->add_option("--out", o.out, "samples.csv (stdout when omitted)");
  add_seed(anneal_cmd);

  auto* tebd_cmd = app.add_subcommand("tebd", "Coherent annealing over the t_a sweep; writes curve.csv");
  tebd_cmd->add_option("--config", o.config)->required();
  tebd_cmd->add_option("--out", o.out, "curve.csv (stdout when omitted)");

  auto* cl_cmd = app.add_subcommand("classical", "Continuous optimizer benchmark over the t_max sweep");
  cl_cmd->add_option("--algo", o.algo)->required()->check(CLI::IsMember({"nm", "cgd", "bh", "de"}));
  cl_cmd->add_option("--config", o.config)->required();
  cl_cmd->add_option("--out", o.out, "table.csv (stdout when omitted)");
  add_seed(cl_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment config; writes curve.csv, summary.json, provenance.json");
  sweep_cmd->add_option("--config", o.config)->required();
  sweep_cmd->add_option("--out", o.out, "Output directory (config output.dir when omitted)");
  add_seed(sweep_cmd);

  auto* fit_cmd = app.add_subcommand("fit", "Fit a curve.csv column and print the FitResult JSON");
  fit_cmd->add_option("--curve", o.curve)->required();
  fit_cmd->add_option("--x", o.x_col, "Abscissa column; '1-<col>' is allowed")->capture_default_str();
  fit_cmd->add_option("--y", o.y_col, "Ordinate column; '1-<col>' is allowed")->capture_default_str();
  fit_cmd->add_option("--model", o.model)->check(CLI::IsMember({"power_law", "exponential", "loglog"}))->capture_default_str();
  fit_cmd->add_option_function<double>("--lo", [&](const double& v) { o.lo = v; });
  fit_cmd->add_option_function<double>("--hi", [&](const double& v) { o.hi = v; });
  fit_cmd->add_option_function<double>("--max-x", [&](const double& v) { o.max_x = v; }, "loglog: keep x < max-x");
  fit_cmd->add_flag("--weighted", o.weighted, "Weight points by their standard errors");
  fit_cmd->add_option("--y-se", o.y_se_col, "Stderr column (default <y>_se)");

  auto* eff_cmd = app.add_subcommand("efftemp", "Effective temperature and freeze-out point");
  auto* eff_src = eff_cmd->add_option_group("source");
  eff_src->add_option("--chain", o.chain);
  eff_src->add_option("--config", o.config);
  eff_src->require_option(1);
  auto* eff_e = eff_cmd->add_option_group("energy");
  eff_e->add_option_function<double>("--energy", [&](const double& v) { o.energy = v; });
  eff_e->add_option("--samples", o.samples, "samples.csv; the mean energy is used");
  eff_e->require_option(1);
  eff_cmd->add_option("--t-phys", o.t_phys)->capture_default_str();
  eff_cmd->add_option("--b-slope", o.b_slope, "B(s) = slope * s")->capture_default_str();

  auto* rep_cmd = app.add_subcommand("reproduce", "Run a bundled figure/table recipe");
  std::string ids;
  for (const auto& id : recipe_ids()) ids += (ids.empty() ? "" : ", ") + id;
  rep_cmd->add_option("recipe", o.recipe, "One of: " + ids)->required();
  rep_cmd->add_option("--out", o.out, "Output directory");
  rep_cmd->add_flag("--quick", o.quick, "Smoke-test scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*encode_cmd) return cmd_encode(o);
    if (*exact_cmd) return cmd_exact(o);
    if (*anneal_cmd) return cmd_anneal(o);
    if (*tebd_cmd) return cmd_tebd(o);
    if (*cl_cmd) return cmd_classical(o);
    if (*sweep_cmd) return cmd_sweep(o);
    if (*fit_cmd) return cmd_fit(o);
    if (*eff_cmd) return cmd_efftemp(o);
    if (*rep_cmd) return cmd_reproduce(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
