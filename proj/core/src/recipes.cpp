#include "dwqa/recipes.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "dwqa/analysis.hpp"
#include "dwqa/continuous_opt.hpp"
#include "dwqa/exact.hpp"
#include "dwqa/experiment.hpp"
#include "dwqa/io.hpp"
#include "json.hpp"

namespace dwqa {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

UnknownRecipe::UnknownRecipe(const std::string& id)
    : std::invalid_argument([&] {
        std::string msg = "unknown recipe '" + id + "'; valid ids:";
        for (const auto& r : recipe_ids()) msg += " " + r;
        return msg;
      }()) {}

namespace {

const std::vector<double> kBarriers = {0.2, 1.0, 3.0};

struct Context {
  fs::path dir;
  bool quick;
  int workers;
  RecipeOutput out;
  json results = json::object();
};

std::string h0_tag(double h0) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "h0_%.1f", h0);
  return buf;
}

ExperimentConfig base_config(double h0, ProtocolKind kind) {
  ExperimentConfig c;
  c.potential.h0 = h0;
  c.protocol.kind = kind;
  return c;
}

std::vector<double> column(const ExperimentResult& r, double ObservableRecord::*field) {
  std::vector<double> v;
  for (const auto& p : r.points) v.push_back(p.record.*field);
  return v;
}

std::vector<double> sweep_values(const ExperimentResult& r) {
  return column(r, &ObservableRecord::t_a_or_mcs);
}

json fit_json(const FitResult& f) { return json::parse(f.to_json()); }

json try_fit(const std::function<FitResult()>& fn) {
  try {
    return fit_json(fn());
  } catch (const std::exception& e) {
    return json{{"error", e.what()}};
  }
}

ExperimentResult run_and_write(Context& ctx, const ExperimentConfig& c, const std::string& sub) {
  auto res = run_experiment(c, ctx.workers);
  const auto dir = ctx.dir / sub;
  write_bundle(c, res, dir);
  for (const char* f : {"curve.csv", "summary.json", "provenance.json"}) ctx.out.files.push_back(dir / f);
  return res;
}

void write_file(Context& ctx, const std::string& name, const std::string& text) {
  write_text_file(ctx.dir / name, text);
  ctx.out.files.push_back(ctx.dir / name);
}

// Kink-density and residual-energy power laws over a short window, per barrier.
void exponent_table(Context& ctx, ProtocolKind kind, const std::vector<double>& sweep,
                    FitWindow window, const std::function<void(ExperimentConfig&)>& tune) {
  json rows = json::array();
  for (double h0 : kBarriers) {
    auto c = base_config(h0, kind);
    c.sweep = sweep;
    tune(c);
    const auto res = run_and_write(ctx, c, h0_tag(h0));
    const auto t = sweep_values(res);
    const auto rho = column(res, &ObservableRecord::rho);
    const auto eres = column(res, &ObservableRecord::e_res);
    rows.push_back({{"h0", h0},
                    {"rho", try_fit([&] { return power_law_fit(t, rho, window); })},
                    {"e_res", try_fit([&] { return power_law_fit(t, eres, window); })}});
  }
  ctx.results["protocol"] = to_string(kind);
  ctx.results["rows"] = rows;
}

void tune_mc_reads(ExperimentConfig& c, bool quick, int runs, int reads) {
  c.runs.n_runs = quick ? 2 : runs;
  c.runs.n_reads = quick ? 16 : reads;
}

void tune_sqa(ExperimentConfig& c, bool quick, int runs) {
  c.runs.n_runs = quick ? 2 : runs;
  if (quick) {
    c.protocol.sqa.trotter_m = 8;
    c.protocol.sqa.beta = 8.0;
  }
}

// Desk instance for the coherent runs: N = 128 (12 when quick).
void tune_tebd(ExperimentConfig& c, bool quick) { c.encoding.n = quick ? 12 : 128; }

void fig1(Context& ctx) {
  std::string csv = "x";
  for (double h0 : kBarriers) csv += ",v_" + h0_tag(h0);
  csv += "\n";
  const int n = ctx.quick ? 61 : 1201;
  for (int i = 0; i < n; ++i) {
    const double x = -3.0 + 6.0 * i / (n - 1);
    csv += format_double(x);
    for (double h0 : kBarriers) {
      PotentialSpec s;
      s.h0 = h0;
      csv += "," + format_double(eval_potential(s, x));
    }
    csv += "\n";
  }
  write_file(ctx, "potential.csv", csv);
}

void classical_fig(Context& ctx, double h0) {
  PotentialSpec s;
  s.h0 = h0;
  const int n_init = ctx.quick ? 50 : 1000;
  std::vector<int> budgets;
  for (int i = 0; i <= (ctx.quick ? 3 : 10); ++i) budgets.push_back(1 << i);
  std::string csv = "algorithm,t_max,p_gs,e_abs,mean_wall_time\n";
  struct Entry {
    std::string name;
    Algorithm algo;
    int popsize;
  };
  const std::vector<Entry> entries = {{"nm", Algorithm::NelderMead, 0},
                                      {"cgd", Algorithm::ConjugateGradient, 0},
                                      {"bh", Algorithm::BasinHopping, 0},
                                      {"de_p10", Algorithm::DifferentialEvolution, 10},
                                      {"de_p120", Algorithm::DifferentialEvolution, 120}};
  for (const auto& e : entries) {
    BenchmarkOptions o;
    if (e.popsize) o.de_popsize = e.popsize;
    for (const auto& r : benchmark_sweep(s, e.algo, n_init, budgets, 2024, o))
      csv += e.name + "," + std::to_string(r.t_max) + "," + format_double(r.p_gs) + "," +
             format_double(r.e_abs) + "," + format_double(r.mean_wall_time) + "\n";
  }
  write_file(ctx, "classical.csv", csv);
}

void fig5(Context& ctx) {
  std::string csv = "h0,n_enc_gradient,n_enc_exact_difference\n";
  const int steps = ctx.quick ? 3 : 30;
  for (int i = 0; i <= steps; ++i) {
    PotentialSpec s;
    s.h0 = 3.0 * i / steps;
    const int n = ctx.quick ? 31 : 211;
    const auto g = compute_n_enc(build_chain(s, n, 1.0, 1.0, 2.0, FieldMode::Gradient));
    const auto e = compute_n_enc(build_chain(s, n, 1.0, 1.0, 2.0, FieldMode::ExactDifference));
    csv += format_double(s.h0) + "," + std::to_string(g) + "," + std::to_string(e) + "\n";
  }
  write_file(ctx, "nenc.csv", csv);
}

std::vector<double> tebd_short_sweep(bool quick) {
  return quick ? std::vector<double>{1, 2, 4} : std::vector<double>{1, 2, 5, 10, 20, 50, 100};
}

void fig_tebd1(Context& ctx) {
  json rows = json::array();
  for (double h0 : kBarriers) {
    auto c = base_config(h0, ProtocolKind::TEBD);
    tune_tebd(c, ctx.quick);
    c.sweep = ctx.quick ? std::vector<double>{1, 2, 4, 8}
                        : std::vector<double>{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
    const auto res = run_and_write(ctx, c, h0_tag(h0));
    const auto t = sweep_values(res);
    const FitWindow w{1.0, 100.0};
    rows.push_back({{"h0", h0},
                    {"rho", try_fit([&] { return power_law_fit(t, column(res, &ObservableRecord::rho), w); })},
                    {"e_res", try_fit([&] { return power_law_fit(t, column(res, &ObservableRecord::e_res), w); })}});
  }
  ctx.results["rows"] = rows;
}

void fig_tebd2(Context& ctx) {
  json rows = json::array();
  for (double h0 : ctx.quick ? std::vector<double>{0.2} : kBarriers) {
    auto c = base_config(h0, ProtocolKind::TEBD);
    tune_tebd(c, ctx.quick);
    c.sweep = ctx.quick ? std::vector<double>{5, 10, 20, 40}
                        : std::vector<double>{500, 1000, 2000, 3000, 5000, 7000, 10000};
    const auto res = run_and_write(ctx, c, h0_tag(h0));
    const auto t = sweep_values(res);
    const auto eres = column(res, &ObservableRecord::e_res);
    std::vector<double> miss;
    for (double p : column(res, &ObservableRecord::p_gs)) miss.push_back(1.0 - p);
    const FitWindow w = ctx.quick ? FitWindow{} : FitWindow{3000.0, 10000.0};
    rows.push_back(
        {{"h0", h0},
         {"e_res_exponential", try_fit([&] { return exponential_fit(t, eres, w); })},
         {"one_minus_p_gs_exponential", try_fit([&] { return exponential_fit(t, miss, w); })},
         {"e_res_vs_one_minus_p_gs", try_fit([&] {
            return loglog_slope(miss, eres, [](double x, double) { return x < 0.1; });
          })}});
  }
  ctx.results["rows"] = rows;
}

void fig_tebd3(Context& ctx) {
  const int n = ctx.quick ? 12 : 128;
  std::string csv = "h0,t_a,bond,local_kinks\n";
  for (double h0 : {0.2, 3.0}) {
    PotentialSpec s;
    s.h0 = h0;
    const auto chain = build_chain(s, n, 1.0);
    for (double ta : ctx.quick ? std::vector<double>{2, 8} : std::vector<double>{10, 100, 1000}) {
      TebdParams p;
      p.t_a = ta;
      const auto zz = measure_bond_correlators(tebd_anneal(chain, p));
      for (std::size_t b = 0; b < zz.size(); ++b)
        csv += format_double(h0) + "," + format_double(ta) + "," + std::to_string(b + 1) + "," +
               format_double((1.0 - zz[b]) / 2.0) + "\n";
    }
  }
  write_file(ctx, "local_kinks.csv", csv);
}

std::vector<double> mcs_sweep(bool quick, double lo, double hi) {
  if (quick) return {lo, 2 * lo, 4 * lo};
  std::vector<double> v;
  for (double decade = 1; decade <= hi; decade *= 10)
    for (double m : {1.0, 2.0, 5.0})
      if (m * decade >= lo && m * decade <= hi) v.push_back(m * decade);
  if (v.empty() || v.front() != lo) v.insert(v.begin(), lo);
  return v;
}

void mc_figure(Context& ctx, ProtocolKind kind) {
  for (double h0 : kBarriers) {
    auto c = base_config(h0, kind);
    switch (kind) {
      case ProtocolKind::SA:
        c.sweep = mcs_sweep(ctx.quick, 2, 1e5);
        tune_mc_reads(c, ctx.quick, 20, 1000);
        break;
      case ProtocolKind::SQA:
        c.sweep = mcs_sweep(ctx.quick, 4, 1e4);
        tune_sqa(c, ctx.quick, 20);
        break;
      default:
        c.sweep = mcs_sweep(ctx.quick, 2, 5e5);
        tune_mc_reads(c, ctx.quick, 10, 1000);
        break;
    }
    run_and_write(ctx, c, h0_tag(h0));
  }
}

void table2(Context& ctx) {
  // Long-time windows where single-kink samples dominate.
  struct Row {
    ProtocolKind kind;
    double h0;
    std::vector<double> sweep;
    FitWindow window;
  };
  const std::vector<Row> full = {
      {ProtocolKind::SA, 0.2, {2e3, 5e3, 1e4, 2e4, 5e4, 1e5}, {2e3, 1e5}},
      {ProtocolKind::SA, 1.0, {1e4, 2e4, 5e4, 1e5}, {1e4, 1e5}},
      {ProtocolKind::SQA, 0.2, {1e3, 2e3, 5e3, 1e4}, {1e3, 1e4}},
      {ProtocolKind::SQA, 1.0, {1e3, 2e3, 5e3, 1e4}, {1e3, 1e4}},
      {ProtocolKind::SVMC, 0.2, {5e4, 1e5, 2e5, 5e5}, {5e4, 5e5}},
      {ProtocolKind::SVMC, 1.0, {1e5, 2e5, 5e5}, {1e5, 5e5}},
  };
  json rows = json::array();
  for (const auto& r : full) {
    auto c = base_config(r.h0, r.kind);
    c.sweep = ctx.quick ? std::vector<double>{4, 8, 16} : r.sweep;
    if (r.kind == ProtocolKind::SQA)
      tune_sqa(c, ctx.quick, 8);
    else
      tune_mc_reads(c, ctx.quick, 4, r.kind == ProtocolKind::SA ? 50 : 10);
    const auto res = run_and_write(ctx, c, to_string(r.kind) + "_" + h0_tag(r.h0));
    const auto t = sweep_values(res);
    const auto eres = column(res, &ObservableRecord::e_res);
    rows.push_back({{"protocol", to_string(r.kind)},
                    {"h0", r.h0},
                    {"e_res", try_fit([&] { return power_law_fit(t, eres, ctx.quick ? FitWindow{} : r.window); })}});
  }
  ctx.results["rows"] = rows;
}

void appc(Context& ctx) {
  // Effective temperature of SA output and a fixed-temperature equilibrium check.
  const int n = ctx.quick ? 16 : 211;
  PotentialSpec s;
  s.h0 = 0.2;
  const auto chain = build_chain(s, n, 1.0);
  std::string csv = "t_mcs,mean_energy,t_eff\n";
  for (double t : ctx.quick ? std::vector<double>{10, 100} : std::vector<double>{10, 100, 1000, 10000}) {
    SaParams p;
    p.t_mcs = static_cast<int>(t);
    const auto batch = sa_run(chain, p, ctx.quick ? 20 : 200, 99);
    double e = 0.0;
    for (const auto& c : batch.samples) e += classical_energy(chain, c);
    e /= static_cast<double>(batch.samples.size());
    std::string teff = "";
    try {
      teff = format_double(effective_temperature(chain, e));
    } catch (const std::exception&) {
    }
    csv += format_double(t) + "," + format_double(e) + "," + teff + "\n";
  }
  write_file(ctx, "efftemp.csv", csv);

  const auto small = build_chain(s, 16, 1.0);
  const auto run = metropolis_fixed(small, 0.5, ctx.quick ? 2000 : 100000, 7);
  double mean = 0.0;
  for (double e : run.energies) mean += e;
  mean /= static_cast<double>(run.energies.size());
  ctx.results["equilibrium_check"] = {{"n", 16},
                                      {"temperature", 0.5},
                                      {"mean_energy", mean},
                                      {"exact_energy", internal_energy(small, 0.5)},
                                      {"t_eff", effective_temperature(small, mean)}};
  ctx.results["freeze_out_linear_t_eff_4_t_phys_1"] =
      freeze_out(4.0, Schedule::linear(2.0), 1.0);
}

using Recipe = std::function<void(Context&)>;

const std::map<std::string, Recipe>& registry() {
  static const std::map<std::string, Recipe> r = {
      {"fig1-potential", fig1},
      {"fig2-classical", [](Context& c) { classical_fig(c, 1.0); }},
      {"fig3-classical", [](Context& c) { classical_fig(c, 0.2); }},
      {"fig5-nenc", fig5},
      {"fig-tebd1", fig_tebd1},
      {"fig-tebd2", fig_tebd2},
      {"fig-tebd3", fig_tebd3},
      {"fig-sa", [](Context& c) { mc_figure(c, ProtocolKind::SA); }},
      {"fig-sqa", [](Context& c) { mc_figure(c, ProtocolKind::SQA); }},
      {"fig-svmc", [](Context& c) { mc_figure(c, ProtocolKind::SVMC); }},
      {"table1-sa",
       [](Context& c) {
         exponent_table(c, ProtocolKind::SA,
                        c.quick ? std::vector<double>{2, 4, 8, 16}
                                : std::vector<double>{2, 3, 5, 7, 10, 20, 30, 50, 70, 100},
                        {2, 100}, [&](ExperimentConfig& e) { tune_mc_reads(e, c.quick, 20, 1000); });
       }},
      {"table1-sqa",
       [](Context& c) {
         exponent_table(c, ProtocolKind::SQA,
                        c.quick ? std::vector<double>{4, 8, 16}
                                : std::vector<double>{4, 5, 7, 10, 20, 30, 50, 70, 100},
                        {4, 100}, [&](ExperimentConfig& e) { tune_sqa(e, c.quick, 20); });
       }},
      {"table1-tebd",
       [](Context& c) {
         exponent_table(c, ProtocolKind::TEBD, tebd_short_sweep(c.quick), {1, 100},
                        [&](ExperimentConfig& e) { tune_tebd(e, c.quick); });
       }},
      {"table2-long", table2},
      {"appc-efftemp", appc},
  };
  return r;
}

}  // namespace

std::vector<std::string> recipe_ids() {
  std::vector<std::string> ids;
  for (const auto& [k, v] : registry()) ids.push_back(k);
  return ids;
}

RecipeOutput reproduce(const std::string& id, const fs::path& out_dir, bool quick, int workers) {
  const auto& reg = registry();
  auto it = reg.find(id);
  if (it == reg.end()) throw UnknownRecipe(id);
  Context ctx{out_dir, quick, workers, {}, json::object()};
  ctx.results["recipe"] = id;
  ctx.results["quick"] = quick;
  it->second(ctx);
  ctx.out.results_json = ctx.results.dump(2) + "\n";
  write_file(ctx, "results.json", ctx.out.results_json);
  return ctx.out;
}

}  // namespace dwqa
