#include "blab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>

#include "json.hpp"

#include "blab/checkpoint.hpp"
#include "blab/experiment.hpp"
#include "blab/norms.hpp"
#include "blab/oracles.hpp"

namespace blab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%g", x);
  return b;
}

std::string run_id(double eps, int n) { return "eps" + num(eps) + (n >= 0 ? "-n" + std::to_string(n) : ""); }

BalanceOptions balance_options(const ExperimentConfig& c) {
  BalanceOptions o;
  if (c.mode == "numeric") o.mode = BalanceOptions::Mode::numeric;
  if (c.mode == "formal") o.mode = BalanceOptions::Mode::formal;
  return o;
}

void save_state(const fs::path& path, const PrimitiveState& W) {
  write_checkpoint(path.string(), W.grid(), {{"u", W.u}, {"v", W.v}, {"rho", W.rho}});
}

/// json has no NaN; store null instead.
json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class CsvSink {
 public:
  explicit CsvSink(const fs::path& p) : os_(p) {
    if (!os_) throw Error("cannot write '" + p.string() + "'");
    os_ << diagnostics_csv_header() << '\n';
  }
  void add(const DiagnosticsRow& r) {
    append_diagnostics_row(os_, r);
    os_.flush();
  }

 private:
  std::ofstream os_;
};

void residual_decay(const ExperimentConfig& cfg, const fs::path& dir, json& summary, RunOutcome& out,
                    std::ostream& log) {
  const Grid g = cfg.grid();
  CsvSink csv(dir / "diagnostics.csv");
  json runs = json::array();
  std::vector<std::pair<double, double>> geo;  // (eps, geo-mean ratio)
  for (double eps : cfg.eps) {
    const Schedule sch = cfg.schedule(eps);
    const SpectralField q = low_pass(cfg.initial_q(g), sch.kappa);
    const std::vector<int> lv = cfg.levels(sch);
    const int n_max = *std::max_element(lv.begin(), lv.end());
    const ForcingSet f = cfg.forcing_set(g);
    const ResidualDecayResult r = run_residual_decay(q, sch, f, n_max, cfg.dual, balance_options(cfg));
    if (cfg.checkpoints)
      write_balance_checkpoint((dir / "checkpoints" / (run_id(eps, -1) + "-levels.blab")).string(), r.run);
    const double e0 = slow_energy(q);
    json rows = json::array();
    bool mono = true;
    double dual = 0;
    for (const ResidualDecayRow& row : r.rows) {
      DiagnosticsRow d;
      d.run_id = run_id(eps, -1);
      d.eps = eps;
      d.n = row.n;
      d.res_vbar = row.res_vbar;
      d.res_chi = row.res_chi;
      d.res_phi = row.res_phi;
      d.res_aggregate_s = row.res_aggregate_s;
      d.energy = e0;
      csv.add(d);
      if (row.n < n_max && !(row.ratio < 1)) mono = false;
      if (cfg.dual) dual = std::max(dual, row.dual_rel);
      rows.push_back({{"n", row.n}, {"res_aggregate_s", row.res_aggregate_s}, {"ratio", jnum(row.ratio)},
                      {"dual_rel", jnum(row.dual_rel)}});
    }
    log << "residual-decay eps=" << num(eps) << " n*=" << sch.n_star << " n_max=" << n_max
        << (r.formal ? " formal" : " numeric") << " geo-mean ratio " << r.geo_mean_ratio << " (" << r.seconds
        << " s)\n";
    runs.push_back({{"eps", eps},
                    {"kappa", sch.kappa},
                    {"n_star", sch.n_star},
                    {"formal", r.formal},
                    {"geo_mean_ratio", jnum(r.geo_mean_ratio)},
                    {"seconds", r.seconds},
                    {"rows", rows}});
    if (cfg.assertions) {
      out.assertions.push_back({"residual decreases in n at eps=" + num(eps), mono, "ratios < 1 for n < n_max"});
      if (cfg.dual)
        out.assertions.push_back({"dual formulas agree at eps=" + num(eps), dual <= 1e-9,
                                  "max relative " + num(dual) + " <= 1e-9"});
    }
    if (n_max >= 1) geo.emplace_back(eps, r.geo_mean_ratio);
  }
  summary["runs"] = runs;
  if (cfg.assertions && geo.size() >= 2) {
    std::sort(geo.begin(), geo.end());
    const bool ok = geo.front().second * 2 <= geo.back().second;
    out.assertions.push_back({"geo-mean ratio drops by 2 from eps=" + num(geo.back().first) + " to " +
                                  num(geo.front().first),
                              ok, num(geo.back().second) + " -> " + num(geo.front().second)});
  }
}

void balance_error_runs(const ExperimentConfig& cfg, const fs::path& dir, json& summary, RunOutcome& out,
                        std::ostream& log) {
  const Grid g = cfg.grid();
  CsvSink csv(dir / "diagnostics.csv");
  json runs = json::array();
  // per level: (eps, final error) for the slope fit
  std::map<int, std::vector<std::pair<double, double>>> finals;
  // per eps and level: combined error series
  std::map<double, std::map<int, std::vector<double>>> series;
  for (double eps : cfg.eps) {
    const Schedule sch = cfg.schedule(eps);
    for (int n : cfg.levels(sch)) {
      BalanceErrorSetup s;
      s.q0 = cfg.initial_q(g);
      s.schedule = sch;
      s.forcing = cfg.forcing_set(g);
      s.n_init = n;
      s.t_end = cfg.t_end;
      s.samples = cfg.samples;
      s.dt_pe = cfg.dt_pe;
      s.dt_qg = cfg.dt_qg;
      const std::string id = run_id(eps, n);
      PrimitiveState last = PrimitiveState::zero(g);
      double last_t = 0;
      BalanceErrorResult r;
      try {
        r = run_balance_error(s, [&](const ErrorReport& e, const PrimitiveState& W) {
          DiagnosticsRow d;
          d.run_id = id;
          d.eps = eps;
          d.n = n;
          d.t = e.t;
          d.err_v = e.err_v;
          d.err_rho = e.err_rho;
          d.combined = e.combined;
          d.energy = energy(W);
          d.parity_error = parity_error(W);
          csv.add(d);
          last = W;
          last_t = e.t;
        });
      } catch (const Error&) {
        if (cfg.checkpoints) save_state(dir / "checkpoints" / (id + "-last.blab"), last);
        summary["failed_run"] = {{"run_id", id}, {"t_last", last_t}};
        throw;
      }
      if (cfg.checkpoints) save_state(dir / "checkpoints" / (id + "-final.blab"), last);
      const double fin = r.series.back().combined;
      const double ratio = r.initial > 0 ? fin / r.initial : std::numeric_limits<double>::infinity();
      log << "balance-error " << id << " n*=" << sch.n_star << " C_id=" << r.initial << " final=" << fin << " ("
          << r.seconds << " s)\n";
      runs.push_back({{"run_id", id},
                      {"eps", eps},
                      {"n", n},
                      {"n_star", sch.n_star},
                      {"kappa", sch.kappa},
                      {"kappa_override", sch.kappa_override},
                      {"initial_error", r.initial},
                      {"final_error", fin},
                      {"final_over_initial", jnum(ratio)},
                      {"seconds", r.seconds}});
      finals[n].emplace_back(eps, fin);
      for (const auto& e : r.series) series[eps][n].push_back(e.combined);
      if (cfg.assertions && n == sch.n_star)
        out.assertions.push_back({"containment " + id, ratio <= 4,
                                  "final/initial = " + num(ratio) + " <= 4, C_id = " + num(r.initial)});
    }
  }
  summary["runs"] = runs;
  json slopes = json::object();
  for (const auto& [n, pts] : finals) {
    if (pts.size() < 2) continue;
    std::vector<double> x, y;
    for (const auto& [e, v] : pts) {
      x.push_back(e);
      y.push_back(v);
    }
    slopes[std::to_string(n)] = jnum(loglog_slope(x, y));
  }
  summary["slopes"] = slopes;
  if (cfg.assertions) {
    const auto& lv = series.begin()->second;  // smallest eps
    for (auto a = lv.begin(); a != lv.end(); ++a) {
      const auto b = std::next(a);
      if (b == lv.end()) break;
      bool below = true;
      for (std::size_t i = 0; i < a->second.size(); ++i) below = below && b->second[i] < a->second[i];
      out.assertions.push_back({"ordering at eps=" + num(series.begin()->first), below,
                                "error(n=" + std::to_string(b->first) + ") < error(n=" + std::to_string(a->first) +
                                    ") at every sample"});
    }
  }
}

void oracle_suite(const ExperimentConfig& cfg, const fs::path& dir, json& summary, RunOutcome& out,
                  std::ostream& log) {
  OracleSuiteOptions o;
  o.N = cfg.N;
  o.quick = cfg.quick;
  std::ofstream csv(dir / "oracles.csv");
  csv << "name,pass,value,tol\n";
  json arr = json::array();
  for (const OracleResult& r : run_oracle_suite(o)) {
    log << format_result(r) << '\n';
    char line[256];
    std::snprintf(line, sizeof line, "%s,%d,%.17g,%.17g\n", r.name.c_str(), r.pass ? 1 : 0, r.value, r.tol);
    csv << line;
    arr.push_back({{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"tol", r.tol}, {"detail", r.detail},
                   {"seconds", r.seconds}});
    if (cfg.assertions) out.assertions.push_back({r.name, r.pass, r.detail});
  }
  summary["oracles"] = arr;
}

}  // namespace

bool RunOutcome::ok() const {
  return error.empty() && std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

std::string output_root() {
  const char* e = std::getenv("BLAB_OUTPUT_ROOT");
  return e && *e ? e : "runs";
}

std::string make_run_dir(const std::string& root, const std::string& kind) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  fs::create_directories(root);
  const std::string base = kind + "-" + stamp;
  fs::path p = fs::path(root) / base;
  for (int k = 1; !fs::create_directory(p); ++k) p = fs::path(root) / (base + "-" + std::to_string(k));
  return p.string();
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& root, std::ostream& log) {
  validate_config(cfg);
  RunOutcome out;
  out.dir = make_run_dir(root, cfg.kind);
  const fs::path dir(out.dir);
  if (cfg.checkpoints && cfg.kind != "oracle-suite") fs::create_directory(dir / "checkpoints");
  {
    std::ofstream c(dir / "config.ini");
    c << format_config(cfg);
  }
  json summary;
  summary["kind"] = cfg.kind;
  try {
    if (cfg.kind == "residual-decay")
      residual_decay(cfg, dir, summary, out, log);
    else if (cfg.kind == "balance-error")
      balance_error_runs(cfg, dir, summary, out, log);
    else
      oracle_suite(cfg, dir, summary, out, log);
  } catch (const std::exception& e) {
    out.error = e.what();
    summary["error"] = out.error;
  }
  json as = json::array();
  for (const auto& a : out.assertions) as.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  summary["assertions"] = as;
  summary["ok"] = out.ok();
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
  return out;
}

}  // namespace blab
