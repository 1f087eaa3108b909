// Command-line front end: bound evaluation, optimization, sweeps, path
// planning, rate-distortion curves and the acceptance checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdm/evaluate.hpp"
#include "pdm/model.hpp"
#include "pdm/oracle.hpp"
#include "pdm/planner.hpp"
#include "pdm/power_alloc.hpp"
#include "pdm/rate_distortion.hpp"
#include "pdm/scenario_io.hpp"
#include "pdm/validation.hpp"

#ifndef PDM_VERSION
#define PDM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pdm;

namespace {

enum Exit { kOk = 0, kValidationFailed = 1, kInputError = 2, kNumericError = 3 };

/// Input problems detected by the CLI itself (exit 2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Globals {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "csv";
  std::vector<std::string> args;
};

/// Routes outputs to files under --out or to stdout, and records them for
/// the manifest.
class Sink {
 public:
  explicit Sink(const Globals& g) : g_(g) {
    if (!g_.out_dir.empty()) fs::create_directories(g_.out_dir);
  }

  void emit(const std::string& name, const std::string& content) {
    if (g_.out_dir.empty()) {
      std::cout << content;
      written_.push_back("-");
      return;
    }
    const fs::path path = fs::path(g_.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    f << content;
    written_.push_back(path.string());
  }

  void manifest(const std::string& command, const std::vector<std::string>& specs, std::uint64_t seed,
                double seconds, int exit_code) {
    json m = {{"command", command},
              {"arguments", g_.args},
              {"scenario", g_.scenario_path.empty() ? json(nullptr) : json(g_.scenario_path)},
              {"spec", specs},
              {"seed", seed},
              {"tool_version", PDM_VERSION},
              {"format", g_.format},
              {"outputs", written_},
              {"wall_time_seconds", seconds},
              {"exit_code", exit_code}};
    if (g_.out_dir.empty()) {
      std::cerr << m.dump() << "\n";
      return;
    }
    std::ofstream f(fs::path(g_.out_dir) / (command + "_manifest.json"), std::ios::binary);
    f << m.dump(2) << "\n";
  }

 private:
  const Globals& g_;
  std::vector<std::string> written_;
};

Scenario load_checked(const Globals& g) {
  if (g.scenario_path.empty()) throw InputError("this command needs --scenario");
  Scenario s = load_scenario(g.scenario_path);
  const auto diagnostics = validate_scenario(s);
  if (!diagnostics.empty()) {
    std::string msg = "invalid scenario " + g.scenario_path;
    for (const auto& d : diagnostics) msg += std::string("\n  ") + to_string(d.kind) + ": " + d.message;
    throw InputError(msg);
  }
  return s;
}

std::vector<MetricSpec> specs_from(const std::string& name, std::optional<PowerMode> only = std::nullopt) {
  if (name.empty() || name == "all") {
    std::vector<MetricSpec> out;
    for (const auto& s : all_metric_specs())
      if (!only || s.power == *only) out.push_back(s);
    return out;
  }
  const MetricSpec spec = MetricSpec::parse(name);
  if (only && spec.power != *only) throw InputError(name + " is not a " + (*only == PowerMode::Optimized ? "optimized" : "fixed") + "-power metric");
  return {spec};
}

std::vector<std::string> names(const std::vector<MetricSpec>& specs) {
  std::vector<std::string> out;
  for (const auto& s : specs) out.push_back(s.name());
  return out;
}

// ---- metrics ---------------------------------------------------------------

struct MetricsArgs {
  std::string spec = "all";
  std::vector<double> at;
};

int cmd_metrics(const Globals& g, const MetricsArgs& a, Sink& sink, std::vector<std::string>& spec_names) {
  const Scenario s = load_checked(g);
  const Point2 pos = a.at.size() == 2 ? Point2(a.at[0], a.at[1]) : s.av_start;
  const auto specs = specs_from(a.spec);
  spec_names = names(specs);
  std::vector<GainWarning> warnings;
  const NetworkParams net = build_network_params(s, pos, &warnings);
  for (const auto& w : warnings)
    std::cerr << "warning: " << (w.sensing ? "source" : "collector") << " within " << kMinDistance
              << " of sensor " << w.sensor + 1 << "; distance clamped\n";

  json rows = json::array();
  std::ostringstream csv;
  csv << "spec,distortion,valid,error\n";
  int code = kOk;
  for (const auto& spec : specs) {
    json row = {{"spec", spec.name()}};
    try {
      const PowerInput power = spec.power == PowerMode::Optimized
                                   ? PowerInput(PowerBudget{s.power_budget()})
                                   : PowerInput(PowerAllocation(s.fixed_powers(), net.r));
      const BoundValue v = evaluate(spec, net, power);
      if (!std::isfinite(v.distortion)) throw Error(ErrorCode::DomainError, "non-finite distortion");
      row["distortion"] = v.distortion;
      row["valid"] = v.valid;
      if (v.components) row["components"] = std::vector<double>(v.components->begin(), v.components->end());
      csv << spec.name() << "," << num(v.distortion) << "," << (v.valid ? "true" : "false") << ",\n";
    } catch (const Error& e) {
      // A single requested metric that cannot be evaluated is a failure;
      // in the all-metrics table it is reported in its row.
      if (specs.size() == 1) throw;
      row["error"] = e.what();
      csv << spec.name() << ",,," << '"' << e.what() << '"' << "\n";
    }
    rows.push_back(row);
  }
  if (g.format == "json") {
    json doc = {{"scenario", g.scenario_path}, {"position", {pos.x(), pos.y()}}, {"results", rows}};
    sink.emit("metrics.json", doc.dump(2) + "\n");
  } else {
    sink.emit("metrics.csv", csv.str());
  }
  return code;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeArgs {
  std::string spec = "all";
};

int cmd_optimize(const Globals& g, const OptimizeArgs& a, Sink& sink, std::vector<std::string>& spec_names) {
  const Scenario s = load_checked(g);
  const auto specs = specs_from(a.spec, PowerMode::Optimized);
  spec_names = names(specs);
  const NetworkParams net = build_network_params(s, s.av_start);
  const double budget = s.power_budget();
  const Eigen::Index m = net.size();

  json rows = json::array();
  std::ostringstream csv;
  csv << "spec,value,lambda,lambda2,residual,valid";
  for (Eigen::Index k = 0; k < m; ++k) csv << ",p" << k + 1;
  csv << ",notes\n";
  for (const auto& spec : specs) {
    json row = {{"spec", spec.name()}, {"total_power", budget}};
    try {
      const OptResult r = optimize(spec, net, budget);
      const double lambda = static_cast<double>(r.lambda);
      std::string notes;
      for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
      row["value"] = r.value;
      row["lambda"] = num_json(lambda);
      row["lambda2"] = r.lambda2;
      row["residual"] = r.residual;
      row["valid"] = r.valid;
      row["allocation"] = std::vector<double>(r.allocation.p.begin(), r.allocation.p.end());
      row["broadcast"] = {{"shift", static_cast<double>(r.recipe.shift)}, {"scale_sq", r.recipe.scale_sq}};
      row["notes"] = r.notes;
      if (r.asymptote) {
        row["asymptote"] = *r.asymptote;
        row["asymptote_valid"] = r.asymptote_valid;
      }
      csv << spec.name() << "," << num(r.value) << "," << num(lambda) << "," << num(r.lambda2) << ","
          << num(r.residual) << "," << (r.valid ? "true" : "false");
      for (Eigen::Index k = 0; k < m; ++k) csv << "," << num(r.allocation.p(k));
      csv << "," << '"' << notes << '"' << "\n";
    } catch (const Error& e) {
      if (specs.size() == 1) throw;
      row["error"] = e.what();
      csv << spec.name() << ",,,,,";
      for (Eigen::Index k = 0; k < m; ++k) csv << ",";
      csv << "," << '"' << e.what() << '"' << "\n";
    }
    rows.push_back(row);
  }
  if (g.format == "json")
    sink.emit("optimize.json", json({{"scenario", g.scenario_path}, {"results", rows}}).dump(2) + "\n");
  else
    sink.emit("optimize.csv", csv.str());
  return kOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  int sensors = 5;
  std::size_t trials = 10000;
  std::string mode = "both";
  int lo = -1;
  int hi = 3;
  int per_decade = 2;
  std::string fr_lower = "exact";
};

int cmd_sweep(const Globals& g, const SweepArgs& a, Sink& sink, std::uint64_t seed) {
  if (a.sensors < 1) throw InputError("--sensors must be at least 1");
  if (a.trials < 1) throw InputError("--trials must be at least 1");
  if (a.hi < a.lo || a.per_decade < 1) throw InputError("empty power grid");
  const auto sweep = decade_grid(a.lo, a.hi, a.per_decade);
  const FrLowerMode fr_mode = a.fr_lower == "highrate" ? FrLowerMode::HighRate : FrLowerMode::Exact;
  std::vector<PowerMode> modes;
  if (a.mode != "optimized") modes.push_back(PowerMode::Fixed);
  if (a.mode != "uniform") modes.push_back(PowerMode::Optimized);

  std::ostringstream csv;
  csv << "mode,pairing,power,total_power,bound,mean_mse\n";
  json doc = {{"sensors", a.sensors}, {"trials", a.trials}, {"seed", seed}, {"power", sweep}, {"series", json::array()}};
  for (PowerMode mode : modes) {
    const GapExperiment e = matched_mismatched_experiment(a.sensors, a.trials, seed, mode, sweep, fr_mode);
    const char* mode_name = mode == PowerMode::Fixed ? "uniform" : "optimized";
    for (const auto& [pairing, means] : {std::pair<const char*, const BoundMeans*>{"matched", &e.matched},
                                         std::pair<const char*, const BoundMeans*>{"mismatched", &e.mismatched}}) {
      const std::pair<const char*, Eigen::VectorXd> series[] = {
          {"sr-upper", means->sr_upper}, {"sr-lower", means->sr_lower}, {"fr-upper", means->fr_upper},
          {"fr-lower", means->fr_lower}, {"sr-gap", means->sr_gap()},   {"fr-gap", means->fr_gap()}};
      for (const auto& [bound, values] : series) {
        for (std::size_t k = 0; k < sweep.size(); ++k)
          csv << mode_name << "," << pairing << "," << num(sweep[k]) << "," << num(sweep[k] * a.sensors) << ","
              << bound << "," << num(values(static_cast<Eigen::Index>(k))) << "\n";
        doc["series"].push_back({{"mode", mode_name},
                                 {"pairing", pairing},
                                 {"bound", bound},
                                 {"mean_mse", std::vector<double>(values.begin(), values.end())}});
      }
    }
  }
  if (g.format == "json")
    sink.emit("sweep.json", doc.dump(2) + "\n");
  else
    sink.emit("sweep.csv", csv.str());
  return kOk;
}

// ---- plan ------------------------------------------------------------------

struct PlanArgs {
  std::string spec = "all";
  std::size_t steps = 30;
};

std::string file_safe(std::string s) {
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return s;
}

int cmd_plan(const Globals& g, const PlanArgs& a, Sink& sink, std::vector<std::string>& spec_names) {
  const Scenario s = load_checked(g);
  const auto specs = specs_from(a.spec);
  spec_names = names(specs);
  const std::string id = fs::path(g.scenario_path).stem().string();
  const PathComparison cmp = compare_paths(s, specs, a.steps, id);
  const Eigen::Index m = s.sensor_count();

  std::ostringstream summary;
  summary << "spec,final_x,final_y,final_cost,nearest_sensor,stall_at,ties";
  for (Eigen::Index k = 0; k < m; ++k) summary << ",distance_" << k + 1;
  summary << ",error\n";
  json doc = {{"scenario", g.scenario_path}, {"steps", a.steps}, {"paths", json::array()}};
  for (std::size_t i = 0; i < cmp.paths.size(); ++i) {
    const PathResult& p = cmp.paths[i];
    const std::string name = p.spec.name();
    json entry = {{"spec", name}};
    if (!cmp.errors[i].empty()) {
      summary << name << ",,,,,,";
      for (Eigen::Index k = 0; k < m; ++k) summary << ",";
      summary << "," << '"' << cmp.errors[i] << '"' << "\n";
      entry["error"] = cmp.errors[i];
      doc["paths"].push_back(entry);
      continue;
    }
    const Point2 end = p.positions.back();
    summary << name << "," << num(end.x()) << "," << num(end.y()) << "," << num(p.costs.back()) << ","
            << nearest_sensor(s, end) + 1 << "," << (p.stall_at ? std::to_string(*p.stall_at) : "") << ","
            << p.ties.size();
    for (Eigen::Index k = 0; k < m; ++k) summary << "," << num(cmp.final_distances[i](k));
    summary << ",\n";

    std::ostringstream trace;
    trace << "step,x,y,cost,move\n";
    json steps = json::array();
    for (std::size_t k = 0; k < p.positions.size(); ++k) {
      const char* move = k == 0 ? "start" : to_string(p.moves[k - 1]);
      trace << k << "," << num(p.positions[k].x()) << "," << num(p.positions[k].y()) << "," << num(p.costs[k])
            << "," << move << "\n";
      steps.push_back({{"x", p.positions[k].x()}, {"y", p.positions[k].y()}, {"cost", p.costs[k]}, {"move", move}});
    }
    if (g.format == "csv" && !g.out_dir.empty()) sink.emit("path_" + file_safe(name) + ".csv", trace.str());
    entry["trace"] = steps;
    entry["nearest_sensor"] = nearest_sensor(s, end) + 1;
    entry["ties"] = p.ties;
    entry["stall_at"] = p.stall_at ? json(*p.stall_at) : json(nullptr);
    entry["final_distances"] = std::vector<double>(cmp.final_distances[i].begin(), cmp.final_distances[i].end());
    doc["paths"].push_back(entry);
  }
  doc["first_divergence"] = cmp.first_divergence ? json(*cmp.first_divergence) : json(nullptr);

  if (g.format == "json") {
    sink.emit("plan.json", doc.dump(2) + "\n");
  } else {
    summary << "# first_divergence," << (cmp.first_divergence ? std::to_string(*cmp.first_divergence) : "none")
            << "\n";
    sink.emit("plan_summary.csv", summary.str());
  }
  return kOk;
}

// ---- rd --------------------------------------------------------------------

struct RdArgs {
  double rate_max = 4.0;
  double rate_step = 0.25;
};

int cmd_rd(const Globals& g, const RdArgs& a, Sink& sink) {
  const Scenario s = load_checked(g);
  if (!(a.rate_step > 0.0) || !(a.rate_max >= 0.0)) throw InputError("rate grid must have a positive step");
  const NetworkParams net = build_network_params(s, s.av_start);
  const auto eig = ru_eigen(net.beta, net.gamma);

  std::ostringstream csv;
  csv << "rate_bits,remote_rd,vector_rd_exact,vector_rd_highrate,highrate_valid,active_components\n";
  json rows = json::array();
  const auto n = static_cast<long>(std::floor(a.rate_max / a.rate_step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double r = static_cast<double>(i) * a.rate_step;
    const double remote = remote_rd_distortion(net.beta, r);
    const auto wf = waterfill(eig, r);
    const double high = vector_rd_highrate(eig, r);
    const bool valid = highrate_regime(eig, r);
    csv << num(r) << "," << num(remote) << "," << num(wf.distortion) << "," << num(high) << ","
        << (valid ? "true" : "false") << "," << wf.active << "\n";
    rows.push_back({{"rate_bits", r},
                    {"remote_rd", remote},
                    {"vector_rd_exact", wf.distortion},
                    {"vector_rd_highrate", high},
                    {"highrate_valid", valid},
                    {"active_components", wf.active}});
  }
  if (g.format == "json") {
    json doc = {{"scenario", g.scenario_path},
                {"lambdas", std::vector<double>(eig.lambdas.begin(), eig.lambdas.end())},
                {"gamma_prime", std::vector<double>(eig.gamma_prime.begin(), eig.gamma_prime.end())},
                {"curve", rows}};
    sink.emit("rd.json", doc.dump(2) + "\n");
  } else {
    sink.emit("rd.csv", csv.str());
  }
  return kOk;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string level = "quick";
  std::string scenario_dir;
  double fault = 0.0;
};

int cmd_validate(const Globals& g, const ValidateArgs& a, Sink& sink, std::uint64_t seed) {
  ValidationOptions opt;
  opt.level = a.level == "full" ? ValidationLevel::Full : ValidationLevel::Quick;
  opt.seed = seed;
  opt.scenario_dir = a.scenario_dir;
  opt.fault = a.fault;
  const ValidationReport report = run_validation(opt);

  std::ostringstream csv;
  csv << "criterion,name,pass,cases,measured,tolerance,seconds,time_limit,detail\n";
  json checks = json::array();
  for (const auto& c : report.checks) {
    csv << c.criterion << "," << c.name << "," << (c.pass ? "true" : "false") << "," << c.cases << ","
        << num(c.measured) << "," << num(c.tolerance) << "," << num(c.seconds) << "," << num(c.time_limit) << ","
        << '"' << c.detail << '"' << "\n";
    checks.push_back({{"criterion", c.criterion},
                      {"name", c.name},
                      {"pass", c.pass},
                      {"cases", c.cases},
                      {"measured", num_json(c.measured)},
                      {"tolerance", c.tolerance},
                      {"seconds", c.seconds},
                      {"time_limit", c.time_limit},
                      {"detail", c.detail}});
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.criterion << " " << c.name << ": " << c.detail << "\n";
  }
  if (g.format == "json")
    sink.emit("validate.json",
              json({{"level", a.level}, {"seed", seed}, {"pass", report.all_pass()}, {"checks", checks}}).dump(2) +
                  "\n");
  else
    sink.emit("validate.csv", csv.str());
  return report.all_pass() ? kOk : kValidationFailed;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidInput:
    case ErrorCode::ParseError: return kInputError;
    default: return kNumericError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  for (int i = 1; i < argc; ++i) g.args.emplace_back(argv[i]);

  CLI::App app{"Distortion bounds and path planning for Gaussian sensor networks"};
  app.set_version_flag("--version", std::string(PDM_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--scenario", g.scenario_path, "Scenario JSON file");
  app.add_option("--seed", g.seed, "Seed for random draws (default: 1)");
  app.add_option("--out", g.out_dir, "Directory for outputs and the run manifest (default: stdout/stderr)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  MetricsArgs metrics;
  auto* c_metrics = app.add_subcommand("metrics", "Evaluate bounds at the scenario's powers");
  c_metrics->add_option("--spec", metrics.spec, "Metric name or 'all'");
  c_metrics->add_option("--at", metrics.at, "Collector position X Y (default: av_start)")->expected(2);

  OptimizeArgs optimize_args;
  auto* c_opt = app.add_subcommand("optimize", "Optimal power allocation under the scenario's budget");
  c_opt->add_option("--spec", optimize_args.spec, "Optimized metric name or 'all'");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Matched vs mismatched bound averages over random networks");
  c_sweep->add_option("--sensors", sweep.sensors, "Number of sensors");
  c_sweep->add_option("--trials", sweep.trials, "Random draws per sweep point");
  c_sweep->add_option("--mode", sweep.mode, "Power mode")->check(CLI::IsMember({"uniform", "optimized", "both"}));
  c_sweep->add_option("--lo", sweep.lo, "Lowest power decade (10^lo)");
  c_sweep->add_option("--hi", sweep.hi, "Highest power decade (10^hi)");
  c_sweep->add_option("--per-decade", sweep.per_decade, "Grid points per decade");
  c_sweep->add_option("--fr-lower", sweep.fr_lower, "FR lower bound evaluation")
      ->check(CLI::IsMember({"exact", "highrate"}));

  PlanArgs plan;
  auto* c_plan = app.add_subcommand("plan", "Greedy collector paths for one or all metrics");
  c_plan->add_option("--spec", plan.spec, "Metric name or 'all'");
  c_plan->add_option("--steps", plan.steps, "Number of moves");

  RdArgs rd;
  auto* c_rd = app.add_subcommand("rd", "Rate-distortion curves for the scenario's sensing channel");
  c_rd->add_option("--rate-max", rd.rate_max, "Largest rate in bits");
  c_rd->add_option("--rate-step", rd.rate_step, "Rate step in bits");

  ValidateArgs validate;
  auto* c_val = app.add_subcommand("validate", "Run the acceptance checks");
  c_val->add_option("--level", validate.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  c_val->add_option("--scenario-dir", validate.scenario_dir, "Directory holding the bundled scenarios");
  c_val->add_option("--inject-fault", validate.fault, "Perturb closed forms by this relative amount (harness check)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  std::string command = app.get_subcommands().front()->get_name();
  std::vector<std::string> spec_names;
  std::uint64_t seed = g.seed.value_or(1);
  int code = kOk;
  try {
    Sink sink(g);
    try {
      if (command == "metrics") code = cmd_metrics(g, metrics, sink, spec_names);
      else if (command == "optimize") code = cmd_optimize(g, optimize_args, sink, spec_names);
      else if (command == "sweep") code = cmd_sweep(g, sweep, sink, seed);
      else if (command == "plan") code = cmd_plan(g, plan, sink, spec_names);
      else if (command == "rd") code = cmd_rd(g, rd, sink);
      else code = cmd_validate(g, validate, sink, seed);
    } catch (const InputError& e) {
      std::cerr << "error: " << e.what() << "\n";
      code = kInputError;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      code = exit_code_for(e);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      code = kNumericError;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sink.manifest(command, spec_names, seed, seconds, code);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}
