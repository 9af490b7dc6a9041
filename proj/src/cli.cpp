#include "frontsim/cli.hpp"

#include "frontsim/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace frontsim::cli {

namespace fs = std::filesystem;

int exit_code_for(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return kExitOk;
    case RunStatus::InvariantViolation: return kExitInvariant;
    case RunStatus::FrontCollapse: return kExitCollapse;
    case RunStatus::PicardFailure: return kExitPicard;
  }
  return kExitInvariant;
}

ConfigFile resolve_config(const Options& opts) {
  if (opts.config_path.empty() == opts.preset.empty())
    throw ConfigError("command line", 0, "exactly one of --config or --preset is required");
  ConfigFile c;
  if (!opts.preset.empty()) {
    try {
      c = preset(opts.preset);
    } catch (const InvalidInput& e) {
      throw ConfigError("command line", 0, e.what());
    }
  } else {
    c = load_config(opts.config_path);
  }
  if (!opts.out_dir.empty()) {
    c.output_dir = opts.out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    c.output_dir = env;
  }
  return c;
}

namespace {

using frontsim::format_number;

std::string row(std::initializer_list<double> xs) {
  std::string out;
  bool first = true;
  for (double x : xs) {
    if (!first) out += ',';
    out += format_number(x);
    first = false;
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace

std::string timeseries_csv(const RunResult& result) {
  std::string out = std::string(kTimeseriesVersion) + "\n";
  out += "t,s,s_t,u_0,u_1,min_u,max_u,energy_E,weak_residual_max,u_star_bound,M_front_bound\n";
  for (const InvariantRecord& r : result.report) {
    out += row({r.t, r.s, r.s_t, r.u_left, r.u_right, r.min_u, r.max_u, r.energy,
                r.residual_max, r.u_star, r.M_front});
    out += '\n';
  }
  return out;
}

std::string invariants_csv(const RunResult& result) {
  std::string out = std::string(kInvariantsVersion) + "\n";
  out += "t,min_u,max_u,u_star_bound,s,M_front_bound,residual_relative,"
         "lower_ok,upper_ok,residual_ok,front_ok\n";
  for (const InvariantRecord& r : result.report) {
    out += row({r.t, r.min_u, r.max_u, r.u_star, r.s, r.M_front, r.residual_relative});
    for (bool ok : {r.lower_ok, r.upper_ok, r.residual_ok, r.front_ok}) out += ok ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::string picard_csv(const RunResult& result) {
  std::string out = "window,t_start,steps,iteration,distance,converged\n";
  for (std::size_t w = 0; w < result.picard_log.size(); ++w) {
    const PicardWindowLog& log = result.picard_log[w];
    for (std::size_t k = 0; k < log.distances.size(); ++k) {
      out += std::to_string(w) + ',' + format_number(log.t_start) + ',' +
             std::to_string(log.steps) + ',' + std::to_string(k + 1) + ',' +
             format_number(log.distances[k]) + ',' + (log.converged ? "1" : "0") + '\n';
    }
  }
  return out;
}

std::string summary_text(const RunResult& result) {
  double max_u = 0.0;
  for (const InvariantRecord& r : result.report) max_u = std::max(max_u, r.max_u);
  const InvariantRecord* last = result.report.empty() ? nullptr : &result.report.back();
  std::ostringstream o;
  o << "status = " << to_string(result.status) << "\n";
  o << "steps = " << (result.states.empty() ? 0 : result.states.size() - 1) << "\n";
  if (last) {
    o << "final_t = " << format_number(last->t) << "\n";
    o << "final_s = " << format_number(last->s) << "\n";
  }
  o << "max_s = " << format_number(result.max_s()) << "\n";
  o << "max_u = " << format_number(max_u) << "\n";
  if (last) {
    o << "u_star_bound = " << format_number(last->u_star) << "\n";
    o << "M_front_bound = " << format_number(last->M_front) << "\n";
  }
  o << "b_star = " << format_number(result.b_star) << "\n";
  o << "energy_growth_warning = " << (result.energy_growth_warning ? "yes" : "no") << "\n";
  if (!result.message.empty()) o << "message = " << result.message << "\n";
  return o.str();
}

void write_artifacts(const RunResult& result, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path d(dir);
  write_file(d / "timeseries.csv", timeseries_csv(result));
  write_file(d / "invariants.csv", invariants_csv(result));
  write_file(d / "summary.txt", summary_text(result));
  if (!result.picard_log.empty()) write_file(d / "picard.csv", picard_csv(result));
}

namespace {

RunResult run_config(const ConfigFile& c) {
  return run(c.params, c.drive, c.u0, c.run);
}

// Config problems found after parsing (presets, overrides) still exit 1.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ConfigFile c = resolve_config(opts);
    validate_config(c);
    const RunResult r = run_config(c);
    write_artifacts(r, c.output_dir);
    out << "status: " << to_string(r.status) << "\n"
        << "final s: " << format_number(r.final_state().s) << "\n"
        << "artifacts: " << c.output_dir << "\n";
    if (!r.message.empty()) err << r.message << "\n";
    return exit_code_for(r.status);
  });
}

std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<double>> points{{}};
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points) {
      for (double v : axis.values) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ConfigFile base = resolve_config(opts);
    if (base.sweep.empty()) {
      validate_config(base);
      const RunResult r = run_config(base);
      write_artifacts(r, base.output_dir);
      out << "status: " << to_string(r.status) << "\n";
      return exit_code_for(r.status);
    }

    const auto points = sweep_points(base.sweep);
    std::vector<ConfigFile> configs;
    configs.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      ConfigFile c = base;
      c.sweep.clear();
      for (std::size_t a = 0; a < base.sweep.size(); ++a)
        apply_override(c, base.sweep[a].key, points[i][a]);
      if (base.sweep.end() == std::find_if(base.sweep.begin(), base.sweep.end(),
                                           [](const SweepAxis& x) { return x.key == "run.stop_time"; }) &&
          c.run.stop_time > c.params.T)
        c.run.stop_time = c.params.T;
      char name[32];
      std::snprintf(name, sizeof name, "point_%03zu", i);
      c.output_dir = (fs::path(base.output_dir) / name).string();
      validate_config(c);
      configs.push_back(std::move(c));
    }

    struct PointResult {
      RunStatus status = RunStatus::Completed;
      double final_s = 0.0;
      double max_s = 0.0;
      double M_front = 0.0;
    };
    std::vector<PointResult> results(configs.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::string first_error;
    auto worker = [&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        try {
          const RunResult r = run_config(configs[i]);
          write_artifacts(r, configs[i].output_dir);
          results[i] = {r.status, r.final_state().s, r.max_s(),
                        r.report.empty() ? 0.0 : r.report.back().M_front};
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          if (first_error.empty()) first_error = e.what();
          results[i].status = RunStatus::InvariantViolation;
        }
      }
    };
    const int threads = std::clamp<int>(opts.parallel, 1, static_cast<int>(configs.size()));
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (!first_error.empty()) err << "error: " << first_error << "\n";

    std::string csv = "point";
    for (const SweepAxis& a : base.sweep) csv += ',' + a.key;
    csv += ",final_s,max_s,M_front,status\n";
    bool violated = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
      csv += std::to_string(i);
      for (double v : points[i]) csv += ',' + format_number(v);
      const PointResult& p = results[i];
      csv += ',' + row({p.final_s, p.max_s, p.M_front}) + ',' + to_string(p.status) + '\n';
      violated = violated || p.status == RunStatus::InvariantViolation;
    }
    fs::create_directories(base.output_dir);
    write_file(fs::path(base.output_dir) / "sweep.csv", csv);
    out << results.size() << " points written to " << base.output_dir << "\n";
    return violated ? kExitInvariant : kExitOk;
  });
}

namespace {

std::string convergence_rows(const ConvergenceTable& t) {
  std::string out;
  for (const ConvergenceRow& r : t.rows) {
    out += t.case_name + ',' + std::to_string(r.N) + ',' +
           row({r.dt, r.error, r.order}) + '\n';
  }
  return out;
}

SuiteOutcome mms_suite() {
  SuiteOutcome o;
  std::ostringstream rep;
  const ConvergenceTable spatial = convergence_study(
      static_front_case(), {{50, 0.5 / 2500.0}, {100, 0.5 / 10000.0}, {200, 0.5 / 40000.0}}, 0.1);
  ConvergenceTable temporal =
      convergence_study(static_front_case(), {{400, 4e-3}, {400, 2e-3}, {400, 1e-3}}, 0.2);
  temporal.case_name = "static_cos_time";
  const double const_err = manufactured_error(constant_moving_case(), 50, 1e-2, 0.5);
  const ConvergenceTable moving = convergence_study(
      moving_front_case(), {{50, 0.5 / 2500.0}, {100, 0.5 / 10000.0}, {200, 0.5 / 40000.0}}, 0.1);

  const bool s_ok = spatial.monotone && spatial.min_order() >= 1.9;
  const bool t_ok = temporal.monotone && temporal.min_order() >= 0.9;
  const bool c_ok = const_err <= 1e-12;
  const bool m_ok = moving.monotone && moving.min_order() >= 0.8;  // upwinded advection
  o.passed = s_ok && t_ok && c_ok && m_ok;
  o.table = "case,N,dt,error,order\n" + convergence_rows(spatial) +
            convergence_rows(temporal) + convergence_rows(moving) + "constant_moving,50," +
            row({1e-2, const_err}) + ",nan\n";
  rep << "spatial order (static_cos) " << spatial.min_order() << " >= 1.9: " << (s_ok ? "ok" : "FAIL") << "\n"
      << "temporal order (static_cos) " << temporal.min_order() << " >= 0.9: " << (t_ok ? "ok" : "FAIL") << "\n"
      << "constant_moving error " << const_err << " <= 1e-12: " << (c_ok ? "ok" : "FAIL") << "\n"
      << "moving_trig order " << moving.min_order() << " >= 0.8: " << (m_ok ? "ok" : "FAIL") << "\n";
  o.report = rep.str();
  return o;
}

SuiteOutcome epsilon_suite() {
  const ConfigFile c = preset("generic");
  const std::vector<double> eps{0.1, 0.05, 0.025};
  const EpsilonStudy study = epsilon_study(c.params, c.drive, c.u0, eps, c.run);
  SuiteOutcome o;
  o.passed = study.passed;
  o.table = "epsilon,deviation,checked\n";
  std::ostringstream rep;
  for (const EpsilonRow& r : study.rows) {
    o.table += row({r.epsilon, r.deviation}) + (r.in_monotonicity_check ? ",1\n" : ",0\n");
    rep << "eps " << r.epsilon << " deviation " << r.deviation << "\n";
  }
  rep << "non-increasing within 5%: " << (study.passed ? "ok" : "FAIL") << "\n";
  o.report = rep.str();
  return o;
}

SuiteOutcome alpha0_suite() {
  const ConfigFile c = preset("alpha-zero");
  const AlphaRegressionReport r = alpha_regression(c.params, c.drive, c.u0, c.run);
  SuiteOutcome o;
  o.passed = r.passed();
  o.table = "min_s_t,s_initial,s_final,paired_max_s,paired_M_front,status,paired_status\n" +
            row({r.min_s_t, r.s_initial, r.s_final, r.paired_max_s, r.paired_M_front}) + ',' +
            to_string(r.status) + ',' + to_string(r.paired_status) + '\n';
  std::ostringstream rep;
  rep << "min s_t " << r.min_s_t << " >= -1e-12: " << (r.monotone ? "ok" : "FAIL") << "\n"
      << "s(T) " << r.s_final << " > s0 " << r.s_initial << ": " << (r.grew ? "ok" : "FAIL") << "\n"
      << "paired max s " << r.paired_max_s << " <= M_front " << r.paired_M_front << ": "
      << (r.paired_bounded ? "ok" : "FAIL") << "\n";
  o.report = rep.str();
  return o;
}

SuiteOutcome bounds_suite() {
  SuiteOutcome o;
  o.passed = true;
  o.table = "preset,max_s,M_front,status\n";
  std::ostringstream rep;
  for (const std::string& name : preset_names()) {
    const ConfigFile c = preset(name);
    if (!c.drive.is_constant() || !(c.params.alpha > 0.0) || !c.sweep.empty()) continue;
    try {
      validate_config(c);
    } catch (const InvalidInput&) {
      continue;
    }
    const RunResult r = run_config(c);
    const double cap = apriori_front_cap(c.params, c.drive, c.u0).M_front;
    const bool ok = r.max_s() <= cap && r.status != RunStatus::InvariantViolation;
    o.passed = o.passed && ok;
    o.table += name + ',' + row({r.max_s(), cap}) + ',' + to_string(r.status) + '\n';
    rep << name << ": max s " << r.max_s() << " <= M_front " << cap << ": " << (ok ? "ok" : "FAIL") << "\n";
  }
  o.report = rep.str();
  return o;
}

}  // namespace

std::vector<std::string> suite_names() { return {"alpha0", "bounds", "epsilon", "mms"}; }

SuiteOutcome run_suite(const std::string& suite) {
  if (suite == "mms") return mms_suite();
  if (suite == "epsilon") return epsilon_suite();
  if (suite == "alpha0") return alpha0_suite();
  if (suite == "bounds") return bounds_suite();
  throw InvalidInput("unknown suite '" + suite + "' (expected mms, epsilon, alpha0 or bounds)");
}

int cmd_verify(const std::string& suite, const Options& opts, std::ostream& out,
               std::ostream& err) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    err << "error: unknown suite '" << suite << "'\n";
    return kExitConfig;
  }
  std::string dir = opts.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = env && *env ? env : "out";
  }
  dir = (fs::path(dir) / ("verify_" + suite)).string();
  const SuiteOutcome o = run_suite(suite);
  fs::create_directories(dir);
  write_file(fs::path(dir) / (suite + ".csv"), o.table);
  out << o.report << suite << ": " << (o.passed ? "PASS" : "FAIL") << "\n";
  return o.passed ? kExitOk : kExitStudy;
}

}  // namespace frontsim::cli
