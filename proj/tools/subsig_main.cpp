// Command-line driver: verification suites, density pairs from config
// files, the oscillator oracle, and report rendering.
//
// Exit codes: 0 all checks pass, 1 a check failed or a numeric error
// occurred, 2 usage or configuration error.

#include <CLI11.hpp>
#include <iostream>

#include "subsig/config.hpp"
#include "subsig/suites.hpp"

using namespace subsig;

namespace {

struct CliOptions {
  std::string suite;
  bool all = false;
  int n = 0, a = 0, k = -1, trials = 0;
  uint64_t seed = 1;
  std::string mode, config_path, json_path, csv_path;
  double tol = 0;
  bool timings = false;
};

void apply_config(SuiteParams& p, const Config& cfg) {
  if (cfg.has("suite")) p.suite = cfg.get_string("suite");
  if (cfg.has("n")) p.n = int(cfg.get_int("n"));
  if (cfg.has("a")) p.a = int(cfg.get_int("a"));
  if (cfg.has("k")) p.k = int(cfg.get_int("k"));
  if (cfg.has("trials")) p.trials = int(cfg.get_int("trials"));
  if (cfg.has("seed")) p.seed = uint64_t(cfg.get_int("seed"));
  if (cfg.has("mode")) p.mode = cfg.get_string("mode");
  if (cfg.has("tol")) p.tol = cfg.get_double("tol");
}

void print_suite_line(const SuiteReport& rep) {
  int failures = 0;
  for (const auto& t : rep.trials)
    if (!t.pass) ++failures;
  std::printf("%-20s %s  trials=%zu failures=%d max_err=%.3g  (%.0f ms)\n", rep.suite.c_str(),
              rep.pass ? "PASS" : "FAIL", rep.trials.size(), failures, rep.max_err, rep.wall_ms);
}

int cmd_verify(const CliOptions& opt) {
  SuiteParams base;
  base.n = opt.n;
  base.a = opt.a;
  base.k = opt.k;
  base.trials = opt.trials;
  base.seed = opt.seed;
  base.mode = opt.mode;
  base.tol = opt.tol;
  if (!opt.config_path.empty()) apply_config(base, Config::parse_file(opt.config_path));
  if (!opt.suite.empty()) base.suite = opt.suite;

  std::vector<SuiteReport> reports;
  if (opt.all) {
    for (const auto& name : suite_names()) {
      SuiteParams p = base;
      p.suite = name;
      p.mode.clear();  // suite defaults; per-suite modes differ
      p.n = 0;
      p.k = -1;
      reports.push_back(run_suite(p));
      print_suite_line(reports.back());
    }
  } else {
    if (base.suite.empty())
      throw std::invalid_argument("verify: --suite NAME or --all required");
    reports.push_back(run_suite(base));
    print_suite_line(reports.back());
  }

  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;
  if (!opt.json_path.empty()) {
    if (reports.size() == 1) {
      write_json_file(reports[0].to_json(opt.timings), opt.json_path);
    } else {
      json all{{"schema", kReportSchema}, {"kind", "verify-all"}, {"pass", pass}};
      all["suites"] = json::array();
      for (const auto& r : reports) all["suites"].push_back(r.to_json(opt.timings));
      write_json_file(all, opt.json_path);
    }
  }
  if (!opt.csv_path.empty()) {
    std::vector<std::string> lines{"suite,trial,pass,max_err,note"};
    for (const auto& r : reports)
      for (const auto& t : r.trials)
        lines.push_back(r.suite + "," + std::to_string(t.index) + "," +
                        (t.pass ? "1" : "0") + "," + scalar_ring<double>::str(t.max_err) + "," +
                        t.note);
    write_csv_file(lines, opt.csv_path);
  }
  return pass ? 0 : 1;
}

json density_report(const Config& cfg, double tol) {
  int n = int(cfg.get_int("n"));
  int a = cfg.has("a") ? int(cfg.get_int("a")) : 0;
  int k = int(cfg.get_int("k"));
  bool odd = cfg.has("odd") ? cfg.get_bool("odd") : (n % 2 == 1);
  if (cfg.has("mode") && cfg.get_string("mode") != "float")
    throw ConfigError("density configs run in float mode only");
  std::vector<double> angles = cfg.get_angles("angles");
  auto d = make_fixed_point<Cplx>(n, a, k, angles, odd);
  for (const char* key : {"RE", "REperp", "Rprime", "Rdoubleprime"}) {
    if (!cfg.has(key)) continue;
    auto m = mat_cast<Cplx>(cfg.get_matrix(key));
    if (std::string(key) == "RE") d.RE = m;
    if (std::string(key) == "REperp") d.REperp = m;
    if (std::string(key) == "Rprime") d.Rprime = m;
    if (std::string(key) == "Rdoubleprime") d.Rdoubleprime = m;
  }
  validate(d);

  Cplx lhs, rhs;
  if (odd) {
    auto pair = odd_density_pair(d);
    lhs = pair.lhs;
    rhs = pair.rhs;
  } else {
    lhs = lhs_density(d);
    rhs = rhs_density(d);
  }
  double abs_err = std::abs(lhs - rhs);
  double rel = abs_err / std::max({std::abs(lhs), std::abs(rhs), 1e-30});
  return json{{"schema", kReportSchema},
              {"kind", "density"},
              {"params",
               {{"n", n}, {"a", a}, {"k", k}, {"odd", odd}, {"angles", angles}}},
              {"lhs", {lhs.real(), lhs.imag()}},
              {"rhs", {rhs.real(), rhs.imag()}},
              {"abs_err", abs_err},
              {"rel_err", rel},
              {"tol", tol},
              {"pass", rel <= tol}};
}

int cmd_density(const CliOptions& opt) {
  if (opt.config_path.empty()) throw std::invalid_argument("density: --config FILE required");
  double tol = opt.tol > 0 ? opt.tol : 1e-8;
  json rep = density_report(Config::parse_file(opt.config_path), tol);
  std::printf("density n=%d k=%d %s: lhs=(%.12g,%.12g) rhs=(%.12g,%.12g) rel_err=%.3g  %s\n",
              rep["params"]["n"].get<int>(), rep["params"]["k"].get<int>(),
              rep["params"]["odd"].get<bool>() ? "odd" : "even", rep["lhs"][0].get<double>(),
              rep["lhs"][1].get<double>(), rep["rhs"][0].get<double>(),
              rep["rhs"][1].get<double>(), rep["rel_err"].get<double>(),
              rep["pass"].get<bool>() ? "PASS" : "FAIL");
  if (!opt.json_path.empty()) write_json_file(rep, opt.json_path);
  return rep["pass"].get<bool>() ? 0 : 1;
}

int cmd_mehler(double theta, double t, int grid, int levels, const CliOptions& opt) {
  configure_workers();
  double tol = opt.tol > 0 ? opt.tol : 1e-3;
  OscillatorSpec spec;
  spec.m = 2;
  spec.B = block_antisymmetric({theta});
  spec.npoints = grid;
  auto pts = fd_convergence_study(spec, t, levels);
  double closed = closed_form_trace_factor(spec.B, t);
  std::printf("closed form: %.12g\n", closed);
  std::printf("%12s %16s %12s\n", "spacing", "fd value", "error");
  for (const auto& p : pts) std::printf("%12.6g %16.12g %12.3g\n", p.spacing, p.value, p.error);
  bool pass = pts.back().error <= tol;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double ratio = pts[i].error / pts[i + 1].error;
    std::printf("refinement %zu -> %zu: error ratio %.2f\n", i, i + 1, ratio);
    pass = pass && ratio > 2.5 && ratio < 6.5;
  }
  std::printf("mehler-oracle single run: %s\n", pass ? "PASS" : "FAIL");
  if (!opt.csv_path.empty()) {
    std::vector<std::string> lines{"spacing,value,error"};
    for (const auto& p : pts)
      lines.push_back(scalar_ring<double>::str(p.spacing) + "," +
                      scalar_ring<double>::str(p.value) + "," +
                      scalar_ring<double>::str(p.error));
    write_csv_file(lines, opt.csv_path);
  }
  if (!opt.json_path.empty()) {
    json points = json::array();
    for (const auto& p : pts)
      points.push_back({{"spacing", p.spacing}, {"value", p.value}, {"error", p.error}});
    write_json_file(json{{"schema", kReportSchema},
                         {"kind", "mehler"},
                         {"params", {{"theta", theta}, {"t", t}, {"grid", grid}, {"levels", levels}}},
                         {"closed_form", closed},
                         {"points", points},
                         {"tol", tol},
                         {"pass", pass}},
                    opt.json_path);
  }
  return pass ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& files, const CliOptions& opt) {
  bool pass = true;
  std::vector<std::string> csv{"suite,trial,pass,max_err,note"};
  for (const auto& f : files) {
    std::ifstream is(f);
    if (!is) throw std::invalid_argument("report: cannot open " + f);
    json j = json::parse(is);
    auto render = [&](const json& r) {
      std::string name = r.contains("suite") ? r["suite"].get<std::string>()
                                             : r.value("kind", std::string("report"));
      bool p = r.value("pass", false);
      pass = pass && p;
      if (r.contains("summary")) {
        std::printf("%-20s %s  trials=%d failures=%d max_err=%.3g\n", name.c_str(),
                    p ? "PASS" : "FAIL", r["summary"]["trials"].get<int>(),
                    r["summary"]["failures"].get<int>(), r["summary"]["max_err"].get<double>());
        for (const auto& t : r["trials"])
          csv.push_back(name + "," + std::to_string(t["i"].get<int>()) + "," +
                        (t["pass"].get<bool>() ? "1" : "0") + "," +
                        scalar_ring<double>::str(t["max_err"].get<double>()) + "," +
                        t.value("note", std::string()));
      } else {
        std::printf("%-20s %s\n", name.c_str(), p ? "PASS" : "FAIL");
      }
    };
    if (j.contains("suites"))
      for (const auto& r : j["suites"]) render(r);
    else
      render(j);
  }
  if (!opt.csv_path.empty()) write_csv_file(csv, opt.csv_path);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-signature index density laboratory"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--tol", opt.tol, "tolerance override");
    cmd->add_option("--config", opt.config_path, "key = value config file");
    cmd->add_option("--json", opt.json_path, "write a JSON report");
    cmd->add_option("--csv", opt.csv_path, "write a CSV dump");
  };

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", opt.suite, "suite name");
  verify->add_flag("--all", opt.all, "run every suite");
  verify->add_option("--n", opt.n, "dimension override");
  verify->add_option("--a", opt.a, "fixed-set dimension override");
  verify->add_option("--k", opt.k, "subbundle rank override");
  verify->add_option("--trials", opt.trials, "trial count override");
  verify->add_option("--mode", opt.mode, "exact | float | nilpotent");
  verify->add_flag("--timings", opt.timings, "include wall time in the JSON report "
                                             "(breaks byte-for-byte reproducibility)");
  add_common(verify);

  CLI::App* density = app.add_subcommand("density", "compute a density pair from a config");
  add_common(density);

  CLI::App* mehler = app.add_subcommand("mehler", "finite-difference oscillator oracle");
  double theta = 0.5, t = 0.5;
  int grid = 33, levels = 3;
  mehler->add_option("--theta", theta, "rotation coupling");
  mehler->add_option("--t", t, "evolution time");
  mehler->add_option("--grid", grid, "coarsest grid points per axis (odd)");
  mehler->add_option("--levels", levels, "number of refinement levels");
  add_common(mehler);

  CLI::App* report = app.add_subcommand("report", "summarize JSON reports");
  std::vector<std::string> report_files;
  report->add_option("files", report_files, "JSON report files")->required();
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(opt);
    if (density->parsed()) return cmd_density(opt);
    if (mehler->parsed()) return cmd_mehler(theta, t, grid, levels, opt);
    if (report->parsed()) return cmd_report(report_files, opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
