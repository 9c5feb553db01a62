// hypercon: numerical toolkit for ground-state perturbation bounds.
//
// Subcommands
//   constants  closed-form constant report for (c, kappa, nu, M)
//   solve      eigensolve a measure/potential pair, report lambda0/gap/psi
//   verify     bound battery on a named instance
//   gaussian   quadratic-potential sharpness experiments (both signs)
//   eckmann    named constructive example pipeline
//   herbst     log-moment curve for a named weight function
//   sweep      parallel map of configs from a JSON file
//
// Bare key=value arguments are accepted as option shorthand.
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 bound violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypercon/eckmann.hpp"
#include "hypercon/instances.hpp"
#include "hypercon/potentials.hpp"
#include "hypercon/semigroup.hpp"

namespace {

using nlohmann::ordered_json;
using namespace hypercon;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBoundViolation = 4;

struct Output {
  std::string json_path;  // empty = stdout
  std::string csv_path;
};

void emit(const ordered_json& j, const Output& out) {
  if (out.json_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out.json_path);
    f << j.dump(2) << "\n";
  }
}

void emit_csv(const std::string& path, std::span<const double> t,
              std::span<const double> value, std::span<const double> bound) {
  std::ofstream f(path);
  f << "t,value,bound\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    f << t[i] << "," << value[i] << ","
      << (i < bound.size() ? bound[i] : 0.0) << "\n";
  }
}

bool all_ok(const std::vector<CheckRecord>& records) {
  for (const auto& r : records)
    if (!r.ok) return false;
  return true;
}

ordered_json constants_report(const LsiParams& p, double M) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "constants";
  j["params"] = {{"c", p.c}, {"kappa", p.kappa}, {"nu", p.nu}, {"M", M}};

  const IntervalRoots ir = interval_roots(p);
  const MomentRoots mr = moment_roots(p);
  j["interval"] = {{"q0", ir.q0}, {"p0", ir.p0}, {"a_nu", ir.a_nu}};
  j["moments"] = {{"s0", mr.s0}, {"r0", mr.r0}, {"b_kappa", mr.b_kappa}};
  j["c_nu"] = sobolev_coefficient(p);
  j["ell_fixed_point"] = ell_fixed_point(p);
  j["ell_plus_t_minimizer"] = ell_plus_t_minimizer(p);

  const double tstar = ell_fixed_point(p);
  j["dlsi_defect_at_fixed_point"] = dlsi_defect(p, M, tstar, tstar);

  const GapConstants g = aida_gap_constants(p, M);
  j["gap_constants"] = {{"a", g.a},
                        {"sigma", g.sigma},
                        {"s1", g.s1},
                        {"alpha1", g.alpha1},
                        {"beta1", g.beta1},
                        {"beta2", g.beta2},
                        {"beta3", g.beta3},
                        {"beta4", g.beta4},
                        {"beta5", g.beta5},
                        {"d1", g.d1},
                        {"e1", g.e1},
                        {"defect", g.defect},
                        {"log_R", g.log_R},
                        {"log_K2", g.log_K2},
                        {"log_eps2", g.log_eps2},
                        {"gamma1_bound", g.gamma1_bound},
                        {"log_gamma1_bound", g.log_gamma1_bound}};
  const MainTheoremConstants mt = main_theorem_constants(p, M);
  j["main_theorem"] = {{"c1_bound", mt.c1_bound},
                       {"log_c1_bound", mt.log_c1_bound},
                       {"alpha", mt.alpha},
                       {"beta", mt.beta},
                       {"gap_bound", mt.gap_bound},
                       {"log_gap_bound", mt.log_gap_bound}};
  return j;
}

ScalarFn potential_from_spec(const std::string& name, const ordered_json& opts) {
  auto get = [&](const char* key, double dflt) {
    return opts.contains(key) ? opts[key].get<double>() : dflt;
  };
  if (name == "harmonic") return harmonic_potential(get("a", 1.0));
  if (name == "quartic") return quartic_potential(get("lambda", 1.0));
  if (name == "power") return power_potential(get("lambda", 1.0), get("r", 1.0));
  if (name == "expgrowth") return exp_growth_potential(get("c", 1.0));
  if (name == "super") return super_potential(get("alpha", 0.5));
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "polynomial") {
    std::vector<double> coeffs;
    if (opts.contains("coeffs"))
      coeffs = opts["coeffs"].get<std::vector<double>>();
    return polynomial_potential(coeffs);
  }
  if (name == "csv") return load_tabulated(opts.at("path").get<std::string>());
  throw ConfigError("unknown potential: " + name);
}

ScalarFn density_from_spec(const std::string& name, const ordered_json& opts) {
  auto get = [&](const char* key, double dflt) {
    return opts.contains(key) ? opts[key].get<double>() : dflt;
  };
  if (name == "gaussian") return gaussian_density(get("omega", 1.0));
  if (name == "lebesgue" || name == "constant")
    return constant_density(get("value", 1.0));
  if (name == "csv") return load_tabulated(opts.at("path").get<std::string>());
  throw ConfigError("unknown density: " + name);
}

Instance named_instance(const std::string& name) {
  if (name == "gaussian_quadratic") return make_gaussian_quadratic();
  if (name == "bounded_tilt") return make_bounded_tilt();
  if (name == "quartic_relative") return make_quartic_relative();
  if (name == "malrieu_roberto_relative") return make_malrieu_roberto_relative();
  if (name == "cosine_ripple") return make_cosine_ripple();
  throw ConfigError("unknown instance: " + name);
}

int run_verify(const std::string& instance_name, const Output& out) {
  Instance inst = named_instance(instance_name);
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "verify";
  j["instance"] = inst.name;
  j["lambda0"] = inst.lambda0();
  j["gap"] = inst.gsm.state.gap;
  j["M"] = inst.M;
  j["log_M"] = inst.log_M;

  std::vector<CheckRecord> records;
  const Lambda0Certificate cert = lambda0_certificate(inst);
  j["lambda0_certificate"] = {{"federbush_lower", cert.federbush_lower},
                              {"aida_upper", cert.aida_upper},
                              {"mean_upper", cert.mean_upper},
                              {"sandwich_ok", cert.sandwich_ok},
                              {"product_residual", cert.product_residual},
                              {"product_ok", cert.product_ok}};

  const WkbResidual wkb = wkb_residual(inst.gsm, inst.V);
  j["wkb_residual"] = {{"l2_m", wkb.l2_m},
                       {"linf_interior", wkb.linf_interior},
                       {"linf_bulk", wkb.linf_bulk}};
  j["aida_w31_residual"] = aida_identity_residual(
      inst.gsm, inst.V, [](double) { return 1.0; }, [](double) { return 0.0; });
  j["intertwining_residual"] = intertwining_residual(inst);

  const MomentRoots mr = moment_roots(inst.params);
  for (double fr : {0.25, 0.75})
    for (double fs : {0.25, 0.75})
      records.push_back(moment_product_check(inst, fr * mr.r0, fs * mr.s0));
  for (double delta : {0.1, 0.5, 1.0})
    records.push_back(
        local_moment_product_check(inst, 0.5 * mr.r0, 0.5 * mr.s0, delta));
  for (auto& r : psi_inverse_bound_check(inst, 0.5 * mr.s0)) records.push_back(r);
  for (auto& r : distribution_bound_checks(inst, 0.1, 2.0)) records.push_back(r);
  const double a = 2.0 * sobolev_coefficient(inst.params) * b_kappa(inst.params);
  for (auto& r :
       dlsi_check(inst, a, a, default_test_functions(inst.m.grid)))
    records.push_back(r);

  j["checks"] = to_json(records);
  const bool ok = all_ok(records) && cert.sandwich_ok && cert.product_ok;
  j["ok"] = ok;
  emit(j, out);
  return ok ? 0 : kExitBoundViolation;
}

int run_gaussian(const std::string& sign, double nu, double p1, const Output& out) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "gaussian";
  bool ok = true;
  if (sign == "negative" || sign == "both") {
    const BlowupReport rep = blowup_experiment(nu, p1);
    j["negative"] = {{"nu", rep.nu},
                     {"p1", rep.p1},
                     {"eps", rep.eps},
                     {"a", rep.a},
                     {"s_start", rep.s_start},
                     {"s_cross", rep.s_cross},
                     {"s_probe", rep.s_probe},
                     {"t_cross", rep.t_cross},
                     {"t_probe", rep.t_probe},
                     {"f0_widen_factor", rep.f0_widen_factor},
                     {"enu_widen_factor", rep.enu_widen_factor},
                     {"divergence_factor", rep.divergence_factor},
                     {"control", rep.control.to_json()},
                     {"ok", rep.ok}};
    ok = ok && rep.ok;
  }
  if (sign == "positive" || sign == "both") {
    // widening behavior of int psi^{-s} dm_omega around the threshold s = 2
    ordered_json pos;
    for (double s : {1.9, 2.1}) {
      ordered_json row;
      row["s"] = s;
      for (double L : {8.0, 16.0}) {
        Instance inst = make_gaussian_quadratic(1.0, 3.0, L,
                                                static_cast<int>(200 * L) + 1);
        row["L" + std::to_string(static_cast<int>(L))] =
            std::exp(log_lp_norm_exp(inst.m, inst.gsm.F, s) * s);
      }
      const double ratio = row["L16"].get<double>() / row["L8"].get<double>();
      row["ratio"] = ratio;
      row["diverges"] = ratio > 10.0;
      pos.push_back(row);
    }
    j["positive"] = pos;
    ok = ok && pos[0]["diverges"].get<bool>() == false &&
         pos[1]["diverges"].get<bool>() == true;
  }
  j["ok"] = ok;
  emit(j, out);
  return ok ? 0 : kExitBoundViolation;
}

int run_herbst(const std::string& weight, const Output& out) {
  Instance inst = make_gaussian_quadratic();
  std::vector<double> g(inst.m.size());
  if (weight == "linear") {
    for (int i = 0; i < inst.m.size(); ++i) g[i] = inst.m.grid.nodes[i];
  } else if (weight == "logpsi") {
    g = inst.gsm.F;
  } else {
    throw ConfigError("herbst: weight must be 'linear' or 'logpsi'");
  }
  const MomentRoots mr = moment_roots(inst.params);
  std::vector<double> ts;
  for (double t = -0.9 * mr.r0; t <= 0.9 * mr.s0; t += 0.05)
    if (std::abs(t) >= 1e-3) ts.push_back(t);
  const HerbstCurve curve = herbst_curve(inst.m, g, ts);

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "herbst";
  j["weight"] = weight;
  j["mean_g"] = curve.mean_g;
  j["limit_at_zero"] = curve.limit_at_zero;
  j["max_identity_residual"] = curve.max_identity_residual;
  j["ok"] = curve.max_identity_residual < 1e-3 &&
            std::abs(curve.limit_at_zero - curve.mean_g) < 1e-4;
  if (!out.csv_path.empty()) emit_csv(out.csv_path, curve.t, curve.u, curve.r);
  emit(j, out);
  return j["ok"].get<bool>() ? 0 : kExitBoundViolation;
}

int run_config(const ordered_json& cfg, const Output& out);

int run_sweep(const ordered_json& cfg, const Output& out, int jobs) {
  if (!cfg.contains("runs") || !cfg["runs"].is_array())
    throw ConfigError("sweep: config must contain a 'runs' array");
  const auto& runs = cfg["runs"];
  if (jobs <= 0) {
    if (const char* env = std::getenv("HYPERCON_JOBS")) jobs = std::atoi(env);
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
  }

  std::vector<ordered_json> results(runs.size());
  std::vector<int> codes(runs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) break;
      ordered_json sub;
      Output null_out;
      null_out.json_path = "/dev/null";
      try {
        // re-dispatch, capturing the sub-report
        std::stringstream buf;
        auto* old = std::cout.rdbuf(buf.rdbuf());
        Output capture;  // stdout -> buf
        codes[i] = run_config(runs[i], capture);
        std::cout.rdbuf(old);
        results[i] = ordered_json::parse(buf.str());
      } catch (const std::exception& e) {
        results[i] = {{"error", e.what()}};
        codes[i] = kExitNumerical;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min<std::size_t>(jobs, runs.size()); ++t)
    pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "sweep";
  j["runs"] = results;
  int code = 0;
  for (int c : codes) code = std::max(code, c);
  j["ok"] = code == 0;
  emit(j, out);
  return code;
}

int run_solve(const ordered_json& cfg, const Output& out) {
  const std::string dname = cfg.value("density", "gaussian");
  const std::string vname = cfg.value("potential", "harmonic");
  const double x_min = cfg.value("x_min", -8.0);
  const double x_max = cfg.value("x_max", 8.0);
  const int n = cfg.value("n", 2001);
  const bool normalize = cfg.value("normalize", true);

  const Grid g = Grid::uniform(x_min, x_max, n);
  WeightedGridMeasure m =
      build_measure(g, density_from_spec(dname, cfg), normalize);
  const std::vector<double> V = sample(g, potential_from_spec(vname, cfg));
  const GroundState gs = ground_state(schrodinger_operator(m, V));

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "solve";
  j["grid"] = {{"x_min", x_min}, {"x_max", x_max}, {"n", n}, {"h", g.h}};
  j["lambda0"] = gs.lambda0;
  j["lambda1"] = gs.lambda1;
  j["gap"] = gs.gap;
  j["tail_mass"] = boundary_tail_mass(m);
  double psi_max = 0.0, psi_min = std::numeric_limits<double>::infinity();
  for (double p : gs.psi) {
    psi_max = std::max(psi_max, p);
    psi_min = std::min(psi_min, p);
  }
  j["psi"] = {{"max", psi_max}, {"min", psi_min}};
  j["ok"] = true;
  emit(j, out);
  return 0;
}

int run_config(const ordered_json& cfg, const Output& out) {
  const std::string cmd = cfg.value("command", "");
  if (cmd == "constants") {
    LsiParams p{cfg.value("c", 0.5), cfg.value("kappa", 1.0), cfg.value("nu", 2.0)};
    emit(constants_report(p, cfg.value("M", 1.0)), out);
    return 0;
  }
  if (cmd == "solve") return run_solve(cfg, out);
  if (cmd == "verify") return run_verify(cfg.value("instance", "gaussian_quadratic"), out);
  if (cmd == "gaussian")
    return run_gaussian(cfg.value("sign", "both"), cfg.value("nu", 2.0),
                        cfg.value("p1", 8.0), out);
  if (cmd == "eckmann") {
    const std::string name = cfg.value("example", "power");
    ordered_json j;
    if (name == "malrieu_roberto") {
      j = malrieu_roberto(cfg.value("beta", 1.0)).to_json();
    } else if (name == "toy") {
      j = toy_model_constants(cfg.value("dimension", 1), cfg.value("lambda", 1.0),
                              cfg.value("A_norm", 0.0))
              .to_json();
    } else {
      j = run_eckmann_example(name, cfg.value("r", cfg.value("alpha", 0.0)),
                              cfg.value("lambda", 0.0))
              .to_json();
    }
    j["schema"] = 1;
    emit(j, out);
    return j.value("ok", false) ? 0 : kExitBoundViolation;
  }
  if (cmd == "herbst") return run_herbst(cfg.value("weight", "linear"), out);
  if (cmd == "sweep") return run_sweep(cfg, out, cfg.value("jobs", 0));
  throw ConfigError("unknown command: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypercon: ground-state perturbation bound toolkit"};
  app.require_subcommand(0, 1);

  // Accept bare key=value tokens as option shorthand.
  std::vector<std::string> args;
  std::string subcommand;
  for (int i = 1; i < argc; ++i) {
    std::string tok = argv[i];
    if (i == 1 && !tok.empty() && tok[0] != '-') {
      subcommand = tok;
      continue;
    }
    if (!tok.empty() && tok[0] != '-' && tok.find('=') != std::string::npos)
      tok = "--" + tok;
    args.push_back(tok);
  }

  std::string config_path, json_out, csv_out;
  double c = 0.5, kappa = 1.0, nu = 2.0, M = 1.0, p1 = 8.0, beta = 1.0,
         lambda = 1.0, r = 2.0, alpha = 0.5, a_norm = 0.0;
  int n = 2001, dim = 1, jobs = 0;
  double x_min = -8.0, x_max = 8.0;
  std::string instance = "gaussian_quadratic", sign = "both", example = "power",
              weight = "linear", density = "gaussian", potential = "harmonic";

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", json_out, "write the JSON report here");
  app.add_option("--csv", csv_out, "write curve data here (t,value,bound)");
  app.add_option("--c", c, "Sobolev coefficient");
  app.add_option("--kappa", kappa, "e^{V} integrability exponent");
  app.add_option("--nu", nu, "e^{-V} integrability exponent");
  app.add_option("--M", M, "controlling functional value");
  app.add_option("--p1", p1, "index beyond p0 for the blow-up experiment");
  app.add_option("--beta", beta, "x sin x tilt strength");
  app.add_option("--lambda", lambda, "potential scale");
  app.add_option("--r", r, "power-growth exponent (V = lambda |x|^{2r})");
  app.add_option("--alpha", alpha, "super-exponential rate");
  app.add_option("--A_norm", a_norm, "quadratic-form norm for the toy model");
  app.add_option("--n", n, "grid nodes");
  app.add_option("--dimension", dim, "toy-model dimension");
  app.add_option("--jobs", jobs, "sweep parallelism (HYPERCON_JOBS fallback)");
  app.add_option("--x_min", x_min, "grid left endpoint");
  app.add_option("--x_max", x_max, "grid right endpoint");
  app.add_option("--instance", instance, "named verification instance");
  app.add_option("--sign", sign, "gaussian experiment: negative|positive|both");
  app.add_option("--example", example,
                 "eckmann example: power|polynomial|slow_growth|exponential|super|"
                 "malrieu_roberto|toy");
  app.add_option("--weight", weight, "herbst weight: linear|logpsi");
  app.add_option("--density", density, "solve: density name");
  app.add_option("--potential", potential, "solve: potential name");

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  Output out{json_out, csv_out};
  try {
    ordered_json cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config: " + config_path);
      cfg = ordered_json::parse(f);
      if (!subcommand.empty() && !cfg.contains("command"))
        cfg["command"] = subcommand;
    } else {
      if (subcommand.empty()) {
        std::cout << app.help();
        return 0;
      }
      cfg["command"] = subcommand;
      cfg["c"] = c;
      cfg["kappa"] = kappa;
      cfg["nu"] = nu;
      cfg["M"] = M;
      cfg["p1"] = p1;
      cfg["beta"] = beta;
      cfg["lambda"] = lambda;
      if (subcommand == "eckmann" && example == "power") cfg["r"] = r;
      if (subcommand == "eckmann" && example == "super") cfg["alpha"] = alpha;
      cfg["A_norm"] = a_norm;
      cfg["n"] = n;
      cfg["dimension"] = dim;
      cfg["jobs"] = jobs;
      cfg["x_min"] = x_min;
      cfg["x_max"] = x_max;
      cfg["instance"] = instance;
      cfg["sign"] = sign;
      cfg["example"] = example;
      cfg["weight"] = weight;
      cfg["density"] = density;
      cfg["potential"] = potential;
    }
    return run_config(cfg, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
