#include "spinwit/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spinwit/dynamics.hpp"

namespace spinwit {

namespace {

constexpr double kPi = 3.14159265358979323846;

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }
}

std::string sub(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

double get_double(const json& obj, const std::string& where, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(sub(where, key), "must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(sub(where, key), "must be an integer");
  return v.get<int>();
}

std::uint64_t get_uint64(const json& obj, const std::string& where, const char* key,
                         std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    fail(sub(where, key), "must be a nonnegative integer");
  if (v.is_number_integer() && v.get<long long>() < 0)
    fail(sub(where, key), "must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(sub(where, key), "must be a string");
  return v.get<std::string>();
}

std::string fmt_range(double max_stop) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "must satisfy 0 <= start <= stop <= %g", max_stop);
  return buf;
}

// max_stop is 1 when p is a probability weight and larger when it is a
// noise-to-signal ratio (the noisy twisted GHZ family).
SweepGrid parse_p_grid(const json& params, const std::string& where, SweepGrid g,
                       double max_stop) {
  if (!params.contains("p_grid")) return g;
  const json& v = params.at("p_grid");
  const std::string here = sub(where, "p_grid");
  if (!v.is_object()) fail(here, "must be an object {start, stop, step}");
  check_keys(v, here, {"start", "stop", "step"});
  g.start = get_double(v, here, "start", g.start);
  g.stop = get_double(v, here, "stop", g.stop);
  g.step = get_double(v, here, "step", g.step);
  if (!(g.step > 0.0)) fail(sub(here, "step"), "must be positive");
  if (g.start < 0.0 || g.stop > max_stop || g.start > g.stop)
    fail(here, fmt_range(max_stop));
  return g;
}

StateSpec parse_state(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "must be an object with a \"type\" key");
  const std::string type = get_string(v, where, "type", "");
  if (type == "ghz") {
    check_keys(v, where, {"type", "num_qubits"});
    return GhzSpec{get_int(v, where, "num_qubits", 3)};
  }
  if (type == "twisted-ghz") {
    check_keys(v, where, {"type", "k"});
    return TwistedGhzSpec{get_int(v, where, "k", 1)};
  }
  if (type == "twisted-w") {
    check_keys(v, where, {"type", "k"});
    return TwistedWSpec{get_int(v, where, "k", 1)};
  }
  if (type == "rho-nk") {
    check_keys(v, where, {"type", "num_qubits", "k"});
    return RhoNkSpec{get_int(v, where, "num_qubits", 6), get_int(v, where, "k", 2)};
  }
  if (type == "noisy-twisted-ghz") {
    check_keys(v, where, {"type", "k", "p"});
    return NoisyTwistedGhzSpec{get_int(v, where, "k", 1), get_double(v, where, "p", 0.0)};
  }
  if (type == "twisted-mixture") {
    check_keys(v, where, {"type", "k", "p"});
    return TwistedMixtureSpec{get_int(v, where, "k", 1), get_double(v, where, "p", 0.5)};
  }
  if (type == "spin-coherent") {
    check_keys(v, where, {"type", "num_qubits", "direction"});
    Vector3d dir(0.0, 0.0, 1.0);
    if (v.contains("direction")) {
      const json& d = v.at("direction");
      if (!d.is_array() || d.size() != 3 || !d[0].is_number() || !d[1].is_number() ||
          !d[2].is_number())
        fail(sub(where, "direction"), "must be an array of three numbers");
      dir = Vector3d(d[0].get<double>(), d[1].get<double>(), d[2].get<double>());
    }
    return SpinCoherentSpec{get_int(v, where, "num_qubits", 3), dir};
  }
  if (type == "asym-init") {
    check_keys(v, where, {"type", "half"});
    return AsymInitSpec{get_int(v, where, "half", 4)};
  }
  fail(sub(where, "type"),
       "must be one of ghz, twisted-ghz, twisted-w, rho-nk, noisy-twisted-ghz, "
       "twisted-mixture, spin-coherent, asym-init");
}

void parse_optimizer(const json& params, const std::string& where, OptimizerConfig& opt) {
  if (!params.contains("optimizer")) return;
  const json& v = params.at("optimizer");
  const std::string here = sub(where, "optimizer");
  if (!v.is_object()) fail(here, "must be an object");
  check_keys(v, here, {"restarts", "max_sweeps", "tol"});
  opt.restarts = get_int(v, here, "restarts", opt.restarts);
  opt.max_sweeps = get_int(v, here, "max_sweeps", opt.max_sweeps);
  opt.tol = get_double(v, here, "tol", opt.tol);
  if (opt.restarts < 1) fail(sub(here, "restarts"), "must be at least 1");
  if (opt.max_sweeps < 1) fail(sub(here, "max_sweeps"), "must be at least 1");
  if (!(opt.tol > 0.0)) fail(sub(here, "tol"), "must be positive");
}

void require_even_qubits(int n, const char* field) {
  if (n < 2 || n > kDefaultQubitCap || n % 2 != 0)
    fail(field, "must be an even qubit number within the register cap");
}

}  // namespace

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON (" + e.what() + ")");
  }
  return doc;
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
  check_keys(doc, "", {"schema", "scenario", "parameters", "output"});
  if (!doc.contains("schema")) fail("schema", "required");
  if (!doc.at("schema").is_number_integer() ||
      doc.at("schema").get<int>() != kConfigSchemaVersion)
    fail("schema", "unsupported version (expected 1)");

  ScenarioConfig cfg;
  cfg.scenario = get_string(doc, "", "scenario", "");
  const std::vector<std::string> known = {"rho-nk",           "twisted-ghz-noise",
                                          "twisted-mixture",  "one-axis-twisting",
                                          "ising-lindblad",   "custom-state"};
  if (std::find(known.begin(), known.end(), cfg.scenario) == known.end())
    fail("scenario", "must be one of rho-nk, twisted-ghz-noise, twisted-mixture, "
                     "one-axis-twisting, ising-lindblad, custom-state");

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    if (!out.is_object()) fail("output", "must be an object");
    check_keys(out, "output", {"dir", "format"});
    cfg.out_dir = get_string(out, "output", "dir", cfg.out_dir);
    cfg.format = get_string(out, "output", "format", cfg.format);
  }
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
    fail("output.format", "must be csv, json or both");

  const json params = doc.contains("parameters") ? doc.at("parameters") : json::object();
  if (!params.is_object()) fail("parameters", "must be an object");
  const std::string w = "parameters";
  cfg.seed = get_uint64(params, w, "seed", cfg.seed);
  cfg.threads = get_int(params, w, "threads", cfg.threads);
  if (cfg.threads < 0) fail("parameters.threads", "must be nonnegative");
  parse_optimizer(params, w, cfg.optimizer);

  if (cfg.scenario == "rho-nk") {
    check_keys(params, w, {"seed", "threads", "optimizer", "num_qubits", "k"});
    cfg.num_qubits = get_int(params, w, "num_qubits", 6);
    cfg.k = get_int(params, w, "k", 2);
    if (cfg.num_qubits < 1 || cfg.num_qubits > kDefaultQubitCap)
      fail("parameters.num_qubits", "out of range");
    if (cfg.k < 1 || cfg.k > cfg.num_qubits)
      fail("parameters.k", "must satisfy 1 <= k <= num_qubits");
  } else if (cfg.scenario == "twisted-ghz-noise" || cfg.scenario == "twisted-mixture") {
    check_keys(params, w, {"seed", "threads", "optimizer", "k", "p_grid"});
    cfg.k = get_int(params, w, "k", 1);
    if (cfg.k < 1 || 3 * cfg.k > kDefaultQubitCap)
      fail("parameters.k", "must keep 3k within the register cap");
    // The noise sweep covers the ratio range where collective detection dies
    // before local detection does; the mixture sweep is a probability.
    const bool noise = cfg.scenario == "twisted-ghz-noise";
    cfg.p_grid = parse_p_grid(params, w, noise ? SweepGrid{0.0, 10.0, 0.01} : SweepGrid{},
                              noise ? 1000.0 : 1.0);
    cfg.num_qubits = 3 * cfg.k;
  } else if (cfg.scenario == "one-axis-twisting") {
    check_keys(params, w,
               {"seed", "threads", "optimizer", "num_qubits", "t_stop", "step", "stride",
                "coupling"});
    cfg.num_qubits = get_int(params, w, "num_qubits", 8);
    require_even_qubits(cfg.num_qubits, "parameters.num_qubits");
    cfg.t_stop = get_double(params, w, "t_stop", 2.0 * kPi);
    cfg.step = get_double(params, w, "step", cfg.step);
    cfg.stride = get_int(params, w, "stride", cfg.stride);
    cfg.coupling = get_double(params, w, "coupling", cfg.coupling);
  } else if (cfg.scenario == "ising-lindblad") {
    check_keys(params, w,
               {"seed", "threads", "optimizer", "num_qubits", "alpha", "field", "gamma",
                "coupling", "t_stop", "step", "stride"});
    cfg.num_qubits = get_int(params, w, "num_qubits", 8);
    require_even_qubits(cfg.num_qubits, "parameters.num_qubits");
    cfg.alpha = get_double(params, w, "alpha", 0.2);
    cfg.field = get_double(params, w, "field", 1.0);
    cfg.gamma = get_double(params, w, "gamma", 0.01);
    cfg.coupling = get_double(params, w, "coupling", cfg.coupling);
    cfg.t_stop = get_double(params, w, "t_stop", 10.0);
    cfg.step = get_double(params, w, "step", cfg.step);
    cfg.stride = get_int(params, w, "stride", cfg.stride);
    if (cfg.gamma < 0.0) fail("parameters.gamma", "must be nonnegative");
  } else {  // custom-state
    check_keys(params, w, {"seed", "threads", "optimizer", "state"});
    if (!params.contains("state")) fail("parameters.state", "required");
    cfg.state = parse_state(params.at("state"), "parameters.state");
  }

  if (cfg.scenario == "one-axis-twisting" || cfg.scenario == "ising-lindblad") {
    if (!(cfg.t_stop > 0.0)) fail("parameters.t_stop", "must be positive");
    if (!(cfg.step > 0.0)) fail("parameters.step", "must be positive");
    if (cfg.stride < 1) fail("parameters.stride", "must be at least 1");
  }
  return cfg;
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  json params{{"seed", cfg.seed}, {"threads", cfg.threads}};
  params["optimizer"] = {{"restarts", cfg.optimizer.restarts},
                         {"max_sweeps", cfg.optimizer.max_sweeps},
                         {"tol", cfg.optimizer.tol}};
  if (cfg.scenario == "rho-nk") {
    params["num_qubits"] = cfg.num_qubits;
    params["k"] = cfg.k;
  } else if (cfg.scenario == "twisted-ghz-noise" || cfg.scenario == "twisted-mixture") {
    params["k"] = cfg.k;
    params["p_grid"] = {{"start", cfg.p_grid.start},
                        {"stop", cfg.p_grid.stop},
                        {"step", cfg.p_grid.step}};
  } else if (cfg.scenario == "one-axis-twisting") {
    params["num_qubits"] = cfg.num_qubits;
    params["t_stop"] = cfg.t_stop;
    params["step"] = cfg.step;
    params["stride"] = cfg.stride;
    params["coupling"] = cfg.coupling;
  } else if (cfg.scenario == "ising-lindblad") {
    params["num_qubits"] = cfg.num_qubits;
    params["alpha"] = cfg.alpha;
    params["field"] = cfg.field;
    params["gamma"] = cfg.gamma;
    params["coupling"] = cfg.coupling;
    params["t_stop"] = cfg.t_stop;
    params["step"] = cfg.step;
    params["stride"] = cfg.stride;
  } else if (cfg.state) {
    json s;
    std::visit(
        [&](const auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, GhzSpec>)
            s = {{"type", "ghz"}, {"num_qubits", spec.num_qubits}};
          else if constexpr (std::is_same_v<T, TwistedGhzSpec>)
            s = {{"type", "twisted-ghz"}, {"k", spec.k}};
          else if constexpr (std::is_same_v<T, TwistedWSpec>)
            s = {{"type", "twisted-w"}, {"k", spec.k}};
          else if constexpr (std::is_same_v<T, RhoNkSpec>)
            s = {{"type", "rho-nk"}, {"num_qubits", spec.num_qubits}, {"k", spec.k}};
          else if constexpr (std::is_same_v<T, NoisyTwistedGhzSpec>)
            s = {{"type", "noisy-twisted-ghz"}, {"k", spec.k}, {"p", spec.p}};
          else if constexpr (std::is_same_v<T, TwistedMixtureSpec>)
            s = {{"type", "twisted-mixture"}, {"k", spec.k}, {"p", spec.p}};
          else if constexpr (std::is_same_v<T, SpinCoherentSpec>)
            s = {{"type", "spin-coherent"},
                 {"num_qubits", spec.num_qubits},
                 {"direction",
                  {spec.direction(0), spec.direction(1), spec.direction(2)}}};
          else
            s = {{"type", "asym-init"}, {"half", spec.half}};
        },
        *cfg.state);
    params["state"] = s;
  }
  return json{{"schema", kConfigSchemaVersion},
              {"scenario", cfg.scenario},
              {"output", {{"dir", cfg.out_dir}, {"format", cfg.format}}},
              {"parameters", params}};
}

namespace {

std::vector<double> probability_sweep(const SweepGrid& g) {
  std::vector<double> out;
  for (long k = 0;; ++k) {
    double p = g.start + g.step * static_cast<double>(k);
    if (p > g.stop + 1e-12) break;
    out.push_back(std::min(p, g.stop));
  }
  if (out.empty() || out.back() < g.stop - 1e-12) out.push_back(g.stop);
  return out;
}

std::vector<double> time_sweep(double t_stop, double spacing) {
  std::vector<double> out{0.0};
  for (long k = 1;; ++k) {
    const double t = spacing * static_cast<double>(k);
    if (t > t_stop + 1e-12) break;
    out.push_back(t);
  }
  if (out.back() > t_stop) out.back() = t_stop;
  else if (out.back() < t_stop - 1e-12) out.push_back(t_stop);
  return out;
}

std::string sweep_parameter_of(const std::string& scenario) {
  if (scenario == "rho-nk") return "K";
  if (scenario == "custom-state") return "none";
  if (scenario == "one-axis-twisting" || scenario == "ising-lindblad") return "t";
  return "p";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json report_to_json(const WitnessReport& r) {
  json coeffs = json::array();
  for (const auto& c : r.coefficients) {
    json jc{{"name", c.name}, {"defined", c.defined}, {"entangled", c.entangled}};
    jc["value"] = c.defined ? json(c.value) : json(nullptr);
    jc["difference_eigenvalue"] =
        c.difference_eigenvalue ? json(*c.difference_eigenvalue) : json(nullptr);
    if (!c.note.empty()) jc["note"] = c.note;
    coeffs.push_back(std::move(jc));
  }
  json checks = json::array();
  for (const auto& h : r.hierarchy) {
    checks.push_back(json{{"description", h.description},
                          {"applicable", h.applicable},
                          {"passed", h.passed},
                          {"lhs", h.lhs},
                          {"rhs", h.rhs}});
  }
  return json{{"coefficients", std::move(coeffs)},
              {"hierarchy", std::move(checks)},
              {"consistent", r.consistent}};
}

}  // namespace

std::vector<DensityMatrix> scenario_states(const ScenarioConfig& cfg,
                                           std::vector<double>* sweep_values) {
  std::vector<DensityMatrix> states;
  std::vector<double> sweeps;
  try {
    if (cfg.scenario == "rho-nk") {
      states.push_back(build_state(RhoNkSpec{cfg.num_qubits, cfg.k}));
      sweeps.push_back(static_cast<double>(cfg.k));
    } else if (cfg.scenario == "twisted-ghz-noise") {
      sweeps = probability_sweep(cfg.p_grid);
      for (const double p : sweeps)
        states.push_back(build_state(NoisyTwistedGhzSpec{cfg.k, p}));
    } else if (cfg.scenario == "twisted-mixture") {
      sweeps = probability_sweep(cfg.p_grid);
      for (const double p : sweeps)
        states.push_back(build_state(TwistedMixtureSpec{cfg.k, p}));
    } else if (cfg.scenario == "one-axis-twisting") {
      sweeps = time_sweep(cfg.t_stop, cfg.step * cfg.stride);
      const DensityMatrix rho0(asym_init_state(cfg.num_qubits / 2));
      const IsingModel h = ising_hamiltonian(cfg.num_qubits, 0.0, 0.0, cfg.coupling);
      Trajectory traj = unitary_trajectory(rho0, h.matrix, sweeps);
      states = std::move(traj.states);
    } else if (cfg.scenario == "ising-lindblad") {
      sweeps = time_sweep(cfg.t_stop, cfg.step * cfg.stride);
      const DensityMatrix rho0(asym_init_state(cfg.num_qubits / 2));
      const IsingModel h =
          ising_hamiltonian(cfg.num_qubits, cfg.alpha, cfg.field, cfg.coupling);
      const LindbladModel model = dissipative_ising_model(h, cfg.gamma);
      IntegratorConfig icfg;
      icfg.step = cfg.step;
      Trajectory traj = lindblad_evolve(rho0, model, sweeps, icfg);
      states = std::move(traj.states);
    } else if (cfg.scenario == "custom-state") {
      if (!cfg.state) throw ConfigError("parameters.state: required");
      states.push_back(build_state(*cfg.state));
      sweeps.push_back(0.0);
    } else {
      throw ConfigError("scenario: unknown scenario " + cfg.scenario);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("parameters: ") + e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw NumericError(e.what());
  }
  if (sweep_values) *sweep_values = std::move(sweeps);
  return states;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const auto t_begin = std::chrono::steady_clock::now();
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif

  ScenarioResult result;
  std::vector<DensityMatrix> states = scenario_states(cfg, &result.sweep_values);

  OptimizerConfig opt = cfg.optimizer;
  opt.rng_seed = cfg.seed;

  const int count = static_cast<int>(states.size());
  result.reports.resize(count);
  std::string error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      result.reports[i] = hierarchy_report(states[i], opt);
    } catch (const std::exception& e) {
#pragma omp critical
      if (error.empty())
        error = "witness evaluation failed at sweep point " +
                format_double(result.sweep_values[i]) + ": " + e.what();
    }
  }
  if (!error.empty()) throw NumericError(error);

  const std::string sweep_name = sweep_parameter_of(cfg.scenario);
  for (int i = 0; i < count; ++i) {
    for (const auto& c : result.reports[i].coefficients) {
      CurveRow row;
      row.scenario = cfg.scenario;
      row.num_qubits = states[i].num_qubits;
      row.sweep_parameter = sweep_name;
      row.sweep_value = result.sweep_values[i];
      row.coefficient = c.name;
      row.value = c.value;
      row.defined = c.defined;
      result.rows.push_back(std::move(row));
    }
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("output.dir: cannot create " + cfg.out_dir);

  if (cfg.format == "csv" || cfg.format == "both") {
    const std::string path = (fs::path(cfg.out_dir) / (cfg.scenario + ".csv")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output.dir: cannot write " + path);
    out << "scenario,N,sweep_parameter_name,sweep_value,coefficient,value,defined_flag\n";
    for (const auto& r : result.rows) {
      out << r.scenario << ',' << r.num_qubits << ',' << r.sweep_parameter << ','
          << format_double(r.sweep_value) << ',' << r.coefficient << ','
          << format_double(r.value) << ',' << (r.defined ? 1 : 0) << '\n';
    }
    result.csv_path = path;
  }

  const auto t_end = std::chrono::steady_clock::now();
  result.wall_seconds = std::chrono::duration<double>(t_end - t_begin).count();

  if (cfg.format == "json" || cfg.format == "both") {
    const std::string path = (fs::path(cfg.out_dir) / (cfg.scenario + ".json")).string();
    json points = json::array();
    for (int i = 0; i < count; ++i) {
      points.push_back(json{{"sweep_value", result.sweep_values[i]},
                            {"num_qubits", states[i].num_qubits},
                            {"report", report_to_json(result.reports[i])}});
    }
    const json doc{{"schema", kConfigSchemaVersion},
                   {"library_version", kLibraryVersion},
                   {"scenario", cfg.scenario},
                   {"sweep_parameter", sweep_name},
                   {"seed", cfg.seed},
                   {"config", config_to_json(cfg)},
                   {"wall_time_seconds", result.wall_seconds},
                   {"points", std::move(points)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output.dir: cannot write " + path);
    out << doc.dump(2) << '\n';
    result.json_path = path;
  }
  return result;
}

}  // namespace spinwit
