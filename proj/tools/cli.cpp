#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinetic/dynamics.hpp"
#include "kinetic/equilibrium.hpp"
#include "kinetic/interaction.hpp"
#include "kinetic/model.hpp"
#include "kinetic/model_io.hpp"
#include "kinetic/quadrature.hpp"

namespace kinetic::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Bad user input: reported with exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSource {
  std::string file;
  int seed_broadwell = 0;
  std::vector<std::string> box;
  int extend = 0;
  std::vector<std::string> anchors;
  double rate = 1.0;
};

void add_model_options(CLI::App* sub, ModelSource& src) {
  sub->add_option("--model", src.file, "Model JSON file");
  sub->add_option("--seed-broadwell", src.seed_broadwell, "Build the 2d+2 point seed model in dimension D");
  sub->add_option("--box", src.box, "Integer box: D H RADIUS, reactions from all conservative quadruples")
      ->expected(3);
  sub->add_option("--extend", src.extend, "Apply N automatic extension steps");
  sub->add_option("--anchor", src.anchors, "Extension anchor FIRST,SECOND,CORNER (1-based), repeatable")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub->add_option("--rate", src.rate, "Constant rate for --box reactions");
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (!in || !in.eof()) throw InputError(std::string("cannot parse ") + what + " from '" + text + "'");
  return value;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(parse_number<double>(item, "list entry"));
  }
  return out;
}

Model make_model(const ModelSource& src) {
  const int sources = (src.file.empty() ? 0 : 1) + (src.seed_broadwell != 0 ? 1 : 0) + (src.box.empty() ? 0 : 1);
  if (sources != 1) throw InputError("give exactly one of --model, --seed-broadwell, --box");

  std::optional<Model> model;
  if (!src.file.empty()) {
    model = read_model(src.file);
  } else if (src.seed_broadwell != 0) {
    if (src.seed_broadwell < kMinDimension || src.seed_broadwell > kMaxDimension) {
      throw InputError("--seed-broadwell: dimension must be 2, 3 or 4");
    }
    model = seed_broadwell(src.seed_broadwell);
  } else {
    const int d = parse_number<int>(src.box[0], "box dimension");
    const double h = parse_number<double>(src.box[1], "box mesh step");
    const Int radius = parse_number<Int>(src.box[2], "box radius");
    if (d < kMinDimension || d > kMaxDimension) throw InputError("--box: dimension must be 2, 3 or 4");
    if (!(h > 0.0) || radius < 1) throw InputError("--box: need h > 0 and radius >= 1");
    if (!(src.rate >= 0.0)) throw InputError("--rate must be nonnegative");
    auto v = box_set(d, h, radius);
    auto table = autopopulate_reactions(v, src.rate);
    model.emplace(std::move(v), std::move(table));
  }

  for (const auto& a : src.anchors) {
    const auto idx = parse_list(a);
    if (idx.size() != 3) throw InputError("--anchor needs three 1-based indices FIRST,SECOND,CORNER");
    ExtensionAnchor anchor;
    std::size_t* slots[3] = {&anchor.first, &anchor.second, &anchor.corner};
    for (int s = 0; s < 3; ++s) {
      if (idx[s] < 1 || idx[s] != std::floor(idx[s])) throw InputError("--anchor indices are positive integers");
      *slots[s] = static_cast<std::size_t>(idx[s]) - 1;
    }
    model = extend_model(*model, anchor);
  }
  if (src.extend < 0) throw InputError("--extend must be nonnegative");
  for (int e = 0; e < src.extend; ++e) {
    const auto anchors = find_extension_anchors(model->velocities());
    if (anchors.empty()) throw InputError("no admissible extension anchor left");
    model = extend_model(*model, anchors.front());
  }
  return std::move(*model);
}

void print_report(std::ostream& os, const Model& model, const NormalityReport& rep) {
  const int d = model.dim();
  os << "points: " << model.size() << "\n";
  os << "reactions: " << model.reactions().size() << "\n";
  os << "condition_a: " << (rep.condition_a ? "pass" : "FAIL") << " (rank phi = " << rep.rank_phi << " of "
     << d + 2 << ")\n";
  os << "condition_b: " << (rep.condition_b ? "pass" : "FAIL");
  if (!rep.isolated_points.empty()) {
    os << " (isolated:";
    for (auto i : rep.isolated_points) os << ' ' << i + 1;
    os << ')';
  }
  os << "\n";
  os << "condition_c: " << (rep.condition_c ? "pass" : "FAIL") << " (rank p = " << rep.rank_p << " of "
     << rep.p_max << ")\n";
  os << "normal: " << (rep.normal() ? "yes" : "no") << "\n";
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path + " for writing");
  f << text;
}

// ---------------------------------------------------------------- build

struct BuildArgs {
  ModelSource src;
  std::string output;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  const Model model = make_model(a.src);
  const auto rep = check_normal(model);
  const std::string json = model_to_json(model, rep);
  if (a.output.empty()) {
    out << json;
    print_report(err, model, rep);
  } else {
    write_text(a.output, json);
    print_report(out, model, rep);
  }
  if (!rep.normal()) err << "warning: model is not normal\n";
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  ModelSource src;
  std::string law = "wke";
  std::string f0;
  std::uint64_t seed = 1;
  bool no_zero_momentum = false;
  bool require_zero_momentum = false;
  double t_end = 200.0;
  double rtol = 1e-12;
  double atol = 1e-14;
  std::size_t uniform_samples = 40;
  double geometric_ratio = 1.05;
  std::string csv;
  std::string summary;
};

ojson vector_json(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(x);
  return a;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const Model model = make_model(a.src);
  const auto law = InteractionLaw::parse(a.law);
  const auto& v = model.velocities();

  std::vector<double> f0;
  if (!a.f0.empty()) {
    f0 = parse_list(a.f0);
    if (f0.size() != model.size()) {
      throw InputError("--f0 has " + std::to_string(f0.size()) + " entries, the model has " +
                       std::to_string(model.size()) + " points");
    }
  } else {
    f0 = random_initial_state(v, law, a.seed, !a.no_zero_momentum);
  }
  if (!(a.t_end >= 0.0)) throw InputError("--t-end must be nonnegative");

  IntegratorOptions opts;
  opts.rtol = a.rtol;
  opts.atol = a.atol;
  opts.require_zero_momentum = a.require_zero_momentum;
  opts.uniform_samples = a.uniform_samples;
  opts.geometric_ratio = a.geometric_ratio;
  Trajectory traj;
  try {
    traj = integrate(model, law, f0, a.t_end, opts);
  } catch (const InitialStateError& e) {
    throw InputError(e.what());
  }

  if (!a.csv.empty()) {
    std::ofstream f(a.csv, std::ios::binary);
    if (!f) throw InputError("cannot open " + a.csv + " for writing");
    write_trajectory_csv(f, traj);
  }

  const auto& first = traj.front();
  const auto& last = traj.back();
  double drift_rho = 0.0, drift_e = 0.0, drift_p = 0.0;
  double min_step = std::numeric_limits<double>::infinity(), max_increase = 0.0;
  double min_w = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const auto& smp = traj.samples[s];
    drift_rho = std::max(drift_rho, std::abs(smp.invariants.rho - first.invariants.rho) / first.invariants.rho);
    drift_e = std::max(drift_e, std::abs(smp.invariants.energy - first.invariants.energy) /
                                    std::max(first.invariants.energy, 1e-300));
    for (std::size_t c = 0; c < smp.invariants.momentum.size(); ++c) {
      drift_p = std::max(drift_p, std::abs(smp.invariants.momentum[c] - first.invariants.momentum[c]));
    }
    min_w = std::min(min_w, smp.W);
    if (s > 0) {
      const double dec = traj.samples[s - 1].H - smp.H;
      min_step = std::min(min_step, dec);
      max_increase = std::max(max_increase, -dec);
    }
  }

  ojson summary;
  summary["law"] = law.name();
  summary["n"] = model.size();
  summary["t_end"] = a.t_end;
  summary["samples"] = traj.samples.size();
  summary["accepted_steps"] = traj.accepted_steps;
  summary["rejected_steps"] = traj.rejected_steps;
  summary["positivity_rejections"] = traj.positivity_rejections;
  summary["rho0"] = first.invariants.rho;
  summary["T0"] = first.invariants.temperature;
  summary["momentum0"] = vector_json(first.invariants.momentum);
  summary["drift"] = {{"rho", drift_rho}, {"energy", drift_e}, {"momentum", drift_p}};
  summary["H_initial"] = first.H;
  summary["H_final"] = last.H;
  summary["min_H_step"] = traj.samples.size() > 1 ? min_step : 0.0;
  summary["max_H_increase"] = max_increase;
  summary["min_W"] = min_w;

  // The limit shares mass, momentum and temperature with f0.
  ojson eq;
  const MomentTargets targets{first.invariants.rho, first.invariants.momentum, first.invariants.temperature};
  try {
    const auto mm = match_moments(v, law, targets);
    double dist = 0.0;
    for (std::size_t i = 0; i < mm.f.size(); ++i) dist = std::max(dist, std::abs(last.f[i] - mm.f[i]));
    eq["f_st"] = vector_json(mm.f);
    eq["moment_residual"] = mm.residual;
    summary["final_distance"] = dist;
    if (law.kind() == LawKind::Wke) {
      try {
        const auto w = solve_wke_equilibrium_general(v, targets);
        eq["kind"] = "wke";
        eq["a"] = w.a;
        eq["b"] = w.b;
        eq["drift"] = vector_json(w.drift);
      } catch (const std::domain_error&) {
        eq["kind"] = "wke";
      }
      try {
        const auto c = solve_wke_equilibrium(v, first.invariants.rho, first.invariants.temperature);
        const auto fc = equilibrium_state(v, law, c.params);
        double dc = 0.0;
        for (std::size_t i = 0; i < fc.size(); ++i) dc = std::max(dc, std::abs(last.f[i] - fc[i]));
        eq["centred_distance"] = dc;
      } catch (const std::exception&) {
      }
    } else {
      eq["kind"] = "exponential";
      eq["alpha"] = mm.multipliers.front();
      eq["beta"] = vector_json(std::vector<double>(mm.multipliers.begin() + 1, mm.multipliers.end() - 1));
      eq["gamma"] = mm.multipliers.back();
    }
  } catch (const std::domain_error& e) {
    eq["error"] = e.what();
  }
  summary["equilibrium"] = std::move(eq);

  const std::string text = summary.dump(2) + "\n";
  if (a.summary.empty()) out << text; else write_text(a.summary, text);
  (void)err;
  return kOk;
}

// ---------------------------------------------------------------- equilibrium

struct EquilibriumArgs {
  ModelSource src;
  std::string law = "wke";
  double rho = 1.0;
  double T = 1.0;
  bool drift = false;
  std::string momentum;
};

int cmd_equilibrium(const EquilibriumArgs& a, std::ostream& out, std::ostream& err) {
  const Model model = make_model(a.src);
  const auto law = InteractionLaw::parse(a.law);
  const auto& v = model.velocities();
  if (!(a.rho > 0.0)) throw InputError("--rho must be positive");
  const double M = v.max_speed2();
  if (!(a.T > 0.0 && a.T < M)) throw InputError("--T must lie in (0, " + format_double(M) + ")");

  ojson j;
  EquilibriumParams params;
  MomentTargets targets{a.rho, {}, a.T};
  try {
    if (law.kind() == LawKind::Wke && !a.drift) {
      const auto sol = solve_wke_equilibrium(v, a.rho, a.T);
      params = sol.params;
      j["kind"] = "wke";
      j["a"] = sol.params.a;
      j["b"] = sol.params.b;
      j["symmetric"] = sol.symmetric;
      j["bisections"] = sol.bisections;
      if (!sol.symmetric) err << "note: the velocity set is not symmetric; --drift also matches the momentum\n";
    } else if (law.kind() == LawKind::Wke) {
      targets.momentum = a.momentum.empty() ? std::vector<double>(v.dim(), 0.0) : parse_list(a.momentum);
      if (targets.momentum.size() != static_cast<std::size_t>(v.dim())) throw InputError("--momentum has wrong size");
      const auto w = solve_wke_equilibrium_general(v, targets);
      params = w;
      j["kind"] = "wke";
      j["a"] = w.a;
      j["b"] = w.b;
      j["drift"] = vector_json(w.drift);
    } else {
      const auto e = solve_exponential_equilibrium(v, law, a.rho, a.T);
      params = e;
      j["kind"] = "exponential";
      j["law"] = law.name();
      j["alpha"] = e.alpha;
      j["gamma"] = e.gamma;
    }
  } catch (const std::domain_error& e) {
    throw InputError(e.what());
  }

  const auto f = equilibrium_state(v, law, params);
  const auto rep = verify_stationary(model, law, params, targets);
  j["f_st"] = vector_json(f);
  j["residuals"] = {{"q_max", rep.q_max},
                    {"W", rep.dissipation},
                    {"scale", rep.scale},
                    {"moments", rep.moment_error},
                    {"momentum", vector_json(rep.momentum)}};
  j["stationary"] = rep.pass;
  out << j.dump(2) << "\n";
  return rep.pass ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  ModelSource src;
  std::uint64_t seed = 7;
  double t_end = 5.0;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  Model model = [&] {
    try {
      return make_model(a.src);
    } catch (const ModelFormatError& e) {
      throw InputError(std::string("schema error: ") + e.what());
    }
  }();
  const auto& v = model.velocities();
  bool ok = true;
  auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    out << name << ": " << (pass ? "PASS" : "FAIL") << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    ok = ok && pass;
  };

  const auto rep = check_normal(model);
  std::string why;
  if (!rep.condition_a) why += "condition a: points on a sphere or hyperplane; ";
  if (!rep.condition_b) why += "condition b: isolated points; ";
  if (!rep.condition_c) {
    why += "condition c: rank p = " + std::to_string(rep.rank_p) + " of " + std::to_string(rep.p_max) + "; ";
  }
  if (!why.empty()) why.resize(why.size() - 2);
  line("normality", rep.normal(), why);

  // Collision invariants of Q on random positive states.
  const double sqrt_m = std::sqrt(v.max_speed2());
  double worst = 0.0;
  for (const auto& law : {InteractionLaw::wke(), InteractionLaw::boltzmann()}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto f = random_initial_state(v, law, a.seed + s, false);
      const auto q = rhs(model, law, f);
      double mass = 0.0, energy = 0.0, mass_scale = 0.0, energy_scale = 0.0;
      std::vector<double> mom(v.dim(), 0.0);
      for (std::size_t i = 0; i < q.size(); ++i) {
        mass += q[i];
        mass_scale += std::abs(q[i]);
        energy += q[i] * v.speed2(i);
        energy_scale += std::abs(q[i]) * v.speed2(i);
        for (int c = 0; c < v.dim(); ++c) mom[c] += q[i] * v.velocity(i, c);
      }
      const double unit = std::max(mass_scale, 1e-300);
      worst = std::max(worst, std::abs(mass) / unit);
      worst = std::max(worst, std::abs(energy) / std::max(energy_scale, 1e-300));
      for (double p : mom) worst = std::max(worst, std::abs(p) / (unit * sqrt_m));
    }
  }
  line("conservation", worst <= 1e-12, "max relative collision moment " + format_double(worst));

  // Entropy decay along a short run.
  bool h_ok = true;
  std::string h_detail;
  for (const auto& law : {InteractionLaw::wke(), InteractionLaw::boltzmann()}) {
    const auto f0 = random_initial_state(v, law, a.seed, false);
    const auto traj = integrate(model, law, f0, a.t_end);
    double max_rise = 0.0, min_w = 0.0;
    for (std::size_t s = 1; s < traj.samples.size(); ++s) {
      const double rise = traj.samples[s].H - traj.samples[s - 1].H;
      if (rise > 1e-11 * (1.0 + std::abs(traj.samples[s - 1].H))) h_ok = false;
      max_rise = std::max(max_rise, rise);
      min_w = std::min(min_w, traj.samples[s].W);
    }
    if (min_w < -1e-12) h_ok = false;
    h_detail += law.name() + " max rise " + format_double(max_rise) + "; ";
  }
  h_detail.resize(h_detail.size() - 2);
  line("h-monotonicity", h_ok, h_detail);
  (void)err;
  return ok ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- lattice-stats

struct StatsArgs {
  int d = 3;
  Int m_min = 1;
  Int m_max = 100;
  std::vector<Int> m_list;
  bool include_empty = false;
};

int cmd_lattice_stats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  if (a.d < kMinDimension || a.d > kMaxDimension) throw InputError("--d must be 2, 3 or 4");
  std::vector<Int> ms = a.m_list;
  if (ms.empty()) {
    if (a.m_min < 1 || a.m_max < a.m_min) throw InputError("need 1 <= --m-min <= --m-max");
    for (Int m = a.m_min; m <= a.m_max; ++m) ms.push_back(m);
  }
  const SphereFunction w1sq = [](std::span<const double> w) { return w[0] * w[0]; };
  const SphereFunction w1p4 = [](std::span<const double> w) { return w[0] * w[0] * w[0] * w[0]; };
  out << "m,residue_mod8,r,err_omega1_sq,err_omega1_4\n";
  for (Int m : ms) {
    if (m < 1) throw InputError("shell radii must be positive");
    const Int r = count_sphere_points(m, a.d);
    if (r == 0) {
      if (a.include_empty) out << m << ',' << m % 8 << ",0,,\n";
      continue;
    }
    out << m << ',' << m % 8 << ',' << r << ',' << format_double(sphere_average_error(m, a.d, w1sq)) << ','
        << format_double(sphere_average_error(m, a.d, w1p4)) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- config

const std::vector<std::string> kCommands{"build", "simulate", "equilibrium", "verify", "lattice-stats"};

bool is_command(const std::string& s) { return std::find(kCommands.begin(), kCommands.end(), s) != kCommands.end(); }

// Turns a JSON object into flags: {"t-end": 5, "box": [2, 1.0, 2], "drift": true}.
std::vector<std::string> config_flags(const std::string& path, std::string& command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file " + path);
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config: top level must be an object");
  std::vector<std::string> flags;
  auto scalar = [](const ojson& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number() || x.is_boolean()) return x.dump();
    throw InputError("config: values must be scalars or arrays of scalars");
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      if (!value.is_string()) throw InputError("config: 'command' must be a string");
      if (command.empty()) command = value.get<std::string>();
      continue;
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) flags.push_back("--" + key);
    } else if (value.is_array()) {
      for (const auto& x : value) {
        flags.push_back("--" + key);
        flags.push_back(scalar(x));
      }
      if (key == "box") {
        // --box takes its three values at once.
        std::vector<std::string> packed{"--box"};
        for (const auto& x : value) packed.push_back(scalar(x));
        flags.resize(flags.size() - 2 * value.size());
        flags.insert(flags.end(), packed.begin(), packed.end());
      }
    } else {
      flags.push_back("--" + key);
      flags.push_back(scalar(value));
    }
  }
  return flags;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  std::string config_path;
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    if (raw_args[i] == "--config" && i + 1 < raw_args.size()) {
      config_path = raw_args[++i];
    } else if (raw_args[i].rfind("--config=", 0) == 0) {
      config_path = raw_args[i].substr(9);
    } else {
      args.push_back(raw_args[i]);
    }
  }

  CLI::App app{"Discrete kinetic models: build, simulate, equilibrium, verify, lattice-stats", "kinetic"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Construct a model and certify normality");
  add_model_options(b, build.src);
  b->add_option("-o,--output", build.output, "Write the model JSON here instead of stdout");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Integrate the kinetic system and summarize the run");
  add_model_options(s, sim.src);
  s->add_option("--law", sim.law, "boltzmann | nuu-boson | nuu-fermion | anion:ALPHA | wke");
  s->add_option("--f0", sim.f0, "Initial state as a comma separated list");
  s->add_option("--seed", sim.seed, "Seed for a random initial state");
  s->add_flag("--no-zero-momentum", sim.no_zero_momentum, "Keep the random initial state as drawn");
  s->add_flag("--require-zero-momentum", sim.require_zero_momentum, "Reject initial states with momentum");
  s->add_option("--t-end", sim.t_end, "Final time");
  s->add_option("--rtol", sim.rtol, "Relative tolerance");
  s->add_option("--atol", sim.atol, "Absolute tolerance");
  s->add_option("--uniform-samples", sim.uniform_samples, "Samples before t = 1/lambda");
  s->add_option("--geometric-ratio", sim.geometric_ratio, "Sample time ratio after t = 1/lambda");
  s->add_option("--csv", sim.csv, "Trajectory CSV output");
  s->add_option("--summary", sim.summary, "Summary JSON output (default stdout)");

  EquilibriumArgs eq;
  auto* e = app.add_subcommand("equilibrium", "Solve for the stationary state with given mass and temperature");
  add_model_options(e, eq.src);
  e->add_option("--law", eq.law, "Interaction law");
  e->add_option("--rho", eq.rho, "Mass");
  e->add_option("--T", eq.T, "Temperature E/rho");
  e->add_flag("--drift", eq.drift, "Wave-kinetic form with drift, matching --momentum");
  e->add_option("--momentum", eq.momentum, "Momentum target, comma separated (default zero)");

  VerifyArgs ver;
  auto* vcmd = app.add_subcommand("verify", "Normality, conservation and entropy checks");
  add_model_options(vcmd, ver.src);
  vcmd->add_option("--seed", ver.seed, "Seed for the random states");
  vcmd->add_option("--t-end", ver.t_end, "Length of the entropy check run");

  StatsArgs st;
  auto* l = app.add_subcommand("lattice-stats", "Shell counts and sphere-average errors as CSV");
  l->add_option("--d", st.d, "Dimension");
  l->add_option("--m-min", st.m_min, "Smallest squared radius");
  l->add_option("--m-max", st.m_max, "Largest squared radius");
  l->add_option("--m", st.m_list, "Explicit squared radii")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  l->add_flag("--include-empty", st.include_empty, "Also list shells without points");

  try {
    if (!config_path.empty()) {
      std::string command;
      std::vector<std::string> rest = args;
      if (!rest.empty() && is_command(rest.front())) {
        command = rest.front();
        rest.erase(rest.begin());
      }
      const auto flags = config_flags(config_path, command);
      if (command.empty()) throw InputError("no subcommand given");
      args.clear();
      args.push_back(command);
      args.insert(args.end(), flags.begin(), flags.end());
      args.insert(args.end(), rest.begin(), rest.end());
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalidInput;
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (*b) return cmd_build(build, out, err);
    if (*s) return cmd_simulate(sim, out, err);
    if (*e) return cmd_equilibrium(eq, out, err);
    if (*vcmd) return cmd_verify(ver, out, err);
    if (*l) return cmd_lattice_stats(st, out, err);
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalidInput;
  } catch (const ModelFormatError& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalidInput;
  } catch (const std::domain_error& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& ex) {
    err << "failure: " << ex.what() << "\n";
    return kVerificationFailed;
  }
  return kInvalidInput;
}

}  // namespace kinetic::cli
