// netreal: command-line front end for checking, composing, closing loops
// around and simulating network-structured state-space systems.
//
// Exit codes: 0 all checks passed, 1 a mathematical check failed,
// 2 input or usage error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netreal/netreal.hpp"

namespace {

using namespace netreal;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

struct CommonFlags {
  std::string d_mode = "strict";
  int points = kDefaultSamplePoints;
  double rtol = kDefaultRelTol;
  bool json = false;
  std::string output;
};

DMode parse_d_mode(const std::string& s) {
  if (s == "strict") return DMode::kStrict;
  if (s == "edge") return DMode::kEdgeSparse;
  throw InputError("--d-mode must be 'strict' or 'edge', got '" + s + "'");
}

int emit(const Report& rep, const CommonFlags& flags) {
  if (flags.json) {
    std::cout << rep.to_json().dump(2) << "\n";
  } else {
    std::cout << rep.to_text();
  }
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

void write_system(const std::string& path, const BlockRealization& sys, const NetworkGraph& g,
                  const std::string& name, const Json& extra = Json::object()) {
  if (path.empty()) return;
  Json j = io::system_to_json({name, g, sys});
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  io::write_text(path, io::dump(j));
}

void require_same_graph(const io::SystemFile& a, const io::SystemFile& b) {
  if (!(a.graph == b.graph)) {
    throw InputError("'" + (a.name.empty() ? std::string("first") : a.name) + "' and '" +
                     (b.name.empty() ? std::string("second") : b.name) + "' declare different graphs");
  }
}

int cmd_check(const std::string& path, const CommonFlags& flags, double tol, double zero_tol) {
  const io::SystemFile f = io::load_system(path);
  const DMode mode = parse_d_mode(flags.d_mode);
  const auto cert = certify_witness(f.system, f.graph, mode, tol, zero_tol);
  Report rep;
  rep.title = "check " + (f.name.empty() ? path : f.name);
  rep.add("compatibility", cert.compatibility.ok(),
          {{"d_mode", to_string(mode)}, {"violations", violations_json(cert.compatibility)}});
  rep.add("stabilizable", cert.pbh.stabilizable, pbh_json(cert.pbh));
  rep.add("detectable", cert.pbh.detectable, {{"spectral_radius", spectral_radius(f.system)}});
  return emit(rep, flags);
}

int cmd_compose(const std::string& op, const std::vector<std::string>& inputs, const CommonFlags& flags,
                double cond_limit) {
  const DMode mode = parse_d_mode(flags.d_mode);
  const bool binary = op == "add" || op == "mul";
  if (!binary && op != "inv") throw InputError("--op must be add, mul or inv");
  if (inputs.size() != (binary ? 2u : 1u)) {
    throw InputError("compose --op " + op + " takes " + (binary ? "two system files" : "one system file"));
  }
  const io::SystemFile first = io::load_system(inputs[0]);
  std::optional<io::SystemFile> second;
  if (binary) {
    second = io::load_system(inputs[1]);
    require_same_graph(first, *second);
  }

  Report rep;
  rep.title = "compose " + op;
  BlockRealization result;
  TransferComparison oracle;
  bool inputs_compatible = check_compatibility(first.system, first.graph, mode).ok();
  if (op == "add") {
    inputs_compatible = inputs_compatible && check_compatibility(second->system, second->graph, mode).ok();
    result = add(first.system, second->system);
    rep.add("construction", true, {{"states", result.n()}});
    oracle = compare_on_circle(
        [&](Complex z) { return eval_transfer(result, z); },
        [&](Complex z) { return CMatrix(eval_transfer(first.system, z) + eval_transfer(second->system, z)); },
        sampling_radius({&first.system, &second->system, &result}), flags.points, flags.rtol);
  } else if (op == "mul") {
    inputs_compatible = inputs_compatible && check_compatibility(second->system, second->graph, mode).ok();
    const ProductResult prod = multiply_report(first.system, second->system);
    result = prod.system;
    rep.add("construction", true,
            {{"states", result.n()}, {"outer_stable", prod.outer_stable}, {"inner_stable", prod.inner_stable}});
    oracle = compare_on_circle(
        [&](Complex z) { return eval_transfer(result, z); },
        [&](Complex z) { return CMatrix(eval_transfer(first.system, z) * eval_transfer(second->system, z)); },
        sampling_radius({&first.system, &second->system, &result}), flags.points, flags.rtol);
  } else {
    result = invert(first.system, cond_limit);
    rep.add("construction", true, {{"states", result.n()}});
    oracle = compare_on_circle(
        [&](Complex z) { return eval_transfer(result, z); },
        [&](Complex z) { return CMatrix(eval_transfer(first.system, z).inverse()); },
        sampling_radius({&first.system, &result}), flags.points, flags.rtol);
  }
  rep.add("transfer_oracle", oracle.equal, comparison_json(oracle));
  const auto out_compat = check_compatibility(result, first.graph, mode);
  rep.add("compatibility_preserved", !inputs_compatible || out_compat.ok(),
          {{"inputs_compatible", inputs_compatible},
           {"output_compatible", out_compat.ok()},
           {"violations", violations_json(out_compat)}});
  write_system(flags.output, result, first.graph, op);
  return emit(rep, flags);
}

int cmd_closeloop(const std::string& plant_path, const std::string& controller_path, const CommonFlags& flags) {
  const io::SystemFile plant = io::load_system(plant_path);
  const io::SystemFile controller = io::load_system(controller_path);
  require_same_graph(plant, controller);
  const DMode mode = parse_d_mode(flags.d_mode);
  const ClosedLoop loop = close_loop(plant.system, controller.system);
  const auto ids = verify_identities(plant.system, controller.system, flags.points, flags.rtol);

  Report rep;
  rep.title = "closeloop";
  rep.add("closed_loop_identities", ids.pass(), identities_json(ids));
  const bool inputs_compatible = check_compatibility(plant.system, plant.graph, mode).ok() &&
                                 check_compatibility(controller.system, plant.graph, mode).ok();
  const auto hc = check_compatibility(loop.h, plant.graph, mode);
  rep.add("compatibility_preserved", !inputs_compatible || hc.ok(),
          {{"inputs_compatible", inputs_compatible}, {"output_compatible", hc.ok()}, {"violations", violations_json(hc)}});
  write_system(flags.output, loop.h, plant.graph, "closed loop",
               {{"channels", {{"plant_outputs", loop.plant_outputs}, {"plant_inputs", loop.plant_inputs}}}});
  return emit(rep, flags);
}

int cmd_imc(const std::string& plant_path, const std::string& q_path, const CommonFlags& flags) {
  const io::SystemFile plant = io::load_system(plant_path);
  const io::SystemFile q = io::load_system(q_path);
  require_same_graph(plant, q);
  const DMode mode = parse_d_mode(flags.d_mode);
  const BlockRealization controller = imc_controller(plant.system, q.system);

  Report rep;
  rep.title = "imc";
  const auto kc = check_compatibility(controller, plant.graph, mode);
  rep.add("controller_compatible", kc.ok(), {{"states", controller.n()}, {"violations", violations_json(kc)}});
  const auto rt = transfer_equal(q_param(plant.system, controller), q.system, flags.points, flags.rtol);
  rep.add("q_round_trip", rt.equal, comparison_json(rt));
  write_system(flags.output, controller, plant.graph, "imc controller");
  return emit(rep, flags);
}

struct SimFlags {
  std::string input;
  Index steps = 0;
  Index step_channel = -1;
  bool distributed = false;
  std::string imc_q;
  std::string model;
};

SignalTrajectory make_input(const SimFlags& sf, const std::vector<Index>& partition) {
  if (!sf.input.empty()) return io::load_trajectory(sf.input, partition);
  if (sf.steps <= 0) throw InputError("simulate: give --input FILE or --steps T");
  SignalTrajectory u = SignalTrajectory::zeros(partition, sf.steps);
  if (sf.step_channel >= 0) {
    if (sf.step_channel >= u.dim()) throw InputError("simulate: --step-channel out of range");
    u.samples.col(sf.step_channel).setOnes();
  }
  return u;
}

int cmd_simulate(const std::string& path, const SimFlags& sf, const CommonFlags& flags) {
  const io::SystemFile sys = io::load_system(path);
  Report rep;
  rep.title = "simulate";
  std::vector<std::pair<std::string, const SignalTrajectory*>> columns;
  Json json_out;

  if (!sf.imc_q.empty()) {
    const io::SystemFile q = io::load_system(sf.imc_q);
    const BlockRealization model = sf.model.empty() ? sys.system : io::load_system(sf.model).system;
    const SignalTrajectory r = make_input(sf, sys.system.dims().outputs());
    const SignalTrajectory d = SignalTrajectory::zeros(r.partition, r.length());
    const ImcLoopRun run = simulate_imc_loop(sys.system, model, q.system, r, d);
    const double pred = run.prediction_error.samples.size() ? run.prediction_error.samples.cwiseAbs().maxCoeff() : 0.0;
    rep.add("imc_loop", true,
            {{"steps", r.length()},
             {"max_prediction_error", pred},
             {"closed_loop_spectral_radius", run.closed_loop_spectral_radius}});
    columns = {{"u", &run.u}, {"y", &run.y}, {"e", &run.prediction_error}};
    json_out = {{"u", io::trajectory_to_json(run.u)},
                {"y", io::trajectory_to_json(run.y)},
                {"prediction_error", io::trajectory_to_json(run.prediction_error)}};
    if (flags.output.empty()) {
      std::cout << io::trajectories_to_csv(columns);
      return kExitOk;
    }
    io::write_text(flags.output, io::has_suffix(flags.output, ".json") ? io::dump(json_out) : io::trajectories_to_csv(columns));
    return emit(rep, flags);
  }

  const SignalTrajectory u = make_input(sf, sys.system.dims().inputs());
  const Vector x0 = Vector::Zero(sys.system.n());
  const LtiRun central = simulate_lti(sys.system, u, x0);
  rep.add("simulation", true, {{"steps", u.length()}});
  if (sf.distributed) {
    const DistributedRun dist = simulate_distributed(sys.system, sys.graph, u, x0);
    const bool same = dist.y.samples == central.y.samples && dist.x.samples == central.x.samples;
    rep.add("distributed_matches_centralized", same, {{"messages", dist.message_count}});
  }
  columns = {{"y", &central.y}, {"x", &central.x}};
  json_out = {{"y", io::trajectory_to_json(central.y)}, {"x", io::trajectory_to_json(central.x)}};
  if (flags.output.empty()) {
    std::cout << io::trajectories_to_csv(columns);
    return rep.pass() ? kExitOk : kExitCheckFailed;
  }
  io::write_text(flags.output, io::has_suffix(flags.output, ".json") ? io::dump(json_out) : io::trajectories_to_csv(columns));
  return emit(rep, flags);
}

int cmd_demo(const std::string& which, const std::string& q_path, const CommonFlags& flags) {
  Report rep;
  if (which == "river") {
    RiverDemoOptions opt;
    opt.points = flags.points;
    opt.rel_tol = flags.rtol;
    if (!q_path.empty()) opt.q = io::load_system(q_path).system;
    rep = run_demo_river(opt);
  } else if (which == "remark1") {
    rep = run_demo_product();
  } else {
    throw InputError("demo must be 'river' or 'remark1'");
  }
  if (!flags.output.empty()) io::write_text(flags.output, io::dump(rep.to_json()));
  return emit(rep, flags);
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_mode = true) {
  if (with_mode) cmd->add_option("--d-mode", flags.d_mode, "Direct-term sparsity: strict|edge")->capture_default_str();
  cmd->add_option("--points", flags.points, "Transfer-function sample points")->capture_default_str();
  cmd->add_option("--rtol", flags.rtol, "Relative tolerance of transfer comparisons")->capture_default_str();
  cmd->add_flag("--json", flags.json, "Print the report as JSON");
  cmd->add_option("-o,--output", flags.output, "Output file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network-realizable state-space systems: check, compose, close loops, IMC, simulate"};
  app.require_subcommand(1);
  CommonFlags flags;

  double tol = kDefaultPbhTol;
  double zero_tol = 0.0;
  std::string check_path;
  auto* check = app.add_subcommand("check", "Certify a system file: graph compatibility and PBH tests");
  check->add_option("system", check_path, "System JSON")->required();
  check->add_option("--tol", tol, "PBH tolerance")->capture_default_str();
  check->add_option("--zero-tol", zero_tol, "Forbidden-block zero tolerance")->capture_default_str();
  add_common(check, flags);

  std::string op;
  double cond_limit = kDefaultCondLimit;
  std::vector<std::string> compose_inputs;
  auto* compose = app.add_subcommand("compose", "add / mul (first*second) / inv with transfer-oracle check");
  compose->add_option("--op", op, "add|mul|inv")->required();
  compose->add_option("systems", compose_inputs, "System JSON file(s)")->required();
  compose->add_option("--cond-limit", cond_limit, "Direct-term condition limit for inv")->capture_default_str();
  add_common(compose, flags);

  std::string plant_path;
  std::string second_path;
  auto* closeloop = app.add_subcommand("closeloop", "Build H = [[I,-P],[C,I]]^-1 and verify loop identities");
  closeloop->add_option("plant", plant_path, "Plant JSON (strictly proper)")->required();
  closeloop->add_option("controller", second_path, "Controller JSON")->required();
  add_common(closeloop, flags);

  auto* imc = app.add_subcommand("imc", "Internal model controller C = Q(I-PQ)^-1; input is r - y");
  imc->add_option("plant", plant_path, "Plant model JSON (strictly proper)")->required();
  imc->add_option("q", second_path, "Q JSON")->required();
  add_common(imc, flags);

  SimFlags sim_flags;
  std::string sim_path;
  auto* simulate = app.add_subcommand("simulate", "Simulate a system (optionally distributed or inside an IMC loop)");
  simulate->add_option("system", sim_path, "System JSON (true plant when --imc-q is given)")->required();
  simulate->add_option("--input", sim_flags.input, "Input (or reference) trajectory, CSV or JSON");
  simulate->add_option("--steps", sim_flags.steps, "Number of steps when no --input is given");
  simulate->add_option("--step-channel", sim_flags.step_channel, "Unit step on this global channel");
  simulate->add_flag("--distributed", sim_flags.distributed, "Also run the per-node harness and compare");
  simulate->add_option("--imc-q", sim_flags.imc_q, "Close an IMC loop with this Q");
  simulate->add_option("--model", sim_flags.model, "Internal model for --imc-q (default: the plant itself)");
  add_common(simulate, flags, /*with_mode=*/false);

  std::string demo_name;
  std::string demo_q;
  auto* demo = app.add_subcommand("demo", "Built-in demos: river | remark1");
  demo->add_option("name", demo_name, "river|remark1")->required();
  demo->add_option("--q", demo_q, "Replace the river demo's Q by this system file");
  add_common(demo, flags, /*with_mode=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*check) return cmd_check(check_path, flags, tol, zero_tol);
    if (*compose) return cmd_compose(op, compose_inputs, flags, cond_limit);
    if (*closeloop) return cmd_closeloop(plant_path, second_path, flags);
    if (*imc) return cmd_imc(plant_path, second_path, flags);
    if (*simulate) return cmd_simulate(sim_path, sim_flags, flags);
    if (*demo) return cmd_demo(demo_name, demo_q, flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InversionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitInputError;
}
