// inext: mode tables, flutter sweeps and nonlinear cantilever simulations.

#include "inext/config_io.hpp"
#include "inext/output.hpp"
#include "inext/simulation.hpp"
#include "inext/tensor_cache.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace inext;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config;
  std::string out = ".";
  int threads = 1;
  std::optional<int> quad_points;
  std::string cache;
};

SimConfig base_config(const Globals& g) {
  SimConfig cfg = g.config.empty() ? SimConfig{} : load_config(g.config);
  if (g.quad_points) cfg.numerical.quad_points = *g.quad_points;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

template <typename Write>
std::string render(Write&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad value in list: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("bad value in list: '" + item + "'");
    v.push_back(x);
  }
  return v;
}

/// from, from + step, ... up to and including `to` (within step / 1e6).
std::vector<double> range_values(double from, double to, double step) {
  if (!(step != 0.0) || !std::isfinite(step)) throw UsageError("--step must be nonzero");
  const double span = (to - from) / step;
  if (span < -1e-6) throw UsageError("--step points away from --to");
  const auto count = static_cast<long>(std::floor(span + 1e-6)) + 1;
  if (count > 1'000'000) throw UsageError("grid too large");
  std::vector<double> v;
  for (long k = 0; k < count; ++k) v.push_back(from + static_cast<double>(k) * step);
  return v;
}

int cmd_modes(const Globals& g, int n, double L, bool out_given) {
  if (n < 1) throw UsageError("--n must be >= 1");
  if (!(L > 0.0) || !std::isfinite(L)) throw UsageError("--L must be positive");
  const ModeBasis basis(n, L);
  std::printf("%3s %14s %14s %14s\n", "n", "kappa*L", "C_n", "c_n");
  for (int i = 0; i < n; ++i)
    std::printf("%3d %14.8f %14.8f %14.8f\n", i + 1, basis.kappa_l()[i], basis.shape_coefficients()[i],
                basis.normalization()[i]);
  if (out_given) {
    // --out names the CSV itself when it ends in .csv, otherwise a directory.
    fs::path path = g.out;
    if (path.extension() != ".csv") path /= "modes.csv";
    write_file(path, render([&](std::ostream& os) { write_modes_csv(os, basis); }));
    std::cerr << "wrote " << path.string() << "\n";
  }
  return 0;
}

int cmd_tensors(const Globals& g) {
  const SimConfig cfg = base_config(g);
  const auto start = std::chrono::steady_clock::now();
  const ModeBasis basis(cfg.numerical.N, cfg.physical.L);
  const ModeSamples samples(basis, make_grid(cfg.numerical, cfg.physical.L));
  const auto key = TensorCacheKey::from(basis, samples.grid);
  const fs::path dir = g.cache.empty() ? fs::path(g.out) : fs::path(g.cache);
  const TensorSet tensors = load_or_assemble(basis, samples, cfg.physical.D, dir);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "N = " << tensors.N << ", grid " << to_string(key.rule) << " M = " << key.resolution << " ("
            << samples.grid.size() << " nodes)\n"
            << "cache " << (dir / key.filename()).string() << "\n"
            << "S(0,0,0,0) = " << format_double(tensors.stiffness(0, 0, 0, 0))
            << ", I(0,0,0,0) = " << format_double(tensors.inertia(0, 0, 0, 0)) << "\n"
            << "time " << secs << " s\n";
  return 0;
}

int cmd_flutter(const Globals& g, double U_lo, double U_hi, int samples, bool off_diagonal_only) {
  if (samples < 1) throw UsageError("--samples must be >= 1");
  if (!(U_hi >= U_lo)) throw UsageError("--U-max must be >= --U-min");
  const SimConfig cfg = base_config(g);
  FlutterParams fp = flutter_params(cfg);
  fp.diagonal_convection = !off_diagonal_only;
  const ModeBasis basis(fp.N, fp.L);
  const ModeSamples ms(basis, make_grid(cfg.numerical, fp.L));
  const LinearOperators ops = assemble_linear(basis, ms, fp.D);

  std::vector<double> speeds;
  for (int k = 0; k < samples; ++k)
    speeds.push_back(samples == 1 ? U_lo : U_lo + (U_hi - U_lo) * k / (samples - 1));
  const BranchTable table = sweep_branches(fp, ops, speeds);
  const auto ucrit = find_ucrit(fp, ops, U_lo, U_hi);

  const fs::path out = g.out;
  write_file(out / "flutter.csv", render([&](std::ostream& os) { write_flutter_csv(os, table); }));
  write_file(out / "flutter.json", flutter_summary(fp, ucrit, U_lo, U_hi).dump(2) + "\n");
  if (ucrit)
    std::cout << "Ucrit = " << format_double(*ucrit) << "\n";
  else
    std::cout << "no crossing in [" << U_lo << ", " << U_hi << "]\n";
  return 0;
}

int cmd_simulate(const Globals& g, int stride) {
  if (g.config.empty()) throw UsageError("simulate needs --config");
  SimConfig cfg = base_config(g);
  if (stride > 0) cfg.output.stride = stride;
  const auto start = std::chrono::steady_clock::now();
  const auto ctx = SimulationContext::build(cfg, g.cache);
  const Trajectory traj = simulate(cfg, ctx);
  const Classification cls = classify_longtime(traj);

  const fs::path out = g.out;
  const fs::path csv = out / cfg.output.trajectory_csv;
  const fs::path summary = out / cfg.output.summary_json;
  const fs::path manifest_path = out / cfg.output.manifest_json;
  write_file(csv, render([&](std::ostream& os) { write_trajectory_csv(os, traj, cfg.output.stride); }));
  write_file(summary, run_summary(cfg, traj, cls).dump(2) + "\n");

  RunManifest m;
  m.config = cfg;
  m.cache_key = TensorCacheKey::from(ctx.basis, ctx.samples.grid);
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.outputs = {csv.string(), summary.string(), manifest_path.string()};
  m.truncated = traj.status == RunStatus::StepFailure;
  m.status = to_string(traj.status);
  m.message = traj.message;
  write_file(manifest_path, to_json(m).dump(2) + "\n");

  std::cout << "classification " << to_string(cls.regime) << " (" << cls.detail << ")\n"
            << "t reached " << traj.t_reached() << ", " << traj.accepted_steps << " steps\n";
  if (traj.status == RunStatus::StepFailure) {
    std::cerr << "numerical failure: " << traj.message << "\n";
    return kExitNumerical;
  }
  return 0;
}

int cmd_sweep(const Globals& g, const std::string& param_name, const std::optional<std::string>& values_text,
              std::optional<double> from, std::optional<double> to, std::optional<double> step) {
  SweepParameter param;
  try {
    param = sweep_parameter_from_string(param_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<double> values;
  if (values_text) {
    if (from || to || step) throw UsageError("give either --values or --from/--to/--step");
    values = parse_values(*values_text);
  } else if (from && to && step) {
    values = range_values(*from, *to, *step);
  } else {
    throw UsageError("sweep needs --values or all of --from, --to, --step");
  }
  const SimConfig tmpl = base_config(g);
  const auto rows = sweep(tmpl, param, values, g.threads, g.cache);
  const fs::path path = fs::path(g.out) / "sweep.csv";
  write_file(path, render([&](std::ostream& os) { write_sweep_csv(os, param, rows); }));
  for (const auto& r : rows)
    std::cout << param_name << " = " << format_double(r.value) << ": "
              << (r.error ? "error: " + *r.error : to_string(r.classification.regime)) << "\n";
  std::cerr << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inextensible cantilever in axial flow: modes, flutter and nonlinear dynamics"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  bool out_given = false;
  app.add_option("--config", g.config, "Config file (JSON, comments allowed)");
  auto* out_opt = app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "Sweep worker threads")->check(CLI::PositiveNumber);
  app.add_option("--quad-points", g.quad_points, "Quadrature resolution M (overrides config)");
  app.add_option("--cache", g.cache, "Tensor cache directory (off when empty)");

  int n = 6;
  double L = 1.0;
  auto* modes = app.add_subcommand("modes", "Mode numbers kappa_n L, shape coefficients and normalisation");
  modes->add_option("--n", n, "Number of modes");
  modes->add_option("--L", L, "Beam length");

  app.add_subcommand("tensors", "Assemble (or load) the nonlinear stiffness and inertia tensors");

  double U_lo = 100.0, U_hi = 160.0;
  int samples = 100;
  bool off_diag = false;
  auto* flutter = app.add_subcommand("flutter", "Linear growth rates over a flow-speed range and U_crit");
  flutter->add_option("--U-min", U_lo, "Lowest flow speed");
  flutter->add_option("--U-max", U_hi, "Highest flow speed");
  flutter->add_option("--samples", samples, "Number of speeds in the branch table");
  flutter->add_flag("--off-diagonal-only", off_diag, "Drop the diagonal convection entries");

  int stride = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the nonlinear modal system");
  simulate_cmd->add_option("--stride", stride, "Write every k-th sample (overrides config)");

  std::string param = "U";
  std::optional<std::string> values;
  std::optional<double> from, to, step;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a config template over a parameter grid");
  sweep_cmd->add_option("--param", param, "U, a, N, beta, k0 or k2");
  sweep_cmd->add_option("--values", values, "Comma-separated values");
  sweep_cmd->add_option("--from", from, "Grid start");
  sweep_cmd->add_option("--to", to, "Grid end (inclusive)");
  sweep_cmd->add_option("--step", step, "Grid step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  out_given = out_opt->count() > 0;

  try {
    if (*modes) return cmd_modes(g, n, L, out_given);
    if (app.got_subcommand("tensors")) return cmd_tensors(g);
    if (*flutter) return cmd_flutter(g, U_lo, U_hi, samples, off_diag);
    if (*simulate_cmd) return cmd_simulate(g, stride);
    if (*sweep_cmd) return cmd_sweep(g, param, values, from, to, step);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
