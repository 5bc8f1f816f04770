#include "inext/output.hpp"

#include "inext/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#ifndef INEXT_VERSION
#define INEXT_VERSION "0.0.0"
#endif

namespace inext {

using nlohmann::json;

const char* version_string() { return INEXT_VERSION; }

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::vector<std::string> trajectory_header(int N) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= N; ++i) h.push_back("q" + std::to_string(i));
  for (int i = 1; i <= N; ++i) h.push_back("qd" + std::to_string(i));
  for (const char* c : {"E_total", "E_lin", "E_nl_stiff", "E_nl_inertia", "arc_len", "wL", "uL"}) h.push_back(c);
  return h;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const int N = traj.q.empty() ? 0 : static_cast<int>(traj.q.front().size());
  write_row(out, trajectory_header(N));
  std::vector<std::string> row;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    if (s % static_cast<std::size_t>(stride) != 0 && s + 1 != traj.size()) continue;
    row.clear();
    row.push_back(format_double(traj.times[s]));
    for (int i = 0; i < N; ++i) row.push_back(format_double(traj.q[s][i]));
    for (int i = 0; i < N; ++i) row.push_back(format_double(traj.qdot[s][i]));
    const auto& d = traj.diagnostics[s];
    for (double v : {d.E_total, d.E_lin, d.E_nl_stiff, d.E_nl_inertia, d.arc_length, d.wL, d.uL})
      row.push_back(format_double(v));
    write_row(out, row);
  }
}

json run_summary(const SimConfig& cfg, const Trajectory& traj, const Classification& cls) {
  double arc_dev = 0.0;
  bool exit_flag = false;
  for (const auto& d : traj.diagnostics) {
    arc_dev = std::max(arc_dev, std::abs(d.arc_length - cfg.physical.L));
    exit_flag = exit_flag || d.constraint_exit;
  }
  json q = json::array();
  for (Eigen::Index i = 0; i < cls.q_terminal.size(); ++i) q.push_back(finite_or_null(cls.q_terminal[i]));
  return json{
      {"classification", to_string(cls.regime)},
      {"classification_detail", cls.detail},
      {"amplitude", finite_or_null(cls.amplitude)},
      {"period", finite_or_null(cls.period)},
      {"q_terminal", q},
      {"status", to_string(traj.status)},
      {"message", traj.message},
      {"t_end_reached", traj.t_reached()},
      {"E_final", traj.diagnostics.empty() ? json(nullptr) : finite_or_null(traj.diagnostics.back().E_total)},
      {"arc_dev_max", finite_or_null(arc_dev)},
      {"constraint_exit", exit_flag},
      {"accepted_steps", traj.accepted_steps},
      {"rejected_steps", traj.rejected_steps},
      {"params", to_json(cfg)},
  };
}

json to_json(const RunManifest& m) {
  const auto& k = m.cache_key;
  return json{
      {"version", m.version},
      {"config", to_json(m.config)},
      {"tensor_cache_key",
       {{"N", k.N}, {"L", k.length}, {"resolution", k.resolution}, {"rule", to_string(k.rule)},
        {"points_per_panel", k.points_per_panel}, {"grid_hash", k.grid_hash}, {"file", k.filename()}}},
      {"wall_seconds", m.wall_seconds},
      {"outputs", m.outputs},
      {"truncated", m.truncated},
      {"status", m.status},
      {"message", m.message},
  };
}

void write_modes_csv(std::ostream& out, const ModeBasis& basis) {
  write_row(out, {"n", "kappaL", "C", "c"});
  for (int n = 0; n < basis.size(); ++n)
    write_row(out, {std::to_string(n + 1), format_double(basis.kappa_l()[n]),
                    format_double(basis.shape_coefficients()[n]), format_double(basis.normalization()[n])});
}

void write_flutter_csv(std::ostream& out, const BranchTable& table) {
  const Eigen::Index R = table.roots.empty() ? 0 : table.roots.front().size();
  std::vector<std::string> h{"U"};
  for (Eigen::Index b = 1; b <= R; ++b) h.push_back("Re_lambda" + std::to_string(b));
  for (Eigen::Index b = 1; b <= R; ++b) h.push_back("Im_lambda" + std::to_string(b));
  write_row(out, h);
  for (std::size_t u = 0; u < table.speeds.size(); ++u) {
    std::vector<std::string> row{format_double(table.speeds[u])};
    for (Eigen::Index b = 0; b < R; ++b) row.push_back(format_double(table.roots[u][b].real()));
    for (Eigen::Index b = 0; b < R; ++b) row.push_back(format_double(table.roots[u][b].imag()));
    write_row(out, row);
  }
}

json flutter_summary(const FlutterParams& p, std::optional<double> ucrit, double U_lo, double U_hi) {
  return json{
      {"Ucrit", ucrit ? json(*ucrit) : json(nullptr)},
      {"crossing_found", ucrit.has_value()},
      {"N", p.N},
      {"params",
       {{"D", p.D}, {"L", p.L}, {"beta", p.beta}, {"k0", p.k0},
        {"diagonal_convection", p.diagonal_convection}, {"U_min", U_lo}, {"U_max", U_hi}}},
  };
}

std::vector<std::string> sweep_header(SweepParameter param) {
  return {to_string(param), "status", "classification", "t_reached", "E_max", "E_final",
          "wL_final", "arc_dev_max", "q_final_norm", "error"};
}

void write_sweep_csv(std::ostream& out, SweepParameter param, const std::vector<SweepRow>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max<std::size_t>(width, static_cast<std::size_t>(r.q_final.size()));
  auto header = sweep_header(param);
  for (std::size_t i = 1; i <= width; ++i) header.push_back("q" + std::to_string(i) + "_final");
  write_row(out, header);
  for (const auto& r : rows) {
    std::string err = r.error.value_or("");
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    std::vector<std::string> row{format_double(r.value),
                                 to_string(r.status),
                                 r.error ? "error" : to_string(r.classification.regime),
                                 format_double(r.t_reached),
                                 format_double(r.E_max),
                                 format_double(r.E_final),
                                 format_double(r.wL_final),
                                 format_double(r.arc_dev_max),
                                 format_double(r.q_final.size() ? r.q_final.norm() : 0.0),
                                 err};
    for (std::size_t i = 0; i < width; ++i)
      row.push_back(i < static_cast<std::size_t>(r.q_final.size())
                        ? format_double(r.q_final[static_cast<Eigen::Index>(i)])
                        : std::string());
    write_row(out, row);
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace inext
