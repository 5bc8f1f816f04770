#ifndef INEXT_OUTPUT_HPP
#define INEXT_OUTPUT_HPP

#include "inext/beam_modes.hpp"
#include "inext/diagnostics.hpp"
#include "inext/dynamics.hpp"
#include "inext/flutter.hpp"
#include "inext/simulation.hpp"
#include "inext/tensor_cache.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace inext {

const char* version_string();

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::vector<std::string> trajectory_header(int N);
/// Every stride-th sample plus the final one.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int stride);

nlohmann::json run_summary(const SimConfig& cfg, const Trajectory& traj, const Classification& cls);

struct RunManifest {
  SimConfig config;
  TensorCacheKey cache_key;
  std::string version = version_string();
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  bool truncated = false;
  std::string status;
  std::string message;
};
nlohmann::json to_json(const RunManifest& m);

void write_modes_csv(std::ostream& out, const ModeBasis& basis);

/// U, Re(lambda_1..2N), Im(lambda_1..2N).
void write_flutter_csv(std::ostream& out, const BranchTable& table);
nlohmann::json flutter_summary(const FlutterParams& params, std::optional<double> ucrit, double U_lo,
                               double U_hi);

std::vector<std::string> sweep_header(SweepParameter param);
/// Header only when rows is empty. q_final is written as one column per
/// entry of the widest row, blank where a row is shorter.
void write_sweep_csv(std::ostream& out, SweepParameter param, const std::vector<SweepRow>& rows);

/// Writes text to path through a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace inext

#endif  // INEXT_OUTPUT_HPP
