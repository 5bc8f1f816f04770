#include "inext/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace inext {

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::U: return "U";
    case SweepParameter::a: return "a";
    case SweepParameter::N: return "N";
    case SweepParameter::beta: return "beta";
    case SweepParameter::k0: return "k0";
    case SweepParameter::k2: return "k2";
  }
  return "?";
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
  for (auto p : {SweepParameter::U, SweepParameter::a, SweepParameter::N, SweepParameter::beta,
                 SweepParameter::k0, SweepParameter::k2})
    if (s == to_string(p)) return p;
  throw std::invalid_argument("unknown sweep parameter '" + s + "' (U, a, N, beta, k0, k2)");
}

void apply_parameter(SimConfig& cfg, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::U: cfg.physical.U = value; break;
    case SweepParameter::a: cfg.initial.a = value; break;
    case SweepParameter::N: {
      if (value != std::round(value)) throw std::invalid_argument("sweep over N needs integer values");
      cfg.numerical.N = static_cast<int>(value);
      break;
    }
    case SweepParameter::beta: cfg.physical.beta = value; break;
    case SweepParameter::k0: cfg.physical.k0 = value; break;
    case SweepParameter::k2: cfg.physical.k2 = value; break;
  }
}

SweepRow summarize(double value, const Trajectory& traj, double length, const ClassifyOptions& classify) {
  SweepRow row;
  row.value = value;
  row.status = traj.status;
  row.classification = classify_longtime(traj, classify);
  row.t_reached = traj.t_reached();
  for (const auto& d : traj.diagnostics) {
    row.E_max = std::max(row.E_max, d.E_total);
    row.arc_dev_max = std::max(row.arc_dev_max, std::abs(d.arc_length - length));
  }
  if (!traj.diagnostics.empty()) {
    row.E_final = traj.diagnostics.back().E_total;
    row.wL_final = traj.diagnostics.back().wL;
    row.q_final = traj.q.back();
  }
  return row;
}

std::vector<SweepRow> sweep(const SimConfig& tmpl, SweepParameter param, const std::vector<double>& values,
                            int threads, const std::filesystem::path& cache_dir,
                            const ClassifyOptions& classify) {
  std::vector<SweepRow> rows(values.size());
  // Contexts are keyed by N; every other sweepable field leaves them unchanged.
  std::map<int, std::shared_ptr<const SimulationContext>> contexts;
  std::mutex context_mutex;
  auto context_for = [&](const SimConfig& cfg) {
    std::lock_guard lock(context_mutex);
    auto& slot = contexts[cfg.numerical.N];
    if (!slot) slot = std::make_shared<const SimulationContext>(SimulationContext::build(cfg, cache_dir));
    return slot;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      try {
        SimConfig cfg = tmpl;
        apply_parameter(cfg, param, values[i]);
        cfg.validate();
        const auto ctx = context_for(cfg);
        row = summarize(values[i], simulate(cfg, *ctx), cfg.physical.L, classify);
      } catch (const std::exception& e) {
        row = SweepRow{};
        row.value = values[i];
        row.status = RunStatus::StepFailure;
        row.error = e.what();
      }
    }
  };

  const int count = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(values.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace inext
