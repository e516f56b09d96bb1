#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/mopso.hpp"
#include "vne/net_model.hpp"
#include "vne/power_model.hpp"

namespace vne {

/// Maps one VNR onto the current substrate state, or declines it.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual std::optional<Mapping> embed(const SubstrateNetwork& sn, const VNRequest& vnr) = 0;
};

struct EmbedderConfig {
  /// Solver parameters; hops_max, seed and threads also apply to the baselines.
  SolverParams params;
  /// Backtracking budget per VNR is this times the VN's node count.
  std::size_t max_backtrack_mult = 3;
  PowerConfig power = PowerConfig::defaults();
  FragmentationConfig fragmentation;
};

inline constexpr std::string_view kSolverNames[] = {"mopso", "greedy2s", "btbfs"};

/// Throws InvalidSpec for an unknown solver name.
std::unique_ptr<Embedder> make_embedder(std::string_view solver, const EmbedderConfig& cfg);

enum class EventKind { departure, arrival };

struct SimEvent {
  double time = 0.0;
  EventKind kind = EventKind::arrival;
  VnrId vnr = 0;
};

/// Substrate state holding from `time` until the next sample.
struct MetricSample {
  double time = 0.0;
  double revenue_rate = 0.0;      // revenue of active VNRs per time unit
  double acceptance_ratio = 0.0;  // accepted / arrived so far, 0 before the first arrival
  double cost_rate = 0.0;
  double snf = 0.0;
  double power_watts = 0.0;
  std::size_t active_nodes = 0;
  double utilization = 0.0;  // allocated CPU over total CPU
};

struct MetricsSeries {
  std::vector<MetricSample> samples;
  std::size_t total = 0;
  std::size_t accepted = 0;
  double offered_revenue = 0.0;
  double rejected_revenue = 0.0;
  double horizon = 0.0;  // latest arrival + lifetime over the workload
};

struct MetricsSummary {
  double long_term_revenue = 0.0;
  std::optional<double> acceptance_ratio;  // unset when there were no requests
  double rc_ratio = 0.0;
  double average_snf = 0.0;
  double average_power_watts = 0.0;
  double rejected_resource_ratio = 0.0;
};

/// Replays the workload (sorted by arrival) against sn. Departures precede
/// arrivals at equal times, ties by VNR id. sn ends in its initial state.
/// A throwing embedder or an infeasible mapping surfaces as SolverPanic.
MetricsSeries run_simulation(SubstrateNetwork& sn, std::span<const VNRequest> workload,
                             Embedder& embedder, const PowerConfig& power,
                             const FragmentationConfig& fragmentation);

/// Piecewise-constant integrals of the samples over [0, horizon]. Throws
/// DegenerateSeries when requests exist but the horizon is not positive.
MetricsSummary compute_metrics(const MetricsSeries& series);

/// Writes the per-sample CSV at `path` and the aggregates to `<path>.summary.csv`.
void write_metrics_csv(const MetricsSeries& series, const std::filesystem::path& path,
                       std::string_view solver);

std::filesystem::path summary_path(const std::filesystem::path& path);

}  // namespace vne
