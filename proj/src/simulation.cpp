#include "vne/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "vne/baselines.hpp"
#include "vne/errors.hpp"

namespace vne {

namespace {

class MopsoEmbedder : public Embedder {
 public:
  explicit MopsoEmbedder(const EmbedderConfig& cfg) : cfg_(cfg) {}
  std::string name() const override { return "mopso"; }
  std::optional<Mapping> embed(const SubstrateNetwork& sn, const VNRequest& vnr) override {
    SolverParams params = cfg_.params;
    params.max_backtrack = cfg_.max_backtrack_mult * vnr.vn.node_count();
    return solve(sn, vnr, params, cfg_.power, cfg_.fragmentation).mapping;
  }

 private:
  EmbedderConfig cfg_;
};

class GreedyEmbedder : public Embedder {
 public:
  explicit GreedyEmbedder(const EmbedderConfig& cfg) : hops_max_(cfg.params.hops_max) {}
  std::string name() const override { return "greedy2s"; }
  std::optional<Mapping> embed(const SubstrateNetwork& sn, const VNRequest& vnr) override {
    return greedy_two_stage(sn, vnr, hops_max_);
  }

 private:
  std::size_t hops_max_;
};

class BacktrackEmbedder : public Embedder {
 public:
  explicit BacktrackEmbedder(const EmbedderConfig& cfg)
      : hops_max_(cfg.params.hops_max), mult_(cfg.max_backtrack_mult) {}
  std::string name() const override { return "btbfs"; }
  std::optional<Mapping> embed(const SubstrateNetwork& sn, const VNRequest& vnr) override {
    return backtrack_bfs(sn, vnr, hops_max_, mult_ * vnr.vn.node_count());
  }

 private:
  std::size_t hops_max_;
  std::size_t mult_;
};

bool event_before(const SimEvent& a, const SimEvent& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.kind != b.kind) return a.kind == EventKind::departure;
  return a.vnr < b.vnr;
}

}  // namespace

std::unique_ptr<Embedder> make_embedder(std::string_view solver, const EmbedderConfig& cfg) {
  cfg.params.validate();
  if (solver == "mopso") return std::make_unique<MopsoEmbedder>(cfg);
  if (solver == "greedy2s") return std::make_unique<GreedyEmbedder>(cfg);
  if (solver == "btbfs") return std::make_unique<BacktrackEmbedder>(cfg);
  throw InvalidSpec("unknown solver '" + std::string(solver) + "'");
}

MetricsSeries run_simulation(SubstrateNetwork& sn, std::span<const VNRequest> workload,
                             Embedder& embedder, const PowerConfig& power,
                             const FragmentationConfig& fragmentation) {
  for (std::size_t i = 1; i < workload.size(); ++i)
    if (workload[i].arrival < workload[i - 1].arrival)
      throw InvalidSpec("workload must be sorted by arrival");

  std::map<VnrId, const VNRequest*> by_id;
  for (const VNRequest& r : workload) {
    if (r.lifetime <= 0.0) throw InvalidSpec("VNR " + std::to_string(r.id) + " has no lifetime");
    if (!by_id.emplace(r.id, &r).second) throw InvalidSpec("duplicate VNR id " + std::to_string(r.id));
  }

  MetricsSeries series;
  double total_cpu = 0.0;
  for (const SubstrateNode& n : sn.nodes()) total_cpu += n.cpu_capacity;

  struct Active {
    Mapping mapping;
    double revenue;
    double cost;
  };
  std::map<VnrId, Active> active;
  std::size_t arrived = 0;

  auto record = [&](double time) {
    MetricSample s;
    s.time = time;
    // Rebuilt from the active set so the rates return to exactly 0.
    for (const auto& [id, a] : active) {
      s.revenue_rate += a.revenue;
      s.cost_rate += a.cost;
    }
    s.acceptance_ratio = arrived > 0 ? static_cast<double>(series.accepted) / static_cast<double>(arrived) : 0.0;
    s.snf = snf(sn, fragmentation);
    s.power_watts = network_power(sn, power);
    double used = 0.0;
    for (const SubstrateNode& n : sn.nodes()) {
      if (n.power_on) ++s.active_nodes;
      used += n.cpu_capacity - n.cpu_residual;
    }
    s.utilization = total_cpu > 0.0 ? used / total_cpu : 0.0;
    if (!series.samples.empty() && series.samples.back().time == time)
      series.samples.back() = s;
    else
      series.samples.push_back(s);
  };

  std::vector<SimEvent> queue;
  queue.reserve(workload.size() * 2);
  for (const VNRequest& r : workload) queue.push_back({r.arrival, EventKind::arrival, r.id});
  auto later = [](const SimEvent& a, const SimEvent& b) { return event_before(b, a); };
  std::make_heap(queue.begin(), queue.end(), later);

  record(0.0);
  while (!queue.empty()) {
    std::pop_heap(queue.begin(), queue.end(), later);
    SimEvent ev = queue.back();
    queue.pop_back();
    const VNRequest& r = *by_id.at(ev.vnr);

    if (ev.kind == EventKind::departure) {
      auto it = active.find(r.id);
      sn.release_mapping(r, it->second.mapping);
      active.erase(it);
    } else {
      ++arrived;
      ++series.total;
      const double offered = revenue(r.vn);
      series.offered_revenue += offered;
      std::optional<Mapping> m;
      try {
        m = embedder.embed(sn, r);
      } catch (const std::exception& e) {
        throw SolverPanic(r.id, e.what());
      }
      if (m) {
        try {
          sn.apply_mapping(r, *m);
        } catch (const Error& e) {
          throw SolverPanic(r.id, std::string("returned an infeasible mapping: ") + e.what());
        }
        active.emplace(r.id, Active{*m, offered, embedding_cost(r.vn, *m)});
        ++series.accepted;
        queue.push_back({r.departure(), EventKind::departure, r.id});
        std::push_heap(queue.begin(), queue.end(), later);
      } else {
        series.rejected_revenue += offered;
      }
    }
    if (queue.empty() || queue.front().time != ev.time) record(ev.time);
  }

  // Rejected requests still count towards the horizon, so a run that rejects
  // everything keeps a positive observation window.
  series.horizon = series.samples.back().time;
  for (const VNRequest& r : workload) series.horizon = std::max(series.horizon, r.departure());
  if (series.horizon > series.samples.back().time) record(series.horizon);
  return series;
}

MetricsSummary compute_metrics(const MetricsSeries& series) {
  MetricsSummary out;
  if (series.total == 0) return out;
  const double horizon = series.horizon;
  if (!(horizon > 0.0)) throw DegenerateSeries("simulation horizon is not positive");

  double revenue_area = 0.0, cost_area = 0.0, snf_area = 0.0, power_area = 0.0;
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const MetricSample& s = series.samples[i];
    double end = i + 1 < series.samples.size() ? series.samples[i + 1].time : horizon;
    double dt = std::max(0.0, std::min(end, horizon) - s.time);
    revenue_area += s.revenue_rate * dt;
    cost_area += s.cost_rate * dt;
    snf_area += s.snf * dt;
    power_area += s.power_watts * dt;
  }
  out.long_term_revenue = revenue_area / horizon;
  out.acceptance_ratio = static_cast<double>(series.accepted) / static_cast<double>(series.total);
  out.rc_ratio = cost_area > 0.0 ? revenue_area / cost_area : 0.0;
  out.average_snf = snf_area / horizon;
  out.average_power_watts = power_area / horizon;
  out.rejected_resource_ratio =
      series.offered_revenue > 0.0 ? series.rejected_revenue / series.offered_revenue : 0.0;
  return out;
}

std::filesystem::path summary_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".summary.csv");
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_metrics_csv(const MetricsSeries& series, const std::filesystem::path& path,
                       std::string_view solver) {
  std::string text = "time,revenue_rate,acceptance_ratio,cost_rate,snf,power_watts,active_nodes,utilization\n";
  if (series.total > 0) {
    for (const MetricSample& s : series.samples) {
      text += fixed6(s.time) + ',' + fixed6(s.revenue_rate) + ',' + fixed6(s.acceptance_ratio) + ',' +
              fixed6(s.cost_rate) + ',' + fixed6(s.snf) + ',' + fixed6(s.power_watts) + ',' +
              std::to_string(s.active_nodes) + ',' + fixed6(s.utilization) + '\n';
    }
  }
  write_text(path, text);

  MetricsSummary m = compute_metrics(series);
  std::string summary =
      "solver,long_term_revenue,acceptance_ratio,rc_ratio,avg_snf,avg_power_watts,rejected_resource_ratio\n";
  summary += std::string(solver) + ',' + fixed6(m.long_term_revenue) + ',' +
             (m.acceptance_ratio ? fixed6(*m.acceptance_ratio) : std::string("NA")) + ',' +
             fixed6(m.rc_ratio) + ',' + fixed6(m.average_snf) + ',' + fixed6(m.average_power_watts) + ',' +
             fixed6(m.rejected_resource_ratio) + '\n';
  write_text(summary_path(path), summary);
}

}  // namespace vne
