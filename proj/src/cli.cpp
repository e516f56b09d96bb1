#include "vne/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vne/brite.hpp"
#include "vne/errors.hpp"
#include "vne/generators.hpp"
#include "vne/simulation.hpp"
#include "vne/workload_io.hpp"

namespace vne {

namespace {

/// Bad flag value detected after CLI11 has accepted the syntax.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(std::string_view text, const std::string& flag) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw UsageError(flag + ": '" + std::string(text) + "' is not a number");
  return v;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(flag + ": expected MIN:MAX, got '" + text + "'");
  double lo = parse_number(std::string_view(text).substr(0, colon), flag);
  double hi = parse_number(std::string_view(text).substr(colon + 1), flag);
  if (lo > hi) throw UsageError(flag + ": MIN exceeds MAX in '" + text + "'");
  return {lo, hi};
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_number(std::string_view(text).substr(start, end - start), flag));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct PowerSource {
  std::string path;  // empty: built-in profiles

  PowerConfig load() const {
    if (path.empty()) return PowerConfig::defaults();
    return load_power_config(path);
  }
};

void add_power_option(CLI::App& cmd, PowerSource& power) {
  if (const char* env = std::getenv("VNE_POWER_PROFILES")) power.path = env;
  cmd.add_option("--power-profiles", power.path,
                 "Power profile file (default: $VNE_POWER_PROFILES or built-in ML110 G4/G5)")
      ->check(CLI::ExistingFile);
}

struct SubstrateArgs {
  SubstrateGenSpec spec;
  std::string bw = "50:100";
  std::vector<std::string> classes{"ML110G4:3720", "ML110G5:5320"};
  std::string output;
  PowerSource power;
};

struct WorkloadArgs {
  WorkloadSpec spec;
  std::string vn_nodes = "2:20";
  std::string cpu_choices = "2500,2000,1000,500";
  std::string bw = "1:50";
  std::string lifetime = "300:700";
  std::string output;
};

struct RunArgs {
  std::string substrate;
  std::string workload;
  std::string solver = "mopso";
  EmbedderConfig embedder;
  double pro_mut = -1.0;
  std::string output;
  PowerSource power;
};

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string csv;
};

int gen_substrate(SubstrateArgs& a, std::ostream& out) {
  auto [lo, hi] = parse_range(a.bw, "--bw");
  a.spec.bw_min = lo;
  a.spec.bw_max = hi;
  PowerConfig power = a.power.load();
  a.spec.node_classes.clear();
  for (const std::string& c : a.classes) {
    auto colon = c.rfind(':');
    if (colon == std::string::npos) throw UsageError("--node-class: expected PROFILE:CPU, got '" + c + "'");
    auto profile = power.find(c.substr(0, colon));
    if (!profile) throw UsageError("--node-class: unknown profile '" + c.substr(0, colon) + "'");
    a.spec.node_classes.push_back({*profile, parse_number(std::string_view(c).substr(colon + 1), "--node-class")});
  }
  SubstrateNetwork sn = gen_substrate(a.spec);
  brite_write(sn, power.names(), a.output);
  out << "wrote " << a.output << ": " << sn.node_count() << " nodes, " << sn.link_count() << " links\n";
  return 0;
}

int gen_workload(WorkloadArgs& a, std::ostream& out) {
  auto [nmin, nmax] = parse_range(a.vn_nodes, "--vn-nodes");
  a.spec.vn_node_min = static_cast<std::size_t>(nmin);
  a.spec.vn_node_max = static_cast<std::size_t>(nmax);
  a.spec.cpu_choices = parse_list(a.cpu_choices, "--cpu-choices");
  std::tie(a.spec.bw_min, a.spec.bw_max) = parse_range(a.bw, "--bw");
  std::tie(a.spec.lifetime_min, a.spec.lifetime_max) = parse_range(a.lifetime, "--lifetime");
  auto workload = gen_workload(a.spec);
  workload_write(workload, a.output);
  out << "wrote " << a.output << ": " << workload.size() << " VNRs\n";
  return 0;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int run(RunArgs& a, std::ostream& out) {
  if (a.pro_mut >= 0.0) a.embedder.params.pro_mut = a.pro_mut;
  a.embedder.power = a.power.load();
  auto embedder = make_embedder(a.solver, a.embedder);

  SubstrateNetwork sn = [&] {
    try {
      return brite_read(a.substrate, a.embedder.power.names());
    } catch (const ParseError& e) {
      throw IoError(a.substrate + ": " + e.what());
    }
  }();
  std::vector<VNRequest> workload = [&] {
    try {
      return workload_read(a.workload);
    } catch (const ParseError& e) {
      throw IoError(a.workload + ": " + e.what());
    }
  }();

  MetricsSeries series = run_simulation(sn, workload, *embedder, a.embedder.power, a.embedder.fragmentation);
  write_metrics_csv(series, a.output, a.solver);
  MetricsSummary m = compute_metrics(series);
  out << "solver                  " << a.solver << '\n'
      << "requests                " << series.total << '\n'
      << "accepted                " << series.accepted << '\n'
      << "acceptance_ratio        " << (m.acceptance_ratio ? fixed6(*m.acceptance_ratio) : "NA") << '\n'
      << "long_term_revenue       " << fixed6(m.long_term_revenue) << '\n'
      << "rc_ratio                " << fixed6(m.rc_ratio) << '\n'
      << "avg_snf                 " << fixed6(m.average_snf) << '\n'
      << "avg_power_watts         " << fixed6(m.average_power_watts) << '\n'
      << "rejected_resource_ratio " << fixed6(m.rejected_resource_ratio) << '\n'
      << "wrote " << a.output << " and " << summary_path(a.output).string() << '\n';
  return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int report(const ReportArgs& a, std::ostream& out) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  for (const std::string& path : a.inputs) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty summary file");
    auto h = split_csv_line(line);
    if (header.empty())
      header = h;
    else if (h != header)
      throw IoError(path + ": summary columns differ from " + a.inputs.front());
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cells = split_csv_line(line);
      if (cells.size() != header.size()) throw IoError(path + ": row has " + std::to_string(cells.size()) +
                                                       " fields, expected " + std::to_string(header.size()));
      rows.push_back(std::move(cells));
    }
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto print_row = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) line += "  ";
      // Solver names left-aligned, numbers right-aligned.
      std::string pad(width[c] - cells[c].size(), ' ');
      line += c == 0 ? cells[c] + pad : pad + cells[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  print_row(header);
  for (const auto& r : rows) print_row(r);

  if (!a.csv.empty()) {
    std::ofstream csv(a.csv, std::ios::binary);
    if (!csv) throw IoError("cannot open " + a.csv + " for writing");
    auto join = [](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t c = 0; c < cells.size(); ++c) s += (c ? "," : "") + cells[c];
      return s + '\n';
    };
    csv << join(header);
    for (const auto& r : rows) csv << join(r);
    if (!csv) throw IoError("failed writing " + a.csv);
  }
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-aware virtual network embedding experiments"};
  app.name("vne");
  app.require_subcommand(1);

  SubstrateArgs sub;
  auto* gs = app.add_subcommand("gen-substrate", "Generate a Waxman substrate as a BRITE file");
  gs->add_option("--nodes", sub.spec.node_count, "Substrate nodes")->capture_default_str();
  gs->add_option("--links", sub.spec.target_link_count, "Substrate links")->capture_default_str();
  gs->add_option("--bw", sub.bw, "Link bandwidth range MIN:MAX")->capture_default_str();
  gs->add_option("--alpha", sub.spec.waxman_alpha, "Waxman alpha")->capture_default_str();
  gs->add_option("--beta", sub.spec.waxman_beta, "Waxman beta")->capture_default_str();
  gs->add_option("--node-class", sub.classes, "Server class PROFILE:CPU, repeatable")->capture_default_str();
  gs->add_option("--seed", sub.spec.seed, "Random seed")->capture_default_str();
  gs->add_option("-o,--output", sub.output, "Output BRITE file")->required();
  add_power_option(*gs, sub.power);

  WorkloadArgs wl;
  auto* gw = app.add_subcommand("gen-workload", "Generate a VNR workload as JSON lines");
  gw->add_option("--count", wl.spec.vnr_count, "Number of VNRs")->capture_default_str();
  gw->add_option("--vn-nodes", wl.vn_nodes, "VN node count range MIN:MAX")->capture_default_str();
  gw->add_option("--connectivity", wl.spec.connectivity, "Pairwise link probability")->capture_default_str();
  gw->add_option("--cpu-choices", wl.cpu_choices, "Comma-separated CPU demands")->capture_default_str();
  gw->add_option("--bw", wl.bw, "Virtual link bandwidth range MIN:MAX")->capture_default_str();
  gw->add_option("--arrival-rate", wl.spec.arrival_rate, "Arrivals per 100 time units")->capture_default_str();
  gw->add_option("--lifetime", wl.lifetime, "Lifetime range MIN:MAX")->capture_default_str();
  gw->add_option("--seed", wl.spec.seed, "Random seed")->capture_default_str();
  gw->add_option("-o,--output", wl.output, "Output JSON-lines file")->required();

  RunArgs ra;
  SolverParams& sp = ra.embedder.params;
  auto* rn = app.add_subcommand("run", "Replay a workload on a substrate and write metric CSVs");
  rn->add_option("--substrate", ra.substrate, "BRITE substrate file")->required()->check(CLI::ExistingFile);
  rn->add_option("--workload", ra.workload, "JSON-lines workload file")->required()->check(CLI::ExistingFile);
  rn->add_option("--solver", ra.solver, "Embedding algorithm")
      ->check(CLI::IsMember({"mopso", "greedy2s", "btbfs"}))
      ->capture_default_str();
  rn->add_option("--iterations", sp.iterations_max, "MOPSO iterations")->capture_default_str();
  rn->add_option("--swarm", sp.swarm_size, "MOPSO swarm size")->capture_default_str();
  rn->add_option("--archive", sp.ea_max_size, "External archive capacity")->capture_default_str();
  rn->add_option("--hops-max", sp.hops_max, "Maximum substrate path length")->capture_default_str();
  rn->add_option("--max-backtrack-mult", ra.embedder.max_backtrack_mult,
                 "Backtracking budget per VNR as a multiple of its node count")
      ->capture_default_str();
  rn->add_option("--w", sp.w, "Inertia weight")->capture_default_str();
  rn->add_option("--c1", sp.c1, "Personal-best weight")->capture_default_str();
  rn->add_option("--c2", sp.c2, "Leader weight")->capture_default_str();
  rn->add_option("--pro-mut", ra.pro_mut, "Mutation probability (default 1/|N_v|)")
      ->check(CLI::Range(0.0, 1.0));
  rn->add_option("--q", ra.embedder.fragmentation.q, "Fragmentation exponent")->capture_default_str();
  rn->add_option("--bw-lower-bound", ra.embedder.fragmentation.bw_lower_bound,
                 "Residual bandwidth that keeps a link inside a fragment")
      ->capture_default_str();
  rn->add_option("--seed", sp.seed, "Solver seed")->capture_default_str();
  rn->add_option("--threads", sp.threads, "Worker threads inside the solver")->capture_default_str();
  rn->add_option("-o,--output", ra.output, "Metrics CSV path")->required();
  add_power_option(*rn, ra.power);

  ReportArgs rp;
  auto* rep = app.add_subcommand("report", "Compare summary CSVs in an aligned table");
  rep->add_option("summaries", rp.inputs, "Summary CSV files")->required()->check(CLI::ExistingFile);
  rep->add_option("--csv", rp.csv, "Also write the combined table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (gs->parsed()) return gen_substrate(sub, out);
    if (gw->parsed()) return gen_workload(wl, out);
    if (rn->parsed()) return run(ra, out);
    return report(rp, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidSpec& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int dispatch(int argc, const char* const* argv) { return dispatch(argc, argv, std::cout, std::cerr); }

}  // namespace vne
