#include "vne/workload_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "vne/errors.hpp"

namespace vne {

using nlohmann::json;

std::string format_workload(std::span<const VNRequest> workload) {
  std::string out;
  for (const VNRequest& r : workload) {
    json nodes = json::array();
    for (const VirtualNode& n : r.vn.nodes()) nodes.push_back({n.id, n.cpu_demand});
    json links = json::array();
    for (const VirtualLink& l : r.vn.links()) links.push_back({l.a, l.b, l.bw_demand});
    json record = {{"id", r.id},           {"arrival", r.arrival}, {"lifetime", r.lifetime},
                   {"nodes", std::move(nodes)}, {"links", std::move(links)}};
    out += record.dump();
    out += '\n';
  }
  return out;
}

void workload_write(std::span<const VNRequest> workload, const std::filesystem::path& path) {
  std::string text = format_workload(workload);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

VNRequest parse_record(const json& j) {
  if (!j.is_object()) throw InvalidSpec("record is not an object");
  VNRequest r;
  r.id = j.at("id").get<VnrId>();
  r.arrival = j.at("arrival").get<double>();
  r.lifetime = j.at("lifetime").get<double>();
  if (r.lifetime <= 0.0) throw InvalidSpec("lifetime must be positive");
  const json& nodes = j.at("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const json& n = nodes.at(i);
    if (n.size() != 2) throw InvalidSpec("node entries are [id, cpu]");
    if (n.at(0).get<std::size_t>() != i) throw InvalidSpec("node ids must be 0-based and in order");
    r.vn.add_node(n.at(1).get<double>());
  }
  for (const json& l : j.at("links")) {
    if (l.size() != 3) throw InvalidSpec("link entries are [u, v, bw]");
    r.vn.add_link(l.at(0).get<NodeId>(), l.at(1).get<NodeId>(), l.at(2).get<double>());
  }
  return r;
}

}  // namespace

std::vector<VNRequest> parse_workload(std::string_view text) {
  std::vector<VNRequest> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(parse_record(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const InvalidSpec& e) {
      throw ParseError(line_no, e.what());
    }
    if (out.size() > 1 && out.back().arrival < out[out.size() - 2].arrival)
      throw ParseError(line_no, "records must be sorted by arrival");
  }
  return out;
}

std::vector<VNRequest> workload_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_workload(buf.str());
}

}  // namespace vne
