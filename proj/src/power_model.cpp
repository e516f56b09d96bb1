#include "vne/power_model.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vne/errors.hpp"

namespace vne {

const ServerProfile& PowerConfig::profile(ProfileId id) const {
  if (id.value >= profiles.size())
    throw UnknownProfile("unknown power profile index " + std::to_string(id.value));
  return profiles[id.value];
}

std::optional<ProfileId> PowerConfig::find(std::string_view name) const {
  for (std::size_t i = 0; i < profiles.size(); ++i)
    if (profiles[i].name == name) return ProfileId{static_cast<std::uint16_t>(i)};
  return std::nullopt;
}

std::vector<std::string> PowerConfig::names() const {
  std::vector<std::string> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(p.name);
  return out;
}

void PowerConfig::validate() const {
  if (profiles.empty()) throw InvalidSpec("power configuration has no profiles");
  for (const auto& p : profiles) {
    if (p.name.empty()) throw InvalidSpec("power profile without a name");
    if (!(p.p_idle >= 0.0 && p.p_idle <= p.p_max))
      throw InvalidSpec("profile " + p.name + ": need 0 <= p_idle <= p_max");
    if (!(p.p_routing >= 0.0)) throw InvalidSpec("profile " + p.name + ": p_routing must be >= 0");
  }
}

PowerConfig PowerConfig::defaults() {
  return PowerConfig{{
      {"ML110G4", 86.0, 117.0, 10.0},
      {"ML110G5", 93.7, 135.0, 10.0},
  }};
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_watts(std::string_view value, std::size_t line) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ParseError(line, "expected a number, got '" + std::string(value) + "'");
  return out;
}

}  // namespace

PowerConfig parse_power_config(std::string_view text) {
  PowerConfig cfg;
  struct Pending {
    ServerProfile profile;
    std::size_t line = 0;
    unsigned seen = 0;  // bit per key
  };
  std::optional<Pending> current;

  auto finish = [&]() {
    if (!current) return;
    if (current->seen != 0b1111)
      throw ParseError(current->line,
                       "profile needs name, p_idle_watts, p_max_watts and p_routing_watts");
    cfg.profiles.push_back(current->profile);
    current.reset();
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line == "[profile]") {
      finish();
      current = Pending{{}, line_no, 0};
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    if (!current) throw ParseError(line_no, "key outside a [profile] section");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key == "name") {
      if (value.empty()) throw ParseError(line_no, "empty profile name");
      current->profile.name = std::string(value);
      current->seen |= 1u;
    } else if (key == "p_idle_watts") {
      current->profile.p_idle = parse_watts(value, line_no);
      current->seen |= 2u;
    } else if (key == "p_max_watts") {
      current->profile.p_max = parse_watts(value, line_no);
      current->seen |= 4u;
    } else if (key == "p_routing_watts") {
      current->profile.p_routing = parse_watts(value, line_no);
      current->seen |= 8u;
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  finish();
  if (cfg.profiles.empty()) throw ParseError(line_no, "no [profile] sections");
  try {
    cfg.validate();
  } catch (const InvalidSpec& e) {
    throw ParseError(line_no, e.what());
  }
  return cfg;
}

PowerConfig load_power_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open power profile file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_power_config(buf.str());
}

std::string format_power_config(const PowerConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& p : cfg.profiles) {
    out << "[profile]\n"
        << "name = " << p.name << "\n"
        << "p_idle_watts = " << p.p_idle << "\n"
        << "p_max_watts = " << p.p_max << "\n"
        << "p_routing_watts = " << p.p_routing << "\n\n";
  }
  return out.str();
}

double node_power(const SubstrateNode& node, const PowerConfig& cfg) {
  const ServerProfile& p = cfg.profile(node.profile);
  if (!node.power_on) return 0.0;
  double watts = p.p_idle + (p.p_max - p.p_idle) * node.utilization();
  if (node.routing_enabled) watts += p.p_routing;
  return watts;
}

double network_power(const SubstrateNetwork& sn, const PowerConfig& cfg) {
  double total = 0.0;
  for (const SubstrateNode& n : sn.nodes()) total += node_power(n, cfg);
  return total;
}

double placement_power(const ResourceView& view, NodeId n, double cpu_demand,
                       const PowerConfig& cfg) {
  const SubstrateNode& node = view.substrate().node(n);
  const ServerProfile& p = cfg.profile(node.profile);
  double dynamic = (p.p_max - p.p_idle) * (cpu_demand / node.cpu_capacity);
  return view.powered(n) ? dynamic : p.p_idle + dynamic;
}

double embedding_power(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m,
                       const PowerConfig& cfg) {
  check_structure(sn, vn, m);
  std::vector<char> on(sn.node_count());
  std::vector<char> routing(sn.node_count());
  for (const SubstrateNode& n : sn.nodes()) {
    on[n.id] = n.power_on;
    routing[n.id] = n.routing_enabled;
  }

  double watts = 0.0;
  for (const VirtualNode& v : vn.nodes()) {
    const SubstrateNode& host = sn.node(m.node_map[v.id]);
    const ServerProfile& p = cfg.profile(host.profile);
    double dynamic = (p.p_max - p.p_idle) * (v.cpu_demand / host.cpu_capacity);
    if (!on[host.id]) {
      watts += p.p_idle;
      on[host.id] = 1;
    }
    watts += dynamic;
  }
  for (const SubstratePath& path : m.link_map) {
    for (NodeId n : path.nodes) {
      if (routing[n]) continue;
      const ServerProfile& p = cfg.profile(sn.node(n).profile);
      if (!on[n]) {
        watts += p.p_idle;
        on[n] = 1;
      }
      watts += p.p_routing;
      routing[n] = 1;
    }
  }
  return watts;
}

}  // namespace vne
