#include "vne/brite.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "vne/errors.hpp"

namespace vne {

namespace {

/// Shortest decimal that reads back to the same double.
void put_number(std::string& out, double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

void put_number(std::string& out, std::size_t value) { out += std::to_string(value); }

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Next non-blank line, or false at end of input.
  bool next(std::string_view& line) {
    while (pos_ < text_.size()) {
      auto nl = text_.find('\n', pos_);
      std::string_view raw = text_.substr(pos_, nl == std::string_view::npos ? std::string_view::npos : nl - pos_);
      pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
      ++number_;
      if (!split_words(raw).empty()) {
        line = raw;
        return true;
      }
    }
    return false;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

double to_double(std::string_view word, std::size_t line, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc{} || ptr != word.data() + word.size() || !std::isfinite(v))
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(word) + "'");
  return v;
}

long long to_integer(std::string_view word, std::size_t line, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc{} || ptr != word.data() + word.size())
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(word) + "'");
  return v;
}

/// Pulls the integers out of a header such as "Topology: ( 4 Nodes, 5 Edges )".
std::vector<long long> header_counts(std::string_view line, std::string_view keyword, std::size_t number) {
  auto words = split_words(line);
  if (words.empty() || words[0] != keyword)
    throw ParseError(number, "expected '" + std::string(keyword) + "' header");
  std::vector<long long> counts;
  for (std::size_t i = 1; i < words.size(); ++i) {
    std::string_view w = words[i];
    while (!w.empty() && (w.back() == ',' || w.back() == ')')) w.remove_suffix(1);
    while (!w.empty() && w.front() == '(') w.remove_prefix(1);
    if (w.empty() || !(w.front() >= '0' && w.front() <= '9')) continue;
    counts.push_back(to_integer(w, number, "count"));
  }
  return counts;
}

}  // namespace

std::string format_brite(const SubstrateNetwork& sn, std::span<const std::string> profile_names) {
  std::string out;
  out += "Topology: ( " + std::to_string(sn.node_count()) + " Nodes, " + std::to_string(sn.link_count()) +
         " Edges )\n\n";
  out += "Nodes: ( " + std::to_string(sn.node_count()) + " )\n";
  for (const SubstrateNode& n : sn.nodes()) {
    if (n.profile.value >= profile_names.size())
      throw UnknownProfile("node " + std::to_string(n.id) + " has no profile name");
    std::size_t degree = sn.incident(n.id).size();
    put_number(out, static_cast<std::size_t>(n.id));
    out += ' ';
    put_number(out, n.x);
    out += ' ';
    put_number(out, n.y);
    out += ' ';
    put_number(out, degree);
    out += ' ';
    put_number(out, degree);
    out += ' ';
    put_number(out, n.cpu_capacity);
    out += ' ';
    out += profile_names[n.profile.value];
    out += '\n';
  }
  out += "\nEdges: ( " + std::to_string(sn.link_count()) + " )\n";
  for (const SubstrateLink& l : sn.links()) {
    const auto& a = sn.node(l.a);
    const auto& b = sn.node(l.b);
    put_number(out, static_cast<std::size_t>(l.id));
    out += ' ';
    put_number(out, static_cast<std::size_t>(l.a));
    out += ' ';
    put_number(out, static_cast<std::size_t>(l.b));
    out += ' ';
    put_number(out, std::hypot(a.x - b.x, a.y - b.y));
    out += " 0 ";
    put_number(out, l.bw_capacity);
    out += " -1 -1 E_RT U\n";
  }
  return out;
}

void brite_write(const SubstrateNetwork& sn, std::span<const std::string> profile_names,
                 const std::filesystem::path& path) {
  std::string text = format_brite(sn, profile_names);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

SubstrateNetwork parse_brite(std::string_view text, std::span<const std::string> profile_names) {
  LineReader reader(text);
  std::string_view line;

  if (!reader.next(line)) throw ParseError(reader.number(), "empty file");
  auto totals = header_counts(line, "Topology:", reader.number());
  if (totals.size() != 2) throw ParseError(reader.number(), "topology header needs node and edge counts");
  if (totals[0] < 0 || totals[1] < 0) throw ParseError(reader.number(), "negative count");
  const auto node_count = static_cast<std::size_t>(totals[0]);
  const auto edge_count = static_cast<std::size_t>(totals[1]);

  if (!reader.next(line)) throw ParseError(reader.number(), "missing Nodes section");
  auto nodes_header = header_counts(line, "Nodes:", reader.number());
  if (nodes_header.size() != 1 || nodes_header[0] != totals[0])
    throw ParseError(reader.number(), "Nodes count disagrees with the topology header");

  SubstrateNetwork sn;
  for (std::size_t i = 0; i < node_count; ++i) {
    if (!reader.next(line)) throw ParseError(reader.number(), "expected " + std::to_string(node_count) + " node lines");
    const std::size_t no = reader.number();
    auto w = split_words(line);
    if (w.size() != 7) throw ParseError(no, "node line needs 7 fields");
    if (to_integer(w[0], no, "node id") != static_cast<long long>(i))
      throw ParseError(no, "node ids must be 0-based and in order");
    double x = to_double(w[1], no, "x coordinate");
    double y = to_double(w[2], no, "y coordinate");
    to_integer(w[3], no, "in-degree");
    to_integer(w[4], no, "out-degree");
    double cpu = to_double(w[5], no, "CPU capacity");
    if (cpu < 0.0) throw ParseError(no, "negative CPU capacity");
    std::size_t profile = profile_names.size();
    for (std::size_t p = 0; p < profile_names.size(); ++p)
      if (profile_names[p] == w[6]) profile = p;
    if (profile == profile_names.size()) throw ParseError(no, "unknown profile '" + std::string(w[6]) + "'");
    sn.add_node(cpu, ProfileId{static_cast<std::uint16_t>(profile)}, x, y);
  }

  if (!reader.next(line)) throw ParseError(reader.number(), "missing Edges section");
  auto edges_header = header_counts(line, "Edges:", reader.number());
  if (edges_header.size() != 1 || edges_header[0] != totals[1])
    throw ParseError(reader.number(), "Edges count disagrees with the topology header");

  for (std::size_t i = 0; i < edge_count; ++i) {
    if (!reader.next(line)) throw ParseError(reader.number(), "expected " + std::to_string(edge_count) + " edge lines");
    const std::size_t no = reader.number();
    auto w = split_words(line);
    if (w.size() < 6) throw ParseError(no, "edge line needs at least 6 fields");
    if (to_integer(w[0], no, "edge id") != static_cast<long long>(i))
      throw ParseError(no, "edge ids must be 0-based and in order");
    long long from = to_integer(w[1], no, "edge endpoint");
    long long to = to_integer(w[2], no, "edge endpoint");
    if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= node_count ||
        static_cast<std::size_t>(to) >= node_count)
      throw ParseError(no, "edge endpoint refers to a missing node");
    to_double(w[3], no, "length");
    to_double(w[4], no, "delay");
    double bw = to_double(w[5], no, "bandwidth");
    if (bw < 0.0) throw ParseError(no, "negative bandwidth");
    try {
      sn.add_link(static_cast<NodeId>(from), static_cast<NodeId>(to), bw);
    } catch (const InvalidSpec& e) {
      throw ParseError(no, e.what());
    }
  }
  if (reader.next(line)) throw ParseError(reader.number(), "unexpected trailing content");
  return sn;
}

SubstrateNetwork brite_read(const std::filesystem::path& path,
                            std::span<const std::string> profile_names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_brite(buf.str(), profile_names);
}

}  // namespace vne
