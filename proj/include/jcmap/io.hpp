#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jcmap/graph.hpp"
#include "jcmap/hierarchy.hpp"
#include "jcmap/layout.hpp"
#include "jcmap/partition.hpp"

#include <json.hpp>

namespace jcmap {

// Error raised by every text parser in this module; the message always names
// the offending 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

// Splits into lines, tolerating \r\n endings. The final line needs no \n.
inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
    if (s.size() == 1) return std::nullopt;
  }
  std::int64_t value = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    value = value * 10 + (s[i] - '0');
    if (value < 0) return std::nullopt;  // overflow
  }
  return negative ? -value : value;
}

inline std::string format_real(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  // avoid the "-0.0000" artifact so outputs diff cleanly
  std::string s(buf);
  bool all_zero = true;
  for (char c : s)
    if (c != '-' && c != '0' && c != '.') all_zero = false;
  if (all_zero && !s.empty() && s[0] == '-') s.erase(s.begin());
  return s;
}

// Pajek quoting: labels are double-quoted, embedded quotes doubled.
inline std::string quote_label(const std::string& label) {
  std::string out = "\"";
  for (char c : label) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pajek .net
// ---------------------------------------------------------------------------

// Accepts `*Vertices n`, exactly n vertex lines `id "label"` (label optional,
// defaulting to the id; trailing fields such as coordinates are ignored),
// then any number of `*Arcs` (directed) and `*Edges` sections; an edge u v w
// expands to the two arcs (u,v,w) and (v,u,w). Section keywords are
// case-insensitive; \r\n line endings and blank lines are tolerated; an
// omitted weight defaults to 1. Duplicate ordered pairs are rejected rather
// than summed, to surface data errors loudly.
inline CitationGraph parse_net(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::size_t i = 0;
  auto skip_blanks = [&]() {
    while (i < lines.size() && detail::is_blank(lines[i])) ++i;
  };

  skip_blanks();
  if (i >= lines.size())
    throw ParseError(lines.empty() ? 1 : lines.size(), "missing *Vertices section");
  {
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() < 2 || !detail::iequals(fields[0], "*Vertices"))
      throw ParseError(i + 1, "expected '*Vertices <n>'");
    const auto n = detail::parse_int(fields[1]);
    if (!n || *n < 0) throw ParseError(i + 1, "invalid vertex count '" + fields[1] + "'");
    ++i;

    const NodeId node_count = static_cast<NodeId>(*n);
    std::vector<std::string> labels(static_cast<std::size_t>(node_count));
    std::vector<char> seen(static_cast<std::size_t>(node_count), 0);

    NodeId parsed = 0;
    while (i < lines.size()) {
      if (detail::is_blank(lines[i])) {
        ++i;
        continue;
      }
      const std::string& line = lines[i];
      const auto fields = detail::split_fields(line);
      if (fields[0][0] == '*') break;  // next section
      if (parsed == node_count)
        throw ParseError(i + 1, "vertex count mismatch: more than " +
                                    std::to_string(node_count) + " vertex lines");
      const auto id = detail::parse_int(fields[0]);
      if (!id || *id < 1 || *id > node_count)
        throw ParseError(i + 1, "vertex id out of range 1.." + std::to_string(node_count));
      const auto idx = static_cast<std::size_t>(*id - 1);
      if (seen[idx]) throw ParseError(i + 1, "duplicate vertex id " + std::to_string(*id));
      seen[idx] = 1;

      const std::size_t quote = line.find('"');
      if (quote == std::string::npos) {
        labels[idx] = fields.size() > 1 ? fields[1] : std::to_string(*id);
      } else {
        std::string label;
        std::size_t p = quote + 1;
        bool closed = false;
        while (p < line.size()) {
          if (line[p] == '"') {
            if (p + 1 < line.size() && line[p + 1] == '"') {
              label.push_back('"');
              p += 2;
              continue;
            }
            closed = true;
            break;
          }
          label.push_back(line[p]);
          ++p;
        }
        if (!closed) throw ParseError(i + 1, "unterminated quoted label");
        labels[idx] = label;
      }
      ++parsed;
      ++i;
    }
    if (parsed != node_count)
      throw ParseError(i < lines.size() ? i + 1 : lines.size(),
                       "vertex count mismatch: expected " + std::to_string(node_count) +
                           " vertex lines, found " + std::to_string(parsed));

    std::vector<Arc> arcs;
    std::map<std::pair<NodeId, NodeId>, std::size_t> arc_lines;
    auto add_arc = [&](NodeId s, NodeId t, Weight w, std::size_t line_no) {
      if (s < 1 || s > node_count || t < 1 || t > node_count)
        throw ParseError(line_no, "vertex id out of range 1.." + std::to_string(node_count));
      const auto key = std::make_pair(s, t);
      if (arc_lines.count(key))
        throw ParseError(line_no, "duplicate arc (" + std::to_string(s) + "," +
                                      std::to_string(t) + ")");
      arc_lines[key] = line_no;
      arcs.push_back(Arc{s, t, w});
    };

    enum class Section { none, arcs, edges };
    Section section = Section::none;
    for (; i < lines.size(); ++i) {
      if (detail::is_blank(lines[i])) continue;
      const auto fields = detail::split_fields(lines[i]);
      if (fields[0][0] == '*') {
        if (detail::iequals(fields[0], "*Arcs")) section = Section::arcs;
        else if (detail::iequals(fields[0], "*Edges")) section = Section::edges;
        else throw ParseError(i + 1, "unsupported section '" + fields[0] + "'");
        continue;
      }
      if (section == Section::none)
        throw ParseError(i + 1, "data line outside of an *Arcs or *Edges section");
      if (fields.size() < 2 || fields.size() > 3)
        throw ParseError(i + 1, "expected 'source target [weight]'");
      const auto s = detail::parse_int(fields[0]);
      const auto t = detail::parse_int(fields[1]);
      if (!s || !t) throw ParseError(i + 1, "invalid vertex id");
      Weight w = 1;
      if (fields.size() == 3) {
        const auto pw = detail::parse_int(fields[2]);
        if (!pw) throw ParseError(i + 1, "invalid weight '" + fields[2] + "'");
        if (*pw < 1) throw ParseError(i + 1, "weight must be a positive integer");
        w = *pw;
      }
      const auto sv = static_cast<NodeId>(*s);
      const auto tv = static_cast<NodeId>(*t);
      if (section == Section::arcs) {
        add_arc(sv, tv, w, i + 1);
      } else {
        add_arc(sv, tv, w, i + 1);
        if (sv != tv) add_arc(tv, sv, w, i + 1);
      }
    }
    try {
      return CitationGraph(std::move(labels), std::move(arcs));
    } catch (const std::invalid_argument& e) {
      throw ParseError(lines.size(), e.what());
    }
  }
}

// Canonical form: ids ascending, labels always quoted, arcs sorted by
// (source, target), weights always written, \n endings. parse_net is an
// exact inverse.
inline std::string write_net(const CitationGraph& g) {
  std::string out = "*Vertices " + std::to_string(g.node_count()) + "\n";
  for (NodeId i = 1; i <= g.node_count(); ++i)
    out += std::to_string(i) + " " + detail::quote_label(g.label(i)) + "\n";
  if (g.arc_count() > 0) {
    out += "*Arcs\n";
    for (const Arc& a : g.arcs())
      out += std::to_string(a.source) + " " + std::to_string(a.target) + " " +
             std::to_string(a.weight) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pajek .clu
// ---------------------------------------------------------------------------

// `*Vertices n` followed by n integer lines in vertex order. Raw ids are
// canonicalized into the dense 1..k numbering on read.
inline Partition parse_clu(std::string_view text, std::optional<NodeId> expected_n = {}) {
  const auto lines = detail::split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && detail::is_blank(lines[i])) ++i;
  if (i >= lines.size())
    throw ParseError(lines.empty() ? 1 : lines.size(), "missing *Vertices section");
  const auto header = detail::split_fields(lines[i]);
  if (header.size() < 2 || !detail::iequals(header[0], "*Vertices"))
    throw ParseError(i + 1, "expected '*Vertices <n>'");
  const auto n = detail::parse_int(header[1]);
  if (!n || *n < 0) throw ParseError(i + 1, "invalid vertex count '" + header[1] + "'");
  if (expected_n && *n != *expected_n)
    throw ParseError(i + 1, "partition covers " + std::to_string(*n) +
                                " vertices but the network has " + std::to_string(*expected_n));
  ++i;

  std::vector<int> raw;
  raw.reserve(static_cast<std::size_t>(*n));
  for (; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    if (raw.size() == static_cast<std::size_t>(*n))
      throw ParseError(i + 1, "more than " + std::to_string(*n) + " partition entries");
    const auto fields = detail::split_fields(lines[i]);
    const auto v = fields.size() == 1 ? detail::parse_int(fields[0]) : std::nullopt;
    if (!v) throw ParseError(i + 1, "expected a single integer cluster id");
    raw.push_back(static_cast<int>(*v));
  }
  if (raw.size() != static_cast<std::size_t>(*n))
    throw ParseError(lines.size(), "expected " + std::to_string(*n) +
                                       " partition entries, found " + std::to_string(raw.size()));
  return Partition::from_assignment(std::move(raw));
}

inline std::string write_clu(const Partition& p) {
  std::string out = "*Vertices " + std::to_string(p.size()) + "\n";
  for (int c : p.assignment()) out += std::to_string(c) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// VOSviewer map / network files
// ---------------------------------------------------------------------------

// Tab-separated map file: header `id label x y cluster weight`, one row per
// node, reals with 4 decimals. The weight column defaults to the weighted
// degree k_i when no explicit weights are supplied.
inline std::string write_vos_map(const SymmetricGraph& g, const Partition& p,
                                 const MapLayout& layout,
                                 const std::vector<double>* weights = nullptr) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (p.size() != g.node_count() || layout.x.size() != n || layout.y.size() != n ||
      (weights != nullptr && weights->size() != n))
    throw std::invalid_argument("inconsistent node sets for map export");
  std::string out = "id\tlabel\tx\ty\tcluster\tweight\n";
  for (NodeId i = 1; i <= g.node_count(); ++i) {
    const auto idx = static_cast<std::size_t>(i - 1);
    const double w = weights != nullptr ? (*weights)[idx] : g.degree(i);
    out += std::to_string(i) + "\t" + g.label(i) + "\t" +
           detail::format_real(layout.x[idx], 4) + "\t" + detail::format_real(layout.y[idx], 4) +
           "\t" + std::to_string(p.cluster_of(i)) + "\t" + detail::format_real(w, 4) + "\n";
  }
  return out;
}

// Companion network file: one line per undirected edge, `i j w`, using the
// same ids as the map rows.
inline std::string write_vos_network(const SymmetricGraph& g) {
  std::string out;
  for (const Edge& e : g.edges())
    out += std::to_string(e.u) + "\t" + std::to_string(e.v) + "\t" + std::to_string(e.weight) +
           "\n";
  return out;
}

// ---------------------------------------------------------------------------
// CSV ingestion (cited_label,citing_label,count) and submatrix export
// ---------------------------------------------------------------------------

enum class CsvHeader { autodetect, none, skip_first };

struct CsvOptions {
  CsvHeader header = CsvHeader::autodetect;
};

struct CsvIngestResult {
  CitationGraph graph;
  std::size_t duplicate_pairs = 0;  // rows merged into an existing cell
};

// Builds a citation graph from `cited,citing,count` rows. Nodes are created
// in first-appearance order; duplicate (cited, citing) pairs are summed and
// counted as warnings, since source exports sometimes split a cell across
// rows. Fields are plain comma-separated (labels with commas are not
// expected in JCR-style abbreviations).
inline CsvIngestResult ingest_csv(std::string_view text, const CsvOptions& options = {}) {
  const auto lines = detail::split_lines(text);

  auto split_csv = [](const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string field = comma == std::string::npos ? line.substr(start)
                                                     : line.substr(start, comma - start);
      const auto b = field.find_first_not_of(" \t");
      const auto e = field.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return fields;
  };

  std::vector<std::string> labels;
  std::map<std::string, NodeId> ids;
  std::map<std::pair<NodeId, NodeId>, Weight> cells;
  std::size_t duplicates = 0;

  auto node_of = [&](const std::string& label) {
    const auto it = ids.find(label);
    if (it != ids.end()) return it->second;
    labels.push_back(label);
    const auto id = static_cast<NodeId>(labels.size());
    ids.emplace(label, id);
    return id;
  };

  bool first_data_line = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto fields = split_csv(lines[i]);
    if (first_data_line) {
      first_data_line = false;
      if (options.header == CsvHeader::skip_first) continue;
      if (options.header == CsvHeader::autodetect && fields.size() == 3) {
        const auto count = detail::parse_int(fields[2]);
        if (!count) continue;  // header row
      }
    }
    if (fields.size() != 3)
      throw ParseError(i + 1, "expected 'cited,citing,count' (3 fields, found " +
                                  std::to_string(fields.size()) + ")");
    if (fields[0].empty() || fields[1].empty())
      throw ParseError(i + 1, "empty journal label");
    const auto count = detail::parse_int(fields[2]);
    if (!count) throw ParseError(i + 1, "invalid count '" + fields[2] + "'");
    if (*count < 1) throw ParseError(i + 1, "count must be a positive integer");

    const NodeId cited = node_of(fields[0]);
    const NodeId citing = node_of(fields[1]);
    auto [it, inserted] = cells.try_emplace({cited, citing}, static_cast<Weight>(*count));
    if (!inserted) {
      it->second += static_cast<Weight>(*count);
      ++duplicates;
    }
  }

  std::vector<Arc> arcs;
  arcs.reserve(cells.size());
  for (const auto& [key, weight] : cells) arcs.push_back(Arc{key.first, key.second, weight});
  return {CitationGraph(std::move(labels), std::move(arcs)), duplicates};
}

// Square CSV of citation weights among the selected nodes, labels on the
// header row and column; suitable for external factor analysis.
inline std::string export_submatrix_csv(const CitationGraph& g,
                                        const std::vector<NodeId>& node_ids) {
  for (NodeId id : node_ids)
    if (id < 1 || id > g.node_count())
      throw std::invalid_argument("unknown node id " + std::to_string(id));

  auto csv_quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += "\"\"";
      else out.push_back(c);
    }
    out += "\"";
    return out;
  };

  std::map<std::pair<NodeId, NodeId>, Weight> cells;
  std::vector<char> selected(static_cast<std::size_t>(g.node_count()) + 1, 0);
  for (NodeId id : node_ids) selected[static_cast<std::size_t>(id)] = 1;
  for (const Arc& a : g.arcs())
    if (selected[static_cast<std::size_t>(a.source)] && selected[static_cast<std::size_t>(a.target)])
      cells[{a.source, a.target}] = a.weight;

  std::string out;
  for (NodeId id : node_ids) out += "," + csv_quote(g.label(id));
  out += "\n";
  for (NodeId row : node_ids) {
    out += csv_quote(g.label(row));
    for (NodeId col : node_ids) {
      const auto it = cells.find({row, col});
      out += "," + std::to_string(it == cells.end() ? Weight{0} : it->second);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Layout coordinates (tab-separated id/x/y, consumed by export-map)
// ---------------------------------------------------------------------------

inline std::string write_coords(const MapLayout& layout) {
  std::string out = "id\tx\ty\n";
  for (std::size_t i = 0; i < layout.x.size(); ++i)
    out += std::to_string(i + 1) + "\t" + detail::format_real(layout.x[i], 6) + "\t" +
           detail::format_real(layout.y[i], 6) + "\n";
  return out;
}

inline MapLayout parse_coords(std::string_view text, std::optional<NodeId> expected_n = {}) {
  const auto lines = detail::split_lines(text);
  MapLayout layout;
  bool saw_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (!saw_header) {
      saw_header = true;
      if (!fields.empty() && detail::iequals(fields[0], "id")) continue;
    }
    if (fields.size() != 3) throw ParseError(i + 1, "expected 'id x y'");
    const auto id = detail::parse_int(fields[0]);
    if (!id || *id != static_cast<std::int64_t>(layout.x.size()) + 1)
      throw ParseError(i + 1, "coordinate rows must be in id order starting at 1");
    try {
      layout.x.push_back(std::stod(fields[1]));
      layout.y.push_back(std::stod(fields[2]));
    } catch (...) {
      throw ParseError(i + 1, "invalid coordinate");
    }
  }
  if (expected_n && layout.x.size() != static_cast<std::size_t>(*expected_n))
    throw ParseError(lines.size(), "coordinate file covers " + std::to_string(layout.x.size()) +
                                       " nodes but the network has " + std::to_string(*expected_n));
  return layout;
}

// ---------------------------------------------------------------------------
// Classification tree serialization
// ---------------------------------------------------------------------------

// Human-readable indented outline: one line per tree node with path, size,
// optional label, split quality and stop reason.
inline std::string tree_to_outline(const ClusterTree& t) {
  std::string out;
  auto walk = [&](auto&& self, const TreeNode& node, int depth) -> void {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += node.path.empty() ? "root" : node.path;
    out += "  size=" + std::to_string(node.size());
    if (!node.label.empty()) out += "  label=\"" + node.label + "\"";
    if (node.split_quality) {
      out += "  quality=";
      out += detail::format_real(node.split_quality->value, 6);
      out += " (";
      out += method_name(node.split_quality->method);
      out += ")";
    }
    if (!node.singletons_set_aside.empty())
      out += "  singletons=" + std::to_string(node.singletons_set_aside.size());
    if (node.stop != StopReason::none)
      out += "  stop=" + std::string(stop_reason_name(node.stop));
    out += "\n";
    for (const TreeNode& child : node.children) self(self, child, depth + 1);
  };
  walk(walk, t.root, 0);
  return out;
}

inline nlohmann::ordered_json tree_node_to_json(const TreeNode& node) {
  nlohmann::ordered_json j;
  j["path"] = node.path.empty() ? "root" : node.path;
  j["size"] = node.size();
  if (!node.label.empty()) j["label"] = node.label;
  if (node.split_quality) {
    j["quality"] = {{"method", method_name(node.split_quality->method)},
                    {"value", node.split_quality->value},
                    {"resolution", node.split_quality->resolution}};
  }
  if (node.stop != StopReason::none) j["stop"] = stop_reason_name(node.stop);
  if (!node.singletons_set_aside.empty()) j["singletons"] = node.singletons_set_aside;
  if (node.children.empty()) {
    j["members"] = node.members;
  } else {
    nlohmann::ordered_json children = nlohmann::ordered_json::array();
    for (const TreeNode& child : node.children) children.push_back(tree_node_to_json(child));
    j["children"] = std::move(children);
  }
  return j;
}

// Machine-readable JSON: nested nodes; member ids (original numbering) are
// spelled out on leaves, inner nodes are reconstructed as the union of their
// children plus set-aside singletons.
inline std::string tree_to_json(const ClusterTree& t) {
  nlohmann::ordered_json j;
  j["nodes"] = t.root.size();
  j["loops_removed"] = t.loops_removed;
  j["height"] = t.height;
  j["root"] = tree_node_to_json(t.root);
  return j.dump(2) + "\n";
}

}  // namespace jcmap
