#include "dmdgp/result_io.hpp"

#include <fmt/format.h>

#include "dmdgp/error.hpp"

namespace dmdgp {
namespace {

struct StatField {
  std::string_view key;
  std::size_t SolveStats::*member;
};

constexpr StatField kStatFields[] = {
    {"stats.nodes", &SolveStats::nodes},
    {"stats.feasible_nodes", &SolveStats::feasible_nodes},
    {"stats.pruned_candidates", &SolveStats::pruned_candidates},
    {"stats.empty_extensions", &SolveStats::empty_extensions},
    {"stats.tangent_events", &SolveStats::tangent_events},
};

void append_reals(std::string& out, const Eigen::VectorXd& v) {
  for (int c = 0; c < v.size(); ++c) {
    out += ' ';
    out += format_double(v[c]);
  }
}

std::size_t parse_count(const TextEntry& e) {
  const long long v = parse_int64(e.value, e.line, e.key);
  if (v < 0) throw ParseError(ParseIssue::BadValue, e.line, fmt::format("{} must be >= 0", e.key));
  return static_cast<std::size_t>(v);
}

Eigen::VectorXd parse_reals(const std::vector<std::string>& row, std::size_t from, int count,
                            int line, std::string_view field) {
  if (row.size() < from + static_cast<std::size_t>(count)) {
    throw ParseError(ParseIssue::Syntax, line, fmt::format("{}: row too short", field));
  }
  Eigen::VectorXd v(count);
  for (int c = 0; c < count; ++c) v[c] = parse_double(row[from + c], line, field);
  return v;
}

BpNode parse_node(const std::vector<std::string>& row, int k, int line) {
  if (row.size() < 7) throw ParseError(ParseIssue::Syntax, line, "tree: row too short");
  BpNode node;
  node.parent = parse_int(row[1], line, "tree.parent");
  node.level = parse_int(row[2], line, "tree.level");
  node.lambda = parse_int(row[3], line, "tree.lambda");
  node.feasible = parse_bool(row[4], line, "tree.feasible");
  node.tangent = parse_bool(row[5], line, "tree.tangent");
  const bool has_plane = parse_bool(row[6], line, "tree.has_plane");
  const int dims = node.level == 0 ? 0 : k;
  node.point = parse_reals(row, 7, dims, line, "tree.coords");
  std::size_t expected = 7 + static_cast<std::size_t>(dims);
  if (has_plane) {
    Hyperplane plane;
    plane.normal = parse_reals(row, expected, k, line, "tree.normal");
    expected += static_cast<std::size_t>(k);
    if (row.size() < expected + 2) throw ParseError(ParseIssue::Syntax, line, "tree: row too short");
    plane.offset = parse_double(row[expected], line, "tree.offset");
    plane.pivot_index = parse_int(row[expected + 1], line, "tree.pivot");
    expected += 2;
    node.plane = std::move(plane);
  }
  if (row.size() != expected) {
    throw ParseError(ParseIssue::Syntax, line,
                     fmt::format("tree: expected {} columns, got {}", expected, row.size()));
  }
  if (node.lambda != 0 && node.lambda != 1) {
    throw ParseError(ParseIssue::BadValue, line, "tree: lambda must be 0 or 1");
  }
  return node;
}

}  // namespace

std::string serialize_result(const SolveResult& result, const Manifest& manifest) {
  std::string out = "# dmdgp solve result\n";
  append_manifest(out, manifest);
  out += fmt::format("dimension: {}\n", result.dimension);
  out += fmt::format("n: {}\n", result.n);
  out += fmt::format("status: {}\n",
                     result.status == SolveStatus::Complete ? "complete" : "budget_exceeded");
  out += fmt::format("solution_count: {}\n", result.solutions.size());
  for (const auto& f : kStatFields) out += fmt::format("{}: {}\n", f.key, result.stats.*f.member);
  out += fmt::format("level_children: {}\n", result.stats.levels.size());
  for (const auto& lc : result.stats.levels) {
    out += fmt::format("  {} {} {} {}\n", lc.level, lc.zero, lc.one, lc.two);
  }
  for (std::size_t s = 0; s < result.solutions.size(); ++s) {
    out += fmt::format("solution: {}\n", s);
    if (result.tree) out += fmt::format("leaf: {}\n", result.leaves.at(s));
    out += fmt::format("chi: {}\n", result.chi_sequences.at(s).to_string());
    out += "coords:\n";
    for (const auto& p : result.solutions[s]) {
      out += ' ';
      append_reals(out, p);
      out += '\n';
    }
  }
  if (result.tree) {
    const auto& nodes = result.tree->nodes();
    out += fmt::format("tree: {}\n", nodes.size());
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const auto& node = nodes[id];
      out += fmt::format("  {} {} {} {} {} {} {}", id, node.parent, node.level, node.lambda,
                         int{node.feasible}, int{node.tangent}, int{node.plane.has_value()});
      append_reals(out, node.point);
      if (node.plane) {
        append_reals(out, node.plane->normal);
        out += fmt::format(" {} {}", format_double(node.plane->offset), node.plane->pivot_index);
      }
      out += '\n';
    }
  }
  out += fmt::format("volatile.wall_time_ms: {:.3f}\n", result.stats.wall_time_ms);
  return out;
}

SolveResult parse_result(std::string_view text, Manifest* manifest) {
  const auto doc = TextDocument::parse(text);
  SolveResult result;
  result.dimension = parse_int(doc.require("dimension").value, doc.require("dimension").line,
                               "dimension");
  result.n = parse_int(doc.require("n").value, doc.require("n").line, "n");
  const int k = result.dimension;
  const int n = result.n;
  if (k < 1 || n < k) {
    throw ParseError(ParseIssue::BadValue, doc.require("n").line, "need 1 <= dimension <= n");
  }

  const auto& status = doc.require("status");
  if (status.value == "complete") {
    result.status = SolveStatus::Complete;
  } else if (status.value == "budget_exceeded") {
    result.status = SolveStatus::BudgetExceeded;
  } else {
    throw ParseError(ParseIssue::BadValue, status.line,
                     fmt::format("unknown status '{}'", status.value));
  }
  for (const auto& f : kStatFields) result.stats.*f.member = parse_count(doc.require(f.key));

  const auto& counts = doc.require("level_children");
  for (std::size_t r = 0; r < counts.rows.size(); ++r) {
    const auto& row = counts.rows[r];
    const int line = counts.row_lines[r];
    if (row.size() != 4) throw ParseError(ParseIssue::Syntax, line, "level_children: expected 4 columns");
    LevelCounts lc;
    lc.level = parse_int(row[0], line, "level_children.level");
    lc.zero = static_cast<std::size_t>(parse_int64(row[1], line, "level_children.zero"));
    lc.one = static_cast<std::size_t>(parse_int64(row[2], line, "level_children.one"));
    lc.two = static_cast<std::size_t>(parse_int64(row[3], line, "level_children.two"));
    result.stats.levels.push_back(lc);
  }

  // Solution blocks: `solution`, optional `leaf`, `chi`, `coords`, in order.
  const auto& entries = doc.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.key == "tree" || e.key.starts_with("manifest.") || e.key.starts_with("volatile.")) {
      continue;
    }
    if (e.key == "leaf" || e.key == "chi" || e.key == "coords") {
      throw ParseError(ParseIssue::Syntax, e.line, fmt::format("'{}' outside a solution block", e.key));
    }
    if (e.key != "solution") continue;
    const int index = parse_int(e.value, e.line, "solution");
    if (index != static_cast<int>(result.solutions.size())) {
      throw ParseError(ParseIssue::BadValue, e.line,
                       fmt::format("solution {} out of sequence", index));
    }
    std::size_t j = i + 1;
    if (j < entries.size() && entries[j].key == "leaf") {
      result.leaves.push_back(parse_int(entries[j].value, entries[j].line, "leaf"));
      ++j;
    }
    if (j >= entries.size() || entries[j].key != "chi") {
      throw ParseError(ParseIssue::MissingField, e.line, "solution block lacks 'chi'");
    }
    const auto& chi_entry = entries[j];
    BitVector bits;
    try {
      bits = BitVector::from_string(chi_entry.value);
    } catch (const Error&) {
      throw ParseError(ParseIssue::BadValue, chi_entry.line, "chi must be a 0/1 string");
    }
    if (static_cast<int>(bits.size()) != n) {
      throw ParseError(ParseIssue::BadValue, chi_entry.line,
                       fmt::format("chi has {} bits, expected {}", bits.size(), n));
    }
    ++j;
    if (j >= entries.size() || entries[j].key != "coords") {
      throw ParseError(ParseIssue::MissingField, e.line, "solution block lacks 'coords'");
    }
    const auto& coords = entries[j];
    if (static_cast<int>(coords.rows.size()) != n) {
      throw ParseError(ParseIssue::Syntax, coords.line,
                       fmt::format("coords: expected {} rows, got {}", n, coords.rows.size()));
    }
    Embedding x;
    for (std::size_t r = 0; r < coords.rows.size(); ++r) {
      if (static_cast<int>(coords.rows[r].size()) != k) {
        throw ParseError(ParseIssue::Syntax, coords.row_lines[r],
                         fmt::format("coords: expected {} coordinates", k));
      }
      x.push_back(parse_reals(coords.rows[r], 0, k, coords.row_lines[r], "coords"));
    }
    result.chi_sequences.push_back(std::move(bits));
    result.solutions.push_back(std::move(x));
    i = j;
  }
  const auto& declared = doc.require("solution_count");
  if (parse_count(declared) != result.solutions.size()) {
    throw ParseError(ParseIssue::BadValue, declared.line,
                     fmt::format("solution_count {} but {} solution blocks", declared.value,
                                 result.solutions.size()));
  }

  if (const auto* tree = doc.find("tree")) {
    std::vector<BpNode> nodes;
    for (std::size_t r = 0; r < tree->rows.size(); ++r) {
      const int line = tree->row_lines[r];
      BpNode node = parse_node(tree->rows[r], k, line);
      if (parse_int(tree->rows[r][0], line, "tree.id") != static_cast<int>(r)) {
        throw ParseError(ParseIssue::BadValue, line, "tree: node ids must be consecutive");
      }
      if (node.level < 0 || node.level > n || (r == 0) != (node.parent < 0) ||
          node.parent >= static_cast<int>(r)) {
        throw ParseError(ParseIssue::BadValue, line, "tree: bad level or parent");
      }
      if (node.parent >= 0) {
        auto& slot = nodes[static_cast<std::size_t>(node.parent)].children[node.lambda];
        if (slot >= 0 || nodes[static_cast<std::size_t>(node.parent)].level + 1 != node.level) {
          throw ParseError(ParseIssue::BadValue, line, "tree: inconsistent parent link");
        }
        slot = static_cast<int>(r);
      }
      nodes.push_back(std::move(node));
    }
    if (result.leaves.size() != result.solutions.size()) {
      throw ParseError(ParseIssue::MissingField, tree->line, "tree given but solutions lack 'leaf'");
    }
    for (int leaf : result.leaves) {
      if (leaf < 0 || leaf >= static_cast<int>(nodes.size()) ||
          nodes[static_cast<std::size_t>(leaf)].level != n) {
        throw ParseError(ParseIssue::BadValue, tree->line, fmt::format("bad leaf id {}", leaf));
      }
    }
    result.tree = BpTree(std::move(nodes), n);
  } else {
    result.leaves.clear();
  }

  if (const auto* wall = doc.find("volatile.wall_time_ms")) {
    result.stats.wall_time_ms = parse_double(wall->value, wall->line, wall->key);
  }
  if (manifest != nullptr) *manifest = doc.manifest();
  return result;
}

SolveResult load_result(const std::string& path) { return parse_result(read_file(path)); }

}  // namespace dmdgp
