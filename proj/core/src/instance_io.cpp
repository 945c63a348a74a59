#include "dmdgp/instance_io.hpp"

#include <set>

#include <fmt/format.h>

#include "dmdgp/error.hpp"

namespace dmdgp {
namespace {

void check_known_keys(const TextDocument& doc, const std::set<std::string_view>& known) {
  std::set<std::string> seen;
  for (const auto& e : doc.entries()) {
    if (e.key.starts_with("manifest.") || e.key.starts_with("volatile.")) continue;
    if (!known.contains(e.key)) {
      throw ParseError(ParseIssue::Syntax, e.line, fmt::format("unknown field '{}'", e.key));
    }
    if (!seen.insert(e.key).second) {
      throw ParseError(ParseIssue::Syntax, e.line, fmt::format("duplicate field '{}'", e.key));
    }
  }
}

int scalar_int(const TextDocument& doc, std::string_view key) {
  const auto& e = doc.require(key);
  if (!e.rows.empty()) {
    throw ParseError(ParseIssue::Syntax, e.row_lines.front(),
                     fmt::format("'{}' takes a single value", key));
  }
  return parse_int(e.value, e.line, key);
}

Point parse_point(const std::vector<std::string>& row, int k, int line, std::string_view field) {
  if (static_cast<int>(row.size()) != k) {
    throw ParseError(ParseIssue::Syntax, line,
                     fmt::format("{}: expected {} coordinates, got {}", field, k, row.size()));
  }
  Point p(k);
  for (int c = 0; c < k; ++c) p[c] = parse_double(row[c], line, field);
  return p;
}

void append_point(std::string& out, const Point& p) {
  out += " ";
  for (int c = 0; c < p.size(); ++c) {
    out += ' ';
    out += format_double(p[c]);
  }
  out += '\n';
}

}  // namespace

std::string serialize_instance(const Instance& inst, const Manifest& manifest) {
  std::string out = "# dmdgp instance\n";
  append_manifest(out, manifest);
  out += fmt::format("dimension: {}\n", inst.dimension());
  out += fmt::format("n: {}\n", inst.size());
  out += "initial_embedding:\n";
  for (const auto& p : inst.initial_embedding()) append_point(out, p);
  out += fmt::format("edges: {}\n", inst.edges().size());
  for (const auto& [e, d] : inst.edges()) {
    out += fmt::format("  {} {} {}\n", e.u, e.v, format_double(d));
  }
  return out;
}

Instance parse_instance(std::string_view text, Manifest* manifest) {
  const auto doc = TextDocument::parse(text);
  check_known_keys(doc, {"dimension", "n", "initial_embedding", "edges"});

  const int k = scalar_int(doc, "dimension");
  const int n = scalar_int(doc, "n");
  if (k < 1) {
    throw ParseError(ParseIssue::BadValue, doc.require("dimension").line, "dimension must be >= 1");
  }
  if (n < k) {
    throw ParseError(ParseIssue::BadValue, doc.require("n").line, "n must be >= dimension");
  }

  const auto& init = doc.require("initial_embedding");
  if (!init.value.empty()) {
    throw ParseError(ParseIssue::Syntax, init.line, "initial_embedding rows go on following lines");
  }
  if (static_cast<int>(init.rows.size()) != k) {
    throw ParseError(ParseIssue::Syntax, init.line,
                     fmt::format("initial_embedding: expected {} rows, got {}", k, init.rows.size()));
  }
  Embedding initial;
  for (std::size_t r = 0; r < init.rows.size(); ++r) {
    initial.push_back(parse_point(init.rows[r], k, init.row_lines[r], "initial_embedding"));
  }

  const auto& edge_entry = doc.require("edges");
  if (!edge_entry.value.empty()) {
    const int declared = parse_int(edge_entry.value, edge_entry.line, "edges");
    if (declared != static_cast<int>(edge_entry.rows.size())) {
      throw ParseError(ParseIssue::Syntax, edge_entry.line,
                       fmt::format("edges: declared {} rows, found {}", declared,
                                   edge_entry.rows.size()));
    }
  }
  EdgeMap edges;
  for (std::size_t r = 0; r < edge_entry.rows.size(); ++r) {
    const auto& row = edge_entry.rows[r];
    const int line = edge_entry.row_lines[r];
    if (row.size() != 3) {
      throw ParseError(ParseIssue::Syntax, line, "edges: expected 'u v d'");
    }
    const int a = parse_int(row[0], line, "edges.u");
    const int b = parse_int(row[1], line, "edges.v");
    const double d = parse_double(row[2], line, "edges.d");
    if (a < 1 || b < 1 || a > n || b > n || a == b) {
      throw ParseError(ParseIssue::BadValue, line,
                       fmt::format("edges: invalid vertex pair {{{},{}}} for n = {}", a, b, n));
    }
    if (!edges.emplace(make_edge(a, b), d).second) {
      throw ParseError(ParseIssue::DuplicateEdge, line,
                       fmt::format("edge {{{},{}}} listed twice", a, b));
    }
  }

  if (manifest != nullptr) *manifest = doc.manifest();
  return Instance(k, n, std::move(edges), std::move(initial));
}

std::string serialize_embedding(const Embedding& x, const Manifest& manifest) {
  std::string out = "# dmdgp embedding\n";
  append_manifest(out, manifest);
  out += fmt::format("dimension: {}\n", x.empty() ? 0 : x.front().size());
  out += fmt::format("n: {}\n", x.size());
  out += "points:\n";
  for (const auto& p : x) append_point(out, p);
  return out;
}

Embedding parse_embedding(std::string_view text) {
  const auto doc = TextDocument::parse(text);
  check_known_keys(doc, {"dimension", "n", "points"});
  const int k = scalar_int(doc, "dimension");
  const int n = scalar_int(doc, "n");
  const auto& pts = doc.require("points");
  if (static_cast<int>(pts.rows.size()) != n) {
    throw ParseError(ParseIssue::Syntax, pts.line,
                     fmt::format("points: expected {} rows, got {}", n, pts.rows.size()));
  }
  Embedding x;
  for (std::size_t r = 0; r < pts.rows.size(); ++r) {
    x.push_back(parse_point(pts.rows[r], k, pts.row_lines[r], "points"));
  }
  return x;
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

}  // namespace dmdgp
