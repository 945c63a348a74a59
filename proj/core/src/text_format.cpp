#include "dmdgp/text_format.hpp"

#include <charconv>
#include <limits>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "dmdgp/error.hpp"

namespace dmdgp {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

TextDocument TextDocument::parse(std::string_view text) {
  TextDocument doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (const auto colon = line.find(':'); colon != std::string_view::npos) {
      const auto key = trim(line.substr(0, colon));
      if (key.empty() || key.find_first_of(" \t") != std::string_view::npos) {
        throw ParseError(ParseIssue::Syntax, line_no, fmt::format("malformed key '{}'", key));
      }
      TextEntry entry;
      entry.key = std::string(key);
      entry.value = std::string(trim(line.substr(colon + 1)));
      entry.line = line_no;
      doc.entries_.push_back(std::move(entry));
    } else {
      if (doc.entries_.empty()) {
        throw ParseError(ParseIssue::Syntax, line_no, "data row before any field");
      }
      doc.entries_.back().rows.push_back(split_ws(line));
      doc.entries_.back().row_lines.push_back(line_no);
    }
  }
  return doc;
}

const TextEntry* TextDocument::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const TextEntry& TextDocument::require(std::string_view key) const {
  if (const auto* e = find(key)) return *e;
  throw ParseError(ParseIssue::MissingField, 0, fmt::format("missing field '{}'", key));
}

Manifest TextDocument::manifest() const {
  Manifest out;
  constexpr std::string_view prefix = "manifest.";
  for (const auto& e : entries_) {
    if (e.key.starts_with(prefix)) out.emplace_back(e.key.substr(prefix.size()), e.value);
  }
  return out;
}

int parse_int(std::string_view token, int line, std::string_view field) {
  const auto v = parse_int64(token, line, field);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(ParseIssue::BadValue, line, fmt::format("{}: '{}' out of range", field, token));
  }
  return static_cast<int>(v);
}

long long parse_int64(std::string_view token, int line, std::string_view field) {
  long long v = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || token.empty()) {
    throw ParseError(ParseIssue::BadValue, line,
                     fmt::format("{}: expected an integer, got '{}'", field, token));
  }
  return v;
}

double parse_double(std::string_view token, int line, std::string_view field) {
  double v = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || token.empty()) {
    throw ParseError(ParseIssue::BadValue, line,
                     fmt::format("{}: expected a real number, got '{}'", field, token));
  }
  return v;
}

bool parse_bool(std::string_view token, int line, std::string_view field) {
  if (token == "1" || token == "true") return true;
  if (token == "0" || token == "false") return false;
  throw ParseError(ParseIssue::BadValue, line,
                   fmt::format("{}: expected 0/1 or true/false, got '{}'", field, token));
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void append_manifest(std::string& out, const Manifest& manifest) {
  for (const auto& [k, v] : manifest) out += fmt::format("manifest.{}: {}\n", k, v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot write '{}'", path));
  out << contents;
  if (!out) throw Error(ErrorCode::InvalidArgument, fmt::format("failed writing '{}'", path));
}

std::string strip_volatile(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    if (!trim(line).starts_with("volatile.")) {
      out.append(line);
      if (end < text.size()) out.push_back('\n');
    }
    pos = end + 1;
  }
  return out;
}

}  // namespace dmdgp
