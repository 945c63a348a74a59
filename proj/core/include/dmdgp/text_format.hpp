#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dmdgp {

/// Ordered key/value pairs describing how a file was produced. Written as
/// `manifest.<key>: <value>` lines at the top of every output file.
using Manifest = std::vector<std::pair<std::string, std::string>>;

/// One `key: value` line plus the whitespace-separated data rows under it.
struct TextEntry {
  std::string key;
  std::string value;
  int line = 0;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_lines;
};

/// Line-oriented key/value documents shared by the instance, result and
/// report formats. `#` starts a comment; a line containing `:` opens an
/// entry; any other non-blank line is a data row of the current entry.
class TextDocument {
 public:
  static TextDocument parse(std::string_view text);

  const std::vector<TextEntry>& entries() const { return entries_; }

  /// First entry with the key, or nullptr.
  const TextEntry* find(std::string_view key) const;
  /// First entry with the key; throws ParseError(MissingField) if absent.
  const TextEntry& require(std::string_view key) const;

  /// `manifest.*` entries with the prefix stripped.
  Manifest manifest() const;

 private:
  std::vector<TextEntry> entries_;
};

int parse_int(std::string_view token, int line, std::string_view field);
long long parse_int64(std::string_view token, int line, std::string_view field);
double parse_double(std::string_view token, int line, std::string_view field);
bool parse_bool(std::string_view token, int line, std::string_view field);

/// 17 significant digits; round-trips every finite double.
std::string format_double(double x);

void append_manifest(std::string& out, const Manifest& manifest);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Drops every `volatile.*` line (timings); what remains is deterministic.
std::string strip_volatile(std::string_view text);

}  // namespace dmdgp
