#include "dmdgp/report_io.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace dmdgp {

std::string format_levels(const std::vector<int>& levels) {
  return fmt::format("{{{}}}", fmt::join(levels, ", "));
}

std::string serialize_report(const SymmetryReport& report, const Manifest& manifest) {
  std::string out = "# dmdgp symmetry report\n";
  append_manifest(out, manifest);
  out += fmt::format("dimension: {}\n", report.dimension);
  out += fmt::format("n: {}\n", report.n);
  out += fmt::format("I: {}\n", format_levels(report.branch.levels));
  out += fmt::format("any_levels: {}\n", format_levels(report.branch.any_levels));
  out += fmt::format("mixed_levels: {}\n", format_levels(report.branch.mixed_levels));
  out += fmt::format("tangent_events: {}\n", report.tangent_events);
  out += fmt::format("degenerate: {}\n", report.degenerate());
  out += fmt::format("group_order: {}\n", report.group_order);
  out += fmt::format("solution_count: {}\n", report.solution_count);
  out += fmt::format("orbit_verified: {}\n", report.orbit_verified);
  out += fmt::format("power_of_two: {}\n", report.power_of_two);
  out += fmt::format("sampled: {}\n", report.sampled);
  out += fmt::format("xi: {}\n", report.xi_set.empty() ? "" : report.xi_set.front().to_string());
  out += fmt::format("generators: {}\n", report.generators.size());
  for (const auto& g : report.generators) out += fmt::format("  {}\n", g.to_string());
  out += fmt::format("reflections_ok: {}\n", report.reflections_ok());
  out += fmt::format("reflection_checks: {}\n", report.reflection_checks.size());
  for (const auto& c : report.reflection_checks) {
    out += fmt::format("  {} {} {} {:.3e} {}\n", c.solution, c.level,
                       c.image ? static_cast<long long>(*c.image) : -1LL, c.residual,
                       int{c.chi_matches});
  }
  return out;
}

}  // namespace dmdgp
