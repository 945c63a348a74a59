#pragma once

#include <string>
#include <string_view>

#include "dmdgp/solver.hpp"
#include "dmdgp/text_format.hpp"

namespace dmdgp {

/// Text form of a solve result:
///
///     dimension: K
///     n: N
///     status: complete | budget_exceeded
///     solution_count: S
///     stats.<name>: <value>           (node and event counters)
///     level_children: L               (rows "level zero one two")
///     solution: <index>               (then, per solution)
///     leaf: <node id>                 (only with a tree)
///     chi: <n bits>
///     coords:
///       <n rows of K reals>
///     tree: <node count>              (optional)
///       <rows "id parent level lambda feasible tangent has_plane coords [normal offset pivot]">
///     volatile.wall_time_ms: <ms>
///
/// Everything except the `volatile.` line is a deterministic function of the
/// instance and options.
std::string serialize_result(const SolveResult& result, const Manifest& manifest = {});

/// Throws ParseError on malformed input.
SolveResult parse_result(std::string_view text, Manifest* manifest = nullptr);

SolveResult load_result(const std::string& path);

}  // namespace dmdgp
