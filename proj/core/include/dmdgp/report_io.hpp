#pragma once

#include <string>

#include "dmdgp/symmetry.hpp"
#include "dmdgp/text_format.hpp"

namespace dmdgp {

/// Symmetry report as `key: value` lines plus a reflection_checks table with
/// rows "solution level image residual chi_matches" (image -1 when unmatched).
std::string serialize_report(const SymmetryReport& report, const Manifest& manifest = {});

/// Levels as a brace list, e.g. "{3, 4, 5}".
std::string format_levels(const std::vector<int>& levels);

}  // namespace dmdgp
