#pragma once

#include <string>
#include <string_view>

#include "dmdgp/instance.hpp"
#include "dmdgp/text_format.hpp"

namespace dmdgp {

/// Text form of an instance:
///
///     dimension: K
///     n: N
///     initial_embedding:
///       <K rows of K reals>
///     edges: M
///       <M rows "u v d">
///
/// Reals are written with 17 significant digits.
std::string serialize_instance(const Instance& inst, const Manifest& manifest = {});

/// Throws ParseError (with the line number) on syntax errors, missing
/// fields, wrong row shapes, out-of-range vertices and duplicate edges.
/// Semantic checks are left to validate().
Instance parse_instance(std::string_view text, Manifest* manifest = nullptr);

/// Witness/embedding file: `n`, `dimension`, then `points:` with n rows.
std::string serialize_embedding(const Embedding& x, const Manifest& manifest = {});
Embedding parse_embedding(std::string_view text);

Instance load_instance(const std::string& path);

}  // namespace dmdgp
