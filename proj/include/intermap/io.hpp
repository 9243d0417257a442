#ifndef INTERMAP_IO_HPP
#define INTERMAP_IO_HPP

#include <string>

#include <json.hpp>

#include "intermap/abel.hpp"
#include "intermap/bounds.hpp"
#include "intermap/galerkin.hpp"

namespace intermap {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// {type:"lsv", alpha} or {type:"custom", alpha, a, h_coeffs, branches:[{type:"affine", slope, intercept}]}.
/// Unknown keys are rejected with InvalidArgument naming the field.
PMMap map_from_json(const json& j);
json map_to_json(const PMMap& map);

json expansion_to_json(const AbelExpansion& e);
AbelExpansion expansion_from_json(const json& j);

json solution_to_json(const ChebSolution& s);
ChebSolution solution_from_json(const json& j);
json matrix_to_json(const OperatorMatrix& m);

json bounds_to_json(const BoundConstants& bc);

/// Serialises with every number printed as %.17g (integers as integers),
/// independent of locale.
std::string dump17(const json& j, int indent = 2);

/// Lowercase hex FNV-1a hash of a string.
std::string fnv1a_hex(const std::string& s);

} // namespace intermap

#endif
