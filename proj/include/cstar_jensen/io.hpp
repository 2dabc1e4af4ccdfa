#pragma once

// JSON encodings shared by scenario files and reports.
//
//   AlgebraElement  {"shape":[n1,...], "blocks":[ [[ [re,im], ... ], ...], ... ]}
//   ModuleVector    {"rank":m, "coords":[AlgebraElement, ...]}
//   Mapping         {"kind":"linear","coeffs":[[AlgebraElement...]...] [,"left":...]}
//                   {"kind":"sum","children":[...]}
//                   {"kind":"constant","value":ModuleVector}
//                   {"kind":"quad_diag","g":ModuleVector,"scale":real}
//                   {"kind":"perturb","site":...,"delta":...,"radius":real}
//   AdditivePair    {"phi":Mapping,"psi":Mapping,"a":AlgebraElement}

#include <string>

#include <json.hpp>

#include "cstar_jensen/mapping.hpp"

namespace cstar_jensen {

using json = nlohmann::json;

json to_json(const AlgebraShape& shape);
json to_json(const AlgebraElement& x);
json to_json(const ModuleVector& v);
json to_json(const Mapping& f);
json to_json(const AdditivePair& pair);

AlgebraShape shape_from_json(const json& j);
/// `expected` fills in a missing "shape" and is enforced when present.
AlgebraElement algebra_element_from_json(const json& j, const AlgebraShape* expected = nullptr);
ModuleVector module_vector_from_json(const json& j, const AlgebraShape& shape);
/// `domain` fixes the input space (constant and quadratic nodes do not carry it).
Mapping mapping_from_json(const json& j, const ModuleSpace& domain);
/// The pair is validated against its stored coefficient before returning.
AdditivePair additive_pair_from_json(const json& j, const AlgebraShape& shape);

/// Sorted keys, two-space indentation, floats with 17 significant digits,
/// non-finite floats as null.
std::string canonical_dump(const json& j);

}  // namespace cstar_jensen
