#include "cstar_jensen/io.hpp"

#include <cmath>
#include <cstdio>

namespace cstar_jensen {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

Scalar scalar_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError("matrix entry must be a number or [re, im]");
}

CoeffMatrix coeff_matrix_from_json(const json& j, const AlgebraShape& shape) {
  if (!j.is_array() || j.empty()) throw ParseError("coefficient matrix must be a non-empty array");
  CoeffMatrix out;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError("coefficient matrix rows must be arrays");
    std::vector<AlgebraElement> r;
    for (const auto& e : row) r.push_back(algebra_element_from_json(e, &shape));
    out.push_back(std::move(r));
  }
  return out;
}

json coeff_matrix_to_json(const CoeffMatrix& c) {
  json rows = json::array();
  for (const auto& row : c) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    rows.push_back(std::move(r));
  }
  return rows;
}

void dump_into(const json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump_into(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_into(e, out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

json to_json(const AlgebraShape& shape) { return shape.block_dims(); }

json to_json(const AlgebraElement& x) {
  json blocks = json::array();
  for (const auto& b : x.blocks()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back({b(r, c).real(), b(r, c).imag()});
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return {{"shape", to_json(x.shape())}, {"blocks", std::move(blocks)}};
}

json to_json(const ModuleVector& v) {
  json coords = json::array();
  for (const auto& c : v.coords()) coords.push_back(to_json(c));
  return {{"rank", v.rank()}, {"coords", std::move(coords)}};
}

json to_json(const Mapping& f) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinearNode>) {
          json j = {{"kind", "linear"}, {"coeffs", coeff_matrix_to_json(n.coeffs)}};
          if (!n.left.empty()) j["left"] = coeff_matrix_to_json(n.left);
          return j;
        } else if constexpr (std::is_same_v<T, QuadKernelNode>) {
          return {{"kind", "quad_diag"}, {"g", to_json(n.g)}, {"scale", n.scale}};
        } else if constexpr (std::is_same_v<T, ConstantNode>) {
          return {{"kind", "constant"}, {"value", to_json(n.value)}};
        } else if constexpr (std::is_same_v<T, SumNode>) {
          json children = json::array();
          for (const auto& c : n.children) children.push_back(to_json(c));
          return {{"kind", "sum"}, {"children", std::move(children)}};
        } else {
          return {{"kind", "perturb"},
                  {"site", to_json(n.site)},
                  {"delta", to_json(n.delta)},
                  {"radius", n.radius}};
        }
      },
      f.node());
}

json to_json(const AdditivePair& pair) {
  return {{"phi", to_json(pair.phi)}, {"psi", to_json(pair.psi)}, {"a", to_json(pair.coefficient.value)}};
}

AlgebraShape shape_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("algebra shape must be an array of block sizes");
  std::vector<int> dims;
  for (const auto& d : j) {
    if (!d.is_number_integer()) throw ParseError("block sizes must be integers");
    dims.push_back(d.get<int>());
  }
  try {
    return AlgebraShape(std::move(dims));
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
}

AlgebraElement algebra_element_from_json(const json& j, const AlgebraShape* expected) {
  if (!j.is_object()) throw ParseError("algebra element must be an object");
  AlgebraShape shape;
  if (j.contains("shape")) {
    shape = shape_from_json(j["shape"]);
    if (expected && !(shape == *expected))
      throw ParseError("algebra element has shape " + shape.to_string() + ", expected " +
                       expected->to_string());
  } else if (expected) {
    shape = *expected;
  } else {
    throw ParseError("algebra element without 'shape'");
  }
  const auto& blocks = field(j, "blocks");
  if (!blocks.is_array() || blocks.size() != shape.num_blocks())
    throw ParseError("'blocks' must hold one matrix per block of " + shape.to_string());
  std::vector<AlgebraElement::Block> out;
  for (std::size_t k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.dim(k);
    const auto& rows = blocks[k];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw ParseError("block " + std::to_string(k) + " must have " + std::to_string(n) + " rows");
    AlgebraElement::Block b(n, n);
    for (int r = 0; r < n; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
        throw ParseError("block " + std::to_string(k) + " row " + std::to_string(r) +
                         " must have " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) b(r, c) = scalar_from_json(rows[r][c]);
    }
    out.push_back(std::move(b));
  }
  try {
    return AlgebraElement(shape, std::move(out));
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
}

ModuleVector module_vector_from_json(const json& j, const AlgebraShape& shape) {
  const auto& coords = field(j, "coords");
  if (!coords.is_array() || coords.empty()) throw ParseError("'coords' must be a non-empty array");
  if (j.contains("rank") && (!j["rank"].is_number_integer() || j["rank"].get<int>() != static_cast<int>(coords.size())))
    throw ParseError("'rank' disagrees with the number of coordinates");
  std::vector<AlgebraElement> cs;
  for (const auto& c : coords) cs.push_back(algebra_element_from_json(c, &shape));
  const int rank = static_cast<int>(cs.size());
  return ModuleVector(ModuleSpace(shape, rank), std::move(cs));
}

Mapping mapping_from_json(const json& j, const ModuleSpace& domain) {
  const auto& kind_j = field(j, "kind");
  if (!kind_j.is_string()) throw ParseError("mapping 'kind' must be a string");
  const auto kind = kind_j.get<std::string>();
  const auto& shape = domain.algebra();
  try {
    if (kind == "linear") {
      const auto coeffs = coeff_matrix_from_json(field(j, "coeffs"), shape);
      CoeffMatrix left;
      if (j.contains("left")) left = coeff_matrix_from_json(j["left"], shape);
      auto f = linear_map(coeffs, left);
      if (!(f.domain() == domain))
        throw ParseError("linear map has " + std::to_string(coeffs.size()) +
                         " coefficient rows, domain rank is " + std::to_string(domain.rank()));
      return f;
    }
    if (kind == "sum") {
      const auto& ch = field(j, "children");
      if (!ch.is_array() || ch.empty()) throw ParseError("'children' must be a non-empty array");
      std::vector<Mapping> children;
      for (const auto& c : ch) children.push_back(mapping_from_json(c, domain));
      return sum_map(std::move(children));
    }
    if (kind == "constant") return constant_map(domain, module_vector_from_json(field(j, "value"), shape));
    if (kind == "quad_diag") {
      const auto g = module_vector_from_json(field(j, "g"), shape);
      return quad_form(g, number(field(j, "scale"), "'scale'")).diagonal(domain);
    }
    if (kind == "perturb") {
      const auto site = module_vector_from_json(field(j, "site"), shape);
      const auto delta = module_vector_from_json(field(j, "delta"), shape);
      const double radius = number(field(j, "radius"), "'radius'");
      if (!(site.space() == domain)) throw ParseError("perturbation site outside the domain");
      if (!(radius > 0)) throw ParseError("perturbation radius must be positive");
      return Mapping(domain, delta.space(), PerturbationNode{site, delta, radius});
    }
  } catch (const ShapeError& e) {
    throw ParseError(std::string("mapping '") + kind + "': " + e.what());
  } catch (const SpaceMismatch& e) {
    throw ParseError(std::string("mapping '") + kind + "': " + e.what());
  }
  throw ParseError("unknown mapping kind '" + kind + "'");
}

AdditivePair additive_pair_from_json(const json& j, const AlgebraShape& shape) {
  const auto a = algebra_element_from_json(field(j, "a"), &shape);
  const auto& phi_j = field(j, "phi");
  const auto& psi_j = field(j, "psi");
  const auto& coeffs = field(phi_j, "coeffs");
  if (!coeffs.is_array() || coeffs.empty()) throw ParseError("phi needs a coefficient matrix");
  const ModuleSpace source(shape, static_cast<int>(coeffs.size()));
  const auto phi = mapping_from_json(phi_j, source);
  const auto psi = mapping_from_json(psi_j, source);
  return validate_pair(phi, psi, validate_coefficient(a, false));
}

std::string canonical_dump(const json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace cstar_jensen
