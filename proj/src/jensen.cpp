#include "cstar_jensen/jensen.hpp"

#include <algorithm>
#include <random>

namespace cstar_jensen {

namespace {

json describe(std::initializer_list<std::pair<const char*, const ModuleVector*>> vs) {
  json j = json::object();
  for (const auto& [name, v] : vs) j[name] = to_json(*v);
  return j;
}

void require_validated(const AdditivePair& pair) {
  if (!pair.validated) throw PairNotValidated();
}

ModuleVector k_point(const AdditivePair& pair, std::uint64_t seed, std::uint64_t stream) {
  return sample_k(pair, derive_seed(seed, stream));
}

double max_of(std::initializer_list<double> rs) {
  double m = 0.0;
  for (double r : rs) {
    if (std::isnan(r)) return std::numeric_limits<double>::infinity();
    m = std::max(m, r);
  }
  return m;
}

}  // namespace

bool is_identity_id(std::string_view id) {
  return std::find(kIdentityIds.begin(), kIdentityIds.end(), id) != kIdentityIds.end();
}

json to_json(const IdentityResidual& r) {
  json j = {{"id", r.identity_id},
            {"samples", r.samples},
            {"worst_input", r.worst_input},
            {"pass", r.pass}};
  if (std::isfinite(r.max_residual))
    j["max_residual"] = r.max_residual;
  else
    j["max_residual"] = nullptr;
  return j;
}

IdentityResidual identity_residual_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("identity residual must be an object");
  for (const char* key : {"id", "samples", "max_residual", "worst_input", "pass"})
    if (!j.contains(key)) throw ParseError(std::string("identity residual without '") + key + "'");
  IdentityResidual r;
  r.identity_id = j["id"].get<std::string>();
  r.samples = j["samples"].get<int>();
  r.max_residual = j["max_residual"].is_null() ? std::numeric_limits<double>::infinity()
                                               : j["max_residual"].get<double>();
  r.worst_input = j["worst_input"];
  r.pass = j["pass"].get<bool>();
  return r;
}

IdentityResidual check_orthogonal_jensen(const Mapping& f, const Coefficient& a,
                                         const OrthoSamplerMode& sampler, int n, double tol,
                                         std::uint64_t seed) {
  const auto& space = f.domain();
  ResidualTracker t("eq-1.1");
  for (int i = 0; i < n; ++i) {
    VectorPair xy = [&] {
      try {
        return sample_orthogonal_pair(space, sampler, derive_seed(seed, i), i);
      } catch (const InvalidMode& e) {
        throw InvalidSampler(e.what());
      }
    }();
    const auto& [x, y] = xy;
    if (!is_orthogonal(x, y))
      throw InvalidSampler("sampler emitted a pair with <x, y> = " +
                           std::to_string(cstar_norm(inner_product(x, y))));
    const auto lhs = f(a.value * x + a.complement * y);
    const auto rhs = a.value * f(x) + a.complement * f(y);
    t.record(residual(lhs, rhs), [&] { return describe({{"x", &x}, {"y", &y}}); });
  }
  return t.finish(tol);
}

std::vector<IdentityResidual> lemma21_suite(const Evaluable& f, const Coefficient& a,
                                            const std::vector<ModuleVector>& xs, double tol) {
  std::array<ResidualTracker, 6> ts = {
      ResidualTracker("lemma2.1-i"),   ResidualTracker("lemma2.1-ii"),
      ResidualTracker("lemma2.1-iii"), ResidualTracker("lemma2.1-iv"),
      ResidualTracker("lemma2.1-v"),   ResidualTracker("lemma2.1-vi")};
  if (!xs.empty()) {
    const auto f0 = f(ModuleVector::zero(xs.front().space()));
    const auto& ai = a.inv;
    const auto& b = a.complement;
    const auto& bi = a.co_inv;
    for (const auto& x : xs) {
      const auto fx = f(x);
      const auto f_ai_x = f(ai * x);
      const auto f_bi_x = f(bi * x);
      auto d = [&] { return describe({{"x", &x}}); };
      ts[0].record(residual(a.value * f_ai_x + b * f0, fx), d);
      ts[1].record(residual(a.value * f0 + b * f_bi_x, fx), d);
      ts[2].record(residual(f_ai_x + (ai * b) * f0, ai * fx), d);
      ts[3].record(residual((bi * a.value) * f0 + f_bi_x, bi * fx), d);
      ts[4].record(residual((bi * a.value) * fx + f0, bi * f(a.value * x)), d);
      ts[5].record(residual(f0 + (ai * b) * fx, ai * f(b * x)), d);
    }
  }
  std::vector<IdentityResidual> out;
  for (const auto& t : ts) out.push_back(t.finish(tol));
  return out;
}

IdentityResidual lemma22_check(const Evaluable& f, const AdditivePair& pair,
                               const std::vector<VectorPair>& samples, double tol) {
  require_validated(pair);
  const auto& c = pair.coefficient;
  const auto& a = c.value;
  const auto& b = c.complement;
  const auto f0 = f(ModuleVector::zero(pair.target()));
  ResidualTracker t("lemma2.2");
  for (const auto& [x, y] : samples) {
    const auto px = pair.phi(x);
    const auto py = pair.phi(y);
    const auto qx = pair.psi(x);
    const auto qy = pair.psi(y);
    const auto lhs = a * f(px + py) + b * f(qx - qy);
    const auto rhs = a * (f(px) + (c.inv * b) * f(qx) - (b * c.inv) * f0) +
                     b * ((c.co_inv * a) * f(py) - (c.co_inv * a) * f0 + f(pair.psi(-y)));
    t.record(residual(lhs, rhs), [&] { return describe({{"x", &x}, {"y", &y}}); });
  }
  return t.finish(tol);
}

IdentityResidual orthogonality_identity_check(const AdditivePair& pair,
                                              const std::vector<VectorPair>& samples,
                                              double tol) {
  require_validated(pair);
  const auto& c = pair.coefficient;
  ResidualTracker t("lemma2.2-orth");
  for (const auto& [x, y] : samples) {
    const auto u = pair.phi(x) + (c.inv * c.complement) * pair.psi(x);
    const auto v = (c.co_inv * c.value) * pair.phi(y) - pair.psi(y);
    const auto ip = inner_product(u, v);
    t.record(residual(ip, AlgebraElement::zero(ip.shape())),
             [&] { return describe({{"x", &x}, {"y", &y}}); });
  }
  return t.finish(tol);
}

std::vector<VectorPair> sample_source_pairs(const AdditivePair& pair, int n, std::uint64_t seed) {
  std::vector<VectorPair> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    auto x = sample_vector<Scalar>(pair.source(), rng);
    auto y = sample_vector<Scalar>(pair.source(), rng);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

OddEven odd_even_split(Evaluable f) {
  return {[f](const ModuleVector& x) { return Scalar(0.5) * (f(x) - f(-x)); },
          [f](const ModuleVector& x) { return Scalar(0.5) * (f(x) + f(-x)); }};
}

Evaluable extract_A(Evaluable f) { return odd_even_split(std::move(f)).odd; }

Form extract_B(Evaluable f) {
  return [f](const ModuleVector& x, const ModuleVector& y) {
    const auto s = x + y;
    const auto d = x - y;
    // y - x is the exact negative of x - y and floating-point addition
    // commutes, so swapping the arguments reproduces every operand.
    const auto even_s = f(s) + f(-s);
    const auto even_d = f(d) + f(-d);
    return Scalar(0.125) * (even_s - even_d);
  };
}

const IdentityResidual& Decomposition::report(std::string_view id) const {
  for (const auto& r : property_report)
    if (r.identity_id == id) return r;
  throw std::out_of_range("decomposition has no entry '" + std::string(id) + "'");
}

Decomposition decompose(const Mapping& f, const Coefficient& a, const AdditivePair& pair, int n,
                        double tol, std::uint64_t seed) {
  require_validated(pair);
  Evaluable fe = [f](const ModuleVector& x) { return f(x); };
  Decomposition d{extract_A(fe), extract_B(fe), f(ModuleVector::zero(f.domain())), {}};
  const auto& A = d.A;
  const auto& B = d.B;
  const auto& b = a.complement;

  ResidualTracker reconstruct("thm2.7-reconstruct");
  ResidualTracker additive("prop2.3-additive");
  ResidualTracker a_additive("thm2.7-A-a-additive");
  ResidualTracker symmetric("thm2.7-B-symmetric");
  ResidualTracker biadditive("thm2.7-B-biadditive");
  ResidualTracker a_biadditive("thm2.7-B-a-biadditive");
  ResidualTracker orth("thm2.7-B-orth-preserving");

  for (int i = 0; i < n; ++i) {
    const auto s = derive_seed(seed, i);
    const auto x = k_point(pair, s, 0);
    const auto y = k_point(pair, s, 1);
    const auto z = k_point(pair, s, 2);
    auto dx = [&] { return describe({{"x", &x}}); };
    auto dxy = [&] { return describe({{"x", &x}, {"y", &y}}); };
    auto dxyz = [&] { return describe({{"x", &x}, {"y", &y}, {"z", &z}}); };

    const auto Bxx = B(x, x);
    reconstruct.record(residual(f(x), A(x) + Bxx + d.f0), dx);
    additive.record(residual(A(x + y), A(x) + A(y)), dxy);
    a_additive.record(max_of({residual(A(a.value * x), a.value * A(x)),
                              residual(A(b * x), b * A(x))}),
                      dx);
    symmetric.record(residual(B(x, y), B(y, x)), dxy);

    const auto two_z = Scalar(2.0) * z;
    const auto Bxz = B(x, z);
    const auto Byz = B(y, z);
    biadditive.record(max_of({residual(B(x + y, two_z), Scalar(2.0) * (Bxz + Byz)),
                              residual(B(x, two_z), Scalar(2.0) * Bxz),
                              residual(B(x + y, z), Bxz + Byz)}),
                      dxyz);

    const auto ax = a.value * x;
    const auto bx = b * x;
    a_biadditive.record(max_of({residual(B(ax, ax), a.value * Bxx), residual(B(bx, bx), b * Bxx)}),
                        dx);

    std::mt19937_64 rng(derive_seed(s, 3));
    const auto zs = sample_vector<Scalar>(pair.source(), rng);
    const auto ws = sample_vector<Scalar>(pair.source(), rng);
    const auto u = pair.phi(zs);
    const auto v = pair.psi(ws);
    const auto Buv = B(u, v);
    orth.record(residual(Buv, ModuleVector::zero(Buv.space())),
                [&] { return describe({{"x", &u}, {"y", &v}}); });
  }
  for (const auto* t :
       {&reconstruct, &additive, &a_additive, &symmetric, &biadditive, &a_biadditive, &orth})
    d.property_report.push_back(t->finish(tol));
  return d;
}

IdentityResidual check_additivity_on_K(const Evaluable& g, const AdditivePair& pair, int n,
                                       double tol, std::uint64_t seed) {
  require_validated(pair);
  ResidualTracker t("prop2.3-additive");
  for (int i = 0; i < n; ++i) {
    const auto s = derive_seed(seed, i);
    const auto z1 = k_point(pair, s, 0);
    const auto z2 = k_point(pair, s, 1);
    t.record(residual(g(z1 + z2), g(z1) + g(z2)),
             [&] { return describe({{"z1", &z1}, {"z2", &z2}}); });
  }
  return t.finish(tol);
}

std::vector<IdentityResidual> check_quadratic_on_K(const Evaluable& g, const AdditivePair& pair,
                                                   int n, double tol, std::uint64_t seed) {
  require_validated(pair);
  const auto& c = pair.coefficient;
  const auto g0 = g(ModuleVector::zero(pair.target()));
  bool even_null = module_norm(g0) <= tol;

  ResidualTracker quad("prop2.5-quadratic");
  ResidualTracker id211("prop2.5-id211");
  ResidualTracker id212("prop2.5-id212");
  std::vector<VectorPair> source;
  for (int i = 0; i < n; ++i) {
    const auto s = derive_seed(seed, i);
    const auto z1 = k_point(pair, s, 0);
    const auto z2 = k_point(pair, s, 1);
    const auto g1 = g(z1);
    const auto g2 = g(z2);
    quad.record(residual(g(z1 + z2) + g(z1 - z2), Scalar(2.0) * (g1 + g2)),
                [&] { return describe({{"z1", &z1}, {"z2", &z2}}); });
    if (residual(g1, g(-z1)) > tol) even_null = false;
  }
  std::vector<IdentityResidual> out{quad.finish(tol)};
  if (!even_null) return out;

  for (const auto& [x, y] : sample_source_pairs(pair, n, derive_seed(seed, 0x5eed))) {
    (void)y;
    const auto px = pair.phi(x);
    const auto qx = pair.psi(x);
    auto dx = [&] { return describe({{"x", &x}}); };
    id211.record(residual(c.value * g(Scalar(2.0) * px), c.complement * g(Scalar(2.0) * qx)), dx);
    id212.record(residual(c.value * g(px), c.complement * g(qx)), dx);
  }
  out.push_back(id211.finish(tol));
  out.push_back(id212.finish(tol));
  return out;
}

IdentityResidual p_jensen_affine_check(const Mapping& f, double p, const AdditivePair& pair,
                                       int n, double tol, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1), got " + std::to_string(p));
  const auto basis = complex_basis(pair.source());
  const Scalar wq = (1.0 - p) * (1.0 - p);
  const Scalar wp = p * p;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto pz = pair.phi(basis[i]);
    const auto qz = pair.psi(basis[i]);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto pw = pair.phi(basis[j]);
      const auto qw = pair.psi(basis[j]);
      const auto cross = inner_product(pz, qw);
      const auto zero = AlgebraElement::zero(cross.shape());
      const double rc = residual(cross, zero);
      if (rc > tolerance::kPairValidation)
        throw PairConditionViolated("orthogonal ranges", i, j, rc);
      const auto l = wq * inner_product(pz, pw);
      const auto r = wp * inner_product(qz, qw);
      const double rb = residual(l, r);
      if (rb > tolerance::kPairValidation)
        throw PairConditionViolated("(1-p)^2 <phi z, phi w> = p^2 <psi z, psi w>", i, j, rb);
    }
  }

  Evaluable fe = [f](const ModuleVector& x) { return f(x); };
  const auto A = extract_A(fe);
  const auto B = extract_B(fe);
  const auto f0 = f(ModuleVector::zero(f.domain()));
  ResidualTracker t("cor2.9-B-vanishes");
  for (int i = 0; i < n; ++i) {
    const auto x = k_point(pair, derive_seed(seed, i), 0);
    const auto Bxx = B(x, x);
    t.record(max_of({residual(Bxx, ModuleVector::zero(Bxx.space())), residual(f(x), A(x) + f0)}),
             [&] { return describe({{"x", &x}}); });
  }
  return t.finish(tol);
}

IdentityResidual uniqueness_check(const Mapping& f, const Decomposition& d1,
                                  const Decomposition& d2, int n, double tol,
                                  std::uint64_t seed) {
  ResidualTracker t("thm2.7-unique");
  const auto zero_in = ModuleVector::zero(f.domain());
  const auto zero_out = ModuleVector::zero(f.codomain());
  t.record(max_of({residual(d1.A(zero_in), zero_out), residual(d2.A(zero_in), zero_out)}),
           [&] { return describe({{"x", &zero_in}}); });
  for (int i = 0; i < n; ++i) {
    const auto x = sample_vector<Scalar>(f.domain(), derive_seed(seed, i));
    t.record(max_of({residual(d1.A(x), d2.A(x)), residual(d1.B(x, x), d2.B(x, x))}),
             [&] { return describe({{"x", &x}}); });
  }
  return t.finish(tol);
}

}  // namespace cstar_jensen
