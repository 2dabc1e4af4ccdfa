#pragma once

// Sampling verifiers for the orthogonal a-Jensen equation
//   <x, y> = 0  =>  f(a x + (1-a) y) = a f(x) + (1-a) f(y)
// and for the identities and the decomposition f = A + B(x, x) + f(0) that
// follow from it on K = phi(F) + psi(F).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cstar_jensen/io.hpp"
#include "cstar_jensen/mapping.hpp"

namespace cstar_jensen {

inline constexpr std::array<std::string_view, 21> kIdentityIds = {
    "eq-1.1",
    "lemma2.1-i",
    "lemma2.1-ii",
    "lemma2.1-iii",
    "lemma2.1-iv",
    "lemma2.1-v",
    "lemma2.1-vi",
    "lemma2.2",
    "lemma2.2-orth",
    "prop2.3-additive",
    "prop2.5-quadratic",
    "prop2.5-id211",
    "prop2.5-id212",
    "thm2.7-reconstruct",
    "thm2.7-A-a-additive",
    "thm2.7-B-symmetric",
    "thm2.7-B-biadditive",
    "thm2.7-B-a-biadditive",
    "thm2.7-B-orth-preserving",
    "thm2.7-unique",
    "cor2.9-B-vanishes",
};

bool is_identity_id(std::string_view id);

struct IdentityResidual {
  std::string identity_id;
  int samples = 0;
  double max_residual = 0.0;
  json worst_input = json::object();
  bool pass = true;
};

json to_json(const IdentityResidual& r);
IdentityResidual identity_residual_from_json(const json& j);

/// Records the largest residual seen and a description of the input that
/// produced it. NaN counts as +inf.
class ResidualTracker {
 public:
  explicit ResidualTracker(std::string id) : id_(std::move(id)) {}

  template <typename Describe>
  void record(double r, Describe&& describe) {
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    ++samples_;
    if (samples_ == 1 || r > max_) {
      max_ = r;
      worst_ = describe();
    }
  }

  IdentityResidual finish(double tol) const {
    return IdentityResidual{id_, samples_, max_, worst_, max_ <= tol};
  }

 private:
  std::string id_;
  int samples_ = 0;
  double max_ = 0.0;
  json worst_ = json::object();
};

// ---------------------------------------------------------------------------

IdentityResidual check_orthogonal_jensen(const Mapping& f, const Coefficient& a,
                                         const OrthoSamplerMode& sampler, int n,
                                         double tol = tolerance::kCheck, std::uint64_t seed = 0);

/// Six entries, lemma2.1-i ... lemma2.1-vi, evaluated at every x. Coefficients
/// act on values of f through the left action on G.
std::vector<IdentityResidual> lemma21_suite(const Evaluable& f, const Coefficient& a,
                                            const std::vector<ModuleVector>& xs,
                                            double tol = tolerance::kCheck);

/// a f(phi x + phi y) + (1-a) f(psi x - psi y) against the expanded right-hand
/// side, for (x, y) in F x F.
IdentityResidual lemma22_check(const Evaluable& f, const AdditivePair& pair,
                               const std::vector<VectorPair>& samples,
                               double tol = tolerance::kCheck);

/// <phi(x) + a^{-1}(1-a) psi(x), (1-a)^{-1} a phi(y) - psi(y)> = 0.
IdentityResidual orthogonality_identity_check(const AdditivePair& pair,
                                              const std::vector<VectorPair>& samples,
                                              double tol = tolerance::kCheck);

/// n pairs (x, y) in F x F drawn from `seed`.
std::vector<VectorPair> sample_source_pairs(const AdditivePair& pair, int n, std::uint64_t seed);

struct OddEven {
  Evaluable odd;
  Evaluable even;
};

OddEven odd_even_split(Evaluable f);

/// A(x) = (f(x) - f(-x)) / 2
Evaluable extract_A(Evaluable f);
/// B(x, y) = (f(x+y) + f(-x-y) - f(x-y) - f(-x+y)) / 8, evaluated so that
/// B(x, y) and B(y, x) are bitwise equal.
Form extract_B(Evaluable f);

struct Decomposition {
  Evaluable A;
  Form B;
  ModuleVector f0;
  std::vector<IdentityResidual> property_report;

  const IdentityResidual& report(std::string_view id) const;
};

Decomposition decompose(const Mapping& f, const Coefficient& a, const AdditivePair& pair, int n,
                        double tol = tolerance::kCheck, std::uint64_t seed = 0);

IdentityResidual check_additivity_on_K(const Evaluable& g, const AdditivePair& pair, int n,
                                       double tol = tolerance::kCheck, std::uint64_t seed = 0);

/// prop2.5-quadratic on K; when g is even with g(0) = 0 on the samples, also
/// prop2.5-id211 and prop2.5-id212 on F.
std::vector<IdentityResidual> check_quadratic_on_K(const Evaluable& g, const AdditivePair& pair,
                                                   int n, double tol = tolerance::kCheck,
                                                   std::uint64_t seed = 0);

/// For p in (0,1) and a pair with <phi, psi> = 0 and
/// (1-p)^2 <phi z, phi w> = p^2 <psi z, psi w>: B(x, x) vanishes and
/// f(x) = A(x) + f(0) on K.
IdentityResidual p_jensen_affine_check(const Mapping& f, double p, const AdditivePair& pair,
                                       int n, double tol = tolerance::kCheck,
                                       std::uint64_t seed = 0);

/// A1 = A2 and B1(x, x) = B2(x, x) on random x in the domain of f, and
/// A1(0) = A2(0) = 0.
IdentityResidual uniqueness_check(const Mapping& f, const Decomposition& d1,
                                  const Decomposition& d2, int n, double tol = tolerance::kCheck,
                                  std::uint64_t seed = 0);

}  // namespace cstar_jensen
