#pragma once

// Scenario files and verification campaigns.
//
// {
//   "algebra": [2, 1],
//   "coefficient": {"blocks": ..., "strict_order": true}   or {"scalar": 0.5},
//   "spaces": {"F": 2, "E": 4, "G": 2},
//   "pair": {"builder": "interleave"}                        a from "coefficient"
//         | {"builder": "interleave", "p": 0.25}             a = (1-p).1
//         | {"builder": "morphism_shift"}                    a = 1/2
//         | {"builder": "explicit", "phi": ..., "psi": ... [, "a": ...]},
//   "sampler": {"mode": "disjoint_support", "left_coords": [...], "right_coords": [...]}
//            | {"mode": "pair_image" [, "pair_id": "..."]}
//            | {"mode": "explicit", "pairs": [[x, y], ...]},
//   "mappings": [{"label": "f", "map": Mapping}, ...],
//   "checks": ["eq-1.1", ...],
//   "samples": 200, "seed": 7, "tol": 1e-9, "p": 0.5
// }

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstar_jensen/jensen.hpp"

namespace cstar_jensen {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSeedEnv = "CSTAR_JENSEN_SEED";

struct LabeledMapping {
  std::string label;
  Mapping map;
};

struct Scenario {
  AlgebraShape algebra;
  Coefficient coefficient;
  int rank_f = 1;
  int rank_e = 1;
  int rank_g = 1;
  std::optional<AdditivePair> pair;
  OrthoSamplerMode sampler;
  std::vector<LabeledMapping> mappings;
  std::vector<std::string> checks;
  int samples = 200;
  std::uint64_t seed = 0;
  double tol = tolerance::kCheck;
  /// Ratio used by cor2.9-B-vanishes.
  std::optional<double> p;
  /// FNV-1a over the file bytes and the applied overrides.
  std::string digest;

  const Mapping& mapping(const std::string& label) const;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
};

std::string fnv1a_hex(const std::string& bytes);
std::uint64_t fnv1a(const std::string& bytes);

Scenario parse_scenario(const std::string& text, const Overrides& overrides = {});
/// Throws IoError, ParseError or ValidationError.
Scenario load_scenario(const std::string& path, const Overrides& overrides = {});

struct LabelResults {
  std::string label;
  std::vector<IdentityResidual> checks;
};

struct CampaignReport {
  std::string scenario_digest;
  std::string started;
  std::string finished;
  std::vector<LabelResults> results;
  bool overall_pass = false;
  std::string tool_version = kToolVersion;
};

CampaignReport run_suite(const Scenario& s);

/// One entry for a single (mapping, check) cell; checker errors become a
/// failing entry with an infinite residual.
IdentityResidual run_check(const Scenario& s, const LabeledMapping& m, const std::string& id);

json to_json(const CampaignReport& r);
json results_to_json(const std::vector<LabelResults>& results);
CampaignReport campaign_report_from_json(const json& j);

void emit_report(const CampaignReport& r, const std::string& path);
CampaignReport load_report(const std::string& path);

std::string utc_timestamp();

}  // namespace cstar_jensen
