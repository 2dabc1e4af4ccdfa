#include "cstar_jensen/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace cstar_jensen {

namespace {

bool needs_pair(const std::string& id) {
  return id != "eq-1.1" && id.rfind("lemma2.1-", 0) != 0;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("scenario is missing '") + key + "'");
  return *it;
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw ValidationError(std::string(what) + " must be a positive integer");
  return j.get<int>();
}

Coefficient parse_coefficient(const json& j, const AlgebraShape& shape) {
  if (!j.is_object()) throw ParseError("'coefficient' must be an object");
  bool strict = false;
  if (j.contains("strict_order")) {
    if (!j["strict_order"].is_boolean()) throw ParseError("'strict_order' must be a boolean");
    strict = j["strict_order"].get<bool>();
  }
  AlgebraElement a = [&] {
    if (j.contains("scalar")) {
      if (!j["scalar"].is_number()) throw ParseError("'scalar' must be a number");
      return AlgebraElement::scalar(shape, j["scalar"].get<double>());
    }
    return algebra_element_from_json(j, &shape);
  }();
  try {
    return validate_coefficient(a, strict);
  } catch (const NearSingular& e) {
    throw ValidationError(std::string("coefficient: ") + e.what());
  } catch (const OrderViolation& e) {
    throw ValidationError(std::string("coefficient: ") + e.what());
  } catch (const NotSelfAdjoint& e) {
    throw ValidationError(std::string("coefficient: ") + e.what());
  }
}

AdditivePair parse_pair(const json& j, const Scenario& s) {
  if (!j.is_object() || !j.contains("builder") || !j["builder"].is_string())
    throw ParseError("'pair' must be an object with a string 'builder'");
  const auto builder = j["builder"].get<std::string>();
  try {
    if (builder == "interleave") {
      if (j.contains("p")) {
        if (!j["p"].is_number()) throw ParseError("pair 'p' must be a number");
        return interleave_pair(j["p"].get<double>(), s.rank_e, s.algebra);
      }
      return interleave_pair(s.coefficient, s.rank_f);
    }
    if (builder == "morphism_shift") return morphism_shift_pair(s.rank_f, s.algebra);
    if (builder == "explicit") {
      json desc = j;
      if (!desc.contains("a")) desc["a"] = to_json(s.coefficient.value);
      return additive_pair_from_json(desc, s.algebra);
    }
  } catch (const DomainError& e) {
    throw ValidationError(std::string("pair: ") + e.what());
  } catch (const PairConditionViolated& e) {
    throw ValidationError(std::string("pair: ") + e.what());
  } catch (const NearSingular& e) {
    throw ValidationError(std::string("pair: ") + e.what());
  } catch (const OrderViolation& e) {
    throw ValidationError(std::string("pair: ") + e.what());
  }
  throw ParseError("unknown pair builder '" + builder + "'");
}

std::vector<int> parse_coords(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("sampler '") + what + "' must be an array");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ParseError("sampler coordinates must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

OrthoSamplerMode parse_sampler(const json* j, const Scenario& s) {
  const ModuleSpace e(s.algebra, s.rank_e);
  if (!j) {
    DisjointSupport d;
    for (int i = 0; i < s.rank_e; ++i) (i % 2 == 0 ? d.left_coords : d.right_coords).push_back(i);
    return d;
  }
  if (!j->is_object() || !j->contains("mode") || !(*j)["mode"].is_string())
    throw ParseError("'sampler' must be an object with a string 'mode'");
  const auto mode = (*j)["mode"].get<std::string>();
  if (mode == "disjoint_support") {
    DisjointSupport d{parse_coords(require(*j, "left_coords"), "left_coords"),
                      parse_coords(require(*j, "right_coords"), "right_coords")};
    try {
      validate_disjoint_support(d, s.rank_e);
    } catch (const InvalidMode& ex) {
      throw ValidationError(std::string("sampler: ") + ex.what());
    }
    return d;
  }
  if (mode == "pair_image") {
    if (!s.pair) throw ValidationError("sampler 'pair_image' needs a 'pair'");
    std::string id = "pair";
    if (j->contains("pair_id")) {
      if (!(*j)["pair_id"].is_string()) throw ParseError("sampler 'pair_id' must be a string");
      id = (*j)["pair_id"].get<std::string>();
    }
    return pair_image_mode(*s.pair, id);
  }
  if (mode == "explicit") {
    const auto& pairs = require(*j, "pairs");
    if (!pairs.is_array() || pairs.empty())
      throw ParseError("sampler 'pairs' must be a non-empty array");
    ExplicitPairs ex;
    for (const auto& xy : pairs) {
      if (!xy.is_array() || xy.size() != 2) throw ParseError("each explicit pair must be [x, y]");
      auto x = module_vector_from_json(xy[0], s.algebra);
      auto y = module_vector_from_json(xy[1], s.algebra);
      if (!(x.space() == e) || !(y.space() == e))
        throw ValidationError("explicit sampler pair outside " + e.to_string());
      if (!is_orthogonal(x, y)) throw ValidationError("explicit sampler pair is not orthogonal");
      ex.pairs.emplace_back(std::move(x), std::move(y));
    }
    return ex;
  }
  throw ParseError("unknown sampler mode '" + mode + "'");
}

std::optional<double> scalar_value(const AlgebraElement& a) {
  const Scalar s = a.blocks().front()(0, 0);
  if (std::abs(s.imag()) > 1e-15) return std::nullopt;
  if (residual(a, AlgebraElement::scalar(a.shape(), s)) > 1e-15) return std::nullopt;
  return s.real();
}

std::uint64_t env_seed() {
  const char* v = std::getenv(kSeedEnv);
  if (!v || !*v) return 0;
  char* end = nullptr;
  const auto seed = std::strtoull(v, &end, 10);
  if (*end != '\0') throw ValidationError(std::string(kSeedEnv) + " is not an unsigned integer");
  return seed;
}

IdentityResidual error_entry(const std::string& id, const std::string& message) {
  IdentityResidual r;
  r.identity_id = id;
  r.samples = 0;
  r.max_residual = std::numeric_limits<double>::infinity();
  r.worst_input = {{"error", message}};
  r.pass = false;
  return r;
}

const IdentityResidual& pick(const std::vector<IdentityResidual>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.identity_id == id) return r;
  throw ValidationError("checker produced no '" + id + "' entry");
}

}  // namespace

const Mapping& Scenario::mapping(const std::string& label) const {
  for (const auto& m : mappings)
    if (m.label == label) return m.map;
  throw ValidationError("scenario has no mapping labelled '" + label + "'");
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

Scenario parse_scenario(const std::string& text, const Overrides& overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");

  Scenario s;
  s.algebra = shape_from_json(require(j, "algebra"));
  s.coefficient = parse_coefficient(require(j, "coefficient"), s.algebra);

  const auto& spaces = require(j, "spaces");
  if (!spaces.is_object()) throw ParseError("'spaces' must be an object");
  s.rank_f = spaces.contains("F") ? positive_int(spaces["F"], "spaces.F") : 1;
  s.rank_e = positive_int(require(spaces, "E"), "spaces.E");
  s.rank_g = spaces.contains("G") ? positive_int(spaces["G"], "spaces.G") : s.rank_e;
  const ModuleSpace e(s.algebra, s.rank_e);

  if (j.contains("pair")) {
    s.pair = parse_pair(j["pair"], s);
    if (!(s.pair->target() == e))
      throw ValidationError("pair maps into " + s.pair->target().to_string() + ", spaces.E is " +
                            e.to_string());
    if (s.pair->source().rank() != s.rank_f)
      throw ValidationError("pair source has rank " + std::to_string(s.pair->source().rank()) +
                            ", spaces.F is " + std::to_string(s.rank_f));
    if (residual(s.pair->coefficient.value, s.coefficient.value) > 1e-12)
      throw ValidationError("pair coefficient differs from the scenario coefficient");
  }
  s.sampler = parse_sampler(j.contains("sampler") ? &j["sampler"] : nullptr, s);

  const auto& maps = require(j, "mappings");
  if (!maps.is_array()) throw ParseError("'mappings' must be an array");
  if (maps.empty()) throw ValidationError("scenario has no mappings");
  for (const auto& m : maps) {
    const auto& label = require(m, "label");
    if (!label.is_string()) throw ParseError("mapping 'label' must be a string");
    auto f = mapping_from_json(require(m, "map"), e);
    if (f.codomain().rank() != s.rank_g || !(f.codomain().algebra() == s.algebra))
      throw ValidationError("mapping '" + label.get<std::string>() + "' lands in " +
                            f.codomain().to_string() + ", spaces.G has rank " +
                            std::to_string(s.rank_g));
    for (const auto& other : s.mappings)
      if (other.label == label.get<std::string>())
        throw ValidationError("duplicate mapping label '" + other.label + "'");
    s.mappings.push_back({label.get<std::string>(), std::move(f)});
  }

  const auto& checks = require(j, "checks");
  if (!checks.is_array()) throw ParseError("'checks' must be an array");
  if (checks.empty()) throw ValidationError("scenario selects no checks");
  for (const auto& c : checks) {
    if (!c.is_string()) throw ParseError("check ids must be strings");
    const auto id = c.get<std::string>();
    if (!is_identity_id(id)) throw ValidationError("unknown check id '" + id + "'");
    if (needs_pair(id) && !s.pair) throw ValidationError("check '" + id + "' needs a 'pair'");
    s.checks.push_back(id);
  }

  if (j.contains("p")) {
    if (!j["p"].is_number()) throw ParseError("'p' must be a number");
    s.p = j["p"].get<double>();
  } else if (auto v = scalar_value(s.coefficient.value)) {
    s.p = 1.0 - *v;
  }
  if (std::find(s.checks.begin(), s.checks.end(), "cor2.9-B-vanishes") != s.checks.end() && !s.p)
    throw ValidationError("check 'cor2.9-B-vanishes' needs 'p' when the coefficient is not scalar");

  s.samples = j.contains("samples") ? positive_int(j["samples"], "'samples'") : 200;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError("'seed' must be an unsigned integer");
    s.seed = j["seed"].get<std::uint64_t>();
  } else {
    s.seed = env_seed();
  }
  if (j.contains("tol")) {
    if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0))
      throw ValidationError("'tol' must be a positive number");
    s.tol = j["tol"].get<double>();
  }

  std::string digest_input = text;
  if (overrides.seed) {
    s.seed = *overrides.seed;
    digest_input += "\n--seed=" + std::to_string(*overrides.seed);
  }
  if (overrides.samples) {
    if (*overrides.samples < 1) throw ValidationError("--samples must be positive");
    s.samples = *overrides.samples;
    digest_input += "\n--samples=" + std::to_string(*overrides.samples);
  }
  if (overrides.tol) {
    if (!(*overrides.tol > 0)) throw ValidationError("--tol must be positive");
    s.tol = *overrides.tol;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *overrides.tol);
    digest_input += std::string("\n--tol=") + buf;
  }
  s.digest = fnv1a_hex(digest_input);
  return s;
}

Scenario load_scenario(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(text, overrides);
}

IdentityResidual run_check(const Scenario& s, const LabeledMapping& m, const std::string& id) {
  const auto seed = derive_seed(s.seed, fnv1a(m.label + "/" + id));
  const auto& f = m.map;
  const int n = s.samples;
  try {
    if (id == "eq-1.1") return check_orthogonal_jensen(f, s.coefficient, s.sampler, n, s.tol, seed);

    Evaluable fe = [f](const ModuleVector& x) { return f(x); };
    if (id.rfind("lemma2.1-", 0) == 0) {
      std::vector<ModuleVector> xs;
      for (int i = 0; i < n; ++i)
        xs.push_back(sample_orthogonal_pair(f.domain(), s.sampler, derive_seed(seed, i), i).first);
      return pick(lemma21_suite(fe, s.coefficient, xs, s.tol), id);
    }

    const auto& pair = *s.pair;
    if (id == "lemma2.2") return lemma22_check(fe, pair, sample_source_pairs(pair, n, seed), s.tol);
    if (id == "lemma2.2-orth")
      return orthogonality_identity_check(pair, sample_source_pairs(pair, n, seed), s.tol);
    if (id == "prop2.3-additive") return check_additivity_on_K(extract_A(fe), pair, n, s.tol, seed);
    if (id.rfind("prop2.5-", 0) == 0) {
      const auto even = odd_even_split(fe).even;
      const auto f0 = f(ModuleVector::zero(f.domain()));
      Evaluable g = [even, f0](const ModuleVector& x) { return even(x) - f0; };
      return pick(check_quadratic_on_K(g, pair, n, s.tol, seed), id);
    }
    if (id == "thm2.7-unique") {
      const auto d1 = decompose(f, s.coefficient, pair, 1, s.tol, derive_seed(seed, 1));
      const auto d2 = decompose(f, s.coefficient, pair, 1, s.tol, derive_seed(seed, 2));
      return uniqueness_check(f, d1, d2, n, s.tol, seed);
    }
    if (id.rfind("thm2.7-", 0) == 0)
      return decompose(f, s.coefficient, pair, n, s.tol, seed).report(id);
    if (id == "cor2.9-B-vanishes") return p_jensen_affine_check(f, *s.p, pair, n, s.tol, seed);
  } catch (const std::exception& e) {
    return error_entry(id, e.what());
  }
  return error_entry(id, "unknown check id");
}

CampaignReport run_suite(const Scenario& s) {
  CampaignReport r;
  r.scenario_digest = s.digest;
  r.started = utc_timestamp();
  std::map<std::string, std::vector<IdentityResidual>> grouped;
  for (const auto& m : s.mappings)
    for (const auto& id : s.checks) grouped[m.label].push_back(run_check(s, m, id));
  r.overall_pass = true;
  for (auto& [label, checks] : grouped) {
    std::sort(checks.begin(), checks.end(),
              [](const auto& x, const auto& y) { return x.identity_id < y.identity_id; });
    for (const auto& c : checks) r.overall_pass = r.overall_pass && c.pass;
    r.results.push_back({label, std::move(checks)});
  }
  r.finished = utc_timestamp();
  return r;
}

json results_to_json(const std::vector<LabelResults>& results) {
  json out = json::array();
  for (const auto& l : results) {
    json checks = json::array();
    for (const auto& c : l.checks) checks.push_back(to_json(c));
    out.push_back({{"label", l.label}, {"checks", std::move(checks)}});
  }
  return out;
}

json to_json(const CampaignReport& r) {
  return {{"scenario_digest", r.scenario_digest},
          {"started", r.started},
          {"finished", r.finished},
          {"results", results_to_json(r.results)},
          {"overall_pass", r.overall_pass},
          {"tool_version", r.tool_version}};
}

CampaignReport campaign_report_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("report must be an object");
  CampaignReport r;
  try {
    r.scenario_digest = j.at("scenario_digest").get<std::string>();
    r.started = j.at("started").get<std::string>();
    r.finished = j.at("finished").get<std::string>();
    r.overall_pass = j.at("overall_pass").get<bool>();
    r.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& l : j.at("results")) {
      LabelResults lr{l.at("label").get<std::string>(), {}};
      for (const auto& c : l.at("checks")) lr.checks.push_back(identity_residual_from_json(c));
      r.results.push_back(std::move(lr));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return r;
}

void emit_report(const CampaignReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report '" + path + "'");
  out << canonical_dump(to_json(r));
  if (!out) throw IoError("write to '" + path + "' failed");
}

CampaignReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read report '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return campaign_report_from_json(json::parse(ss.str()));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cstar_jensen
