#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cstar_jensen/harness.hpp"
#include "cstar_jensen/kernel.hpp"

namespace cj = cstar_jensen;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

constexpr const char* kSchemaHelp = R"(scenario schema:
  {"algebra": [n1, ...],
   "coefficient": {"blocks": [...], "strict_order": bool} | {"scalar": x},
   "spaces": {"F": int, "E": int, "G": int},
   "pair": {"builder": "interleave" [, "p": x]} | {"builder": "morphism_shift"}
         | {"builder": "explicit", "phi": Mapping, "psi": Mapping [, "a": element]},
   "sampler": {"mode": "disjoint_support" | "pair_image" | "explicit", ...},
   "mappings": [{"label": str, "map": Mapping}],
   "checks": [id, ...], "samples": int, "seed": int, "tol": float [, "p": x]}
run `cstar-jensen list-checks` for the identity ids.
)";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void print_result(const std::string& label, const cj::IdentityResidual& r) {
  std::cout << (r.pass ? "PASS  " : "FAIL  ") << label << "  " << r.identity_id
            << "  max_residual=" << fmt(r.max_residual) << "  samples=" << r.samples;
  if (r.worst_input.contains("error")) std::cout << "  error: " << r.worst_input["error"].get<std::string>();
  std::cout << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw cj::IoError("cannot write '" + path + "'");
  out << text;
}

int cmd_verify(const std::string& scenario, const cj::Overrides& ov, const std::string& report) {
  const auto s = cj::load_scenario(scenario, ov);
  const auto r = cj::run_suite(s);
  for (const auto& l : r.results)
    for (const auto& c : l.checks) print_result(l.label, c);
  std::cout << "overall: " << (r.overall_pass ? "PASS" : "FAIL") << "  digest=" << r.scenario_digest
            << "\n";
  if (!report.empty()) cj::emit_report(r, report);
  return r.overall_pass ? kExitPass : kExitFail;
}

int cmd_decompose(const std::string& scenario, const std::string& label, const std::string& report) {
  const auto s = cj::load_scenario(scenario);
  if (!s.pair) throw cj::ValidationError("decompose needs a 'pair' in the scenario");
  const auto& f = s.mapping(label);
  const auto d = cj::decompose(f, s.coefficient, *s.pair, s.samples, s.tol,
                               cj::derive_seed(s.seed, cj::fnv1a(label + "/decompose")));
  bool pass = true;
  cj::json entries = cj::json::array();
  for (const auto& r : d.property_report) {
    print_result(label, r);
    pass = pass && r.pass;
    entries.push_back(cj::to_json(r));
  }
  const cj::json out = {{"label", label},
                        {"f0", cj::to_json(d.f0)},
                        {"property_report", std::move(entries)},
                        {"overall_pass", pass},
                        {"scenario_digest", s.digest},
                        {"tool_version", cj::kToolVersion}};
  write_text(report, cj::canonical_dump(out));
  return pass ? kExitPass : kExitFail;
}

int cmd_example_l2(double p, int n) {
  const auto pair = cj::interleave_pair(p, n);
  std::cout << "interleave pair p=" << p << " N=" << n << "  a=" << 1.0 - p << "\n";
  std::cout << "  cross residual   max ||<phi z, psi w>||              = " << fmt(pair.cross_residual)
            << "\n";
  std::cout << "  balance residual a<phi z, phi w>a* vs (1-a)<psi z, psi w>(1-a)* = "
            << fmt(pair.balance_residual) << "\n";

  // a <phi(x), phi(y)> a* against sum_n x_n conj(y_n) on the standard basis
  // and on seeded random sequences.
  const auto& a = pair.coefficient;
  double sum_residual = 0.0;
  for (int i = 0; i < 32; ++i) {
    const auto x = cj::sample_vector<cj::Scalar>(pair.source(), cj::derive_seed(i, 0));
    const auto y = cj::sample_vector<cj::Scalar>(pair.source(), cj::derive_seed(i, 1));
    const auto lhs = a.value * cj::inner_product(pair.phi(x), pair.phi(y)) * cj::adjoint(a.value);
    const auto mid =
        a.complement * cj::inner_product(pair.psi(x), pair.psi(y)) * cj::adjoint(a.complement);
    const auto rhs = cj::inner_product(x, y);
    sum_residual = std::max({sum_residual, cj::residual(lhs, rhs), cj::residual(mid, rhs)});
  }
  std::cout << "  sum identity     a<phi x, phi y>a* = sum x_n conj(y_n)  = " << fmt(sum_residual)
            << "\n";
  const bool pass = pair.cross_residual <= 1e-12 && pair.balance_residual <= 1e-12 &&
                    sum_residual <= 1e-12;
  std::cout << (pass ? "PASS" : "FAIL") << " (bound 1e-12)\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_solve_kernel(const std::string& scenario) {
  const auto s = cj::load_scenario(scenario);
  const cj::ModuleSpace g(s.algebra, s.rank_g);
  const cj::ModuleSpace e(s.algebra, s.rank_e);
  const auto sol = cj::solve_abiadditive_kernel(s.coefficient, g);
  std::cout << "kernel dimension: " << sol.dimension << "  spectral gap: " << fmt(sol.spectral_gap)
            << "\n";
  double worst = 0.0;
  for (std::size_t k = 0; k < sol.basis.size(); ++k) {
    const double r = cj::kernel_constraint_residual(sol.basis[k], s.coefficient, e, s.samples,
                                                    cj::derive_seed(s.seed, k));
    worst = std::max(worst, r);
    std::cout << "  basis[" << k << "] constraint residual " << fmt(r) << "\n";
  }
  const bool pass = worst <= 1e-8;
  std::cout << (pass ? "PASS" : "FAIL") << " (bound 1e-8)\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_list_checks() {
  for (const auto id : cj::kIdentityIds) std::cout << id << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling verifier for orthogonally a-Jensen mappings on Hilbert C*-modules"};
  app.require_subcommand(1);
  app.footer(kSchemaHelp);

  std::string scenario;
  std::string report;
  std::string label;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  double p = 0.5;
  int n = 8;

  auto* verify = app.add_subcommand("verify", "run every check of a scenario");
  verify->add_option("--scenario", scenario, "scenario JSON file")->required();
  verify->add_option("--seed", seed, "override the scenario seed");
  verify->add_option("--samples", samples, "override the sample count");
  verify->add_option("--tol", tol, "override the tolerance");
  verify->add_option("--report", report, "write the canonical JSON report here");

  auto* decomp = app.add_subcommand("decompose", "extract A, B and f(0) for one mapping");
  decomp->add_option("--scenario", scenario, "scenario JSON file")->required();
  decomp->add_option("--mapping", label, "mapping label")->required();
  decomp->add_option("--report", report, "output JSON file")->required();

  auto* l2 = app.add_subcommand("example-l2", "validate the truncated interleaving pair");
  l2->add_option("--p", p, "ratio in (0, 1)")->required();
  l2->add_option("--n", n, "even truncation length")->required();

  auto* kernel = app.add_subcommand("solve-kernel", "a-biadditive kernels for a scenario");
  kernel->add_option("--scenario", scenario, "scenario JSON file")->required();

  auto* list = app.add_subcommand("list-checks", "print the identity ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << kSchemaHelp;
    return kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(scenario, cj::Overrides{seed, samples, tol}, report);
    if (*decomp) return cmd_decompose(scenario, label, report);
    if (*l2) return cmd_example_l2(p, n);
    if (*kernel) return cmd_solve_kernel(scenario);
    if (*list) return cmd_list_checks();
  } catch (const cj::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
