// seglv: command-line driver for the segregation solvers and verifier.
//
// Exit codes: 0 success, 2 invalid input, 3 solver did not converge,
// 4 class-S certification failed under --require-class-s.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seg/analysis.hpp"
#include "seg/config.hpp"
#include "seg/io.hpp"
#include "seg/limit_solver.hpp"
#include "seg/verifier.hpp"

namespace fs = std::filesystem;
using namespace seg;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitNotClassS = 4;

struct Common {
  std::string config;
  std::string out;
  int threads = 1;
  long seed = 0;  // reserved; every solver is deterministic
};

struct Setup {
  RunConfig cfg;
  Grid grid;
  BoundarySpec bc;
  fs::path out;
};

Setup load(const Common& c) {
  RunConfig cfg = load_config(c.config);
  cfg.solver.threads = c.threads;
  cfg.limit.threads = c.threads;
  Grid g = make_grid(cfg);
  BoundarySpec bc = make_boundary(cfg, g);
  fs::path out = c.out.empty() ? cfg.out_dir : fs::path(c.out);
  fs::create_directories(out);
  return Setup{std::move(cfg), std::move(g), std::move(bc), std::move(out)};
}

Json report_json(const SolveReport& r, double overlap) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["overlap"] = overlap;
  j["wall_time"] = r.wall_time;
  j["converged"] = r.converged;
  return j;
}

void print_report(const char* label, const SolveReport& r, double overlap) {
  std::printf("%-12s eps=%-10.3e iterations=%-8ld residual=%-11.4e overlap=%-11.4e %s (%.2fs)\n", label,
              r.epsilon, r.iterations, r.residual, overlap, r.converged ? "converged" : "NOT CONVERGED",
              r.wall_time);
}

int cmd_solve_eps(const Common& c, double eps) {
  Setup s = load(c);
  const SolveResult r = solve_eps(s.grid, s.bc, eps, s.cfg.solver);
  const double ov = overlap_metric(r.u);
  write_tuple(s.out, s.grid, r.u);
  write_json(s.out / "report.json", report_json(r.report, ov));
  print_report("solve-eps", r.report, ov);
  return r.report.converged ? 0 : kExitNotConverged;
}

int cmd_continuation(const Common& c) {
  Setup s = load(c);
  if (s.cfg.ladder.empty()) throw ConfigError(s.cfg.source.string() + ": solver.ladder is required");
  const auto results = continuation(s.grid, s.bc, s.cfg.ladder, s.cfg.solver);
  std::vector<LadderRow> rows;
  bool ok = true;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const double ov = overlap_metric(results[k].u);
    write_tuple(rung_dir(s.out, k), s.grid, results[k].u);
    rows.push_back({results[k].report, ov});
    print_report("continuation", results[k].report, ov);
    ok = ok && results[k].report.converged;
  }
  write_ladder_csv(s.out / "ladder.csv", rows, false);
  return ok ? 0 : kExitNotConverged;
}

int cmd_limit(const Common& c, const std::string& method, const std::string& init_dir) {
  Setup s = load(c);
  SolveResult r;
  if (method == "two_species") {
    if (!init_dir.empty()) throw std::invalid_argument("--init only applies to --method direct");
    r.u = limit_two_species(s.grid, s.bc);
    r.report.converged = true;
    r.report.residual = harmonic_residual(s.grid, hat_transform(r.u, 0));
  } else {
    DensityTuple init;
    if (!init_dir.empty()) init = read_tuple(init_dir, s.grid, s.bc.m);
    r = limit_direct(s.grid, s.bc, s.cfg.limit, init_dir.empty() ? nullptr : &init);
  }
  const fs::path dir = s.out / ("limit_" + method);
  write_tuple(dir, s.grid, r.u);
  write_json(dir / "report.json", report_json(r.report, overlap_metric(r.u)));
  write_ladder_csv(s.out / "ladder.csv", {{r.report, overlap_metric(r.u)}}, true);
  print_report(method == "direct" ? "limit-direct" : "limit-closed", r.report, overlap_metric(r.u));
  return r.report.converged ? 0 : kExitNotConverged;
}

int cmd_verify(const Common& c, const std::string& first, const std::string& second, bool require_s) {
  Setup s = load(c);
  const Tolerances tol = absolute_tolerances(s.cfg, s.bc);
  const DensityTuple u = read_tuple(first, s.grid, s.bc.m);
  const Certificate cert = certify(s.grid, s.bc, u, tol);
  Json doc = certificate_json(s.grid, cert, tol);
  std::cout << certificate_summary(cert);
  bool class_s = cert.class_s;
  if (!second.empty()) {
    const DensityTuple v = read_tuple(second, s.grid, s.bc.m);
    const Certificate cv = certify(s.grid, s.bc, v, tol);
    class_s = class_s && cv.class_s;
    const Json second_cert = certificate_json(s.grid, cv, tol);
    for (const auto& [k, val] : second_cert.items()) doc["second." + k] = val;
    const PQReport pq = compute_pq(s.grid, u, v);
    doc.update(pq_json(s.grid, pq));
    const Lemma31Report lemma = check_lemma31(s.grid, u, v, tol, s.cfg.lemma_slack * s.bc.scale());
    doc.update(lemma31_json(lemma));
    std::cout << "second tuple: class S " << (cv.class_s ? "pass" : "fail") << "\n";
    std::printf("P = %.6e (species %zu)  Q = %.6e (species %zu)\n", pq.p, pq.p_species + 1, pq.q,
                pq.q_species + 1);
    if (lemma.precondition_ok) std::printf("max-on-contact-set check: %s\n", lemma.holds() ? "holds" : "fails");
    else std::printf("max-on-contact-set check skipped: %s\n", lemma.note.c_str());
  }
  write_json(s.out / "certificate.json", doc);
  return require_s && !class_s ? kExitNotClassS : 0;
}

int cmd_rate(const Common& c, const std::string& ladder_dir, const std::string& reference_dir) {
  Setup s = load(c);
  const auto rows = read_ladder_csv(fs::path(ladder_dir) / "ladder.csv");
  const DensityTuple reference = read_tuple(reference_dir, s.grid, s.bc.m);
  std::vector<DensityTuple> fields;
  std::vector<double> eps;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].report.epsilon <= 0.0) continue;  // limit rows
    fields.push_back(read_tuple(rung_dir(ladder_dir, k), s.grid, s.bc.m));
    eps.push_back(rows[k].report.epsilon);
  }
  std::vector<LadderRung> rungs;
  for (std::size_t k = 0; k < fields.size(); ++k) rungs.push_back({eps[k], &fields[k]});
  const RateStudy study = rate_study(s.grid, rungs, reference);

  std::ofstream csv(s.out / "rates.csv", std::ios::binary);
  csv << "species,epsilon,h1_distance\n";
  for (std::size_t i = 0; i < s.bc.m; ++i) {
    for (const auto& rung : rungs) {
      csv << (i + 1) << ',' << format_double(rung.epsilon) << ','
          << format_double(discrete_h1_norm(s.grid, difference((*rung.u)[i], reference[i]))) << '\n';
    }
  }
  write_json(s.out / "ratefit.json", rate_json(study));
  for (std::size_t i = 0; i < study.species.size(); ++i) {
    std::printf("u%zu: slope %.4f  r^2 %.4f%s\n", i + 1, study.species[i].slope, study.species[i].r_squared,
                study.species[i].dropped ? "  (largest epsilon dropped)" : "");
  }
  return 0;
}

int cmd_compare(const Common& c, const std::string& a_dir, const std::string& b_dir) {
  Setup s = load(c);
  const DensityTuple a = read_tuple(a_dir, s.grid, s.bc.m);
  const DensityTuple b = read_tuple(b_dir, s.grid, s.bc.m);
  const Comparison cmp = compare_limits(s.grid, a, b);
  write_json(s.out / "compare.json", compare_json(s.grid, cmp));
  std::printf("max-norm distance %.6e  P %.6e  Q %.6e\n", cmp.headline, cmp.pq.p, cmp.pq.q);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strongly competing Lotka-Volterra steady states and their segregated limit"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--config", common.config, "Scenario configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Output directory (defaults to [output] dir)");
    sub->add_option("--threads", common.threads, "Red-black parallel sweeps on N threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", common.seed, "Reserved; solvers are deterministic");
  };

  double eps = 0.0;
  auto* solve = app.add_subcommand("solve-eps", "Solve at one competition parameter epsilon");
  add_common(solve);
  solve->add_option("--eps", eps, "Competition parameter epsilon > 0")->required();

  auto* cont = app.add_subcommand("continuation", "Solve along the configured epsilon ladder");
  add_common(cont);

  std::string method = "direct";
  std::string init_dir;
  auto* limit = app.add_subcommand("limit", "Compute the segregated limit without epsilon");
  add_common(limit);
  limit->add_option("--method", method, "two_species or direct")
      ->check(CLI::IsMember({"two_species", "direct"}));
  limit->add_option("--init", init_dir, "Field directory used as the starting tuple (direct only)");

  std::vector<std::string> verify_paths;
  bool require_s = false;
  auto* verify = app.add_subcommand("verify", "Certify one tuple, or two tuples and their P/Q");
  add_common(verify);
  verify->add_option("fields", verify_paths, "One or two field directories")->required()->expected(1, 2);
  verify->add_flag("--require-class-s", require_s, "Exit 4 unless every tuple certifies as class S");

  std::string ladder_dir;
  std::string reference_dir;
  auto* rate = app.add_subcommand("rate", "Fit H1 distance against epsilon");
  add_common(rate);
  rate->add_option("ladder", ladder_dir, "Continuation output directory")->required();
  rate->add_option("reference", reference_dir, "Field directory of the limit")->required();

  std::string a_dir;
  std::string b_dir;
  auto* compare = app.add_subcommand("compare", "Compare two limits");
  add_common(compare);
  compare->add_option("a", a_dir, "First field directory")->required();
  compare->add_option("b", b_dir, "Second field directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*solve) return cmd_solve_eps(common, eps);
    if (*cont) return cmd_continuation(common);
    if (*limit) return cmd_limit(common, method, init_dir);
    if (*verify) {
      return cmd_verify(common, verify_paths.front(), verify_paths.size() > 1 ? verify_paths[1] : "", require_s);
    }
    if (*rate) return cmd_rate(common, ladder_dir, reference_dir);
    if (*compare) return cmd_compare(common, a_dir, b_dir);
  } catch (const std::exception& e) {
    std::cerr << "seglv: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
