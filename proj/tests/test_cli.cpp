#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "seg/config.hpp"
#include "seg/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / "seglv_test_cli";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + SEGLV_BINARY + "\" " + args + " > \"" +
                          (workdir() / "last.log").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario(const char* name) { return (fs::path(SEGLV_SCENARIO_DIR) / name).string(); }

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

fs::path small_config() {
  const fs::path p = workdir() / "small.cfg";
  std::ofstream out(p);
  out << "[domain]\nshape = interval\nn = 33\n\n"
         "[boundary]\nspecies = 2\narcs.1 = (0.0, 0.0, 1.0)\narcs.2 = (0.5, 0.5, 1.0)\n\n"
         "[solver]\nladder = 1e-1, 1e-2, 1e-3, 1e-4\nlimit_tol = 1e-14\n";
  return p;
}

}  // namespace

TEST_CASE("solve-eps in the decoupled regime") {
  const fs::path out = workdir() / "solve";
  REQUIRE(run("solve-eps --config " + scenario("1d_two.cfg") + " --eps 1e6 --out " + out.string()) == 0);
  const seg::RunConfig cfg = seg::load_config(scenario("1d_two.cfg"));
  const seg::Grid g = seg::make_grid(cfg);
  const seg::DensityTuple u = seg::read_tuple(out, g, 2);
  for (std::size_t a : g.active_nodes()) {
    CHECK(std::abs(u[0][a] - (1.0 - g.x(a))) < 1e-5);
    CHECK(std::abs(u[1][a] - g.x(a)) < 1e-5);
  }
  const auto report = read_json(out / "report.json");
  CHECK(report["converged"].get<bool>());
}

TEST_CASE("verify reports a corrupted field and gates on class S") {
  const fs::path cfg = small_config();
  const fs::path out = workdir() / "verify";
  REQUIRE(run("limit --method two_species --config " + cfg.string() + " --out " + out.string()) == 0);
  const fs::path fields = out / "limit_two_species";
  REQUIRE(run("verify " + fields.string() + " --config " + cfg.string() + " --out " + out.string() +
              " --require-class-s") == 0);

  const seg::Grid g = seg::make_grid(seg::load_config(cfg));
  seg::DensityTuple u = seg::read_tuple(fields, g, 2);
  u[0][5] = -0.125;
  const fs::path bad = workdir() / "corrupted";
  seg::write_tuple(bad, g, u);
  CHECK(run("verify " + bad.string() + " --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto cert = read_json(out / "certificate.json");
  CHECK(cert["defect.nonnegative.u1"].get<double>() == 0.125);
  CHECK_FALSE(cert["class_S"].get<bool>());
  CHECK(run("verify " + bad.string() + " --config " + cfg.string() + " --out " + out.string() +
            " --require-class-s") == 4);
}

TEST_CASE("compare of identical fields is all zero") {
  const fs::path cfg = small_config();
  const fs::path out = workdir() / "compare";
  REQUIRE(run("limit --method two_species --config " + cfg.string() + " --out " + out.string()) == 0);
  const std::string f = (out / "limit_two_species").string();
  REQUIRE(run("compare " + f + " " + f + " --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto j = read_json(out / "compare.json");
  CHECK(j["distance.headline"].get<double>() == 0.0);
  CHECK(j["pq.P"].get<double>() == 0.0);
  CHECK(j["pq.Q"].get<double>() == 0.0);
  CHECK(j["distance.max.u1"].get<double>() == 0.0);
  CHECK(j["distance.h1.u2"].get<double>() == 0.0);
}

TEST_CASE("malformed config exits with 2") {
  const fs::path p = workdir() / "broken.cfg";
  std::ofstream(p) << "[domain]\nshape = hexagon\nn = 9\n";
  CHECK(run("solve-eps --eps 1 --config " + p.string()) == 2);
  std::ofstream(p) << "[domain]\nshape = rectangle\nn 9\n";
  CHECK(run("solve-eps --eps 1 --config " + p.string()) == 2);
  CHECK(run("solve-eps --eps -1 --config " + small_config().string()) == 2);
  CHECK(run("solve-eps --eps 1") == 2);
}

TEST_CASE("non-convergence exits with 3") {
  const fs::path p = workdir() / "tight.cfg";
  std::ofstream(p) << "[domain]\nshape = interval\nn = 65\n\n"
                      "[boundary]\nspecies = 2\narcs.1 = (0.0, 0.0, 1.0)\narcs.2 = (0.5, 0.5, 1.0)\n\n"
                      "[solver]\nmax_iter = 2\n";
  CHECK(run("solve-eps --eps 1e-3 --config " + p.string() + " --out " + (workdir() / "tight").string()) == 3);
}

TEST_CASE("continuation, limit and rate pipeline") {
  const fs::path cfg = small_config();
  const fs::path out = workdir() / "pipeline";
  REQUIRE(run("continuation --config " + cfg.string() + " --out " + out.string()) == 0);
  REQUIRE(run("limit --method two_species --config " + cfg.string() + " --out " + out.string()) == 0);
  REQUIRE(run("limit --method direct --config " + cfg.string() + " --out " + out.string() + " --init " +
              (out / "eps_003").string()) == 0);
  const auto rows = seg::read_ladder_csv(out / "ladder.csv");
  REQUIRE(rows.size() == 6);
  CHECK(rows[4].report.epsilon == 0.0);
  CHECK(rows[5].report.epsilon == 0.0);
  for (std::size_t k = 1; k < 4; ++k) CHECK(rows[k].overlap < rows[k - 1].overlap);

  REQUIRE(run("rate " + out.string() + " " + (out / "limit_two_species").string() + " --config " + cfg.string() +
              " --out " + out.string()) == 0);
  const auto fit = read_json(out / "ratefit.json");
  CHECK(fit["u1.slope"].get<double>() > 0.1);
  CHECK(fs::exists(out / "rates.csv"));

  REQUIRE(run("compare " + (out / "limit_two_species").string() + " " + (out / "limit_direct").string() +
              " --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(read_json(out / "compare.json")["distance.headline"].get<double>() < 1e-10);

  REQUIRE(run("verify " + (out / "limit_two_species").string() + " " + (out / "limit_direct").string() +
              " --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto cert = read_json(out / "certificate.json");
  CHECK(cert["class_S"].get<bool>());
  CHECK(cert["pq.P"].get<double>() < 1e-9);
}
