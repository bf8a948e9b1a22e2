#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "seg/grid.hpp"

using namespace seg;

namespace {

Field sample(const Grid& g, auto&& fn) {
  Field f(g.size());
  for (std::size_t a : g.active_nodes()) f[a] = fn(g.x(a), g.y(a));
  return f;
}

Field random_field(const Grid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field f(g.size());
  for (std::size_t a : g.active_nodes()) f[a] = dist(rng);
  return f;
}

Grid unit_square(int n) { return build_grid(RectangleShape{0, 1, 0, 1}, n); }

}  // namespace

TEST_CASE("unit square with 5 nodes per side") {
  const Grid g = unit_square(5);
  CHECK(g.size() == 25);
  CHECK(g.interior_nodes().size() == 9);
  CHECK(g.boundary_nodes().size() == 16);
  CHECK(g.h() == doctest::Approx(0.25));
  CHECK(g.dim() == 2);
}

TEST_CASE("smallest square has its single interior node at the centre") {
  const Grid g = unit_square(3);
  REQUIRE(g.interior_nodes().size() == 1);
  const std::size_t c = g.interior_nodes()[0];
  CHECK(g.x(c) == doctest::Approx(0.5));
  CHECK(g.y(c) == doctest::Approx(0.5));
}

TEST_CASE("resolution below three is rejected") {
  CHECK_THROWS_AS(build_grid(RectangleShape{}, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(IntervalShape{}, 2), std::invalid_argument);
}

TEST_CASE("mask with two separate blobs is rejected") {
  MaskShape mask;
  mask.rows = {"0000000", "0110110", "0110110", "0000000"};
  mask.h = 0.1;
  try {
    build_grid(mask, 0);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "disconnected interior");
  }
}

TEST_CASE("mask rows are read top to bottom") {
  MaskShape mask;
  mask.rows = {"00000", "01100", "01110", "00000"};
  mask.h = 1.0;
  const Grid g = build_grid(mask, 0);
  CHECK(g.is_interior(g.index(3, 1)));
  CHECK_FALSE(g.is_interior(g.index(3, 2)));
  CHECK(g.is_boundary(g.index(3, 2)));
  CHECK(g.interior_nodes().size() == 5);
}

TEST_CASE("grid invariants hold for every shape") {
  MaskShape mask;
  mask.rows = {"000000", "011100", "011110", "001110", "000000"};
  mask.h = 0.2;
  const std::vector<Grid> grids{build_grid(IntervalShape{0, 1}, 9), unit_square(9),
                                build_grid(RectangleShape{0, 2, 0, 1}, 9),
                                build_grid(DiskShape{0.3, -0.2, 1.5}, 21), build_grid(mask, 0)};
  for (const Grid& g : grids) {
    CHECK(g.h() > 0.0);
    for (std::size_t a : g.interior_nodes()) {
      for (auto off : g.neighbor_offsets()) {
        CHECK(g.is_active(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(a) + off)));
      }
    }
  }
}

TEST_CASE("disk classification matches a direct distance test") {
  const DiskShape d{0.1, 0.2, 1.0};
  const Grid g = build_grid(d, 17);
  auto inside = [&](std::size_t a) {
    const double dx = g.x(a) - d.cx;
    const double dy = g.y(a) - d.cy;
    return dx * dx + dy * dy < d.radius * d.radius;
  };
  auto on_circle = [&](std::size_t a) {
    const double dx = g.x(a) - d.cx;
    const double dy = g.y(a) - d.cy;
    return std::abs(dx * dx + dy * dy - d.radius * d.radius) < 1e-9;
  };
  for (std::size_t a = 0; a < g.size(); ++a) {
    bool ambiguous = on_circle(a);
    for (int axis = 0; axis < 2; ++axis) {
      for (int dir : {-1, 1}) {
        const auto b = g.step(a, axis, dir);
        if (b >= 0 && on_circle(static_cast<std::size_t>(b))) ambiguous = true;
      }
    }
    if (ambiguous) continue;
    const bool interior = inside(a);
    CHECK(g.is_interior(a) == interior);
    if (!interior) {
      bool touches = false;
      for (int axis = 0; axis < 2; ++axis) {
        for (int dir : {-1, 1}) {
          const auto b = g.step(a, axis, dir);
          if (b >= 0 && inside(static_cast<std::size_t>(b))) touches = true;
        }
      }
      CHECK(g.is_boundary(a) == touches);
    }
  }
}

TEST_CASE("laplacian of polynomials") {
  const Grid g = unit_square(5);
  const Field c = sample(g, [](double, double) { return 3.7; });
  const Field x2 = sample(g, [](double x, double) { return x * x; });
  const Field xy = sample(g, [](double x, double y) { return x * y; });
  for (std::size_t a : g.interior_nodes()) {
    CHECK(laplacian(g, c, a) == 0.0);
    CHECK(laplacian(g, x2, a) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(laplacian(g, xy, a)) < 1e-12);
  }
}

TEST_CASE("laplacian in 1D uses the three-point stencil") {
  const Grid g = build_grid(IntervalShape{0, 1}, 5);
  const Field x2 = sample(g, [](double x, double) { return x * x; });
  for (std::size_t a : g.interior_nodes()) CHECK(laplacian(g, x2, a) == doctest::Approx(2.0));
}

TEST_CASE("laplacian at a boundary node is a contract violation") {
  const Grid g = unit_square(5);
  CHECK_THROWS_AS(laplacian(g, Field(g.size()), g.boundary_nodes()[0]), std::out_of_range);
}

TEST_CASE("property: laplacian is linear") {
  std::mt19937 rng(7);
  const Grid g = build_grid(DiskShape{0, 0, 1}, 25);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = random_field(g, rng);
    const Field k = random_field(g, rng);
    const double alpha = std::uniform_real_distribution<double>(-3, 3)(rng);
    const double beta = std::uniform_real_distribution<double>(-3, 3)(rng);
    Field comb(g.size());
    for (std::size_t a : g.active_nodes()) comb[a] = alpha * f[a] + beta * k[a];
    for (std::size_t a : g.interior_nodes()) {
      const double lhs = laplacian(g, comb, a);
      const double rhs = alpha * laplacian(g, f, a) + beta * laplacian(g, k, a);
      const double scale = std::abs(alpha * laplacian(g, f, a)) + std::abs(beta * laplacian(g, k, a)) + 1.0;
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("hat transform examples") {
  SUBCASE("two species, one and zero") {
    DensityTuple u(2, 4);
    for (std::size_t k = 0; k < 4; ++k) u[0][k] = 1.0;
    const Field h1 = hat_transform(u, 0);
    const Field h2 = hat_transform(u, 1);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(h1[k] == 1.0);
      CHECK(h2[k] == -1.0);
    }
  }
  SUBCASE("three zero species") {
    DensityTuple u(3, 5);
    for (std::size_t i = 0; i < 3; ++i) {
      for (double v : hat_transform(u, i).values) CHECK(v == 0.0);
    }
  }
  SUBCASE("three species (2,1,1)") {
    DensityTuple u(3, 1);
    u[0][0] = 2;
    u[1][0] = 1;
    u[2][0] = 1;
    CHECK(hat_transform(u, 0)[0] == 0.0);
  }
  SUBCASE("single species is unchanged") {
    DensityTuple u(1, 3);
    u[0] = Field(3, 0.4);
    CHECK(hat_transform(u, 0).values == u[0].values);
  }
}

TEST_CASE("property: sum of hats is (2 - m) times the sum") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (std::size_t m = 1; m <= 5; ++m) {
    DensityTuple u(m, 30);
    for (auto& f : u.species) {
      for (double& v : f.values) v = dist(rng);
    }
    std::vector<Field> hats;
    for (std::size_t i = 0; i < m; ++i) hats.push_back(hat_transform(u, i));
    for (std::size_t k = 0; k < 30; ++k) {
      double sh = 0.0;
      double su = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        sh += hats[i][k];
        su += u[i][k];
      }
      CHECK(sh == doctest::Approx((2.0 - static_cast<double>(m)) * su).epsilon(1e-12));
    }
  }
}

TEST_CASE("discrete H1 norm examples") {
  SUBCASE("zero field") {
    const Grid g = unit_square(5);
    CHECK(discrete_h1_norm(g, Field(g.size())) == 0.0);
  }
  SUBCASE("1D hat on three nodes") {
    const Grid g = build_grid(IntervalShape{0, 1}, 3);
    Field f(3);
    f[1] = 1.0;
    CHECK(discrete_h1_norm(g, f) == doctest::Approx(std::sqrt(4.5)).epsilon(1e-15));
  }
  SUBCASE("unit field on the 5x5 square uses full node weights") {
    const Grid g = unit_square(5);
    const Field one = sample(g, [](double, double) { return 1.0; });
    // 25 nodes of weight h^2 = 1/16, no gradient.
    CHECK(discrete_h1_norm(g, one) == doctest::Approx(1.25).epsilon(1e-15));
  }
}

TEST_CASE("property: discrete H1 norm is a norm") {
  std::mt19937 rng(3);
  const Grid g = build_grid(DiskShape{0, 0, 1}, 19);
  for (int trial = 0; trial < 25; ++trial) {
    const Field f = random_field(g, rng);
    const Field k = random_field(g, rng);
    const double a = std::uniform_real_distribution<double>(-5, 5)(rng);
    Field af(g.size());
    Field sum(g.size());
    for (std::size_t n : g.active_nodes()) {
      af[n] = a * f[n];
      sum[n] = f[n] + k[n];
    }
    const double nf = discrete_h1_norm(g, f);
    CHECK(discrete_h1_norm(g, af) == doctest::Approx(std::abs(a) * nf).epsilon(1e-12));
    CHECK(discrete_h1_norm(g, sum) <= (nf + discrete_h1_norm(g, k)) * (1.0 + 1e-12));
  }
}

TEST_CASE("finiteness check ignores exterior nodes") {
  const Grid g = build_grid(DiskShape{0, 0, 1}, 9);
  Field f(g.size());
  std::size_t ext = 0;
  while (g.is_active(ext)) ++ext;
  f[ext] = std::nan("");
  CHECK(all_finite(g, f));
  f[g.interior_nodes()[0]] = INFINITY;
  CHECK_FALSE(all_finite(g, f));
}
