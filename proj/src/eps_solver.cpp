#include "seg/eps_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace seg {

namespace {

struct Sweeper {
  const Grid& g;
  double eps;
  double omega;  // mutable phase: dropped to 1 for the final Gauss-Seidel polish
  double h2;
  double diag0;

  // Relaxed pointwise update of species i at one node; returns the new value.
  double update(DensityTuple& u, std::size_t i, std::size_t node) const {
    double s = 0.0;
    for (std::ptrdiff_t off : g.neighbor_offsets()) {
      s += u[i][static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off)];
    }
    double q = 0.0;
    for (std::size_t j = 0; j < u.m(); ++j) {
      if (j != i) q += u[j][node];
    }
    const double diag = diag0 + h2 * q / eps;
    const double target = s / diag;
    const double w = 1.0 + (omega - 1.0) * (diag0 / diag);
    const double old = u[i][node];
    const double next = old + w * (target - old);
    return next > 0.0 ? next : 0.0;
  }
};

std::vector<std::size_t> colored(const Grid& g, int color) {
  std::vector<std::size_t> nodes;
  for (std::size_t node : g.interior_nodes()) {
    if ((g.ix(node) + g.iy(node)) % 2 == color) nodes.push_back(node);
  }
  return nodes;
}

}  // namespace

double auto_relaxation(const Grid& g) {
  const Extent e = g.extent();
  const double cells_x = std::max(2.0, std::round((e.x_max - e.x_min) / g.h()));
  double rho = std::cos(std::numbers::pi / cells_x);
  if (g.dim() == 2) {
    const double cells_y = std::max(2.0, std::round((e.y_max - e.y_min) / g.h()));
    rho = 0.5 * (rho + std::cos(std::numbers::pi / cells_y));
  }
  return 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
}

double eps_residual(const Grid& g, const DensityTuple& u, double eps) {
  const double h2 = g.h() * g.h();
  const double diag0 = 2.0 * g.dim();
  double r = 0.0;
  for (std::size_t i = 0; i < u.m(); ++i) {
    for (std::size_t node : g.interior_nodes()) {
      double s = 0.0;
      for (std::ptrdiff_t off : g.neighbor_offsets()) {
        s += u[i][static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off)];
      }
      double q = 0.0;
      for (std::size_t j = 0; j < u.m(); ++j) {
        if (j != i) q += u[j][node];
      }
      const double lap = (s - diag0 * u[i][node]) / h2;
      r = std::max(r, std::abs(lap - u[i][node] * q / eps));
    }
  }
  return r;
}

void check_initial_tuple(const Grid& g, const BoundarySpec& bc, const DensityTuple& u) {
  if (u.m() != bc.m) throw std::invalid_argument("initial tuple has the wrong species count");
  for (std::size_t i = 0; i < u.m(); ++i) {
    if (u[i].size() != g.size()) throw std::invalid_argument("initial tuple does not match grid");
    for (std::size_t node : g.active_nodes()) {
      if (!(u[i][node] >= 0.0) || !std::isfinite(u[i][node])) {
        throw std::invalid_argument("initial tuple is negative or not finite");
      }
    }
    for (std::size_t node : g.boundary_nodes()) {
      if (u[i][node] != bc.traces[i][node]) {
        throw std::invalid_argument("initial tuple does not match the boundary data");
      }
    }
  }
}

SolveResult solve_eps(const Grid& g, const BoundarySpec& bc, double eps, const SolverOptions& opts,
                      const DensityTuple* init) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("epsilon must be positive");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  const double omega = opts.omega > 0.0 ? opts.omega : auto_relaxation(g);
  if (!(omega > 0.0 && omega < 2.0)) throw std::invalid_argument("relaxation factor must lie in (0,2)");

  const auto start = std::chrono::steady_clock::now();
  SolveResult out;
  if (init) {
    check_initial_tuple(g, bc, *init);
    out.u = *init;
  } else {
    out.u = harmonic_extensions(g, bc);
  }
  for (auto& f : out.u.species) {
    for (std::size_t node = 0; node < g.size(); ++node) {
      if (!g.is_active(node)) f[node] = 0.0;
    }
  }

  Sweeper sweeper{g, eps, omega, g.h() * g.h(), 2.0 * g.dim()};
  const bool parallel = opts.threads > 1;
  const std::vector<std::size_t> red = parallel ? colored(g, 0) : std::vector<std::size_t>{};
  const std::vector<std::size_t> black = parallel ? colored(g, 1) : std::vector<std::size_t>{};
  const int interval = std::max(1, opts.check_interval);
  DensityTuple& u = out.u;

  // Over-relaxed sweeps cannot push the residual below a few hundred ulps / h^2,
  // so the tail runs as plain Gauss-Seidel once the residual is near tol or stalls.
  const double polish_above = 100.0 * opts.tol;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;

  out.report.epsilon = eps;
  out.report.residual = eps_residual(g, u, eps);
  for (long it = 1; it <= opts.max_iter; ++it) {
    for (std::size_t i = 0; i < u.m(); ++i) {
      if (!parallel) {
        for (std::size_t node : g.interior_nodes()) u[i][node] = sweeper.update(u, i, node);
      } else {
        for (const auto* half : {&red, &black}) {
          const auto& nodes = *half;
          const long count = static_cast<long>(nodes.size());
#pragma omp parallel for num_threads(opts.threads) schedule(static)
          for (long k = 0; k < count; ++k) {
            const std::size_t node = nodes[static_cast<std::size_t>(k)];
            u[i][node] = sweeper.update(u, i, node);
          }
        }
      }
    }
    out.report.iterations = it;
    if (it == 1 || it % interval == 0 || it == opts.max_iter) {
      out.report.residual = eps_residual(g, u, eps);
      if (out.report.residual <= opts.tol) {
        out.report.converged = true;
        break;
      }
      if (out.report.residual < 0.5 * best) {
        best = out.report.residual;
        stalled = 0;
      } else {
        ++stalled;
      }
      if (sweeper.omega != 1.0 && (out.report.residual <= polish_above || stalled >= 50)) {
        sweeper.omega = 1.0;
      }
    }
  }
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<SolveResult> continuation(const Grid& g, const BoundarySpec& bc,
                                      std::span<const double> ladder, const SolverOptions& opts) {
  if (ladder.empty()) throw std::invalid_argument("empty epsilon ladder");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0)) throw std::invalid_argument("epsilon ladder entries must be positive");
    if (k > 0 && !(ladder[k] < ladder[k - 1])) {
      throw std::invalid_argument("epsilon ladder must be strictly decreasing");
    }
  }
  std::vector<SolveResult> results;
  results.reserve(ladder.size());
  for (double eps : ladder) {
    const DensityTuple* warm = results.empty() ? nullptr : &results.back().u;
    results.push_back(solve_eps(g, bc, eps, opts, warm));
  }
  return results;
}

double overlap_metric(const DensityTuple& u) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.m(); ++i) {
    for (std::size_t j = i + 1; j < u.m(); ++j) {
      for (std::size_t k = 0; k < u[i].size(); ++k) {
        worst = std::max(worst, std::min(u[i][k], u[j][k]));
      }
    }
  }
  return worst;
}

}  // namespace seg
