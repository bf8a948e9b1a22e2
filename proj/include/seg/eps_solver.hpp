#pragma once

#include <optional>
#include <span>
#include <vector>

#include "seg/boundary.hpp"
#include "seg/grid.hpp"

namespace seg {

struct SolverOptions {
  double tol = 1e-10;
  long max_iter = 1'000'000;
  /// Over-relaxation factor in (0,2); 0 selects the Laplace-optimal value for the grid.
  double omega = 0.0;
  /// > 1 switches to red-black ordering run on that many OpenMP threads.
  int threads = 1;
  /// Residual is evaluated after the first sweep and then every this many sweeps.
  int check_interval = 10;
};

struct SolveReport {
  double epsilon = 0.0;
  long iterations = 0;
  double residual = 0.0;
  double wall_time = 0.0;
  bool converged = false;
};

struct SolveResult {
  DensityTuple u;
  SolveReport report;
};

/// Optimal SOR factor for the Laplacian on the bounding box of the grid.
double auto_relaxation(const Grid& g);

/// max over interior nodes and species of |lap(u_i) - u_i * sum_{j!=i} u_j / eps|.
double eps_residual(const Grid& g, const DensityTuple& u, double eps);

/// Solves lap(u_i) = (1/eps) u_i sum_{j!=i} u_j with u_i = phi_i on the boundary.
///
/// Each interior value is driven to the root of its own 5-point equation with
/// neighbours and the other species frozen, u_i <- S_i / (2d + h^2 Q_i / eps),
/// blended with the current value by a relaxation weight that tends to 1 where
/// the competition term dominates the diagonal. Sweeps run species-major, then
/// nodes in lexicographic order. Without `init` the harmonic extensions of the
/// traces are used. Hitting max_iter is reported through `converged`.
SolveResult solve_eps(const Grid& g, const BoundarySpec& bc, double eps, const SolverOptions& opts,
                      const DensityTuple* init = nullptr);

/// Solves along a strictly decreasing ladder, warm-starting from the previous rung.
std::vector<SolveResult> continuation(const Grid& g, const BoundarySpec& bc,
                                      std::span<const double> ladder, const SolverOptions& opts);

/// max over nodes and pairs i<j of min(u_i, u_j).
double overlap_metric(const DensityTuple& u);

/// Throws unless u has bc.m nonnegative species matching the boundary traces.
void check_initial_tuple(const Grid& g, const BoundarySpec& bc, const DensityTuple& u);

}  // namespace seg
