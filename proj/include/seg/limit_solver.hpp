#pragma once

#include "seg/boundary.hpp"
#include "seg/eps_solver.hpp"
#include "seg/grid.hpp"

namespace seg {

/// m = 2 limit: (W+, W-) with W the harmonic extension of phi_1 - phi_2.
DensityTuple limit_two_species(const Grid& g, const BoundarySpec& bc);

struct LimitOptions {
  /// Stop once the largest nodal change of a sweep is at most tol.
  double tol = 1e-13;
  long max_iter = 2'000'000;
  /// >= 1; 0 selects the Laplace-optimal value. Values below 1 are rejected
  /// because they break the one-species-per-node property of a sweep.
  double omega = 0.0;
  int threads = 1;
};

/// Segregated limit for general m without an epsilon.
///
/// At each interior node with neighbour sums S_k the hat average
/// (S_i - sum_{j!=i} S_j) / 2d is formed for every species; the species whose
/// average is positive is relaxed toward it and every other species is sent
/// to zero. A zero or negative average for all species zeroes the node.
/// report.residual is the largest nodal change of the last sweep and
/// report.epsilon is 0.
SolveResult limit_direct(const Grid& g, const BoundarySpec& bc, const LimitOptions& opts,
                         const DensityTuple* init = nullptr);

/// Harmonic extensions with every interior value set to zero.
DensityTuple zero_interior(const Grid& g, const BoundarySpec& bc);

}  // namespace seg
