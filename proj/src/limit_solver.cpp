#include "seg/limit_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace seg {

DensityTuple limit_two_species(const Grid& g, const BoundarySpec& bc) {
  if (bc.m != 2) throw std::invalid_argument("closed-form limit requires exactly two species");
  const Field w = harmonic_extension(g, difference(bc.traces[0], bc.traces[1]));
  DensityTuple u(2, g.size());
  for (std::size_t node : g.active_nodes()) {
    u[0][node] = std::max(w[node], 0.0);
    u[1][node] = std::max(-w[node], 0.0);
  }
  // Boundary values come straight from the traces so they match bit for bit.
  for (std::size_t node : g.boundary_nodes()) {
    u[0][node] = bc.traces[0][node];
    u[1][node] = bc.traces[1][node];
  }
  return u;
}

DensityTuple zero_interior(const Grid& g, const BoundarySpec& bc) {
  DensityTuple u(bc.m, g.size());
  for (std::size_t i = 0; i < bc.m; ++i) {
    for (std::size_t node : g.boundary_nodes()) u[i][node] = bc.traces[i][node];
  }
  return u;
}

namespace {

// One projected update at `node`; returns the largest change.
double project_node(const Grid& g, DensityTuple& u, std::size_t node, double omega,
                    std::vector<double>& sums) {
  const std::size_t m = u.m();
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::ptrdiff_t off : g.neighbor_offsets()) {
      s += u[k][static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off)];
    }
    sums[k] = s;
    total += s;
  }
  const double diag = 2.0 * g.dim();
  double change = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    // (S_k - sum_{j!=k} S_j) / 2d
    const double avg = (2.0 * sums[k] - total) / diag;
    const double old = u[k][node];
    double next = 0.0;
    if (avg > 0.0) {
      next = std::max(old + omega * (avg - old), 0.0);
    }
    change = std::max(change, std::abs(next - old));
    u[k][node] = next;
  }
  return change;
}

}  // namespace

SolveResult limit_direct(const Grid& g, const BoundarySpec& bc, const LimitOptions& opts,
                         const DensityTuple* init) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  const double omega = opts.omega > 0.0 ? opts.omega : auto_relaxation(g);
  if (!(omega >= 1.0 && omega < 2.0)) throw std::invalid_argument("relaxation factor must lie in [1,2)");

  const auto start = std::chrono::steady_clock::now();
  SolveResult out;
  if (init) {
    check_initial_tuple(g, bc, *init);
    out.u = *init;
  } else {
    out.u = harmonic_extensions(g, bc);
  }
  DensityTuple& u = out.u;
  for (auto& f : u.species) {
    for (std::size_t node = 0; node < g.size(); ++node) {
      if (!g.is_active(node)) f[node] = 0.0;
    }
  }

  std::vector<std::size_t> red;
  std::vector<std::size_t> black;
  const bool parallel = opts.threads > 1;
  if (parallel) {
    for (std::size_t node : g.interior_nodes()) {
      ((g.ix(node) + g.iy(node)) % 2 == 0 ? red : black).push_back(node);
    }
  }

  out.report.epsilon = 0.0;
  std::vector<double> sums(u.m());
  for (long it = 1; it <= opts.max_iter; ++it) {
    double change = 0.0;
    if (!parallel) {
      for (std::size_t node : g.interior_nodes()) {
        change = std::max(change, project_node(g, u, node, omega, sums));
      }
    } else {
      for (const auto* half : {&red, &black}) {
        const auto& nodes = *half;
        const long count = static_cast<long>(nodes.size());
#pragma omp parallel num_threads(opts.threads)
        {
          std::vector<double> local(u.m());
          double local_change = 0.0;
#pragma omp for schedule(static)
          for (long k = 0; k < count; ++k) {
            local_change = std::max(
                local_change, project_node(g, u, nodes[static_cast<std::size_t>(k)], omega, local));
          }
#pragma omp critical
          change = std::max(change, local_change);
        }
      }
    }
    out.report.iterations = it;
    out.report.residual = change;
    if (change <= opts.tol) {
      out.report.converged = true;
      break;
    }
  }
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace seg
