#pragma once

#include <cstddef>
#include <vector>

#include "seg/grid.hpp"

namespace seg {

/// A boundary arc on the normalized cycle parameter t in [0,1).
/// t_start > t_end wraps through t = 0.
struct Arc {
  double t_start = 0.0;
  double t_end = 0.0;
  double amplitude = 0.0;
};

enum class Profile {
  raised_cosine,  ///< amplitude * sin^2(pi s), s the relative position in the arc
  constant,       ///< amplitude on the closed arc
};

/// Dirichlet traces for m species. traces[i] is zero off the boundary.
struct BoundarySpec {
  std::size_t m = 0;
  std::vector<Field> traces;
  std::vector<std::vector<Arc>> arcs;

  /// Largest trace value over all species; 1 when all data vanish.
  double scale() const;
};

/// Normalized boundary-cycle parameter of every boundary node (NaN elsewhere).
/// Interval: 0 at the left end, 0.5 at the right end. Rectangle: arc length
/// counter-clockwise from the lower-left corner. Disk and mask: polar angle
/// about the disk centre / interior centroid, divided by 2 pi.
std::vector<double> boundary_parameter(const Grid& g);

BoundarySpec build_boundary(const Grid& g, const std::vector<std::vector<Arc>>& arcs,
                            Profile profile = Profile::raised_cosine);

/// Wraps explicit nodal traces, enforcing nonnegativity and nodal disjointness.
BoundarySpec boundary_from_traces(const Grid& g, std::vector<Field> traces);

/// Boundary values of each species of u, as a BoundarySpec.
BoundarySpec boundary_of(const Grid& g, const DensityTuple& u);

/// Discrete harmonic function with the given boundary values (sparse Cholesky).
Field harmonic_extension(const Grid& g, const Field& trace);

/// Harmonic extension of every species' trace.
DensityTuple harmonic_extensions(const Grid& g, const BoundarySpec& bc);

/// max over interior nodes of |laplacian(f)|.
double harmonic_residual(const Grid& g, const Field& f);

}  // namespace seg
