#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "seg/boundary.hpp"
#include "seg/grid.hpp"

namespace seg {

struct Tolerances {
  double nonnegative = 0.0;
  double subharmonic = 1e-8;
  double hat_superharmonic = 1e-7;
  double boundary = 0.0;
  double overlap = 1e-8;
  /// Support membership threshold for the harmonicity and reflection checks.
  double support = 1e-6;

  /// Defaults with every threshold multiplied by `scale`.
  static Tolerances scaled(double scale);
};

struct SpeciesDefects {
  double nonnegative = 0.0;         ///< max(-u_i)+
  double subharmonic = 0.0;         ///< max(-lap u_i)+ over interior nodes
  double hat_superharmonic = 0.0;   ///< max(lap hat u_i)+ over interior nodes
  double boundary = 0.0;            ///< max |u_i - phi_i| on the boundary
  double harmonic_on_support = 0.0; ///< max |lap u_i| where u_i alone occupies the stencil
};

struct InterfaceEdge {
  int axis = 0;
  std::size_t from = 0;  ///< last support node of species_a
  std::size_t to = 0;    ///< first support node of species_b
  std::size_t species_a = 0;
  std::size_t species_b = 0;
  double slope_a = 0.0;
  double slope_b = 0.0;
  double defect = 0.0;
};

struct ReflectionReport {
  double defect = 0.0;
  std::vector<InterfaceEdge> edges;
};

struct Certificate {
  std::vector<SpeciesDefects> species;
  double overlap = 0.0;
  double reflection = 0.0;
  std::size_t interface_edges = 0;
  double energy = 0.0;
  bool class_f = false;
  bool class_s = false;
};

Certificate certify(const Grid& g, const BoundarySpec& bc, const DensityTuple& u,
                    const Tolerances& tol);

/// Gradient reflection across interfaces, measured along lattice lines.
///
/// An interface is a pair (p, q) on one lattice line with p in the support of
/// species a, q in the support of species b != a, and at most two nodes in
/// between that lie in no support. The slope of u_a is taken from p and the
/// node behind it, the slope of u_b from q and the node beyond it, both in
/// the +axis direction; the defect is |slope_a + slope_b|.
ReflectionReport reflection_defect(const Grid& g, const DensityTuple& u, double support_threshold);

/// sum_i sum_edges 1/2 h^d ((u_i(b) - u_i(a)) / h)^2.
double energy(const Grid& g, const DensityTuple& u);

struct PQReport {
  double p = 0.0;
  double q = 0.0;
  std::size_t p_species = 0;
  std::size_t q_species = 0;
  std::size_t p_node = 0;
  std::size_t q_node = 0;
  std::vector<double> max_u_minus_v;  ///< per species max(hat u_i - hat v_i)
  std::vector<double> max_v_minus_u;  ///< per species max(hat v_i - hat u_i)
};

/// P = max_i max (hat u_i - hat v_i), Q = max_i max (hat v_i - hat u_i) over
/// active nodes, by exhaustive scan. The first maximizer in (species, node)
/// order is reported.
PQReport compute_pq(const Grid& g, const DensityTuple& u, const DensityTuple& v);

struct MaxComparison {
  double global_max = 0.0;
  double restricted_max = 0.0;
  bool equal = false;
};

struct Lemma31Report {
  bool precondition_ok = false;
  std::string note;
  std::vector<MaxComparison> forward;  ///< hat u_i - hat v_i over {u_i <= v_i + slack}
  std::vector<MaxComparison> swapped;  ///< hat v_i - hat u_i over {v_i <= u_i + slack}

  bool holds() const;
};

/// Compares the global maximum of each hat difference with its maximum over
/// the set where the first tuple does not exceed the second. Both tuples must
/// certify as segregated against their own boundary values; otherwise the
/// comparison is skipped and precondition_ok is false.
Lemma31Report check_lemma31(const Grid& g, const DensityTuple& u, const DensityTuple& v,
                            const Tolerances& tol, double slack);

}  // namespace seg
