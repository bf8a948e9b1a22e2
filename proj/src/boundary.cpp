#include "seg/boundary.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace seg {

namespace {

constexpr double kParamEps = 1e-12;

// Splits a (possibly wrapping) arc into at most two plain intervals.
std::vector<std::pair<double, double>> pieces(const Arc& a) {
  if (a.t_start <= a.t_end) return {{a.t_start, a.t_end}};
  return {{a.t_start, 1.0}, {0.0, a.t_end}};
}

bool arcs_overlap(const Arc& a, const Arc& b) {
  for (auto [a0, a1] : pieces(a)) {
    for (auto [b0, b1] : pieces(b)) {
      const double lo = std::max(a0, b0);
      const double hi = std::min(a1, b1);
      if (hi - lo > kParamEps) return true;
      const bool a_point = a1 - a0 <= kParamEps;
      const bool b_point = b1 - b0 <= kParamEps;
      if ((a_point || b_point) && hi - lo >= -kParamEps) {
        // A point arc collides with anything that contains it, unless it sits
        // on the end of a raised-cosine arc (handled by the nodal check).
        if (a_point && b_point) return true;
        const double p = a_point ? a0 : b0;
        const double q0 = a_point ? b0 : a0;
        const double q1 = a_point ? b1 : a1;
        if (p > q0 + kParamEps && p < q1 - kParamEps) return true;
      }
    }
  }
  return false;
}

// Relative position of t inside the arc, or a negative value if outside.
double position_in_arc(const Arc& a, double t) {
  const double len = a.t_start <= a.t_end ? a.t_end - a.t_start : 1.0 - a.t_start + a.t_end;
  double offset = t - a.t_start;
  if (offset < -kParamEps) offset += 1.0;
  if (offset < -kParamEps || offset > len + kParamEps) return -1.0;
  if (len <= kParamEps) return 0.5;
  if (offset <= kParamEps) return 0.0;
  if (offset >= len - kParamEps) return 1.0;
  return offset / len;
}

double profile_value(Profile p, const Arc& a, double s) {
  if (s < 0.0) return 0.0;
  const double len = a.t_start <= a.t_end ? a.t_end - a.t_start : 1.0 - a.t_start + a.t_end;
  if (p == Profile::constant || len <= kParamEps) return a.amplitude;
  if (s == 0.0 || s == 1.0) return 0.0;
  const double sn = std::sin(std::numbers::pi * s);
  return a.amplitude * sn * sn;
}

void validate_traces(const Grid& g, const std::vector<Field>& traces) {
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i].size() != g.size()) throw std::invalid_argument("trace size does not match grid");
    for (std::size_t node : g.boundary_nodes()) {
      const double v = traces[i][node];
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("trace of species " + std::to_string(i + 1) +
                                    " is negative or not finite");
      }
    }
  }
  for (std::size_t node : g.boundary_nodes()) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      for (std::size_t j = i + 1; j < traces.size(); ++j) {
        if (traces[i][node] * traces[j][node] != 0.0) {
          throw std::invalid_argument("traces of species " + std::to_string(i + 1) + " and " +
                                      std::to_string(j + 1) + " overlap at a boundary node");
        }
      }
    }
  }
}

}  // namespace

double BoundarySpec::scale() const {
  double s = 0.0;
  for (const auto& t : traces) {
    for (double v : t.values) s = std::max(s, v);
  }
  return s > 0.0 ? s : 1.0;
}

std::vector<double> boundary_parameter(const Grid& g) {
  std::vector<double> t(g.size(), std::numeric_limits<double>::quiet_NaN());
  const auto boundary = g.boundary_nodes();
  if (g.dim() == 1) {
    for (std::size_t node : boundary) t[node] = g.ix(node) == 0 ? 0.0 : 0.5;
    return t;
  }
  const bool rectangle = boundary.size() + g.interior_nodes().size() == g.size();
  if (rectangle) {
    const double w = g.nx() - 1;
    const double hgt = g.ny() - 1;
    const double perimeter = 2.0 * (w + hgt);
    for (std::size_t node : boundary) {
      const double i = g.ix(node);
      const double j = g.iy(node);
      double s = 0.0;
      if (j == 0) s = i;                       // bottom, left to right
      else if (i == w) s = w + j;              // right, upwards
      else if (j == hgt) s = w + hgt + (w - i);  // top, right to left
      else s = 2.0 * w + hgt + (hgt - j);      // left, downwards
      t[node] = s / perimeter;
    }
    return t;
  }
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t node : g.interior_nodes()) {
    cx += g.x(node);
    cy += g.y(node);
  }
  cx /= static_cast<double>(g.interior_nodes().size());
  cy /= static_cast<double>(g.interior_nodes().size());
  for (std::size_t node : boundary) {
    double a = std::atan2(g.y(node) - cy, g.x(node) - cx) / (2.0 * std::numbers::pi);
    if (a < 0.0) a += 1.0;
    if (a >= 1.0) a -= 1.0;
    t[node] = a;
  }
  return t;
}

BoundarySpec build_boundary(const Grid& g, const std::vector<std::vector<Arc>>& arcs,
                            Profile profile) {
  if (arcs.empty()) throw std::invalid_argument("at least one species is required");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (const Arc& a : arcs[i]) {
      if (!(a.amplitude >= 0.0) || !std::isfinite(a.amplitude)) {
        throw std::invalid_argument("negative amplitude for species " + std::to_string(i + 1));
      }
      if (!(a.t_start >= 0.0 && a.t_start < 1.0 && a.t_end >= 0.0 && a.t_end <= 1.0)) {
        throw std::invalid_argument("arc parameter outside [0,1) for species " +
                                    std::to_string(i + 1));
      }
    }
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (std::size_t j = i + 1; j < arcs.size(); ++j) {
      for (const Arc& a : arcs[i]) {
        for (const Arc& b : arcs[j]) {
          if (arcs_overlap(a, b)) {
            throw std::invalid_argument("overlapping arcs for species " + std::to_string(i + 1) +
                                        " and " + std::to_string(j + 1));
          }
        }
      }
    }
  }

  const auto t = boundary_parameter(g);
  std::vector<Field> traces(arcs.size(), Field(g.size()));
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (std::size_t node : g.boundary_nodes()) {
      double v = 0.0;
      for (const Arc& a : arcs[i]) v = std::max(v, profile_value(profile, a, position_in_arc(a, t[node])));
      traces[i][node] = v;
    }
  }
  BoundarySpec spec = boundary_from_traces(g, std::move(traces));
  spec.arcs = arcs;
  return spec;
}

BoundarySpec boundary_from_traces(const Grid& g, std::vector<Field> traces) {
  if (traces.empty()) throw std::invalid_argument("at least one species is required");
  for (auto& tr : traces) {
    if (tr.size() != g.size()) throw std::invalid_argument("trace size does not match grid");
    for (std::size_t node = 0; node < g.size(); ++node) {
      if (!g.is_boundary(node)) tr[node] = 0.0;
    }
  }
  validate_traces(g, traces);
  BoundarySpec spec;
  spec.m = traces.size();
  spec.traces = std::move(traces);
  spec.arcs.assign(spec.m, {});
  return spec;
}

BoundarySpec boundary_of(const Grid& g, const DensityTuple& u) {
  std::vector<Field> traces;
  traces.reserve(u.m());
  for (const auto& f : u.species) traces.push_back(f);
  for (auto& tr : traces) {
    for (std::size_t node = 0; node < g.size(); ++node) {
      if (!g.is_boundary(node)) tr[node] = 0.0;
    }
  }
  BoundarySpec spec;
  spec.m = traces.size();
  spec.traces = std::move(traces);
  spec.arcs.assign(spec.m, {});
  return spec;
}

Field harmonic_extension(const Grid& g, const Field& trace) {
  if (trace.size() != g.size()) throw std::invalid_argument("trace size does not match grid");
  const auto interior = g.interior_nodes();
  std::vector<std::ptrdiff_t> slot(g.size(), -1);
  for (std::size_t k = 0; k < interior.size(); ++k) slot[interior[k]] = static_cast<std::ptrdiff_t>(k);

  const int n = static_cast<int>(interior.size());
  const double diag = 2.0 * g.dim();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * (1 + 2 * g.dim()));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    const std::size_t node = interior[static_cast<std::size_t>(k)];
    entries.emplace_back(k, k, diag);
    for (std::ptrdiff_t off : g.neighbor_offsets()) {
      const auto nb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off);
      if (slot[nb] >= 0) entries.emplace_back(k, static_cast<int>(slot[nb]), -1.0);
      else rhs[k] += trace[nb];
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Laplacian factorization failed");
  Eigen::VectorXd x = solver.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) x += solver.solve(rhs - a * x);

  Field f(g.size());
  for (std::size_t node : g.boundary_nodes()) f[node] = trace[node];
  for (int k = 0; k < n; ++k) f[interior[static_cast<std::size_t>(k)]] = x[k];
  return f;
}

DensityTuple harmonic_extensions(const Grid& g, const BoundarySpec& bc) {
  DensityTuple u;
  u.species.reserve(bc.m);
  for (const auto& tr : bc.traces) u.species.push_back(harmonic_extension(g, tr));
  return u;
}

double harmonic_residual(const Grid& g, const Field& f) {
  double r = 0.0;
  for (std::size_t node : g.interior_nodes()) r = std::max(r, std::abs(laplacian(g, f, node)));
  return r;
}

}  // namespace seg
