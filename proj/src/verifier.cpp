#include "seg/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seg {

namespace {

void require_same_shape(const Grid& g, const DensityTuple& u, const DensityTuple& v) {
  if (u.m() != v.m()) throw std::invalid_argument("tuples have different species counts");
  for (std::size_t i = 0; i < u.m(); ++i) {
    if (u[i].size() != g.size() || v[i].size() != g.size()) {
      throw std::invalid_argument("tuple does not match grid");
    }
  }
}

double lap_at(const Grid& g, const Field& f, std::size_t node) {
  double s = 0.0;
  for (std::ptrdiff_t off : g.neighbor_offsets()) {
    s += f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off)];
  }
  return (s - 2.0 * g.dim() * f[node]) / (g.h() * g.h());
}

// Species occupying the node (largest value above threshold), or -1.
std::ptrdiff_t occupant(const DensityTuple& u, std::size_t node, double threshold) {
  std::ptrdiff_t who = -1;
  double best = threshold;
  for (std::size_t i = 0; i < u.m(); ++i) {
    if (u[i][node] > best) {
      best = u[i][node];
      who = static_cast<std::ptrdiff_t>(i);
    }
  }
  return who;
}

}  // namespace

Tolerances Tolerances::scaled(double scale) {
  Tolerances t;
  t.subharmonic *= scale;
  t.hat_superharmonic *= scale;
  t.overlap *= scale;
  t.support *= scale;
  return t;
}

Certificate certify(const Grid& g, const BoundarySpec& bc, const DensityTuple& u,
                    const Tolerances& tol) {
  if (u.m() != bc.m) throw std::invalid_argument("tuple and boundary data differ in species count");
  for (const auto& f : u.species) {
    if (f.size() != g.size()) throw std::invalid_argument("tuple does not match grid");
  }
  Certificate cert;
  cert.species.resize(u.m());
  for (std::size_t i = 0; i < u.m(); ++i) {
    SpeciesDefects& d = cert.species[i];
    const Field hat = hat_transform(u, i);
    for (std::size_t node : g.active_nodes()) d.nonnegative = std::max(d.nonnegative, -u[i][node]);
    for (std::size_t node : g.boundary_nodes()) {
      d.boundary = std::max(d.boundary, std::abs(u[i][node] - bc.traces[i][node]));
    }
    for (std::size_t node : g.interior_nodes()) {
      const double lap = lap_at(g, u[i], node);
      d.subharmonic = std::max(d.subharmonic, -lap);
      d.hat_superharmonic = std::max(d.hat_superharmonic, lap_at(g, hat, node));
      if (u[i][node] <= tol.support) continue;
      bool alone = true;
      for (std::size_t j = 0; j < u.m() && alone; ++j) {
        if (j == i) continue;
        if (u[j][node] > tol.support) alone = false;
        for (std::ptrdiff_t off : g.neighbor_offsets()) {
          if (u[j][static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off)] > tol.support) {
            alone = false;
          }
        }
      }
      if (alone) d.harmonic_on_support = std::max(d.harmonic_on_support, std::abs(lap));
    }
  }
  cert.overlap = 0.0;
  for (std::size_t node : g.active_nodes()) {
    for (std::size_t i = 0; i < u.m(); ++i) {
      for (std::size_t j = i + 1; j < u.m(); ++j) {
        cert.overlap = std::max(cert.overlap, std::min(u[i][node], u[j][node]));
      }
    }
  }
  const ReflectionReport refl = reflection_defect(g, u, tol.support);
  cert.reflection = refl.defect;
  cert.interface_edges = refl.edges.size();
  cert.energy = energy(g, u);

  cert.class_f = true;
  for (const auto& d : cert.species) {
    cert.class_f = cert.class_f && d.nonnegative <= tol.nonnegative &&
                   d.subharmonic <= tol.subharmonic && d.hat_superharmonic <= tol.hat_superharmonic &&
                   d.boundary <= tol.boundary;
  }
  cert.class_s = cert.class_f && cert.overlap <= tol.overlap;
  return cert;
}

ReflectionReport reflection_defect(const Grid& g, const DensityTuple& u, double support_threshold) {
  ReflectionReport report;
  if (u.m() < 2) return report;
  const double h = g.h();
  for (std::size_t p : g.active_nodes()) {
    const std::ptrdiff_t a = occupant(u, p, support_threshold);
    if (a < 0) continue;
    for (int axis = 0; axis < g.dim(); ++axis) {
      std::ptrdiff_t q = g.step(p, axis, +1);
      int gap = 0;
      std::ptrdiff_t b = -1;
      while (q >= 0 && g.is_active(static_cast<std::size_t>(q))) {
        b = occupant(u, static_cast<std::size_t>(q), support_threshold);
        if (b >= 0 || gap == 2) break;
        ++gap;
        q = g.step(static_cast<std::size_t>(q), axis, +1);
      }
      if (b < 0 || b == a) continue;
      const std::ptrdiff_t behind = g.step(p, axis, -1);
      const std::ptrdiff_t beyond = g.step(static_cast<std::size_t>(q), axis, +1);
      if (behind < 0 || beyond < 0 || !g.is_active(static_cast<std::size_t>(behind)) ||
          !g.is_active(static_cast<std::size_t>(beyond))) {
        continue;
      }
      InterfaceEdge e;
      e.axis = axis;
      e.from = p;
      e.to = static_cast<std::size_t>(q);
      e.species_a = static_cast<std::size_t>(a);
      e.species_b = static_cast<std::size_t>(b);
      e.slope_a = (u[e.species_a][p] - u[e.species_a][static_cast<std::size_t>(behind)]) / h;
      e.slope_b = (u[e.species_b][static_cast<std::size_t>(beyond)] - u[e.species_b][e.to]) / h;
      e.defect = std::abs(e.slope_a + e.slope_b);
      report.defect = std::max(report.defect, e.defect);
      report.edges.push_back(e);
    }
  }
  return report;
}

double energy(const Grid& g, const DensityTuple& u) {
  const double h = g.h();
  const double weight = g.dim() == 1 ? h : h * h;
  double e = 0.0;
  for (const auto& f : u.species) {
    g.for_each_edge([&](std::size_t a, std::size_t b) {
      const double d = (f[b] - f[a]) / h;
      e += 0.5 * weight * d * d;
    });
  }
  return e;
}

PQReport compute_pq(const Grid& g, const DensityTuple& u, const DensityTuple& v) {
  require_same_shape(g, u, v);
  PQReport r;
  r.p = -std::numeric_limits<double>::infinity();
  r.q = -std::numeric_limits<double>::infinity();
  r.max_u_minus_v.assign(u.m(), -std::numeric_limits<double>::infinity());
  r.max_v_minus_u.assign(u.m(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < u.m(); ++i) {
    const Field hu = hat_transform(u, i);
    const Field hv = hat_transform(v, i);
    for (std::size_t node : g.active_nodes()) {
      const double d = hu[node] - hv[node];
      r.max_u_minus_v[i] = std::max(r.max_u_minus_v[i], d);
      r.max_v_minus_u[i] = std::max(r.max_v_minus_u[i], -d);
      if (d > r.p) {
        r.p = d;
        r.p_species = i;
        r.p_node = node;
      }
      if (-d > r.q) {
        r.q = -d;
        r.q_species = i;
        r.q_node = node;
      }
    }
  }
  return r;
}

bool Lemma31Report::holds() const {
  if (!precondition_ok) return false;
  for (const auto& c : forward) {
    if (!c.equal) return false;
  }
  for (const auto& c : swapped) {
    if (!c.equal) return false;
  }
  return true;
}

namespace {

std::vector<MaxComparison> compare_maxima(const Grid& g, const DensityTuple& u,
                                          const DensityTuple& v, double slack) {
  std::vector<MaxComparison> rows(u.m());
  for (std::size_t i = 0; i < u.m(); ++i) {
    const Field hu = hat_transform(u, i);
    const Field hv = hat_transform(v, i);
    double global = -std::numeric_limits<double>::infinity();
    double restricted = -std::numeric_limits<double>::infinity();
    for (std::size_t node : g.active_nodes()) {
      const double d = hu[node] - hv[node];
      global = std::max(global, d);
      if (u[i][node] <= v[i][node] + slack) restricted = std::max(restricted, d);
    }
    rows[i].global_max = global;
    rows[i].restricted_max = restricted;
    rows[i].equal = std::isfinite(restricted) && global - restricted <= slack;
  }
  return rows;
}

}  // namespace

Lemma31Report check_lemma31(const Grid& g, const DensityTuple& u, const DensityTuple& v,
                            const Tolerances& tol, double slack) {
  require_same_shape(g, u, v);
  Lemma31Report report;
  const Certificate cu = certify(g, boundary_of(g, u), u, tol);
  const Certificate cv = certify(g, boundary_of(g, v), v, tol);
  if (!cu.class_s || !cv.class_s) {
    report.note = !cu.class_s ? "precondition failed: first tuple is not segregated class S"
                              : "precondition failed: second tuple is not segregated class S";
    return report;
  }
  report.precondition_ok = true;
  report.forward = compare_maxima(g, u, v, slack);
  report.swapped = compare_maxima(g, v, u, slack);
  return report;
}

}  // namespace seg
