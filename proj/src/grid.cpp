#include "seg/grid.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace seg {

namespace {

bool interior_connected(const Grid& g) {
  const auto interior = g.interior_nodes();
  if (interior.empty()) return false;
  std::vector<char> seen(g.size(), 0);
  std::queue<std::size_t> frontier;
  frontier.push(interior.front());
  seen[interior.front()] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t node = frontier.front();
    frontier.pop();
    for (std::ptrdiff_t off : g.neighbor_offsets()) {
      const auto next = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off);
      if (g.is_interior(next) && !seen[next]) {
        seen[next] = 1;
        ++reached;
        frontier.push(next);
      }
    }
  }
  return reached == interior.size();
}

// Tags every non-interior lattice neighbour of an interior node as boundary.
void mark_boundary_ring(int nx, int ny, std::vector<NodeKind>& kinds) {
  const int dim = ny == 1 ? 1 : 2;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t node = static_cast<std::size_t>(iy) * nx + ix;
      if (kinds[node] != NodeKind::interior) continue;
      const int dx[4] = {-1, 1, 0, 0};
      const int dy[4] = {0, 0, -1, 1};
      for (int k = 0; k < 2 * dim; ++k) {
        const int jx = ix + dx[k];
        const int jy = iy + dy[k];
        if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) {
          throw std::invalid_argument("interior node on the lattice frame");
        }
        auto& tag = kinds[static_cast<std::size_t>(jy) * nx + jx];
        if (tag == NodeKind::exterior) tag = NodeKind::boundary;
      }
    }
  }
}

Grid build_interval(const IntervalShape& s, int n) {
  if (!(s.x_max > s.x_min)) throw std::invalid_argument("interval extent must be positive");
  const double h = (s.x_max - s.x_min) / (n - 1);
  std::vector<NodeKind> kinds(static_cast<std::size_t>(n), NodeKind::interior);
  kinds.front() = NodeKind::boundary;
  kinds.back() = NodeKind::boundary;
  return Grid(1, n, 1, h, s.x_min, 0.0, std::move(kinds));
}

Grid build_rectangle(const RectangleShape& s, int n) {
  if (!(s.x_max > s.x_min) || !(s.y_max > s.y_min)) {
    throw std::invalid_argument("rectangle extent must be positive");
  }
  const double h = (s.x_max - s.x_min) / (n - 1);
  const double cells_y = (s.y_max - s.y_min) / h;
  const double rounded = std::round(cells_y);
  if (std::abs(cells_y - rounded) > 1e-9 * std::max(1.0, cells_y)) {
    throw std::invalid_argument("rectangle height is not a multiple of the mesh spacing");
  }
  const int ny = static_cast<int>(rounded) + 1;
  if (ny < 3) throw std::invalid_argument("resolution too small");
  std::vector<NodeKind> kinds(static_cast<std::size_t>(n) * ny, NodeKind::interior);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (ix == 0 || iy == 0 || ix == n - 1 || iy == ny - 1) {
        kinds[static_cast<std::size_t>(iy) * n + ix] = NodeKind::boundary;
      }
    }
  }
  return Grid(2, n, ny, h, s.x_min, s.y_min, std::move(kinds));
}

Grid build_disk(const DiskShape& s, int n) {
  if (!(s.radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  const double h = 2.0 * s.radius / (n - 1);
  const int half = static_cast<int>(std::ceil(s.radius / h - 1e-12)) + 1;
  const int side = 2 * half + 1;
  const double origin_x = s.cx - half * h;
  const double origin_y = s.cy - half * h;
  const double r2 = s.radius * s.radius;
  std::vector<NodeKind> kinds(static_cast<std::size_t>(side) * side, NodeKind::exterior);
  for (int iy = 0; iy < side; ++iy) {
    for (int ix = 0; ix < side; ++ix) {
      const double dx = (ix - half) * h;
      const double dy = (iy - half) * h;
      if (dx * dx + dy * dy < r2 * (1.0 - 1e-12)) {
        kinds[static_cast<std::size_t>(iy) * side + ix] = NodeKind::interior;
      }
    }
  }
  mark_boundary_ring(side, side, kinds);
  return Grid(2, side, side, h, origin_x, origin_y, std::move(kinds));
}

Grid build_mask(const MaskShape& s) {
  if (s.rows.empty()) throw std::invalid_argument("empty mask");
  if (!(s.h > 0.0)) throw std::invalid_argument("mask spacing must be positive");
  const int ny = static_cast<int>(s.rows.size());
  const int nx = static_cast<int>(s.rows.front().size());
  if (nx < 3 || ny < 3) throw std::invalid_argument("resolution too small");
  std::vector<NodeKind> kinds(static_cast<std::size_t>(nx) * ny, NodeKind::exterior);
  for (int r = 0; r < ny; ++r) {
    const auto& row = s.rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != nx) throw std::invalid_argument("ragged mask rows");
    const int iy = ny - 1 - r;
    for (int ix = 0; ix < nx; ++ix) {
      if (row[static_cast<std::size_t>(ix)] == '1' || row[static_cast<std::size_t>(ix)] == '#') {
        kinds[static_cast<std::size_t>(iy) * nx + ix] = NodeKind::interior;
      }
    }
  }
  mark_boundary_ring(nx, ny, kinds);
  return Grid(2, nx, ny, s.h, s.x_min, s.y_min, std::move(kinds));
}

}  // namespace

Grid::Grid(int dim, int nx, int ny, double h, double x_origin, double y_origin,
           std::vector<NodeKind> kinds)
    : dim_(dim), nx_(nx), ny_(ny), h_(h), x_origin_(x_origin), y_origin_(y_origin),
      kinds_(std::move(kinds)) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("mesh spacing must be positive");
  if (nx < 3 || (dim == 2 && ny < 3) || (dim == 1 && ny != 1)) {
    throw std::invalid_argument("resolution too small");
  }
  if (kinds_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw std::invalid_argument("node tag count does not match lattice size");
  }
  offsets_[0] = -1;
  offsets_[1] = 1;
  offsets_[2] = -static_cast<std::ptrdiff_t>(nx);
  offsets_[3] = static_cast<std::ptrdiff_t>(nx);

  for (std::size_t node = 0; node < kinds_.size(); ++node) {
    switch (kinds_[node]) {
      case NodeKind::interior: {
        interior_.push_back(node);
        active_.push_back(node);
        for (int axis = 0; axis < dim_; ++axis) {
          for (int dir : {-1, 1}) {
            const std::ptrdiff_t next = step(node, axis, dir);
            if (next < 0 || !is_active(static_cast<std::size_t>(next))) {
              throw std::invalid_argument("interior node with a missing neighbour");
            }
          }
        }
        break;
      }
      case NodeKind::boundary:
        boundary_.push_back(node);
        active_.push_back(node);
        break;
      case NodeKind::exterior:
        break;
    }
  }
  if (interior_.empty()) throw std::invalid_argument("grid has no interior nodes");
  if (!interior_connected(*this)) throw std::invalid_argument("disconnected interior");
}

std::ptrdiff_t Grid::step(std::size_t node, int axis, int dir) const {
  if (axis >= dim_) return -1;
  const int jx = ix(node) + (axis == 0 ? dir : 0);
  const int jy = iy(node) + (axis == 1 ? dir : 0);
  if (jx < 0 || jy < 0 || jx >= nx_ || jy >= ny_) return -1;
  return static_cast<std::ptrdiff_t>(index(jx, jy));
}

Extent Grid::extent() const {
  Extent e{x(active_.front()), x(active_.front()), y(active_.front()), y(active_.front())};
  for (std::size_t node : active_) {
    e.x_min = std::min(e.x_min, x(node));
    e.x_max = std::max(e.x_max, x(node));
    e.y_min = std::min(e.y_min, y(node));
    e.y_max = std::max(e.y_max, y(node));
  }
  return e;
}

Grid build_grid(const ShapeSpec& shape, int n) {
  if (!std::holds_alternative<MaskShape>(shape) && n < 3) {
    throw std::invalid_argument("resolution too small");
  }
  return std::visit(
      [n](const auto& s) -> Grid {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalShape>) return build_interval(s, n);
        else if constexpr (std::is_same_v<T, RectangleShape>) return build_rectangle(s, n);
        else if constexpr (std::is_same_v<T, DiskShape>) return build_disk(s, n);
        else return build_mask(s);
      },
      shape);
}

double laplacian(const Grid& g, const Field& f, std::size_t node) {
  if (node >= g.size() || !g.is_interior(node)) {
    throw std::out_of_range("laplacian requested at a non-interior node");
  }
  double sum = 0.0;
  for (std::ptrdiff_t off : g.neighbor_offsets()) {
    sum += f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + off)];
  }
  const double h = g.h();
  return (sum - 2.0 * g.dim() * f[node]) / (h * h);
}

Field hat_transform(const DensityTuple& u, std::size_t i) {
  if (i >= u.m()) throw std::out_of_range("species index out of range");
  Field hat = u[i];
  for (std::size_t j = 0; j < u.m(); ++j) {
    if (j == i) continue;
    if (u[j].size() != hat.size()) throw std::invalid_argument("species fields differ in size");
    for (std::size_t k = 0; k < hat.size(); ++k) hat[k] -= u[j][k];
  }
  return hat;
}

double discrete_h1_norm(const Grid& g, const Field& f) {
  const double h = g.h();
  const double weight = g.dim() == 1 ? h : h * h;
  double sum = 0.0;
  for (std::size_t node : g.active_nodes()) sum += weight * f[node] * f[node];
  g.for_each_edge([&](std::size_t a, std::size_t b) {
    const double d = (f[b] - f[a]) / h;
    sum += weight * d * d;
  });
  return std::sqrt(sum);
}

bool all_finite(const Grid& g, const Field& f) {
  for (std::size_t node : g.active_nodes()) {
    if (!std::isfinite(f[node])) return false;
  }
  return true;
}

Field difference(const Field& a, const Field& b) {
  if (a.size() != b.size()) throw std::invalid_argument("field size mismatch");
  Field d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return d;
}

}  // namespace seg
