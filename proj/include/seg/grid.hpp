#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace seg {

enum class NodeKind : std::uint8_t { exterior, interior, boundary };

struct Extent {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

/// [x_min, x_max] discretized with n nodes.
struct IntervalShape {
  double x_min = 0.0;
  double x_max = 1.0;
};

/// Axis-aligned rectangle; n nodes along x, spacing shared by y.
struct RectangleShape {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

/// Disk with n nodes across its diameter.
struct DiskShape {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
};

/// Explicit lattice mask. rows[0] is the top row (largest y); '1' or '#'
/// marks an interior node, anything else is outside. Boundary nodes are
/// derived as the non-interior lattice neighbours of interior nodes.
struct MaskShape {
  std::vector<std::string> rows;
  double h = 1.0;
  double x_min = 0.0;
  double y_min = 0.0;
};

using ShapeSpec = std::variant<IntervalShape, RectangleShape, DiskShape, MaskShape>;

/// Uniform lattice with interior/boundary/exterior tags. Nodes are stored
/// row-major (x fastest). A 1D grid has ny == 1.
class Grid {
 public:
  Grid(int dim, int nx, int ny, double h, double x_origin, double y_origin,
       std::vector<NodeKind> kinds);

  int dim() const { return dim_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  std::size_t size() const { return kinds_.size(); }

  NodeKind kind(std::size_t node) const { return kinds_[node]; }
  bool is_interior(std::size_t node) const { return kinds_[node] == NodeKind::interior; }
  bool is_boundary(std::size_t node) const { return kinds_[node] == NodeKind::boundary; }
  bool is_active(std::size_t node) const { return kinds_[node] != NodeKind::exterior; }

  int ix(std::size_t node) const { return static_cast<int>(node % static_cast<std::size_t>(nx_)); }
  int iy(std::size_t node) const { return static_cast<int>(node / static_cast<std::size_t>(nx_)); }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(ix);
  }
  double x(std::size_t node) const { return x_origin_ + h_ * ix(node); }
  double y(std::size_t node) const { return y_origin_ + h_ * iy(node); }

  /// Interior nodes in lexicographic order (the reference sweep order).
  std::span<const std::size_t> interior_nodes() const { return interior_; }
  std::span<const std::size_t> boundary_nodes() const { return boundary_; }
  /// Active (interior or boundary) nodes in row-major order.
  std::span<const std::size_t> active_nodes() const { return active_; }

  /// Index offsets of the 2*dim lattice neighbours: -x, +x, -y, +y.
  /// Valid for every interior node.
  std::span<const std::ptrdiff_t> neighbor_offsets() const {
    return {offsets_.data(), static_cast<std::size_t>(2 * dim_)};
  }

  /// Neighbour of `node` one step along `axis` (0 = x, 1 = y) in direction
  /// `step` (+1/-1), or -1 if it falls off the lattice.
  std::ptrdiff_t step(std::size_t node, int axis, int dir) const;

  /// Lattice edges with both endpoints active, as (a, b) with b = a + e_axis.
  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (std::size_t a : active_) {
      for (int axis = 0; axis < dim_; ++axis) {
        const std::ptrdiff_t b = step(a, axis, +1);
        if (b >= 0 && is_active(static_cast<std::size_t>(b))) fn(a, static_cast<std::size_t>(b));
      }
    }
  }

  Extent extent() const;

 private:
  int dim_;
  int nx_;
  int ny_;
  double h_;
  double x_origin_;
  double y_origin_;
  std::vector<NodeKind> kinds_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> active_;
  std::array<std::ptrdiff_t, 4> offsets_{};
};

/// One scalar per lattice node; exterior entries are kept at zero.
struct Field {
  std::vector<double> values;

  Field() = default;
  explicit Field(std::size_t n, double fill = 0.0) : values(n, fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// m fields on a common grid.
struct DensityTuple {
  std::vector<Field> species;

  DensityTuple() = default;
  DensityTuple(std::size_t m, std::size_t nodes) : species(m, Field(nodes)) {}

  std::size_t m() const { return species.size(); }
  std::size_t nodes() const { return species.empty() ? 0 : species.front().size(); }
  Field& operator[](std::size_t i) { return species[i]; }
  const Field& operator[](std::size_t i) const { return species[i]; }
};

Grid build_grid(const ShapeSpec& shape, int n);

/// 5-point (3-point in 1D) Laplacian at an interior node.
double laplacian(const Grid& g, const Field& f, std::size_t node);

/// u_i minus the sum of the other components, at every node.
Field hat_transform(const DensityTuple& u, std::size_t i);

/// sqrt(sum_nodes h^d f^2 + sum_edges h^d ((f(b)-f(a))/h)^2) over active nodes/edges.
double discrete_h1_norm(const Grid& g, const Field& f);

/// True if f is finite at every active node.
bool all_finite(const Grid& g, const Field& f);

Field difference(const Field& a, const Field& b);

}  // namespace seg
