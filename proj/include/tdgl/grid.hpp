#pragma once

// Staggered-grid storage for the periodic strip.
//
// Vertices sit at (x_i, y_j) = (i h, j h), i = 0..nx-1 (periodic), j = 0..ny-1,
// with rows j = 0 and j = ny-1 on the open boundary. x-links and vertices
// share the nx x ny layout; y-links and cells use nx x (ny-1). Storage is
// row-major with x fastest; x-indices wrap modulo nx, y-indices never wrap.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace tdgl {

using cplx = std::complex<double>;

class ShapeMismatch : public std::invalid_argument {
 public:
  explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct GridSpec {
  int nx = 4;
  int ny = 4;
  double h = 1.0;

  GridSpec() = default;
  GridSpec(int nx_, int ny_, double h_);

  double domain_area() const { return nx * (ny - 1) * h * h; }
  double x(int i) const { return i * h; }
  double y(int j) const { return j * h; }
  // Midline of the strip.
  double y_center() const { return 0.5 * (ny - 1) * h; }
  int wrap_x(int i) const {
    const int r = i % nx;
    return r < 0 ? r + nx : r;
  }

  bool operator==(const GridSpec&) const = default;
};

enum class Location : std::uint8_t { vertex, x_link, y_link, cell };

// Number of y-rows stored for a given location.
int rows_for(const GridSpec& grid, Location loc);

const char* to_string(Location loc);

template <typename T>
class Field2D {
 public:
  using value_type = T;

  Field2D() = default;
  Field2D(const GridSpec& grid, Location loc, T fill = T{})
      : grid_(grid), loc_(loc), rows_(rows_for(grid, loc)),
        data_(static_cast<std::size_t>(grid.nx) * rows_, fill) {}

  const GridSpec& grid() const { return grid_; }
  Location location() const { return loc_; }
  int nx() const { return grid_.nx; }
  int rows() const { return rows_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(grid_.wrap_x(i)) +
           static_cast<std::size_t>(grid_.nx) * static_cast<std::size_t>(j);
  }

  // x wraps periodically; j must lie in [0, rows()).
  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::span<T> values() & { return data_; }
  std::span<const T> values() const& { return data_; }
  void values() && = delete;  // a span into a temporary would dangle

  std::span<T> row(int j) {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(grid_.nx) * j, grid_.nx);
  }
  std::span<const T> row(int j) const {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(grid_.nx) * j, grid_.nx);
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const Field2D& other) const {
    return grid_ == other.grid_ && loc_ == other.loc_;
  }

  bool operator==(const Field2D& other) const {
    return same_shape(other) && data_ == other.data_;
  }

 private:
  GridSpec grid_{};
  Location loc_ = Location::vertex;
  int rows_ = 0;
  std::vector<T> data_;
};

// Link-centred vector: x-components on x-links, y-components on y-links.
template <typename T>
struct VectorField {
  Field2D<T> x;
  Field2D<T> y;

  VectorField() = default;
  VectorField(const GridSpec& grid, T fill = T{})
      : x(grid, Location::x_link, fill), y(grid, Location::y_link, fill) {}

  const GridSpec& grid() const { return x.grid(); }
  bool same_shape(const VectorField& o) const {
    return x.same_shape(o.x) && y.same_shape(o.y);
  }
  bool operator==(const VectorField& o) const { return x == o.x && y == o.y; }
};

using ScalarField = Field2D<cplx>;       // complex vertex field (psi)
using RealScalarField = Field2D<double>; // real vertex field (phi, chi)
using CellField = Field2D<double>;       // cell-centred (B_z)
using RealVectorField = VectorField<double>;
using ComplexVectorField = VectorField<cplx>;

// Throws std::invalid_argument for a Location outside the enum.
template <typename T>
Field2D<T> make_field(const GridSpec& grid, Location loc, T fill = T{}) {
  switch (loc) {
    case Location::vertex:
    case Location::x_link:
    case Location::y_link:
    case Location::cell:
      return Field2D<T>(grid, loc, fill);
  }
  throw std::invalid_argument("make_field: invalid field location");
}

template <typename T>
VectorField<T> make_link_field(const GridSpec& grid, T fill = T{}) {
  return VectorField<T>(grid, fill);
}

template <typename T>
void require_same_shape(const Field2D<T>& a, const Field2D<T>& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(op) + ": field shapes differ (" + to_string(a.location()) +
                        " vs " + to_string(b.location()) + ")");
  }
}

// sqrt(h^2 * sum |f|^2) over every stored entry.
template <typename T>
double l2_norm(const Field2D<T>& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return std::sqrt(f.grid().h * f.grid().h * s);
}

template <typename T>
double l2_norm(const VectorField<T>& f) {
  const double nx = l2_norm(f.x);
  const double ny = l2_norm(f.y);
  return std::sqrt(nx * nx + ny * ny);
}

// Returns a*x + y.
template <typename T, typename S>
Field2D<T> axpy(S a, const Field2D<T>& x, const Field2D<T>& y) {
  require_same_shape(x, y, "axpy");
  Field2D<T> out = y;
  auto o = out.values();
  auto xv = x.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += a * xv[k];
  return out;
}

template <typename T>
Field2D<T> subtract(const Field2D<T>& x, const Field2D<T>& y) {
  require_same_shape(x, y, "subtract");
  Field2D<T> out = x;
  auto o = out.values();
  auto yv = y.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] -= yv[k];
  return out;
}

template <typename T, typename S>
Field2D<T> scale(S c, const Field2D<T>& x) {
  Field2D<T> out = x;
  for (auto& v : out.values()) v *= c;
  return out;
}

template <typename T, typename S>
VectorField<T> axpy(S a, const VectorField<T>& x, const VectorField<T>& y) {
  VectorField<T> out;
  out.x = axpy(a, x.x, y.x);
  out.y = axpy(a, x.y, y.y);
  return out;
}

template <typename T>
VectorField<T> subtract(const VectorField<T>& x, const VectorField<T>& y) {
  VectorField<T> out;
  out.x = subtract(x.x, y.x);
  out.y = subtract(x.y, y.y);
  return out;
}

template <typename T, typename S>
VectorField<T> scale(S c, const VectorField<T>& x) {
  VectorField<T> out;
  out.x = scale(c, x.x);
  out.y = scale(c, x.y);
  return out;
}

template <typename T>
bool all_finite(const Field2D<T>& f) {
  for (const auto& v : f.values()) {
    if constexpr (std::is_same_v<T, cplx>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

template <typename T>
bool all_finite(const VectorField<T>& f) {
  return all_finite(f.x) && all_finite(f.y);
}

// Trapezoid weight of a vertex row: 1/2 on the two boundary rows, 1 inside.
inline double boundary_row_weight(const GridSpec& grid, int j) {
  return (j == 0 || j == grid.ny - 1) ? 0.5 : 1.0;
}

}  // namespace tdgl
