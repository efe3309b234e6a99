#include "tdgl/grid.hpp"

#include <cmath>

namespace tdgl {

GridSpec::GridSpec(int nx_, int ny_, double h_) : nx(nx_), ny(ny_), h(h_) {
  if (nx < 4 || ny < 4) {
    throw std::invalid_argument("GridSpec: need nx >= 4 and ny >= 4, got " + std::to_string(nx) +
                                "x" + std::to_string(ny));
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("GridSpec: mesh width must be positive");
  }
}

int rows_for(const GridSpec& grid, Location loc) {
  switch (loc) {
    case Location::vertex:
    case Location::x_link:
      return grid.ny;
    case Location::y_link:
    case Location::cell:
      return grid.ny - 1;
  }
  throw std::invalid_argument("rows_for: invalid field location");
}

const char* to_string(Location loc) {
  switch (loc) {
    case Location::vertex: return "vertex";
    case Location::x_link: return "x_link";
    case Location::y_link: return "y_link";
    case Location::cell: return "cell";
  }
  return "invalid";
}

}  // namespace tdgl
