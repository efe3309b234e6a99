#include "tdgl/operators.hpp"

#include <cmath>

namespace tdgl {

namespace {

void require_vertex(const GridSpec& g, const ScalarField& f, const char* op) {
  if (f.location() != Location::vertex || !(f.grid() == g)) {
    throw ShapeMismatch(std::string(op) + ": expected a vertex field on the link grid");
  }
}

}  // namespace

LinkVariables links_from_potential(const RealVectorField& a, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("links_from_potential: kappa must be positive");
  const double c = a.grid().h / kappa;
  LinkVariables u{Field2D<cplx>(a.grid(), Location::x_link), Field2D<cplx>(a.grid(), Location::y_link),
                  kappa};
  for (std::size_t k = 0; k < u.ux.size(); ++k) u.ux[k] = std::polar(1.0, c * a.x[k]);
  for (std::size_t k = 0; k < u.uy.size(); ++k) u.uy[k] = std::polar(1.0, c * a.y[k]);
  return u;
}

LinkVariables unit_links(const GridSpec& grid, double kappa) {
  return LinkVariables{Field2D<cplx>(grid, Location::x_link, cplx(1.0)),
                       Field2D<cplx>(grid, Location::y_link, cplx(1.0)), kappa};
}

template <typename T>
VectorField<T> grad_scalar(const Field2D<T>& f) {
  const GridSpec& g = f.grid();
  const double inv_h = 1.0 / g.h;
  VectorField<T> out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) out.x(i, j) = inv_h * (f(i + 1, j) - f(i, j));
  }
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) out.y(i, j) = inv_h * (f(i, j + 1) - f(i, j));
  }
  return out;
}

template VectorField<double> grad_scalar(const Field2D<double>&);
template VectorField<cplx> grad_scalar(const Field2D<cplx>&);

ComplexVectorField a_gradient(const ScalarField& psi, const LinkVariables& u) {
  const GridSpec& g = u.grid();
  require_vertex(g, psi, "a_gradient");
  const double inv_h = 1.0 / g.h;
  ComplexVectorField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) out.x(i, j) = inv_h * (psi(i + 1, j) * u.ux(i, j) - psi(i, j));
  }
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) out.y(i, j) = inv_h * (psi(i, j + 1) * u.uy(i, j) - psi(i, j));
  }
  return out;
}

void twisted_laplacian_into(const ScalarField& psi, const LinkVariables& u, ScalarField& out) {
  const GridSpec& g = u.grid();
  require_vertex(g, psi, "twisted_laplacian");
  require_vertex(g, out, "twisted_laplacian");
  const int nx = g.nx;
  const int ny = g.ny;
  const double inv_h2 = 1.0 / (g.h * g.h);
  const cplx* p = psi.values().data();
  const cplx* ux = u.ux.values().data();
  const cplx* uy = u.uy.values().data();
  cplx* o = out.values().data();

  for (int j = 0; j < ny; ++j) {
    const std::size_t r = static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1 == nx) ? 0 : i + 1;
      const int im = (i == 0) ? nx - 1 : i - 1;
      const cplx c = p[r + i];
      cplx lap = p[r + ip] * ux[r + i] - 2.0 * c + p[r + im] * std::conj(ux[r + im]);
      if (j == 0) {
        lap += 2.0 * (p[r + nx + i] * uy[r + i] - c);
      } else if (j == ny - 1) {
        lap += 2.0 * (p[r - nx + i] * std::conj(uy[r - nx + i]) - c);
      } else {
        lap += p[r + nx + i] * uy[r + i] - 2.0 * c + p[r - nx + i] * std::conj(uy[r - nx + i]);
      }
      o[r + i] = inv_h2 * lap;
    }
  }
}

ScalarField twisted_laplacian(const ScalarField& psi, const LinkVariables& u) {
  ScalarField out(u.grid(), Location::vertex);
  twisted_laplacian_into(psi, u, out);
  return out;
}

template <typename T>
Field2D<T> laplacian_scalar(const Field2D<T>& f) {
  const GridSpec& g = f.grid();
  const double inv_h2 = 1.0 / (g.h * g.h);
  Field2D<T> out(g, Location::vertex);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const T c = f(i, j);
      T lap = f(i + 1, j) - 2.0 * c + f(i - 1, j);
      if (j == 0) {
        lap += 2.0 * (f(i, 1) - c);
      } else if (j == g.ny - 1) {
        lap += 2.0 * (f(i, g.ny - 2) - c);
      } else {
        lap += f(i, j + 1) - 2.0 * c + f(i, j - 1);
      }
      out(i, j) = inv_h2 * lap;
    }
  }
  return out;
}

template Field2D<double> laplacian_scalar(const Field2D<double>&);
template Field2D<cplx> laplacian_scalar(const Field2D<cplx>&);

RealVectorField laplacian_vector(const RealVectorField& a, double hz) {
  const GridSpec& g = a.grid();
  const double inv_h2 = 1.0 / (g.h * g.h);
  const double flux = 2.0 * hz / g.h;
  RealVectorField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = a.x(i, j);
      double lap = (a.x(i + 1, j) - 2.0 * c + a.x(i - 1, j)) * inv_h2;
      if (j == 0) {
        lap += 2.0 * (a.x(i, 1) - c) * inv_h2 + flux;
      } else if (j == g.ny - 1) {
        lap += 2.0 * (a.x(i, g.ny - 2) - c) * inv_h2 - flux;
      } else {
        lap += (a.x(i, j + 1) - 2.0 * c + a.x(i, j - 1)) * inv_h2;
      }
      out.x(i, j) = lap;
    }
  }
  const int m = g.ny - 1;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = a.y(i, j);
      const double up = (j + 1 < m) ? a.y(i, j + 1) : 0.0;
      const double dn = (j > 0) ? a.y(i, j - 1) : 0.0;
      out.y(i, j) = (a.y(i + 1, j) - 2.0 * c + a.y(i - 1, j) + up - 2.0 * c + dn) * inv_h2;
    }
  }
  return out;
}

CellField curl_z(const RealVectorField& a) {
  const GridSpec& g = a.grid();
  const double inv_h = 1.0 / g.h;
  CellField b(g, Location::cell);
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      b(i, j) = inv_h * (a.y(i + 1, j) - a.y(i, j)) - inv_h * (a.x(i, j + 1) - a.x(i, j));
    }
  }
  return b;
}

RealVectorField curl_adjoint(const CellField& b) {
  const GridSpec& g = b.grid();
  const double inv_h = 1.0 / g.h;
  const int m = g.ny - 1;
  RealVectorField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double here = (j < m) ? b(i, j) : 0.0;
      const double below = (j > 0) ? b(i, j - 1) : 0.0;
      out.x(i, j) = inv_h * (here - below);
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < g.nx; ++i) out.y(i, j) = inv_h * (b(i - 1, j) - b(i, j));
  }
  return out;
}

RealScalarField divergence(const RealVectorField& a) {
  const GridSpec& g = a.grid();
  const double inv_h = 1.0 / g.h;
  const int m = g.ny - 1;
  RealScalarField d(g, Location::vertex);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double up = (j < m) ? a.y(i, j) : 0.0;
      const double dn = (j > 0) ? a.y(i, j - 1) : 0.0;
      d(i, j) = inv_h * (a.x(i, j) - a.x(i - 1, j)) + inv_h * (up - dn);
    }
  }
  return d;
}

RealVectorField supercurrent(const ScalarField& psi, const LinkVariables& u) {
  const GridSpec& g = u.grid();
  require_vertex(g, psi, "supercurrent");
  const double inv_h = 1.0 / g.h;
  RealVectorField j_s(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      j_s.x(i, j) = -inv_h * std::imag(std::conj(psi(i, j)) * u.ux(i, j) * psi(i + 1, j));
    }
  }
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      j_s.y(i, j) = -inv_h * std::imag(std::conj(psi(i, j)) * u.uy(i, j) * psi(i, j + 1));
    }
  }
  return j_s;
}

std::pair<ScalarField, RealVectorField> gauge_transform(const ScalarField& psi,
                                                        const RealVectorField& a,
                                                        const RealScalarField& chi,
                                                        double kappa) {
  require_same_shape(psi, ScalarField(chi.grid(), Location::vertex), "gauge_transform");
  ScalarField psi_t = psi;
  for (std::size_t k = 0; k < psi_t.size(); ++k) psi_t[k] *= std::polar(1.0, -chi[k] / kappa);
  RealVectorField grad = grad_scalar(chi);
  return {std::move(psi_t), axpy(1.0, grad, a)};
}

cplx weighted_inner(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "weighted_inner");
  const GridSpec& g = a.grid();
  cplx s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    cplx r = 0.0;
    for (int i = 0; i < g.nx; ++i) r += std::conj(a(i, j)) * b(i, j);
    s += boundary_row_weight(g, j) * r;
  }
  return g.h * g.h * s;
}

}  // namespace tdgl
