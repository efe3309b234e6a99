#include "tdgl/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdgl {

RealScalarField density(const ScalarField& psi) {
  RealScalarField rho(psi.grid(), Location::vertex);
  for (std::size_t k = 0; k < psi.size(); ++k) rho[k] = std::norm(psi[k]);
  return rho;
}

double delta_psi(const ScalarField& psi_k, const ScalarField& psi_ref) {
  return l2_norm(subtract(psi_k, psi_ref));
}

double delta_bz(const CellField& bz_k, const CellField& bz_ref, double hz) {
  if (hz == 0.0) throw std::invalid_argument("delta_bz: applied field is zero");
  const GridSpec& g = bz_k.grid();
  const double hnorm = std::abs(hz) * std::sqrt(g.h * g.h * static_cast<double>(bz_k.size()));
  return l2_norm(subtract(bz_k, bz_ref)) / hnorm;
}

std::vector<double> x_avg_profile(const Field2D<double>& ax_k, const Field2D<double>& ax_ref) {
  require_same_shape(ax_k, ax_ref, "x_avg_profile");
  std::vector<double> out(ax_k.rows());
  for (int j = 0; j < ax_k.rows(); ++j) {
    double s = 0.0;
    for (int i = 0; i < ax_k.nx(); ++i) s += ax_k(i, j) - ax_ref(i, j);
    out[j] = s / ax_k.nx();
  }
  return out;
}

VortexCount vortex_count(const ScalarField& psi, const LinkVariables& u) {
  const GridSpec& g = u.grid();
  if (psi.location() != Location::vertex || !(psi.grid() == g)) {
    throw ShapeMismatch("vortex_count: psi does not match the link grid");
  }
  VortexCount vc;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const cplx p00 = psi(i, j);
      const cplx p10 = psi(i + 1, j);
      const cplx p11 = psi(i + 1, j + 1);
      const cplx p01 = psi(i, j + 1);
      if (std::abs(p00) < degenerate_threshold || std::abs(p10) < degenerate_threshold ||
          std::abs(p11) < degenerate_threshold || std::abs(p01) < degenerate_threshold) {
        ++vc.degenerate;
        continue;
      }
      const cplx u0 = u.ux(i, j);
      const cplx u1 = u.uy(i + 1, j);
      const cplx u2 = std::conj(u.ux(i, j + 1));
      const cplx u3 = std::conj(u.uy(i, j));
      const double sum_g = std::arg(std::conj(p00) * u0 * p10) + std::arg(std::conj(p10) * u1 * p11) +
                           std::arg(std::conj(p11) * u2 * p01) + std::arg(std::conj(p01) * u3 * p00);
      const double theta = std::arg(u0 * u1 * u2 * u3);
      const int w = static_cast<int>(std::lround((theta - sum_g) / two_pi));
      vc.count += w;
      if (w > 0) ++vc.positive;
      if (w < 0) ++vc.negative;
    }
  }
  return vc;
}

double total_flux_quanta(const CellField& bz, double kappa) {
  const GridSpec& g = bz.grid();
  double s = 0.0;
  for (const double v : bz.values()) s += v;
  return s * g.h * g.h / (2.0 * std::numbers::pi * kappa);
}

double magnetization(const CellField& bz, double hz) {
  double s = 0.0;
  for (const double v : bz.values()) s += v;
  return s / static_cast<double>(bz.size()) - hz;
}

}  // namespace tdgl
