#pragma once

#include "tdgl/grid.hpp"
#include "tdgl/operators.hpp"

#include <vector>

namespace tdgl {

RealScalarField density(const ScalarField& psi);

double delta_psi(const ScalarField& psi_k, const ScalarField& psi_ref);

// ||bz_k - bz_ref|| / ||hz||, both norms over the cell grid. Throws
// std::invalid_argument for hz == 0.
double delta_bz(const CellField& bz_k, const CellField& bz_ref, double hz);

// Row means over x of (ax_k - ax_ref), one entry per y-row.
std::vector<double> x_avg_profile(const Field2D<double>& ax_k, const Field2D<double>& ax_ref);

struct VortexCount {
  int count = 0;      // sum of plaquette windings
  int positive = 0;   // plaquettes with winding > 0
  int negative = 0;   // plaquettes with winding < 0
  int degenerate = 0; // plaquettes skipped because a corner has |psi| < 1e-8
};

// Counts fluxoids per plaquette. For each cell the gauge-invariant link
// phases g_l = arg(conj(psi_a) U_l psi_b) are summed counterclockwise; the
// winding is (Theta - sum g_l) / 2 pi with Theta the phase of the plaquette
// product of the U_l. A vortex threading positive flux counts +1.
VortexCount vortex_count(const ScalarField& psi, const LinkVariables& u);

inline constexpr double degenerate_threshold = 1e-8;

// Total flux in units of the flux quantum 2 pi kappa.
double total_flux_quanta(const CellField& bz, double kappa);

// Mean over cells of bz, minus hz.
double magnetization(const CellField& bz, double hz);

}  // namespace tdgl
