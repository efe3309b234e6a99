#pragma once

#include "tdgl/grid.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdgl {

struct CGOptions {
  double tol = 1e-8;  // relative residual target
  int max_iter = 500;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("CGOptions: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("CGOptions: max_iter must be >= 1");
  }
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class ZeroPivot : public std::runtime_error {
 public:
  explicit ZeroPivot(int row)
      : std::runtime_error("thomas_solve: zero pivot at row " + std::to_string(row)), row_(row) {}
  int row() const { return row_; }

 private:
  int row_;
};

class UnsupportedLength : public std::invalid_argument {
 public:
  explicit UnsupportedLength(int n)
      : std::invalid_argument("fft: length " + std::to_string(n) + " is not a power of two") {}
};

struct CGResult {
  ScalarField x;
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> residual_history;  // relative residual per iteration, when tracked
};

namespace detail {

inline cplx dot(const ScalarField& a, const ScalarField& b) {
  cplx s = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) s += std::conj(av[k]) * bv[k];
  return s;
}

inline double norm2(const ScalarField& a) {
  double s = 0.0;
  for (const auto& v : a.values()) s += std::norm(v);
  return s;
}

}  // namespace detail

// Conjugate gradients for a Hermitian positive definite operator acting on
// vertex fields. `apply(in, out)` must overwrite out with Op(in). Stops when
// ||rhs - Op x|| <= tol ||rhs|| (recursive residual).
template <class Op>
CGResult cg_solve(Op&& apply, const ScalarField& rhs, const CGOptions& opts,
                  const ScalarField* initial = nullptr, bool track_history = false) {
  opts.validate();
  CGResult res;
  res.x = initial ? *initial : ScalarField(rhs.grid(), rhs.location());
  require_same_shape(res.x, rhs, "cg_solve");

  const double b2 = detail::norm2(rhs);
  if (b2 == 0.0) {
    res.x.fill(cplx(0.0));
    return res;
  }
  const double stop2 = opts.tol * opts.tol * b2;

  ScalarField r = rhs;
  ScalarField ap(rhs.grid(), rhs.location());
  if (initial) {
    apply(res.x, ap);
    auto rv = r.values();
    auto av = ap.values();
    for (std::size_t k = 0; k < rv.size(); ++k) rv[k] -= av[k];
  }
  double r2 = detail::norm2(r);
  if (r2 <= stop2) {
    res.relative_residual = std::sqrt(r2 / b2);
    return res;
  }
  ScalarField p = r;
  auto xv = res.x.values();
  auto rv = r.values();
  auto pv = p.values();
  auto av = ap.values();

  for (int it = 1; it <= opts.max_iter; ++it) {
    apply(p, ap);
    const double pap = std::real(detail::dot(p, ap));
    if (!(pap > 0.0)) {
      throw NonConvergence("cg_solve: operator is not positive definite", it, std::sqrt(r2 / b2));
    }
    const double alpha = r2 / pap;
    for (std::size_t k = 0; k < xv.size(); ++k) {
      xv[k] += alpha * pv[k];
      rv[k] -= alpha * av[k];
    }
    const double r2_new = detail::norm2(r);
    res.iterations = it;
    if (track_history) res.residual_history.push_back(std::sqrt(r2_new / b2));
    if (r2_new <= stop2) {
      res.relative_residual = std::sqrt(r2_new / b2);
      return res;
    }
    const double beta = r2_new / r2;
    r2 = r2_new;
    for (std::size_t k = 0; k < pv.size(); ++k) pv[k] = rv[k] + beta * pv[k];
  }
  throw NonConvergence("cg_solve: no convergence after " + std::to_string(opts.max_iter) +
                           " iterations",
                       opts.max_iter, std::sqrt(r2 / b2));
}

bool is_power_of_two(int n);

// Radix-2 complex FFT of a fixed length. Forward is unnormalised; inverse
// carries the 1/n factor. Const methods are reentrant.
class FFTPlan {
 public:
  explicit FFTPlan(int n);
  int size() const { return n_; }
  void forward(std::span<cplx> data) const { transform(data, false); }
  void inverse(std::span<cplx> data) const { transform(data, true); }

 private:
  void transform(std::span<cplx> data, bool inverse) const;
  int n_;
  std::vector<int> bitrev_;
  std::vector<cplx> twiddle_;  // exp(-2 pi i k / n), k < n/2
};

// Real rows of an nx-periodic array, transformed row by row. Each row keeps
// the nx/2 + 1 non-redundant modes.
struct ModeSet {
  int nx = 0;
  int rows = 0;
  std::vector<cplx> modes;  // row-major, (nx/2 + 1) per row

  int modes_per_row() const { return nx / 2 + 1; }
  cplx& at(int k, int j) { return modes[static_cast<std::size_t>(j) * modes_per_row() + k]; }
  const cplx& at(int k, int j) const {
    return modes[static_cast<std::size_t>(j) * modes_per_row() + k];
  }
};

ModeSet fft_x_forward(const Field2D<double>& rows);
// Inverse of fft_x_forward; `like` supplies grid and location of the result.
Field2D<double> fft_x_inverse(const ModeSet& modes, const Field2D<double>& like);

struct TridiagSystem {
  std::vector<double> lower;  // lower[0] unused
  std::vector<double> diag;
  std::vector<double> upper;  // upper[m-1] unused
  std::vector<cplx> rhs;
};

std::vector<cplx> thomas_solve(const TridiagSystem& sys);

// Overwrites x (holding the rhs on entry) with the solution. scratch needs
// at least diag.size() entries.
void thomas_solve_inplace(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<cplx> x,
                          std::span<double> scratch);

}  // namespace tdgl
