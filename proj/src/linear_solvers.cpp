#include "tdgl/linear_solvers.hpp"

#include <numbers>

namespace tdgl {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

FFTPlan::FFTPlan(int n) : n_(n) {
  if (!is_power_of_two(n)) throw UnsupportedLength(n);
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  bitrev_.resize(n);
  for (int k = 0; k < n; ++k) {
    int r = 0;
    for (int b = 0; b < bits; ++b) r |= ((k >> b) & 1) << (bits - 1 - b);
    bitrev_[k] = r;
  }
  twiddle_.resize(std::max(1, n / 2));
  for (int k = 0; k < n / 2; ++k) {
    twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
  }
}

void FFTPlan::transform(std::span<cplx> data, bool inverse) const {
  if (static_cast<int>(data.size()) != n_) throw UnsupportedLength(static_cast<int>(data.size()));
  for (int k = 0; k < n_; ++k) {
    if (k < bitrev_[k]) std::swap(data[k], data[bitrev_[k]]);
  }
  for (int len = 2; len <= n_; len <<= 1) {
    const int half = len / 2;
    const int stride = n_ / len;
    for (int start = 0; start < n_; start += len) {
      for (int k = 0; k < half; ++k) {
        cplx w = twiddle_[k * stride];
        if (inverse) w = std::conj(w);
        const cplx t = w * data[start + k + half];
        data[start + k + half] = data[start + k] - t;
        data[start + k] += t;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / n_;
    for (auto& v : data) v *= s;
  }
}

ModeSet fft_x_forward(const Field2D<double>& rows) {
  const int nx = rows.nx();
  FFTPlan plan(nx);
  ModeSet out{nx, rows.rows(), {}};
  out.modes.resize(static_cast<std::size_t>(out.modes_per_row()) * out.rows);
  std::vector<cplx> buf(nx);
  for (int j = 0; j < rows.rows(); ++j) {
    const auto r = rows.row(j);
    for (int i = 0; i < nx; ++i) buf[i] = r[i];
    plan.forward(buf);
    for (int k = 0; k < out.modes_per_row(); ++k) out.at(k, j) = buf[k];
  }
  return out;
}

Field2D<double> fft_x_inverse(const ModeSet& modes, const Field2D<double>& like) {
  const int nx = modes.nx;
  if (nx != like.nx() || modes.rows != like.rows()) {
    throw ShapeMismatch("fft_x_inverse: mode set does not match the target field");
  }
  FFTPlan plan(nx);
  Field2D<double> out(like.grid(), like.location());
  std::vector<cplx> buf(nx);
  for (int j = 0; j < modes.rows; ++j) {
    for (int k = 0; k < modes.modes_per_row(); ++k) buf[k] = modes.at(k, j);
    for (int k = modes.modes_per_row(); k < nx; ++k) buf[k] = std::conj(modes.at(nx - k, j));
    plan.inverse(buf);
    auto r = out.row(j);
    for (int i = 0; i < nx; ++i) r[i] = buf[i].real();
  }
  return out;
}

void thomas_solve_inplace(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<cplx> x,
                          std::span<double> scratch) {
  const std::size_t m = diag.size();
  if (lower.size() != m || upper.size() != m || x.size() != m || scratch.size() < m) {
    throw ShapeMismatch("thomas_solve: coefficient arrays have inconsistent lengths");
  }
  if (m == 0) return;
  // scratch holds the modified super-diagonal.
  double pivot = diag[0];
  if (pivot == 0.0) throw ZeroPivot(0);
  scratch[0] = (m > 1) ? upper[0] / pivot : 0.0;
  x[0] /= pivot;
  for (std::size_t k = 1; k < m; ++k) {
    pivot = diag[k] - lower[k] * scratch[k - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw ZeroPivot(static_cast<int>(k));
    scratch[k] = (k + 1 < m) ? upper[k] / pivot : 0.0;
    x[k] = (x[k] - lower[k] * x[k - 1]) / pivot;
  }
  for (std::size_t k = m - 1; k-- > 0;) x[k] -= scratch[k] * x[k + 1];
}

std::vector<cplx> thomas_solve(const TridiagSystem& sys) {
  std::vector<cplx> x = sys.rhs;
  std::vector<double> scratch(sys.diag.size());
  thomas_solve_inplace(sys.lower, sys.diag, sys.upper, x, scratch);
#ifndef NDEBUG
  const std::size_t m = x.size();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    cplx ax = sys.diag[k] * x[k];
    if (k > 0) ax += sys.lower[k] * x[k - 1];
    if (k + 1 < m) ax += sys.upper[k] * x[k + 1];
    worst = std::max(worst, std::abs(ax - sys.rhs[k]));
    scale = std::max(scale, std::abs(sys.rhs[k]));
  }
  if (worst > 1e-10 * std::max(scale, 1e-300)) {
    throw std::logic_error("thomas_solve: residual check failed");
  }
#endif
  return x;
}

}  // namespace tdgl
