#include "oracles.hpp"
#include "tdgl/operators.hpp"

#include <doctest.h>

using namespace tdgl;

namespace {

GridSpec random_grid(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(4, 8);
  std::uniform_real_distribution<double> h(0.3, 1.0);
  return GridSpec(dim(rng), dim(rng), h(rng));
}

double scale_of(const ScalarField& f) { return std::max(1.0, oracle::max_abs(f)); }

}  // namespace

TEST_CASE("link variables") {
  const GridSpec g(4, 4, 0.5);
  RealVectorField a(g);
  LinkVariables u = links_from_potential(a, 3.0);
  for (const auto& v : u.ux.values()) CHECK(v == cplx(1.0));
  for (const auto& v : u.uy.values()) CHECK(v == cplx(1.0));

  const double kappa = 2.0;
  a.x(1, 2) = 2.0 * std::numbers::pi * kappa / g.h;
  a.x(2, 2) = kappa * std::numbers::pi / (2.0 * g.h);
  u = links_from_potential(a, kappa);
  CHECK(std::abs(u.ux(1, 2) - cplx(1.0)) < 1e-12);
  CHECK(std::abs(u.ux(2, 2) - cplx(0.0, 1.0)) < 1e-12);

  std::mt19937_64 rng(11);
  u = links_from_potential(oracle::random_potential(g, rng, 10.0), 0.7);
  for (const auto& v : u.ux.values()) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
  for (const auto& v : u.uy.values()) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
  CHECK_THROWS_AS(links_from_potential(a, 0.0), std::invalid_argument);
}

TEST_CASE("scalar gradient") {
  const GridSpec g(6, 5, 0.5);
  const auto zero = grad_scalar(RealScalarField(g, Location::vertex, 2.5));
  CHECK(oracle::max_abs(zero.x) == 0.0);
  CHECK(oracle::max_abs(zero.y) == 0.0);

  RealScalarField xf(g, Location::vertex);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) xf(i, j) = g.x(i);
  }
  const auto gx = grad_scalar(xf);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) CHECK(gx.x(i, j) == doctest::Approx(1.0));
  }

  std::mt19937_64 rng(12);
  const RealScalarField f = oracle::random_real(g, rng);
  const auto gr = grad_scalar(f);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(gr.x(i, j) - (f((i + 1) % g.nx, j) - f(i, j)) / g.h) < 1e-12);
  }
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(gr.y(i, j) - (f(i, j + 1) - f(i, j)) / g.h) < 1e-12);
  }
}

TEST_CASE("A-gradient") {
  const GridSpec g(4, 4, 1.0);
  std::mt19937_64 rng(13);
  const ScalarField psi = oracle::random_psi(g, rng);
  const auto plain = grad_scalar(psi);
  const auto twisted = a_gradient(psi, unit_links(g, 1.0));
  CHECK(oracle::max_abs_diff(plain.x, twisted.x) == 0.0);
  CHECK(oracle::max_abs_diff(plain.y, twisted.y) == 0.0);

  const auto c = a_gradient(ScalarField(g, Location::vertex, cplx(0.3, -2.0)), unit_links(g, 1.0));
  CHECK(oracle::max_abs(c.x) == 0.0);
  CHECK(oracle::max_abs(c.y) == 0.0);

  ScalarField p(g, Location::vertex);
  p(1, 1) = 1.0;
  p(2, 1) = cplx(0.0, 1.0);
  LinkVariables u = unit_links(g, 1.0);
  const cplx e = std::polar(1.0, std::numbers::pi / 4.0);
  u.ux(1, 1) = e;
  const auto d = a_gradient(p, u);
  CHECK(std::abs(d.x(1, 1) - (cplx(0.0, 1.0) * e - 1.0)) < 1e-15);
}

TEST_CASE("twisted Laplacian against the link-sum oracle") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const GridSpec g = random_grid(rng);
    const ScalarField psi = oracle::random_psi(g, rng);
    const LinkVariables u = links_from_potential(oracle::random_potential(g, rng, 3.0), 1.3);
    const ScalarField got = twisted_laplacian(psi, u);
    const ScalarField want = oracle::twisted_laplacian(psi, u);
    CHECK(oracle::max_abs_diff(got, want) <= 1e-12 * scale_of(want));
  }
}

TEST_CASE("twisted Laplacian basic properties") {
  const GridSpec g(8, 6, 0.5);
  const ScalarField c(g, Location::vertex, cplx(0.4, 0.7));
  CHECK(oracle::max_abs(twisted_laplacian(c, unit_links(g, 1.0))) < 1e-13);

  std::mt19937_64 rng(15);
  const ScalarField psi = oracle::random_psi(g, rng);
  CHECK(oracle::max_abs_diff(twisted_laplacian(psi, unit_links(g, 1.0)), laplacian_scalar(psi)) < 1e-12);

  // Hand evaluation at an interior site.
  const GridSpec g4(4, 4, 1.0);
  const ScalarField q = oracle::random_psi(g4, rng);
  const LinkVariables u = links_from_potential(oracle::random_potential(g4, rng), 1.0);
  const int i = 1, j = 1;
  const cplx hand = q(i + 1, j) * u.ux(i, j) - 2.0 * q(i, j) + q(i - 1, j) * std::conj(u.ux(i - 1, j)) +
                    q(i, j + 1) * u.uy(i, j) - 2.0 * q(i, j) + q(i, j - 1) * std::conj(u.uy(i, j - 1));
  CHECK(std::abs(twisted_laplacian(q, u)(i, j) - hand) < 1e-13);
}

TEST_CASE("twisted Laplacian is Hermitian and non-positive") {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 100; ++t) {
    const GridSpec g = random_grid(rng);
    const LinkVariables u = links_from_potential(oracle::random_potential(g, rng, 2.0), 0.9);
    const ScalarField a = oracle::random_psi(g, rng);
    const ScalarField b = oracle::random_psi(g, rng);
    const cplx lhs = weighted_inner(a, twisted_laplacian(b, u));
    const cplx rhs = weighted_inner(twisted_laplacian(a, u), b);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    const cplx q = weighted_inner(a, twisted_laplacian(a, u));
    CHECK(q.real() <= 0.0);
    CHECK(std::abs(q.imag()) <= 1e-12 * std::abs(q));
  }
}

TEST_CASE("twisted Laplacian converges at second order") {
  const double lx = 8.0, ly = 8.0, kappa = 1.5;
  const double kx = 2.0 * std::numbers::pi / lx, ky = std::numbers::pi / ly;
  auto psi_f = [&](double x, double y) {
    return std::polar(1.0, kx * x) * (1.0 + 0.3 * std::cos(ky * y)) +
           cplx(0.0, 0.2) * std::cos(2.0 * ky * y) * std::sin(kx * x);
  };
  auto ax_f = [&](double x, double y) { return 0.8 * std::cos(ky * y) + 0.5 * std::sin(kx * x); };
  auto ay_f = [&](double x, double y) { return 0.6 * std::sin(ky * y) * std::cos(kx * x); };
  // (grad + iA/kappa)^2 psi = Lap psi + (2i/kappa) A.grad psi + (i/kappa) div A psi - |A|^2 psi / kappa^2
  auto exact = [&](double x, double y) {
    const cplx e = std::polar(1.0, kx * x);
    const double cy = std::cos(ky * y), c2 = std::cos(2.0 * ky * y);
    const cplx i1(0.0, 1.0);
    const cplx p = psi_f(x, y);
    const cplx px = i1 * kx * e * (1.0 + 0.3 * cy) + 0.2 * i1 * c2 * kx * std::cos(kx * x);
    const cplx py = -0.3 * ky * std::sin(ky * y) * e - 0.4 * i1 * ky * std::sin(2.0 * ky * y) * std::sin(kx * x);
    const cplx lap = -kx * kx * e * (1.0 + 0.3 * cy) - 0.3 * ky * ky * cy * e -
                     0.2 * i1 * c2 * kx * kx * std::sin(kx * x) - 0.8 * i1 * ky * ky * c2 * std::sin(kx * x);
    const double ax = ax_f(x, y), ay = ay_f(x, y);
    const double div = 0.5 * kx * std::cos(kx * x) + 0.6 * ky * std::cos(ky * y) * std::cos(kx * x);
    return lap + 2.0 * i1 / kappa * (ax * px + ay * py) + i1 / kappa * div * p - (ax * ax + ay * ay) / (kappa * kappa) * p;
  };
  std::vector<double> err;
  for (int n : {16, 32, 64}) {
    const double h = lx / n;
    const GridSpec g(n, static_cast<int>(std::lround(ly / h)) + 1, h);
    ScalarField psi(g, Location::vertex);
    RealVectorField a(g);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        psi(i, j) = psi_f(g.x(i), g.y(j));
        a.x(i, j) = ax_f(g.x(i) + 0.5 * h, g.y(j));
        if (j + 1 < g.ny) a.y(i, j) = ay_f(g.x(i), g.y(j) + 0.5 * h);
      }
    }
    const ScalarField lap = twisted_laplacian(psi, links_from_potential(a, kappa));
    double e = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) e = std::max(e, std::abs(lap(i, j) - exact(g.x(i), g.y(j))));
    }
    err.push_back(e);
  }
  CHECK(err[0] / err[1] > 3.5);
  CHECK(err[1] / err[2] > 3.5);
}

TEST_CASE("plain Laplacian") {
  const GridSpec g(16, 6, 0.5);
  CHECK(oracle::max_abs(laplacian_scalar(RealScalarField(g, Location::vertex, 3.0))) < 1e-13);

  const double len = g.nx * g.h;
  RealScalarField f(g, Location::vertex);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) f(i, j) = std::cos(2.0 * std::numbers::pi * g.x(i) / len);
  }
  const double lambda = -(2.0 / (g.h * g.h)) * (1.0 - std::cos(2.0 * std::numbers::pi * g.h / len));
  const RealScalarField lf = laplacian_scalar(f);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::abs(lf[k] - lambda * f[k]) < 1e-12);

  std::mt19937_64 rng(17);
  const GridSpec g4(4, 4, 0.8);
  const RealScalarField r = oracle::random_real(g4, rng);
  ScalarField rc(g4, Location::vertex);
  for (std::size_t k = 0; k < r.size(); ++k) rc[k] = r[k];
  const ScalarField want = oracle::twisted_laplacian(rc, unit_links(g4, 1.0));
  const RealScalarField got = laplacian_scalar(r);
  for (std::size_t k = 0; k < r.size(); ++k) CHECK(std::abs(got[k] - want[k].real()) < 1e-12);
}

TEST_CASE("vector Laplacian") {
  const GridSpec g(8, 7, 0.5);
  RealVectorField zero(g);
  CHECK(oracle::max_abs(laplacian_vector(zero, 0.0).x) == 0.0);

  const double hz = 1.7;
  RealVectorField lin(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) lin.x(i, j) = -hz * g.y(j) + 0.3;
  }
  const RealVectorField r = laplacian_vector(lin, hz);
  CHECK(oracle::max_abs(r.x) < 1e-12);
  CHECK(oracle::max_abs(r.y) < 1e-12);

  std::mt19937_64 rng(18);
  for (int t = 0; t < 30; ++t) {
    const GridSpec gr = random_grid(rng);
    const RealVectorField a = oracle::random_potential(gr, rng);
    const double hzr = std::normal_distribution<double>()(rng);
    for (double field : {0.0, hzr}) {
      const RealVectorField got = laplacian_vector(a, field);
      const RealVectorField want = oracle::laplacian_vector(a, field);
      CHECK(oracle::max_abs_diff(got.x, want.x) < 1e-12 * std::max(1.0, oracle::max_abs(want.x)));
      CHECK(oracle::max_abs_diff(got.y, want.y) < 1e-12 * std::max(1.0, oracle::max_abs(want.y)));
    }
  }
}

TEST_CASE("curl") {
  const GridSpec g(6, 5, 0.5);
  CHECK(oracle::max_abs(curl_z(RealVectorField(g))) == 0.0);
  RealVectorField a(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) a.x(i, j) = -2.5 * g.y(j);
  }
  const auto field1 = curl_z(a);
  for (double b : field1.values()) CHECK(std::abs(b - 2.5) < 1e-12);

  std::mt19937_64 rng(19);
  for (int t = 0; t < 50; ++t) {
    const GridSpec gr = random_grid(rng);
    const RealScalarField f = oracle::random_real(gr, rng);
    CHECK(oracle::max_abs(curl_z(grad_scalar(f))) < 1e-12);
    const RealVectorField r = oracle::random_potential(gr, rng);
    CHECK(oracle::max_abs_diff(curl_z(r), oracle::curl(r)) < 1e-12);
  }
}

TEST_CASE("curl adjoint") {
  std::mt19937_64 rng(20);
  for (int t = 0; t < 30; ++t) {
    const GridSpec g = random_grid(rng);
    const RealVectorField a = oracle::random_potential(g, rng);
    CellField b(g, Location::cell);
    for (auto& v : b.values()) v = std::normal_distribution<double>()(rng);
    double lhs = 0.0, rhs = 0.0;
    const CellField ca = curl_z(a);
    for (std::size_t k = 0; k < b.size(); ++k) lhs += ca[k] * b[k];
    const RealVectorField ct = curl_adjoint(b);
    for (std::size_t k = 0; k < a.x.size(); ++k) rhs += a.x[k] * ct.x[k];
    for (std::size_t k = 0; k < a.y.size(); ++k) rhs += a.y[k] * ct.y[k];
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    CHECK(oracle::max_abs(divergence(ct)) < 1e-12);
  }
}

TEST_CASE("divergence") {
  const GridSpec g(6, 5, 0.5);
  const RealVectorField c(g, 1.3);
  const RealScalarField dc = divergence(c);
  for (int j = 1; j + 1 < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(dc(i, j)) < 1e-12);
  }

  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    const GridSpec gr = random_grid(rng);
    const RealScalarField f = oracle::random_real(gr, rng);
    const RealScalarField d = divergence(grad_scalar(f));
    const RealScalarField l = laplacian_scalar(f);
    for (int j = 1; j + 1 < gr.ny; ++j) {
      for (int i = 0; i < gr.nx; ++i) CHECK(std::abs(d(i, j) - l(i, j)) < 1e-11);
    }
    const RealVectorField a = oracle::random_potential(gr, rng);
    CHECK(oracle::max_abs_diff(divergence(a), oracle::divergence(a)) < 1e-12);
  }
}

TEST_CASE("supercurrent") {
  const GridSpec g(8, 6, 0.5);
  const double kappa = 2.0;
  const ScalarField one(g, Location::vertex, cplx(0.7));
  const auto j0 = supercurrent(one, unit_links(g, kappa));
  CHECK(oracle::max_abs(j0.x) == 0.0);
  CHECK(oracle::max_abs(j0.y) == 0.0);

  RealVectorField a(g);
  for (auto& v : a.x.values()) v = 1e-3;
  const auto js = supercurrent(ScalarField(g, Location::vertex, cplx(1.0)), links_from_potential(a, kappa));
  for (double v : js.x.values()) CHECK(std::abs(v + 1e-3 / kappa) < 1e-9);

  ScalarField wave(g, Location::vertex);
  const double dtheta = 2.0 * std::numbers::pi / g.nx;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) wave(i, j) = std::polar(1.0, dtheta * i);
  }
  const auto jw = supercurrent(wave, unit_links(g, kappa));
  for (double v : jw.x.values()) CHECK(std::abs(v + std::sin(dtheta) / g.h) < 1e-12);

  std::mt19937_64 rng(22);
  for (int t = 0; t < 50; ++t) {
    const GridSpec gr = random_grid(rng);
    const ScalarField psi = oracle::random_psi(gr, rng);
    const RealVectorField ar = oracle::random_potential(gr, rng, 2.0);
    const auto got = supercurrent(psi, links_from_potential(ar, 1.1));
    const auto want = oracle::supercurrent(psi, ar, 1.1);
    CHECK(oracle::max_abs_diff(got.x, want.x) < 1e-12 * std::max(1.0, oracle::max_abs(want.x)));
    CHECK(oracle::max_abs_diff(got.y, want.y) < 1e-12 * std::max(1.0, oracle::max_abs(want.y)));
  }
}

TEST_CASE("gauge transformation") {
  const GridSpec g(6, 5, 0.5);
  std::mt19937_64 rng(23);
  const ScalarField psi = oracle::random_psi(g, rng);
  const RealVectorField a = oracle::random_potential(g, rng);

  auto [p0, a0] = gauge_transform(psi, a, RealScalarField(g, Location::vertex), 2.0);
  CHECK(p0 == psi);
  CHECK(a0 == a);

  auto [p1, a1] = gauge_transform(psi, a, RealScalarField(g, Location::vertex, 0.9), 2.0);
  CHECK(oracle::max_abs_diff(a1.x, a.x) == 0.0);
  const cplx rot = p1(2, 2) / psi(2, 2);
  for (std::size_t k = 0; k < psi.size(); ++k) CHECK(std::abs(p1[k] - rot * psi[k]) < 1e-12);

  const RealScalarField chi = oracle::random_real(g, rng, 3.0);
  auto [p2, a2] = gauge_transform(psi, a, chi, 2.0);
  for (std::size_t k = 0; k < psi.size(); ++k) CHECK(std::abs(std::abs(p2[k]) - std::abs(psi[k])) < 1e-12);
}

TEST_CASE("operators are gauge covariant") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 30; ++t) {
    const GridSpec g = random_grid(rng);
    const double kappa = 0.5 + std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const ScalarField psi = oracle::random_psi(g, rng);
    const RealVectorField a = oracle::random_potential(g, rng);
    const RealScalarField chi = oracle::random_real(g, rng, 4.0);
    auto [pt, at] = gauge_transform(psi, a, chi, kappa);
    const LinkVariables u = links_from_potential(a, kappa);
    const LinkVariables ut = links_from_potential(at, kappa);

    CHECK(oracle::max_abs_diff(curl_z(a), curl_z(at)) < 1e-10 * std::max(1.0, oracle::max_abs(curl_z(a))));
    const auto j1 = supercurrent(psi, u);
    const auto j2 = supercurrent(pt, ut);
    CHECK(oracle::max_abs_diff(j1.x, j2.x) < 1e-10 * std::max(1.0, oracle::max_abs(j1.x)));
    CHECK(oracle::max_abs_diff(j1.y, j2.y) < 1e-10 * std::max(1.0, oracle::max_abs(j1.y)));
    // Delta_A transforms like psi itself.
    const ScalarField l1 = twisted_laplacian(psi, u);
    const ScalarField l2 = twisted_laplacian(pt, ut);
    for (std::size_t k = 0; k < psi.size(); ++k) {
      CHECK(std::abs(l2[k] - l1[k] * std::polar(1.0, -chi[k] / kappa)) < 1e-10 * scale_of(l1));
    }
    const double e1 = weighted_inner(psi, l1).real();
    const double e2 = weighted_inner(pt, l2).real();
    CHECK(std::abs(e1 - e2) < 1e-10 * std::max(1.0, std::abs(e1)));
  }
}
