#include <doctest.h>

#include <numbers>

#include "nonloc/potentials.hpp"
#include "support.hpp"

using namespace nonloc;
using testing::max_diff;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("frahn-lemmer kernel values") {
  const Point o{0.0, 0.0, 0.0};
  CHECK(frahn_lemmer_eval(o, o, 1.0, 1.0, 3) == doctest::Approx(0.179587).epsilon(1e-6));
  CHECK(frahn_lemmer_eval(o, o, 1.0, 1.0, 1) == doctest::Approx(0.564190).epsilon(1e-6));
  CHECK(frahn_lemmer_eval(o, o, 1.0, 1.0, 1) == doctest::Approx(1.0 / std::sqrt(pi)));
  const Point a{0.3, -0.2, 1.0}, b{-0.5, 0.4, 0.1};
  CHECK(frahn_lemmer_eval(a, b, 2.0, 0.7, 3) == frahn_lemmer_eval(b, a, 2.0, 0.7, 3));
  CHECK(frahn_lemmer_eval(a, b, 2.0, 0.7, 2) > 0.0);
  CHECK_THROWS_AS(frahn_lemmer_eval(o, o, 1.0, 0.0, 1), DomainError);
  CHECK_THROWS_AS(frahn_lemmer_eval(o, o, 1.0, -1.0, 1), DomainError);
  CHECK_THROWS_AS(NonlocalKernelSpec::frahn_lemmer(1.0, 0.0), DomainError);
}

TEST_CASE("kernel normalisation") {
  const Grid g = Grid::cube(1, 256, 20.0);
  CHECK(std::abs(kernel_normalization(NonlocalKernelSpec::frahn_lemmer(1.0, 1.0), g) - 1.0) <= 1e-8);
  CHECK(std::abs(kernel_normalization(NonlocalKernelSpec::frahn_lemmer(1.0, 0.85), g) - 1.0) <= 1e-6);

  SUBCASE("tabulated delta-like kernel") {
    const Grid t = Grid::cube(1, 64, 10.0);
    const double h = t.spacing(0);
    std::vector<double> k(64 * 64, 0.0);
    for (std::size_t i = 0; i < 64; ++i) k[i * 64 + i] = 1.0 / h;
    CHECK(kernel_normalization(NonlocalKernelSpec::tabulated(64, k, true), t) == doctest::Approx(1.0));
  }
  SUBCASE("tabulated narrow gaussian against double loop") {
    const Grid t = Grid::cube(1, 128, 10.0);
    const double beta = 4.0 * t.spacing(0);
    std::vector<double> k(128 * 128);
    for (std::size_t i = 0; i < 128; ++i)
      for (std::size_t j = 0; j < 128; ++j) {
        double d = t.coordinate(0, i) - t.coordinate(0, j);
        d -= 10.0 * std::round(d / 10.0);
        k[i * 128 + j] = frahn_lemmer_eval({d, 0, 0}, {0, 0, 0}, 1.0, beta, 1);
      }
    const auto spec = NonlocalKernelSpec::tabulated(128, k, true);
    CHECK(std::abs(kernel_normalization(spec, t) - 1.0) <= 1e-6);
    const ComplexField psi = testing::random_blobs(t, 9);
    CHECK(max_diff(apply_nonlocal(spec, psi), testing::direct_kernel_quadrature(psi, 1.0, beta)) <= 1e-12);
  }
  SUBCASE("resolution limits") {
    CHECK_THROWS_AS(kernel_normalization(NonlocalKernelSpec::frahn_lemmer(1.0, 0.1), g), ResolutionError);
    CHECK_THROWS_AS(kernel_normalization(NonlocalKernelSpec::frahn_lemmer(1.0, 3.0), g), ResolutionError);
    CHECK_NOTHROW(NonlocalKernelSpec::frahn_lemmer(1.0, 2.0 * g.spacing(0)).check_resolvable(g));
  }
  SUBCASE("tabulated symmetry flag is checked") {
    std::vector<double> k(16, 0.0);
    k[1] = 1.0;
    CHECK_THROWS_AS(NonlocalKernelSpec::tabulated(4, k, true), DomainError);
    CHECK_NOTHROW(NonlocalKernelSpec::tabulated(4, k, false));
    CHECK_THROWS_AS(NonlocalKernelSpec::tabulated(4, std::vector<double>(15), false), ShapeError);
  }
}

TEST_CASE("apply_nonlocal by quadrature") {
  const Grid g = Grid::cube(1, 256, 20.0);
  const auto fl = NonlocalKernelSpec::frahn_lemmer(1.5, 0.85);
  CHECK(max_abs(apply_nonlocal(fl, ComplexField(g))) == 0.0);

  const Complex c(0.4, -1.1);
  const ComplexField cst = ComplexField::sample(g, [&](const Point&) { return c; });
  CHECK(max_diff(apply_nonlocal(fl, cst), 1.5 * cst) <= 1e-6);

  SUBCASE("matches the double loop in 1-D and 2-D") {
    const ComplexField psi = testing::random_blobs(g, 4);
    CHECK(max_diff(apply_nonlocal(fl, psi), testing::direct_kernel_quadrature(psi, 1.5, 0.85)) <= 1e-12);
    const Grid g2 = Grid::cube(2, 32, 12.0);
    const ComplexField p2 = testing::random_blobs(g2, 5);
    const auto fl2 = NonlocalKernelSpec::frahn_lemmer(0.7, 1.2);
    CHECK(max_diff(apply_nonlocal(fl2, p2), testing::direct_kernel_quadrature(p2, 0.7, 1.2)) <= 1e-12);
  }
  SUBCASE("narrow beta tends to V0 psi") {
    const Grid f = Grid::cube(1, 2048, 20.0);
    const ComplexField psi = ComplexField::sample(f, [](const Point& r) { return std::exp(-r[0] * r[0] / 2.0); });
    double prev = 1e300;
    for (double mult : {16.0, 8.0, 4.0}) {
      const double beta = mult * f.spacing(0);
      const double err = max_diff(apply_nonlocal(NonlocalKernelSpec::frahn_lemmer(1.0, beta), psi), psi);
      CHECK(err <= beta * beta / 4.0 * 1.01);  // |psi''| <= 1
      CHECK(err < prev);
      prev = err;
    }
  }
  SUBCASE("self adjoint") {
    const ComplexField a = testing::random_blobs(g, 7), b = testing::random_blobs(g, 8);
    const Complex lhs = inner_product(a, apply_nonlocal(fl, b));
    const Complex rhs = inner_product(apply_nonlocal(fl, a), b);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
  SUBCASE("tabulated kernel on the wrong grid") {
    const auto tab = NonlocalKernelSpec::tabulated(4, std::vector<double>(16, 0.0), true);
    CHECK_THROWS_AS(apply_nonlocal(tab, ComplexField(g)), ShapeError);
    CHECK_THROWS_AS(apply_nonlocal(tab, ComplexField(Grid::cube(2, 4, 1.0))), ShapeError);
  }
}

TEST_CASE("apply_nonlocal in momentum space") {
  const Grid g = Grid::cube(1, 128, 16.0);
  const double v0 = 2.0, beta = 0.85;
  const double k = g.wavenumber(0, 9);
  const ComplexField pw = ComplexField::sample(g, [&](const Point& r) { return std::polar(1.0, k * r[0]); });
  const double mult = v0 * std::exp(-k * k * beta * beta / 4.0);
  CHECK(max_diff(apply_nonlocal_momentum(v0, beta, pw), mult * pw) <= 1e-13);
  CHECK(frahn_lemmer_multiplier(v0, beta, k * k) == doctest::Approx(mult));

  const ComplexField cst = ComplexField::sample(g, [](const Point&) { return Complex(1.0, 2.0); });
  CHECK(max_diff(apply_nonlocal_momentum(v0, beta, cst), v0 * cst) <= 1e-13);

  SUBCASE("monotone multiplier") {
    double prev = 1e300;
    for (std::size_t i = 0; i <= 64; ++i) {
      const double kk = 2.0 * pi * static_cast<double>(i) / 16.0;
      const double m = frahn_lemmer_multiplier(v0, beta, kk * kk);
      CHECK(m <= prev);
      CHECK(m > 0.0);
      prev = m;
    }
  }
  SUBCASE("agrees with quadrature on smooth states") {
    for (unsigned seed : {1u, 2u, 3u}) {
      const ComplexField psi = testing::random_trig(g, seed, 6);
      const auto q = apply_nonlocal(NonlocalKernelSpec::frahn_lemmer(v0, beta), psi);
      CHECK(testing::rel_l2(apply_nonlocal_momentum(v0, beta, psi), q) <= 1e-6);
    }
  }
  CHECK_THROWS_AS(apply_nonlocal_momentum(v0, beta, ComplexField(Grid::cube(1, 31, 4.0, Boundary::dirichlet_zero))),
                  UnsupportedBoundaryError);
}

TEST_CASE("dispersion relation") {
  SUBCASE("free particle") {
    const auto r = dispersion_solve(0.5, 0.0, 0.85);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - 1.0) <= 1e-12);
  }
  SUBCASE("E equal to V0 has the k = 0 root") {
    for (double beta : {0.3, 0.85, 2.0}) {
      const auto r = dispersion_solve(1.3, 1.3, beta);
      REQUIRE_FALSE(r.empty());
      CHECK(std::abs(r.front()) <= 1e-12);
    }
  }
  SUBCASE("against a dense scan") {
    struct Case {
      double e, v0, beta;
    };
    for (const Case c : {Case{0.9, 1.0, 0.85}, Case{1.5, 2.0, 2.0}, Case{2.0, 1.0, 0.85}, Case{0.95, 1.0, 3.0},
                         Case{-0.5, -1.0, 1.0}}) {
      CAPTURE(c.e);
      CAPTURE(c.beta);
      const auto got = dispersion_solve(c.e, c.v0, c.beta);
      const auto want = testing::dispersion_scan(c.e, c.v0, c.beta, 1.0, 1.0);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got[i] - want[i]) <= 1e-10);
        CHECK(std::abs(dispersion_residual(got[i], c.e, c.v0, c.beta, 1.0, 1.0)) <= 1e-12);
      }
    }
  }
  SUBCASE("no sign change gives an empty list") { CHECK(dispersion_solve(-1.0, 0.5, 1.0).empty()); }
}

TEST_CASE("local potentials") {
  const Grid g = Grid::cube(1, 16, 16.0);  // integer points -8..7
  CHECK(max_abs(eval_local(LocalPotentialSpec::none(), g).value) == 0.0);
  CHECK(eval_local(LocalPotentialSpec::none(), g).is_zero());

  const auto lin = eval_local(LocalPotentialSpec::linear(2.0), g);
  REQUIRE(g.coordinate(0, 11) == 3.0);
  CHECK(lin.value[11] == Complex(6.0, 0.0));
  CHECK(lin.is_real());
  CHECK(lin.gradient[0][0] == Complex(2.0, 0.0));

  const auto abs = eval_local(LocalPotentialSpec::complex_absorber(0.5, -2.0, 2.0), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    CHECK(abs.value[i].real() == 0.0);
    CHECK(abs.value[i].imag() == ((x >= -2.0 && x <= 2.0) ? -0.5 : 0.0));
  }
  CHECK_FALSE(abs.is_real());

  const auto har = eval_local(LocalPotentialSpec::harmonic(2.0, 0.5), Grid::cube(2, 8, 8.0));
  const Grid g2 = har.value.grid();
  for (std::size_t i = 0; i < g2.size(); ++i) {
    const Point r = g2.position(i);
    CHECK(har.value[i].real() == doctest::Approx(0.5 * 0.5 * 4.0 * (r[0] * r[0] + r[1] * r[1]) / 1.0));
    CHECK(har.gradient[1][i].real() == doctest::Approx(0.5 * 4.0 * r[1]));
  }

  const auto well = eval_local(LocalPotentialSpec::gaussian_well(3.0, 1.5), g);
  CHECK(well.value[8].real() == doctest::Approx(-3.0));
  CHECK(well.is_real());

  CHECK_THROWS_AS(LocalPotentialSpec::complex_absorber(-1.0), DomainError);
  CHECK_THROWS_AS(LocalPotentialSpec::gaussian_well(1.0, 0.0), DomainError);
}
