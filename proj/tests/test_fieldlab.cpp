#include <doctest.h>

#include <numbers>
#include <sstream>

#include "nonloc/field_io.hpp"
#include "support.hpp"

using namespace nonloc;
using testing::max_diff;

namespace {

constexpr double pi = std::numbers::pi;

// [0, 2pi) shifted to the box-centred convention: x in [-pi, pi).
Grid two_pi(int dim = 1, std::size_t n = 128) { return Grid::cube(dim, n, 2.0 * pi); }

RealField sample_real(const Grid& g, double (*f)(double)) {
  return RealField::sample(g, [&](const Point& r) { return f(r[0]); });
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid p = Grid::cube(1, 8, 4.0);
  CHECK(p.spacing(0) == doctest::Approx(0.5));
  CHECK(p.coordinate(0, 0) == doctest::Approx(-2.0));
  CHECK(p.coordinate(0, 4) == doctest::Approx(0.0));
  const Grid d = Grid::cube(1, 7, 4.0, Boundary::dirichlet_zero);
  CHECK(d.spacing(0) == doctest::Approx(0.5));
  CHECK(d.coordinate(0, 0) == doctest::Approx(-1.5));
  CHECK(d.coordinate(0, 6) == doctest::Approx(1.5));

  const Grid g({4, 6}, {2.0, 3.0});
  CHECK(g.size() == 24);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flatten(g.unflatten(i)) == i);
  CHECK(g.cell_volume() == doctest::Approx(0.25));

  CHECK_THROWS_AS(Grid::cube(4, 8, 1.0), DomainError);
  CHECK_THROWS_AS(Grid::cube(1, 8, -1.0), DomainError);
  CHECK_THROWS(Grid::cube(1, 2, 1.0));
}

TEST_CASE("gradient") {
  const Grid g = two_pi();
  SUBCASE("constant") {
    const RealField c = RealField::sample(g, [](const Point&) { return 3.7; });
    CHECK(max_abs(gradient(c, 0)) < 1e-13);
  }
  SUBCASE("sin to cos") {
    const RealField s = sample_real(g, [](double x) { return std::sin(x); });
    CHECK(max_diff(gradient(s, 0), sample_real(g, [](double x) { return std::cos(x); })) <= 1e-10);
  }
  SUBCASE("plane wave") {
    const double k = 5.0;  // on the lattice 2 pi m / L with m = 5
    const ComplexField f = ComplexField::sample(g, [&](const Point& r) { return std::polar(1.0, k * r[0]); });
    const ComplexField want = Complex(0.0, k) * f;
    CHECK(max_diff(gradient(f, 0), want) <= 1e-11);
  }
  SUBCASE("axis out of range") {
    const RealField f(g);
    CHECK_THROWS_AS(gradient(f, 1), DomainError);
    CHECK_THROWS_AS(gradient(f, -1), DomainError);
  }
  SUBCASE("dirichlet central difference") {
    const Grid d = Grid::cube(1, 399, 20.0, Boundary::dirichlet_zero);
    const RealField f = sample_real(d, [](double x) { return std::exp(-x * x / 2.0); });
    const RealField want = sample_real(d, [](double x) { return -x * std::exp(-x * x / 2.0); });
    const double h = d.spacing(0);
    CHECK(max_diff(gradient(f, 0), want) <= h * h);
  }
}

TEST_CASE("divergence") {
  const Grid g = Grid::cube(2, 64, 16.0);
  SUBCASE("zero field") { CHECK(max_abs(divergence(VectorField(g))) == 0.0); }
  SUBCASE("gradient field gives laplacian") {
    const RealField f = testing::random_trig_real(g, 11);
    CHECK(max_diff(divergence(gradients(f)), laplacian(f)) <= 1e-9);
  }
  SUBCASE("rotational field") {
    VectorField v(g);
    v[0] = RealField::sample(g, [](const Point& r) { return -r[1] * std::exp(-(r[0] * r[0] + r[1] * r[1]) / 2.0); });
    v[1] = RealField::sample(g, [](const Point& r) { return r[0] * std::exp(-(r[0] * r[0] + r[1] * r[1]) / 2.0); });
    CHECK(max_abs(divergence(v)) <= 1e-9);
  }
}

TEST_CASE("laplacian") {
  const Grid g = two_pi();
  CHECK(max_abs(laplacian(RealField::sample(g, [](const Point&) { return 1.0; }))) < 1e-12);
  const RealField s = sample_real(g, [](double x) { return std::sin(x); });
  RealField want = s;
  want *= -1.0;
  CHECK(max_diff(laplacian(s), want) <= 1e-9);

  SUBCASE("dirichlet gaussian is second order") {
    auto err = [](std::size_t n) {
      const Grid d = Grid::cube(1, n, 20.0, Boundary::dirichlet_zero);
      const RealField f = sample_real(d, [](double x) { return std::exp(-x * x / 2.0); });
      const RealField w = sample_real(d, [](double x) { return (x * x - 1.0) * std::exp(-x * x / 2.0); });
      return max_diff(laplacian(f), w);
    };
    const double e1 = err(199), e2 = err(399);  // h = 0.1, 0.05
    CHECK(e1 <= 0.1 * 0.1);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("momentum transforms") {
  const Grid g = Grid::cube(1, 64, 10.0);
  CHECK(max_abs(to_momentum(ComplexField(g))) == 0.0);

  const ComplexField f = testing::random_trig(g, 3);
  CHECK(max_diff(from_momentum(to_momentum(f)), f) <= 1e-12);

  const std::size_t bin = 7;
  const double k0 = g.wavenumber(0, bin);
  const ComplexField pw = ComplexField::sample(g, [&](const Point& r) { return std::polar(1.0, k0 * r[0]); });
  const ComplexField spec = to_momentum(pw);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == bin)
      CHECK(std::abs(spec[i]) == doctest::Approx(std::sqrt(64.0)));
    else
      CHECK(std::abs(spec[i]) < 1e-12);
  }

  const Grid d = Grid::cube(1, 63, 10.0, Boundary::dirichlet_zero);
  CHECK_THROWS_AS(to_momentum(ComplexField(d)), UnsupportedBoundaryError);
  CHECK_THROWS_AS(from_momentum(ComplexField(d)), UnsupportedBoundaryError);
}

TEST_CASE("integrate") {
  const Grid g = Grid::cube(1, 100, 7.5);
  CHECK(integrate(RealField::sample(g, [](const Point&) { return 1.0; })) == doctest::Approx(7.5).epsilon(1e-14));

  const Grid w = Grid::cube(1, 512, 40.0);
  const RealField gauss = RealField::sample(w, [](const Point& r) { return std::exp(-r[0] * r[0]) / std::sqrt(pi); });
  CHECK(std::abs(integrate(gauss) - 1.0) <= 1e-8);

  // Periodic points are symmetric about 0 apart from the first one at -L/2,
  // so use the dirichlet layout for exact mirror symmetry.
  const Grid d = Grid::cube(1, 101, 10.0, Boundary::dirichlet_zero);
  const RealField odd = RealField::sample(d, [](const Point& r) { return r[0] * std::exp(-r[0] * r[0]); });
  CHECK(std::abs(integrate(odd)) <= 1e-12);
}

TEST_CASE("field properties") {
  const Grid g = Grid::cube(2, 32, 8.0);
  const ComplexField f = testing::random_trig(g, 21), h = testing::random_trig(g, 22);
  const Complex a(0.3, -1.2), b(2.0, 0.5);

  SUBCASE("linearity") {
    ComplexField lhs = gradient(a * f + b * h, 1);
    ComplexField rhs = a * gradient(f, 1) + b * gradient(h, 1);
    CHECK(max_diff(lhs, rhs) <= 1e-12 * max_abs(rhs) + 1e-12);
  }
  SUBCASE("parseval") {
    const ComplexField fk = to_momentum(f);
    double s = 0.0;
    for (std::size_t i = 0; i < fk.size(); ++i) s += std::norm(fk[i]);
    CHECK(std::abs(norm_squared(f) - s * g.cell_volume()) <= 1e-10 * norm_squared(f));
  }
  SUBCASE("integration by parts") {
    const RealField fr = real_part(f), gr = imag_part(h);
    for (int axis = 0; axis < 2; ++axis) {
      const double lhs = integrate(multiply(fr, gradient(gr, axis)));
      const double rhs = -integrate(multiply(gradient(fr, axis), gr));
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }
  SUBCASE("laplacian equals divergence of gradient") {
    const RealField fr = real_part(f);
    CHECK(max_diff(laplacian(fr), divergence(gradients(fr))) <= 1e-9);
  }
  SUBCASE("inputs untouched") {
    const ComplexField copy = f;
    (void)laplacian(f);
    (void)to_momentum(f);
    CHECK(copy.data() == f.data());
  }
}

TEST_CASE("fields reject mismatched grids") {
  ComplexField a(Grid::cube(1, 16, 1.0));
  const ComplexField b(Grid::cube(1, 16, 2.0));
  CHECK_THROWS_AS(a += b, ShapeError);
  CHECK_THROWS_AS(ComplexField(Grid::cube(1, 16, 1.0), std::vector<Complex>(3)), ShapeError);
  RealField n(Grid::cube(1, 16, 1.0));
  CHECK(n.all_finite());
  n[3] = std::nan("");
  CHECK_FALSE(n.all_finite());
}

TEST_CASE("csv round trip is bit exact") {
  const Grid g({6, 5}, {3.0, 2.5}, Boundary::dirichlet_zero);
  const ComplexField f = testing::random_blobs(g, 5);
  std::stringstream ss;
  write_csv(ss, f);
  const ComplexField back = read_complex_csv(ss);
  CHECK(back.grid() == g);
  CHECK(back.data() == f.data());

  const RealField r = real_part(f);
  std::stringstream rs;
  write_csv(rs, r);
  const RealField rb = read_real_csv(rs);
  CHECK(rb.data() == r.data());

  std::stringstream bad("# grid: dim=1 points=4 extent=1 boundary=periodic\n0,1,2\n");
  CHECK_THROWS(read_complex_csv(bad));
  std::stringstream noheader("0,1,2\n");
  CHECK_THROWS(read_complex_csv(noheader));
}
