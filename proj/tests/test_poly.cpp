#include "sepalg/poly.hpp"

#include <doctest.h>

#include <random>

using namespace sepalg;

namespace {

std::vector<Sample> sample(const std::vector<Complex>& ts, auto&& fn) {
  std::vector<Sample> s;
  for (Complex t : ts) s.push_back({t, fn(t)});
  return s;
}

std::vector<Complex> disc_points(int count, double radius, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> ts;
  for (int k = 0; k < count; ++k) ts.push_back(sample_disc(rng, 0.0, radius));
  return ts;
}

// Independent least squares through the normal equations (A^H A) x = A^H v
// with monomial (unscaled) columns.
double normal_equations_rms(const std::vector<Sample>& s, int degree) {
  const auto rows = static_cast<Eigen::Index>(s.size());
  MatrixXc A(rows, degree + 1);
  VectorXc v(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Complex p = 1.0;
    for (int j = 0; j <= degree; ++j, p *= s[static_cast<std::size_t>(r)].t) A(r, j) = p;
    v[r] = s[static_cast<std::size_t>(r)].v;
  }
  const MatrixXc G = A.adjoint() * A;
  const VectorXc x = G.ldlt().solve(A.adjoint() * v);
  return (A * x - v).norm() / std::sqrt(static_cast<double>(rows));
}

}  // namespace

TEST_CASE("UniPoly trims and reports degree") {
  VectorXc c(4);
  c << 1.0, 2.0, 1e-12, 0.0;
  const UniPoly p(c);
  CHECK(p.degree() == 1);
  CHECK(UniPoly(VectorXc::Zero(3)).degree() == -1);
  CHECK(UniPoly(VectorXc::Zero(3)).is_zero());
  CHECK(p(Complex(2.0, 0.0)) == Complex(5.0, 0.0));

  VectorXc q(3);
  q << 1.0, 3.0, 5.0;
  const UniPoly d = UniPoly(q).derivative();
  CHECK(d.degree() == 1);
  CHECK(d.coeffs()[0] == Complex(3.0));
  CHECK(d.coeffs()[1] == Complex(10.0));
}

TEST_CASE("Horner matches term-by-term summation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    VectorXc c(12);
    for (auto& x : c) x = Complex(u(rng), u(rng));
    const Complex t(1.3 * u(rng), 1.3 * u(rng));
    Complex direct = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) direct += c[k] * std::pow(t, static_cast<int>(k));
    CHECK(std::abs(horner(c, t) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("fit_univariate examples") {
  const auto ts = annulus_points(8);
  const auto s = sample(ts, [](Complex t) { return t * t + 1.0; });
  const Fit fit = fit_univariate(s, 2);
  REQUIRE(fit.poly.degree() == 2);
  CHECK(std::abs(fit.poly.coeffs()[0] - 1.0) < 1e-10);
  CHECK(std::abs(fit.poly.coeffs()[1]) < 1e-10);
  CHECK(std::abs(fit.poly.coeffs()[2] - 1.0) < 1e-10);
  CHECK(fit.residual < 1e-10);

  const auto zeros = sample(ts, [](Complex) { return Complex{}; });
  const Fit z = fit_univariate(zeros, 3);
  CHECK(z.poly.is_zero());
  CHECK(z.residual == 0.0);
}

TEST_CASE("exp is not quadratic on the unit disc") {
  const auto s = sample(disc_points(12, 1.0, 5), [](Complex t) { return std::exp(t); });
  const Fit fit = fit_univariate(s, 2);
  CHECK(fit.residual > 1e-3);
  CHECK(fit.residual == doctest::Approx(normal_equations_rms(s, 2)).epsilon(1e-6));
}

TEST_CASE("fit_univariate rejects bad input") {
  const auto ts = annulus_points(5);
  CHECK_THROWS_AS(fit_univariate(sample(ts, [](Complex t) { return t; }), 2), FitError);
  std::vector<Sample> dup{{1.0, 1.0}, {1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}};
  CHECK_THROWS_AS(fit_univariate(dup, 1), FitError);
}

TEST_CASE("detect_degree examples") {
  const auto ts = annulus_points(30);
  auto cubic = detect_degree(sample(ts, [](Complex t) { return t * t * t - 2.0 * t; }), 6, 1e-8);
  REQUIRE(cubic);
  CHECK(cubic->degree == 3);
  CHECK(cubic->leading_magnitude == doctest::Approx(1.0));

  auto constant = detect_degree(sample(ts, [](Complex) { return Complex(5.0); }), 6, 1e-8);
  REQUIRE(constant);
  CHECK(constant->degree == 0);

  const auto disc = disc_points(30, 1.0, 9);
  const auto es = sample(disc, [](Complex t) { return std::exp(t); });
  CHECK_FALSE(detect_degree(es, 6, 1e-8).has_value());
  // Oracle: the best degree-6 fit really does leave more than tol.
  double vrms = 0.0;
  for (const auto& x : es) vrms += std::norm(x.v);
  vrms = std::sqrt(vrms / static_cast<double>(es.size()));
  CHECK(normal_equations_rms(es, 6) / (vrms + 1.0) > 1e-8);
}

TEST_CASE("detect_degree recovers random polynomials, independent of the sample set") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> mag(0.1, 10.0), ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> deg(0, 8);
  Rng trng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = deg(rng);
    VectorXc c(d + 1);
    for (auto& x : c) x = std::polar(mag(rng), ang(rng));
    const UniPoly p(c);
    const auto a = detect_degree(sample(annulus_points(30, trng), p), 12, 1e-8);
    const auto b = detect_degree(sample(annulus_points(30, trng), p), 12, 1e-8);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->degree == d);
    CHECK(b->degree == d);
  }
}

TEST_CASE("MultiPoly evaluation") {
  MultiPoly P(2, {{{2, 0, 0}, 1.0}, {{0, 1, 1}, -1.0}, {{0, 0, 0}, -1.0}});
  Point z(2);
  z << 1.0, 3.0;
  CHECK(std::abs(eval_multipoly(P, 2.0, z)) == 0.0);

  MultiPoly f(2, {{{1, 0, 0}, 1.0}});
  CHECK(eval_multipoly(f, 7.0, z) == Complex(7.0));
  CHECK(eval_multipoly(MultiPoly(2), 7.0, z) == Complex(0.0));
  CHECK(term_magnitude(P, 2.0, z) == doctest::Approx(8.0));
}

TEST_CASE("MultiPoly normalization is canonical") {
  MultiPoly P(2, {{{1, 0, 0}, Complex(0.0, 2.0)}, {{0, 1, 1}, Complex(0.0, -2.0)}, {{0, 0, 1}, 1e-13}});
  const MultiPoly N = P.normalized();
  CHECK(N.terms().size() == 2);
  CHECK(N.terms().at({1, 0, 0}) == Complex(std::sqrt(0.5), 0.0));
  CHECK(std::abs(N.terms().at({0, 1, 1}) + std::sqrt(0.5)) < 1e-15);

  CHECK(N.normalized().distance(N) < 1e-15);
  for (Complex lambda : {Complex(3.0, -1.0), Complex(-1e-4, 0.0), Complex(0.0, 1e5)})
    CHECK(P.scaled(lambda).normalized().distance(N) < 1e-14);
  CHECK(to_string(N) == "0.707107*f - 0.707107*z1*z2");
  CHECK(N.has_f_term());
  CHECK_FALSE(MultiPoly(2, {{{0, 1, 0}, 1.0}}).has_f_term());
}
