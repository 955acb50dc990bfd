#pragma once

#include "sepalg/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepalg {

inline constexpr double kTrimTolerance = 1e-10;

/// Horner evaluation of ascending coefficients.
template <typename Scalar, typename Derived>
Scalar horner(const Eigen::MatrixBase<Derived>& coeffs, Scalar x) {
  Scalar acc(0);
  for (Eigen::Index k = coeffs.size(); k-- > 0;) acc = acc * x + Scalar(coeffs[k]);
  return acc;
}

/// Univariate complex polynomial, ascending powers, trailing zeros trimmed.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(VectorXc coeffs, double trim_tol = kTrimTolerance);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 0; }
  const VectorXc& coeffs() const { return coeffs_; }
  Complex leading() const { return is_zero() ? Complex{} : coeffs_[coeffs_.size() - 1]; }

  Complex operator()(Complex t) const { return horner(coeffs_, t); }
  UniPoly derivative() const;

 private:
  VectorXc coeffs_;
};

struct Sample {
  Complex t;
  Complex v;
};

class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Fit {
  UniPoly poly;
  double residual = 0.0;  // rms over samples
};

/// Least-squares polynomial of the given degree. Requires at least
/// 2*(degree+1) samples with pairwise distinct t.
Fit fit_univariate(std::span<const Sample> samples, int degree);

/// rms residual / (rms |v| + 1).
double relative_residual(const Fit& fit, std::span<const Sample> samples);

struct DegreeReading {
  int degree = -1;
  double leading_magnitude = 0.0;  // |leading coefficient| of the accepted fit
  double relative_residual = 0.0;
};

/// Smallest degree <= max_degree whose relative residual is below tol, or
/// nullopt when none qualifies (not a polynomial at this resolution).
std::optional<DegreeReading> detect_degree(std::span<const Sample> samples, int max_degree, double tol);

/// Deterministic, well spread t-values in the annulus 0.5 <= |t| <= 1.5.
std::vector<Complex> annulus_points(int count, double inner = 0.5, double outer = 1.5);

/// Random t-values in the same annulus.
std::vector<Complex> annulus_points(int count, Rng& rng, double inner = 0.5, double outer = 1.5);

/// Exponent tuple (q, k1, ..., kn) for the variable order (f, z1, ..., zn).
using Exponents = std::vector<int>;

/// Sparse polynomial in (f, z1, ..., zn).
class MultiPoly {
 public:
  using Terms = std::map<Exponents, Complex>;

  MultiPoly() = default;
  explicit MultiPoly(int n) : n_(n) {}
  MultiPoly(int n, Terms terms);

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(Exponents e, Complex c);

  /// Unit coefficient norm, drops |c| < trim_tol, and rotates so the
  /// coefficient of the lexicographically largest exponent is real positive.
  MultiPoly normalized(double trim_tol = kTrimTolerance) const;

  MultiPoly scaled(Complex lambda) const;

  /// Max absolute coefficient difference, treating missing terms as zero.
  double distance(const MultiPoly& other) const;

  bool has_f_term() const;

 private:
  int n_ = 0;
  Terms terms_;
};

/// sum coeff * fval^q * prod z_i^k_i
Complex eval_multipoly(const MultiPoly& p, Complex fval, const Point& z);

/// sum |coeff * fval^q * prod z_i^k_i|, the natural scale for |P(f, z)|.
double term_magnitude(const MultiPoly& p, Complex fval, const Point& z);

/// Conventional notation with 6 significant digits, highest exponents first.
std::string to_string(const MultiPoly& p);

}  // namespace sepalg
