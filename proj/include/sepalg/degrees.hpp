#pragma once

#include "sepalg/curves.hpp"
#include "sepalg/poly.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepalg {

/// Generic degrees on a subdomain where they are constant.
/// d(i, m) = deg_t of coordinate i along family m, p[m] = deg_t of f along family m.
struct DegreeProfile {
  Eigen::MatrixXi d;
  Eigen::VectorXi p;
  Point subdomain_center;
  double subdomain_radius = 0.0;
  int support = 0;    // trial samples that produced this profile
  int trials = 0;     // trial samples with a usable reading
  int confirmed = 0;  // confirmation samples, all of which reproduced it
  int discarded = 0;  // trial samples dropped as not polynomial
  std::vector<std::string> warnings;

  int n() const { return static_cast<int>(p.size()); }
  int max_p() const { return p.maxCoeff(); }
  /// max over m of d(i, m)
  int max_d(int i) const { return d.row(i).maxCoeff(); }
};

class NotPolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoStableProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degrees of the coordinate rules at parameters c, read from the evaluated
/// coefficients. An identically zero rule counts as degree 0.
std::vector<int> coordinate_degrees(const CurveFamily& F, const VectorXc& c, double tol = kTrimTolerance);

/// Same, with |leading coefficient| of each rule.
std::vector<DegreeReading> coordinate_readings(const CurveFamily& F, const VectorXc& c, double tol = kTrimTolerance);

/// Samples of t -> g(curve_point(F, t, c)) on the default annulus, where g is
/// an expression in z1..zn.
std::vector<Sample> restriction_samples(const Expr& g, const CurveFamily& F, const VectorXc& c, int count);

/// Number of t-samples used for a degree search up to max_degree.
inline int restriction_sample_count(int max_degree) { return 2 * (max_degree + 1) + 8; }

std::optional<DegreeReading> restriction_degree(const Expr& f, const CurveFamily& F, const VectorXc& c, int max_degree,
                                                double tol);

struct StabilizeOptions {
  int n_trials = 400;
  int max_degree = 24;
  double tol = 1e-8;
  double support_fraction = 0.25;
  int confirm_samples = 32;
  double ball_fraction = 0.05;
  double not_polynomial_fraction = 0.05;
  double chart_failure_fraction = 0.10;
};

/// Full degree vector at z: d column-major followed by p, length n(n+1).
/// nullopt when f is not polynomial along some family at z.
/// ChartError propagates.
std::optional<std::vector<int>> degree_vector_at(const FamilySet& S, const Expr& f, const Point& z, int max_degree,
                                                 double tol);

DegreeProfile stabilize_degrees(const FamilySet& S, const Expr& f, const StabilizeOptions& opt, std::uint64_t rng_seed);

}  // namespace sepalg
