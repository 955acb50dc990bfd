#pragma once

// Parametric polynomial curve families and the chart machinery built on them.
//
// Family m maps chart coordinates (t, c1, ..., c_{n-1}) to
//   z_i = sum_j a_ij(c) t^j,   i = 1..n,
// with each a_ij an expression in the c variables only. When the map is a
// biholomorphism onto the working domain, (t, c) are curvilinear
// coordinates and shifting t is the translation flow along the curves.

#include "sepalg/expr.hpp"
#include "sepalg/types.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepalg {

/// Chart coordinates (t, c1, ..., c_{n-1}), t first.
using ChartPoint = VectorXc;

class ChartError : public std::runtime_error {
 public:
  enum class Kind { NoConvergence, SingularJacobian, Evaluation };
  ChartError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(ChartError::Kind kind);

/// Names c1..c_{n-1} of the curve-selecting parameters.
std::vector<std::string> parameter_names(int n);

class CurveFamily {
 public:
  /// coords[i][j] is the coefficient of t^j in coordinate i.
  CurveFamily(int index, std::vector<std::vector<Expr>> coords, Polydisc parameter_domain);

  /// Parses coefficient expressions over c1..c_{n-1}.
  static CurveFamily from_strings(int index, const std::vector<std::vector<std::string>>& coords,
                                  Polydisc parameter_domain);

  int index() const { return index_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  int max_t_degree() const;
  const std::vector<std::vector<Expr>>& coords() const { return coords_; }
  const Polydisc& parameter_domain() const { return params_; }

  /// Coefficient values a_ij(c); row i, column j (zero padded to max_t_degree).
  MatrixXc coefficients(const VectorXc& c) const;

  /// True when coordinate i is identically constant in t and c.
  bool rule_is_constant(int i) const;

  std::optional<ChartPoint> cached_seed() const;
  void remember_seed(const ChartPoint& p) const;

 private:
  struct SeedCache {
    mutable std::mutex mutex;
    std::optional<ChartPoint> seed;
  };

  int index_;
  std::vector<std::vector<Expr>> coords_;
  Polydisc params_;
  std::shared_ptr<SeedCache> cache_ = std::make_shared<SeedCache>();
};

struct FamilySet {
  FamilySet() = default;
  FamilySet(std::vector<CurveFamily> families, Polydisc domain);

  int dim() const { return static_cast<int>(families.size()); }

  std::vector<CurveFamily> families;
  Polydisc domain;
};

Point curve_point(const CurveFamily& F, Complex t, const VectorXc& c);
Point curve_point(const CurveFamily& F, const ChartPoint& p);

/// d z / d(t, c): exact power rule in t, central differences (step 1e-7) in c.
MatrixXc chart_jacobian(const CurveFamily& F, const ChartPoint& p);

/// d z / d t at the given chart coordinates.
VectorXc t_derivative(const CurveFamily& F, const ChartPoint& p);

/// Damped Newton from `seed`. Converged when
/// ||curve_point(p) - z|| <= 1e-12 (1 + ||z||).
ChartPoint invert_chart(const CurveFamily& F, const Point& z, const ChartPoint& seed);

/// Seeds from the family's cache, then the parameter-domain center, then a
/// coarse grid over the parameter domain.
ChartPoint invert_chart(const CurveFamily& F, const Point& z);

/// Translation by tau along the family's curves: shifts t in the chart.
/// Long translations are split into steps of at most a quarter of the
/// parameter-domain t radius.
Point flow(const CurveFamily& F, Complex tau, const Point& z);

/// The generator of the flow, d/dt in chart coordinates, pushed to z.
VectorXc tangent_field(const CurveFamily& F, const Point& z);

struct GeneralPositionSample {
  Point z;
  double abs_det = 0.0;
  double ratio = 0.0;  // |det| / prod ||X_m||
  std::string error;
};

struct GeneralPositionReport {
  bool pass = false;
  double min_abs_det = 0.0;
  double min_ratio = 0.0;
  Point worst_point;
  int failures = 0;
  std::vector<GeneralPositionSample> samples;
};

GeneralPositionReport check_general_position(const FamilySet& S, int n_samples, std::uint64_t rng_seed);

struct RegularitySample {
  ChartPoint params;
  double roundtrip_error = 0.0;
  double condition = 0.0;
  std::string error;
};

struct RegularityReport {
  int family = 0;
  bool pass = false;
  double max_roundtrip_error = 0.0;
  double max_condition = 0.0;
  int failures = 0;
  std::vector<RegularitySample> samples;
};

/// Audits the parameter-domain center plus n_samples random chart points.
RegularityReport check_regularity(const CurveFamily& F, int n_samples, std::uint64_t rng_seed);

}  // namespace sepalg
