#include "sepalg/curves.hpp"
#include "sepalg/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sepalg {

namespace {

constexpr int kMaxNewtonIterations = 50;
constexpr int kMaxHalvings = 40;
constexpr double kSingularRatio = 1e-10;
constexpr double kDiffStep = 1e-7;
constexpr double kRoundtripTolerance = 1e-9;

double singular_ratio(const MatrixXc& J) {
  Eigen::JacobiSVD<MatrixXc> svd(J);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

double residual_norm(const CurveFamily& F, const ChartPoint& p, const Point& z) {
  try {
    const double r = (curve_point(F, p) - z).norm();
    return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
  } catch (const EvalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// Grid over one disc: points of a g x g square lattice that fall inside it.
std::vector<Complex> disc_lattice(Complex center, double radius, int g) {
  std::vector<Complex> out;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      const double x = -1.0 + 2.0 * a / (g - 1);
      const double y = -1.0 + 2.0 * b / (g - 1);
      if (x * x + y * y <= 1.0 + 1e-12) out.push_back(center + radius * Complex{x, y});
    }
  return out;
}

}  // namespace

const char* to_string(ChartError::Kind kind) {
  switch (kind) {
    case ChartError::Kind::NoConvergence: return "NoConvergence";
    case ChartError::Kind::SingularJacobian: return "SingularJacobian";
    case ChartError::Kind::Evaluation: return "EvaluationFailure";
  }
  return "?";
}

std::vector<std::string> parameter_names(int n) {
  std::vector<std::string> names;
  for (int k = 1; k < n; ++k) names.push_back("c" + std::to_string(k));
  return names;
}

CurveFamily::CurveFamily(int index, std::vector<std::vector<Expr>> coords, Polydisc parameter_domain)
    : index_(index), coords_(std::move(coords)), params_(std::move(parameter_domain)) {
  const int n = dim();
  if (n < 1) throw std::invalid_argument("curve family needs at least one coordinate rule");
  if (params_.dim() != n)
    throw std::invalid_argument("parameter domain of family " + std::to_string(index_ + 1) + " must have dimension " +
                                std::to_string(n));
  const auto names = parameter_names(n);
  for (int i = 0; i < n; ++i) {
    if (coords_[i].empty())
      throw std::invalid_argument("family " + std::to_string(index_ + 1) + ": coordinate " + std::to_string(i + 1) +
                                  " has no coefficients");
    for (const auto& a : coords_[i])
      for (const auto& v : free_variables(a))
        if (std::find(names.begin(), names.end(), v) == names.end())
          throw std::invalid_argument("family " + std::to_string(index_ + 1) + ": coefficient uses '" + v +
                                      "', only c1..c" + std::to_string(n - 1) + " are allowed");
  }
}

CurveFamily CurveFamily::from_strings(int index, const std::vector<std::vector<std::string>>& coords,
                                      Polydisc parameter_domain) {
  const auto names = parameter_names(static_cast<int>(coords.size()));
  std::vector<std::vector<Expr>> parsed;
  for (const auto& rule : coords) {
    auto& out = parsed.emplace_back();
    for (const auto& s : rule) out.push_back(parse(s, names));
  }
  return CurveFamily(index, std::move(parsed), std::move(parameter_domain));
}

int CurveFamily::max_t_degree() const {
  std::size_t d = 0;
  for (const auto& rule : coords_) d = std::max(d, rule.size() - 1);
  return static_cast<int>(d);
}

MatrixXc CurveFamily::coefficients(const VectorXc& c) const {
  const int n = dim();
  MatrixXc A = MatrixXc::Zero(n, max_t_degree() + 1);
  const std::span<const Complex> vals(c.data(), static_cast<std::size_t>(c.size()));
  for (int i = 0; i < n; ++i)
    for (std::size_t j = 0; j < coords_[i].size(); ++j) A(i, static_cast<Eigen::Index>(j)) = evaluate(coords_[i][j], vals);
  return A;
}

bool CurveFamily::rule_is_constant(int i) const {
  const auto& rule = coords_[static_cast<std::size_t>(i)];
  for (std::size_t j = 0; j < rule.size(); ++j) {
    if (!free_variables(rule[j]).empty()) return false;
    if (j > 0 && evaluate(rule[j], std::span<const Complex>{}) != Complex{}) return false;
  }
  return true;
}

std::optional<ChartPoint> CurveFamily::cached_seed() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->seed;
}

void CurveFamily::remember_seed(const ChartPoint& p) const {
  std::lock_guard lock(cache_->mutex);
  cache_->seed = p;
}

FamilySet::FamilySet(std::vector<CurveFamily> fams, Polydisc dom) : families(std::move(fams)), domain(std::move(dom)) {
  const int n = static_cast<int>(domain.dim());
  if (dim() != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " families for ambient dimension " +
                                std::to_string(n) + ", got " + std::to_string(dim()));
  for (const auto& F : families) {
    if (F.dim() != n)
      throw std::invalid_argument("family " + std::to_string(F.index() + 1) + " has " + std::to_string(F.dim()) +
                                  " coordinate rules, expected " + std::to_string(n));
    for (int i = 0; i < n; ++i)
      if (F.rule_is_constant(i))
        throw std::invalid_argument("family " + std::to_string(F.index() + 1) + " is degenerate: coordinate " +
                                    std::to_string(i + 1) + " is constant in t and c");
  }
}

Point curve_point(const CurveFamily& F, Complex t, const VectorXc& c) {
  const MatrixXc A = F.coefficients(c);
  Point z(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) z[i] = horner(A.row(i).transpose(), t);
  return z;
}

Point curve_point(const CurveFamily& F, const ChartPoint& p) { return curve_point(F, p[0], p.tail(p.size() - 1)); }

VectorXc t_derivative(const CurveFamily& F, const ChartPoint& p) {
  const MatrixXc A = F.coefficients(p.tail(p.size() - 1));
  VectorXc d(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Complex acc{};
    for (Eigen::Index j = A.cols() - 1; j >= 1; --j) acc = acc * p[0] + static_cast<double>(j) * A(i, j);
    d[i] = acc;
  }
  return d;
}

MatrixXc chart_jacobian(const CurveFamily& F, const ChartPoint& p) {
  const Eigen::Index n = p.size();
  MatrixXc J(n, n);
  J.col(0) = t_derivative(F, p);
  for (Eigen::Index k = 1; k < n; ++k) {
    ChartPoint plus = p, minus = p;
    plus[k] += kDiffStep;
    minus[k] -= kDiffStep;
    J.col(k) = (curve_point(F, plus) - curve_point(F, minus)) / (2.0 * kDiffStep);
  }
  return J;
}

ChartPoint invert_chart(const CurveFamily& F, const Point& z, const ChartPoint& seed) {
  const double tol = 1e-12 * (1.0 + z.norm());
  ChartPoint x = seed;
  double res = residual_norm(F, x, z);
  if (!std::isfinite(res)) throw ChartError(ChartError::Kind::Evaluation, "curve evaluation failed at the seed");
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    if (res <= tol) return x;
    const MatrixXc J = chart_jacobian(F, x);
    if (singular_ratio(J) < kSingularRatio)
      throw ChartError(ChartError::Kind::SingularJacobian,
                       "chart Jacobian of family " + std::to_string(F.index() + 1) + " is singular");
    const VectorXc dx = J.partialPivLu().solve(z - curve_point(F, x));
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
      const ChartPoint trial = x + step * dx;
      const double r = residual_norm(F, trial, z);
      if (r < res) {
        x = trial;
        res = r;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw ChartError(ChartError::Kind::NoConvergence,
                       "Newton line search stalled for family " + std::to_string(F.index() + 1));
  }
  if (res <= tol) return x;
  throw ChartError(ChartError::Kind::NoConvergence,
                   "Newton did not converge in " + std::to_string(kMaxNewtonIterations) + " iterations");
}

ChartPoint invert_chart(const CurveFamily& F, const Point& z) {
  std::optional<ChartError> last;
  auto attempt = [&](const ChartPoint& seed) -> std::optional<ChartPoint> {
    try {
      ChartPoint p = invert_chart(F, z, seed);
      F.remember_seed(p);
      return p;
    } catch (const ChartError& e) {
      last = e;
      return std::nullopt;
    }
  };

  if (auto cached = F.cached_seed())
    if (auto p = attempt(*cached)) return *p;
  if (auto p = attempt(F.parameter_domain().center)) return *p;

  // Coarse lattice over the parameter polydisc, best residuals first.
  const Polydisc& dom = F.parameter_domain();
  const int n = F.dim();
  const int g = n <= 2 ? 5 : 3;
  std::vector<std::vector<Complex>> axes;
  for (int k = 0; k < n; ++k) axes.push_back(disc_lattice(dom.center[k], dom.radius[k], g));
  std::vector<std::pair<double, ChartPoint>> ranked;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    ChartPoint p(n);
    for (int k = 0; k < n; ++k) p[k] = axes[k][idx[k]];
    ranked.emplace_back(residual_norm(F, p, z), p);
    int k = 0;
    while (k < n && ++idx[k] == axes[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t tries = std::min<std::size_t>(ranked.size(), 6);
  for (std::size_t k = 0; k < tries; ++k) {
    if (!std::isfinite(ranked[k].first)) break;
    if (auto p = attempt(ranked[k].second)) return *p;
  }
  if (last) throw *last;
  throw ChartError(ChartError::Kind::Evaluation, "no finite seed for chart inversion");
}

Point flow(const CurveFamily& F, Complex tau, const Point& z) {
  ChartPoint p = invert_chart(F, z);
  const double cap = 0.25 * F.parameter_domain().radius[0];
  const int steps = cap > 0.0 ? std::max(1, static_cast<int>(std::ceil(std::abs(tau) / cap))) : 1;
  for (int s = 0; s < steps; ++s) {
    p[0] += tau / static_cast<double>(steps);
    // Re-anchor on the chart so each step starts from a verified preimage.
    if (s + 1 < steps) p = invert_chart(F, curve_point(F, p), p);
  }
  return curve_point(F, p);
}

VectorXc tangent_field(const CurveFamily& F, const Point& z) { return t_derivative(F, invert_chart(F, z)); }

GeneralPositionReport check_general_position(const FamilySet& S, int n_samples, std::uint64_t rng_seed) {
  Rng rng(derive_seed(rng_seed, 0x6750));
  const int n = S.dim();
  GeneralPositionReport rep;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    GeneralPositionSample smp;
    smp.z = S.domain.sample(rng);
    try {
      MatrixXc X(n, n);
      double norms = 1.0;
      for (int m = 0; m < n; ++m) {
        X.col(m) = tangent_field(S.families[static_cast<std::size_t>(m)], smp.z);
        norms *= X.col(m).norm();
      }
      smp.abs_det = std::abs(X.determinant());
      smp.ratio = norms > 0.0 ? smp.abs_det / norms : 0.0;
      rep.min_abs_det = std::min(rep.min_abs_det, smp.abs_det);
      if (smp.ratio < rep.min_ratio) {
        rep.min_ratio = smp.ratio;
        rep.worst_point = smp.z;
      }
    } catch (const ChartError& e) {
      smp.error = to_string(e.kind());
      ++rep.failures;
    } catch (const EvalError& e) {
      smp.error = "EvaluationFailure";
      ++rep.failures;
    }
    rep.samples.push_back(std::move(smp));
  }
  const bool few_failures = rep.failures * 10 <= n_samples;
  const bool any_success = rep.failures < n_samples;
  rep.pass = few_failures && any_success && rep.min_ratio > 1e-8;
  if (!any_success) {
    rep.min_abs_det = 0.0;
    rep.min_ratio = 0.0;
  }
  return rep;
}

RegularityReport check_regularity(const CurveFamily& F, int n_samples, std::uint64_t rng_seed) {
  Rng rng(derive_seed(rng_seed, 0x5245 + static_cast<std::uint64_t>(F.index())));
  RegularityReport rep;
  rep.family = F.index();
  for (int s = 0; s <= n_samples; ++s) {
    RegularitySample smp;
    smp.params = s == 0 ? F.parameter_domain().center : F.parameter_domain().sample(rng);
    try {
      const double ratio = singular_ratio(chart_jacobian(F, smp.params));
      smp.condition = ratio > 0.0 ? 1.0 / ratio : std::numeric_limits<double>::infinity();
      if (ratio < kSingularRatio) throw ChartError(ChartError::Kind::SingularJacobian, "singular chart Jacobian");
      const ChartPoint back = invert_chart(F, curve_point(F, smp.params));
      smp.roundtrip_error = (back - smp.params).norm() / (1.0 + smp.params.norm());
      if (smp.roundtrip_error > kRoundtripTolerance) ++rep.failures;
    } catch (const ChartError& e) {
      smp.error = to_string(e.kind());
      ++rep.failures;
    } catch (const EvalError&) {
      smp.error = "EvaluationFailure";
      ++rep.failures;
    }
    rep.max_roundtrip_error = std::max(rep.max_roundtrip_error, smp.roundtrip_error);
    if (std::isfinite(smp.condition)) rep.max_condition = std::max(rep.max_condition, smp.condition);
    else rep.max_condition = std::numeric_limits<double>::infinity();
    rep.samples.push_back(std::move(smp));
  }
  rep.pass = rep.failures == 0;
  return rep;
}

}  // namespace sepalg
