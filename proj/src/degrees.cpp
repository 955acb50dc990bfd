#include "sepalg/degrees.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sepalg {

std::vector<DegreeReading> coordinate_readings(const CurveFamily& F, const VectorXc& c, double tol) {
  const MatrixXc A = F.coefficients(c);
  std::vector<DegreeReading> out;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    DegreeReading r;
    r.degree = 0;
    r.leading_magnitude = std::abs(A(i, 0));
    for (Eigen::Index j = A.cols() - 1; j >= 0; --j)
      if (std::abs(A(i, j)) > tol) {
        r.degree = static_cast<int>(j);
        r.leading_magnitude = std::abs(A(i, j));
        break;
      }
    out.push_back(r);
  }
  return out;
}

std::vector<int> coordinate_degrees(const CurveFamily& F, const VectorXc& c, double tol) {
  std::vector<int> out;
  for (const auto& r : coordinate_readings(F, c, tol)) out.push_back(r.degree);
  return out;
}

std::vector<Sample> restriction_samples(const Expr& g, const CurveFamily& F, const VectorXc& c, int count) {
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Complex t : annulus_points(count)) {
    const Point z = curve_point(F, t, c);
    out.push_back({t, evaluate(g, std::span<const Complex>(z.data(), static_cast<std::size_t>(z.size())))});
  }
  return out;
}

std::optional<DegreeReading> restriction_degree(const Expr& f, const CurveFamily& F, const VectorXc& c, int max_degree,
                                                double tol) {
  std::vector<Sample> s;
  try {
    s = restriction_samples(f, F, c, restriction_sample_count(max_degree));
  } catch (const EvalError&) {
    return std::nullopt;
  }
  for (const auto& smp : s)
    if (!std::isfinite(smp.v.real()) || !std::isfinite(smp.v.imag())) return std::nullopt;
  return detect_degree(s, max_degree, tol);
}

std::optional<std::vector<int>> degree_vector_at(const FamilySet& S, const Expr& f, const Point& z, int max_degree,
                                                 double tol) {
  const int n = S.dim();
  std::vector<int> d(static_cast<std::size_t>(n * n)), p(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const CurveFamily& F = S.families[static_cast<std::size_t>(m)];
    const ChartPoint chart = invert_chart(F, z);
    const VectorXc c = chart.tail(n - 1);
    const auto col = coordinate_degrees(F, c);
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(m * n + i)] = col[static_cast<std::size_t>(i)];
    const auto reading = restriction_degree(f, F, c, max_degree, tol);
    if (!reading) return std::nullopt;
    p[static_cast<std::size_t>(m)] = reading->degree;
  }
  d.insert(d.end(), p.begin(), p.end());
  return d;
}

namespace {

bool dominates(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] < b[k]) return false;
  return true;
}

struct Tally {
  int count = 0;
  Point best_point;
  double best_margin = -std::numeric_limits<double>::infinity();
};

}  // namespace

DegreeProfile stabilize_degrees(const FamilySet& S, const Expr& f, const StabilizeOptions& opt, std::uint64_t rng_seed) {
  const int n = S.dim();
  Rng rng(derive_seed(rng_seed, 0xDE6));
  std::map<std::vector<int>, Tally> tallies;
  int chart_failures = 0, not_polynomial = 0;

  for (int s = 0; s < opt.n_trials; ++s) {
    const Point z = S.domain.sample(rng);
    std::optional<std::vector<int>> v;
    try {
      v = degree_vector_at(S, f, z, opt.max_degree, opt.tol);
    } catch (const ChartError&) {
      ++chart_failures;
      continue;
    } catch (const EvalError&) {
      ++chart_failures;
      continue;
    }
    if (!v) {
      ++not_polynomial;
      continue;
    }
    Tally& t = tallies[*v];
    ++t.count;
    const double margin = S.domain.margin(z);
    if (margin > t.best_margin) {
      t.best_margin = margin;
      t.best_point = z;
    }
  }

  if (not_polynomial > opt.not_polynomial_fraction * opt.n_trials)
    throw NotPolynomialError("f is not polynomial of degree <= " + std::to_string(opt.max_degree) + " along the curves at " +
                             std::to_string(not_polynomial) + " of " + std::to_string(opt.n_trials) + " samples");
  if (chart_failures > opt.chart_failure_fraction * opt.n_trials)
    throw NoStableProfileError("chart inversion failed at " + std::to_string(chart_failures) + " of " +
                               std::to_string(opt.n_trials) + " samples");

  const int valid = opt.n_trials - chart_failures - not_polynomial;
  std::vector<const std::pair<const std::vector<int>, Tally>*> qualifying;
  for (const auto& kv : tallies)
    if (kv.second.count >= opt.support_fraction * valid && kv.second.count > 0) qualifying.push_back(&kv);
  if (qualifying.empty()) throw NoStableProfileError("no degree vector reaches the support threshold");

  const std::pair<const std::vector<int>, Tally>* generic = nullptr;
  for (const auto* cand : qualifying) {
    if (std::all_of(qualifying.begin(), qualifying.end(), [&](const auto* o) { return dominates(cand->first, o->first); })) {
      generic = cand;
      break;
    }
  }
  if (!generic) throw NoStableProfileError("supported degree vectors are not comparable");

  DegreeProfile prof;
  prof.d.resize(n, n);
  prof.p.resize(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) prof.d(i, m) = generic->first[static_cast<std::size_t>(m * n + i)];
  for (int m = 0; m < n; ++m) prof.p[m] = generic->first[static_cast<std::size_t>(n * n + m)];
  prof.subdomain_center = generic->second.best_point;
  prof.subdomain_radius = opt.ball_fraction * S.domain.radius.minCoeff();
  prof.support = generic->second.count;
  prof.trials = valid;
  prof.discarded = not_polynomial;
  if (not_polynomial > 0)
    prof.warnings.push_back(std::to_string(not_polynomial) +
                            " samples were not polynomial along a curve and were discarded (branch-cut crossing)");

  Polydisc ball{prof.subdomain_center, Eigen::VectorXd::Constant(n, prof.subdomain_radius)};
  for (int s = 0; s < opt.confirm_samples; ++s) {
    const Point z = ball.sample(rng);
    std::optional<std::vector<int>> v;
    try {
      v = degree_vector_at(S, f, z, opt.max_degree, opt.tol);
    } catch (const std::exception& e) {
      throw NoStableProfileError(std::string("confirmation failed: ") + e.what());
    }
    if (!v || *v != generic->first) throw NoStableProfileError("confirmation ball does not reproduce the generic profile");
    ++prof.confirmed;
  }
  return prof;
}

}  // namespace sepalg
