#include "sepalg/relation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sepalg {

int MonomialIndex::total_degree() const { return q + std::accumulate(k.begin(), k.end(), 0); }

Exponents MonomialIndex::exponents() const {
  Exponents e{q};
  e.insert(e.end(), k.begin(), k.end());
  return e;
}

int monomial_restricted_degree(const MonomialIndex& idx, const DegreeProfile& profile, int m) {
  int deg = idx.q * profile.p[m];
  for (std::size_t i = 0; i < idx.k.size(); ++i) deg += idx.k[i] * profile.d(static_cast<Eigen::Index>(i), m);
  return deg;
}

int degree_cap(int K, const DegreeProfile& profile) {
  int N = 1 + K * profile.max_p();
  for (int i = 0; i < profile.n(); ++i) N += K * profile.max_d(i);
  return N;
}

std::vector<MonomialIndex> monomial_grid(int K, int n) {
  std::vector<MonomialIndex> out;
  std::vector<int> e(static_cast<std::size_t>(n + 1), 0);
  for (;;) {
    out.push_back({e[0], std::vector<int>(e.begin() + 1, e.end())});
    int pos = n;
    while (pos >= 0 && e[static_cast<std::size_t>(pos)] == K) e[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++e[static_cast<std::size_t>(pos)];
  }
  return out;
}

Complex monomial_value(const MonomialIndex& idx, Complex fval, const Point& z) {
  Complex v{1.0, 0.0};
  for (int j = 0; j < idx.q; ++j) v *= fval;
  for (std::size_t i = 0; i < idx.k.size(); ++i)
    for (int j = 0; j < idx.k[i]; ++j) v *= z[static_cast<Eigen::Index>(i)];
  return v;
}

namespace {

Complex eval_f(const Expr& f, const Point& z) {
  const Complex v = evaluate(f, std::span<const Complex>(z.data(), static_cast<std::size_t>(z.size())));
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw EvalError("f is not finite at a sample point");
  return v;
}

double ratio_of(const Eigen::VectorXd& s) {
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

double sigma_ratio(const MatrixXc& A) { return ratio_of(Eigen::BDCSVD<MatrixXc>(A).singularValues()); }

}  // namespace

EvaluationMatrix build_evaluation_matrix(const Expr& f, const std::vector<MonomialIndex>& grid,
                                         const std::vector<Point>& points) {
  const auto rows = static_cast<Eigen::Index>(points.size());
  const auto cols = static_cast<Eigen::Index>(grid.size());
  EvaluationMatrix M;
  M.A.resize(rows, cols);
  for (Eigen::Index s = 0; s < rows; ++s) {
    const Point& z = points[static_cast<std::size_t>(s)];
    const Complex fv = eval_f(f, z);
    for (Eigen::Index j = 0; j < cols; ++j) M.A(s, j) = monomial_value(grid[static_cast<std::size_t>(j)], fv, z);
  }
  M.row_scale = Eigen::VectorXd::Ones(rows);
  M.column_scale = M.A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (M.column_scale[j] == 0.0) M.column_scale[j] = 1.0;
    M.A.col(j) /= M.column_scale[j];
  }
  return M;
}

int equilibrate(EvaluationMatrix& M, int max_sweeps, double tol) {
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (Eigen::Index r = 0; r < M.A.rows(); ++r) {
      const double nr = M.A.row(r).norm();
      if (nr == 0.0) continue;
      M.A.row(r) /= nr;
      M.row_scale[r] *= nr;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index c = 0; c < M.A.cols(); ++c) {
      const double nc = M.A.col(c).norm();
      if (nc == 0.0) continue;
      lo = std::min(lo, nc);
      hi = std::max(hi, nc);
      M.A.col(c) /= nc;
      M.column_scale[c] *= nc;
    }
    if (hi <= (1.0 + tol) * lo) return sweep;
  }
  return max_sweeps;
}

NullReading extract_relation(const EvaluationMatrix& M, const std::vector<MonomialIndex>& grid, double tol) {
  NullReading out;
  const Eigen::VectorXd s = Eigen::BDCSVD<MatrixXc>(M.A).singularValues();
  out.sigma_ratio = ratio_of(s);
  for (Eigen::Index j = 0; j < s.size(); ++j)
    if (s[0] == 0.0 || s[j] / s[0] < tol) ++out.nullity;
  if (out.nullity == 0) return out;

  std::vector<Eigen::Index> q0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (grid[j].q == 0) q0.push_back(static_cast<Eigen::Index>(j));
  if (!q0.empty() && sigma_ratio(M.A(Eigen::all, q0)) < tol) {
    out.degenerate = true;
    return out;
  }

  std::vector<Eigen::Index> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto& x = grid[static_cast<std::size_t>(a)];
    const auto& y = grid[static_cast<std::size_t>(b)];
    if (x.total_degree() != y.total_degree()) return x.total_degree() < y.total_degree();
    return x < y;
  });
  const MatrixXc B = M.A(Eigen::all, order);

  // sigma_min/sigma_max of a column prefix is non-increasing in its length.
  std::size_t lo = 1, hi = order.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (sigma_ratio(B.leftCols(static_cast<Eigen::Index>(mid))) < tol) hi = mid;
    else lo = mid + 1;
  }
  Eigen::BDCSVD<MatrixXc> svd(B.leftCols(static_cast<Eigen::Index>(lo)), Eigen::ComputeThinV);
  out.relation_ratio = ratio_of(svd.singularValues());
  const VectorXc v = svd.matrixV().col(static_cast<Eigen::Index>(lo) - 1);

  const int n = static_cast<int>(grid.front().k.size());
  MultiPoly P(n);
  for (std::size_t j = 0; j < lo; ++j) {
    const Eigen::Index col = order[j];
    P.add_term(grid[static_cast<std::size_t>(col)].exponents(), v[static_cast<Eigen::Index>(j)] / M.column_scale[col]);
  }
  out.relation = P.normalized();
  return out;
}

double relation_residual(const MultiPoly& P, const Expr& f, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const auto& z : points) {
    const Complex fv = eval_f(f, z);
    const double scale = term_magnitude(P, fv, z);
    const double r = std::abs(eval_multipoly(P, fv, z));
    worst = std::max(worst, scale > 0.0 ? r / scale : r);
  }
  return worst;
}

std::vector<Point> sample_evaluable(const Expr& f, const Polydisc& domain, int count, int retry_budget, Rng& rng) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    for (int attempt = 0;; ++attempt) {
      Point z = domain.sample(rng);
      try {
        eval_f(f, z);
        pts.push_back(std::move(z));
        break;
      } catch (const EvalError&) {
        if (attempt >= retry_budget) throw;
      }
    }
  }
  return pts;
}

RelationResult find_relation(const Expr& f, const FamilySet& S, const std::optional<DegreeProfile>& profile,
                             const RelationOptions& opt, std::uint64_t rng_seed) {
  const int n = S.dim();
  std::vector<KTrace> trace;
  for (int K = opt.K_min; K <= opt.K_max; ++K) {
    Rng rng(derive_seed(rng_seed, 0x4B00 + static_cast<std::uint64_t>(K)));
    const auto grid = monomial_grid(K, n);
    KTrace tr;
    tr.K = K;
    tr.columns = static_cast<int>(grid.size());
    tr.rows = opt.oversample * tr.columns;

    std::vector<Point> pts;
    try {
      pts = sample_evaluable(f, S.domain, tr.rows, opt.retry_budget, rng);
    } catch (const EvalError&) {
      tr.outcome = "evaluation_failed";
      trace.push_back(tr);
      continue;
    }
    EvaluationMatrix M = build_evaluation_matrix(f, grid, pts);
    equilibrate(M, opt.equilibration_sweeps, opt.equilibration_tol);
    const NullReading null = extract_relation(M, grid, opt.tol);
    tr.sigma_ratio = null.sigma_ratio;
    tr.nullity = null.nullity;

    if (null.degenerate) {
      tr.outcome = "degenerate";
      trace.push_back(tr);
      return NoRelation{true, trace, rng_seed};
    }
    if (!null.relation) {
      tr.outcome = "full_rank";
      trace.push_back(tr);
      continue;
    }
    if (!null.relation->has_f_term()) {
      tr.outcome = "no_f_term";
      trace.push_back(tr);
      continue;
    }

    std::vector<Point> fresh;
    try {
      fresh = sample_evaluable(f, S.domain, opt.validation_samples, opt.retry_budget, rng);
    } catch (const EvalError&) {
      tr.outcome = "evaluation_failed";
      trace.push_back(tr);
      continue;
    }
    tr.validation_residual = relation_residual(*null.relation, f, fresh);
    if (tr.validation_residual > opt.validation_tol) {
      tr.outcome = "validation_failed";
      trace.push_back(tr);
      continue;
    }
    tr.outcome = "relation_found";
    trace.push_back(tr);

    RelationCertificate cert;
    cert.P = *null.relation;
    cert.K = K;
    if (profile) cert.N = degree_cap(K, *profile);
    cert.profile = profile;
    cert.fit_residual = null.relation_ratio;
    cert.validation_residual = tr.validation_residual;
    cert.fit_samples = tr.rows;
    cert.validation_samples = opt.validation_samples;
    cert.rng_seed = rng_seed;
    cert.trace = std::move(trace);
    return cert;
  }
  return NoRelation{false, trace, rng_seed};
}

bool verify_annihilation(const Expr& f, const MonomialIndex& idx, const CurveFamily& F, const DegreeProfile& profile,
                         int m, int N, std::uint64_t rng_seed) {
  if (F.index() != m) throw std::invalid_argument("family index does not match m");
  Rng rng(derive_seed(rng_seed, 0xA77));
  const int n = F.dim();
  const Polydisc ball{profile.subdomain_center, Eigen::VectorXd::Constant(n, profile.subdomain_radius)};
  const ChartPoint chart = invert_chart(F, ball.sample(rng));
  const VectorXc c = chart.tail(n - 1);

  std::vector<Sample> samples;
  for (Complex t : annulus_points(restriction_sample_count(N))) {
    const Point z = curve_point(F, t, c);
    samples.push_back({t, monomial_value(idx, eval_f(f, z), z)});
  }
  const Fit fit = fit_univariate(samples, N - 1);
  return relative_residual(fit, samples) < 1e-8;
}

std::vector<std::vector<int>> vn_basis_coordinate_case(int N, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  for (;;) {
    out.push_back(e);
    int pos = n - 1;
    while (pos >= 0 && e[static_cast<std::size_t>(pos)] == N - 1) e[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++e[static_cast<std::size_t>(pos)];
  }
  return out;
}

bool nth_partial_vanishes(const std::vector<int>& exponents, int var, int N) {
  const int e = exponents[static_cast<std::size_t>(var)];
  VectorXc c = VectorXc::Zero(e + 1);
  c[e] = 1.0;
  UniPoly p(c, 0.0);
  for (int k = 0; k < N; ++k) p = p.derivative();
  return p.is_zero();
}

}  // namespace sepalg
