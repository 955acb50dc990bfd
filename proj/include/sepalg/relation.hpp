#pragma once

// Recovery of an annihilating polynomial P(f, z1, ..., zn) = 0.
//
// The monomials f^q z1^k1 ... zn^kn restricted to a curve of family m are
// polynomials in t of degree q p_m + sum_i k_i d_im. With N(K) = 1 + K p +
// K sum_i d_i, every monomial of the grid 0 <= q, k_i <= K has restricted
// degree below N along every family, so all of them are killed by the N-th
// power of each flow generator. That solution space has dimension at most
// N^n, which grows like K^n, while the grid grows like K^(n+1); for large K
// the monomials must be linearly dependent. Numerically we look for that
// dependence directly, as a near-null vector of the sampled evaluation
// matrix.

#include "sepalg/degrees.hpp"
#include "sepalg/poly.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace sepalg {

struct MonomialIndex {
  int q = 0;
  std::vector<int> k;

  int total_degree() const;
  Exponents exponents() const;
  friend auto operator<=>(const MonomialIndex&, const MonomialIndex&) = default;
};

/// q p_m + sum_i k_i d_im, with m zero-based.
int monomial_restricted_degree(const MonomialIndex& idx, const DegreeProfile& profile, int m);

/// N(K) = 1 + K max_m p_m + K sum_i max_m d_im.
int degree_cap(int K, const DegreeProfile& profile);

/// All indices with 0 <= q, k_i <= K in lexicographic order of (q, k1, ..., kn).
std::vector<MonomialIndex> monomial_grid(int K, int n);

Complex monomial_value(const MonomialIndex& idx, Complex fval, const Point& z);

struct EvaluationMatrix {
  MatrixXc A;                    // scaled matrix
  Eigen::VectorXd column_scale;  // raw column j = A.col(j) * column_scale[j] / row_scale
  Eigen::VectorXd row_scale;     // raw row s = A.row(s) * row_scale[s] / column_scale
};

/// Entry (s, j) = f(z_s)^q_j prod_i (z_s)_i^k_ji, columns scaled to unit norm.
/// Throws EvalError if f fails or is non-finite at a point.
EvaluationMatrix build_evaluation_matrix(const Expr& f, const std::vector<MonomialIndex>& grid,
                                         const std::vector<Point>& points);

/// Alternating row and column normalization, run until the column norms
/// agree to within a factor 1 + tol (or max_sweeps). Row scaling leaves the
/// nullspace unchanged; it stops points where f is huge from dominating.
/// The converged scaling does not depend on the starting column scaling.
/// Returns the number of sweeps performed.
int equilibrate(EvaluationMatrix& M, int max_sweeps, double tol = 1e-3);

struct NullReading {
  double sigma_ratio = 1.0;  // sigma_min / sigma_max of the whole matrix
  int nullity = 0;           // singular values with sigma / sigma_max < tol
  bool degenerate = false;   // the q = 0 columns alone are dependent
  std::optional<MultiPoly> relation;  // minimal-degree member of the near-null space, canonical
  double relation_ratio = 1.0;        // sigma ratio of the submatrix that carries it
};

/// Finds the near-null space of M at tol and its member of least degree:
/// columns are ordered by (total degree, lex) and the smallest rank-deficient
/// prefix supplies the relation.
NullReading extract_relation(const EvaluationMatrix& M, const std::vector<MonomialIndex>& grid, double tol);

/// max over points of |P(f(z), z)| / sum_j |c_j m_j(f(z), z)|.
double relation_residual(const MultiPoly& P, const Expr& f, const std::vector<Point>& points);

struct RelationOptions {
  int K_min = 1;
  int K_max = 8;
  double tol = 1e-8;
  double validation_tol = 1e-8;
  int validation_samples = 200;
  int oversample = 2;
  int retry_budget = 5;
  int equilibration_sweeps = 500;
  double equilibration_tol = 1e-3;
};

struct KTrace {
  int K = 0;
  int columns = 0;
  int rows = 0;
  double sigma_ratio = 0.0;
  int nullity = 0;
  double validation_residual = -1.0;  // negative when not reached
  std::string outcome;
};

struct RelationCertificate {
  MultiPoly P;
  int K = 0;
  std::optional<int> N;
  std::optional<DegreeProfile> profile;
  double fit_residual = 0.0;
  double validation_residual = 0.0;
  int fit_samples = 0;
  int validation_samples = 0;
  std::uint64_t rng_seed = 0;
  std::vector<KTrace> trace;
};

struct NoRelation {
  bool degenerate = false;  // coordinates themselves were dependent
  std::vector<KTrace> trace;
  std::uint64_t rng_seed = 0;
};

using RelationResult = std::variant<RelationCertificate, NoRelation>;

/// Sweeps K = K_min..K_max over points sampled in S.domain and returns the
/// first validated relation.
RelationResult find_relation(const Expr& f, const FamilySet& S, const std::optional<DegreeProfile>& profile,
                             const RelationOptions& opt, std::uint64_t rng_seed);

/// Samples from the polydisc at which f evaluates to a finite value, each
/// point redrawn up to retry_budget times.
std::vector<Point> sample_evaluable(const Expr& f, const Polydisc& domain, int count, int retry_budget, Rng& rng);

/// Restricts the monomial to a curve of family m through a random point of
/// the profile's subdomain and checks that a degree N-1 fit leaves a
/// relative residual below 1e-8, i.e. the N-th t-derivative vanishes.
bool verify_annihilation(const Expr& f, const MonomialIndex& idx, const CurveFamily& F, const DegreeProfile& profile,
                         int m, int N, std::uint64_t rng_seed = 0);

/// Exponent tuples (i1, ..., in), 0 <= i_j <= N-1, in lexicographic order.
std::vector<std::vector<int>> vn_basis_coordinate_case(int N, int n);

/// Whether (d/dt_var)^N of t^exponents vanishes identically.
bool nth_partial_vanishes(const std::vector<int>& exponents, int var, int N);

}  // namespace sepalg
