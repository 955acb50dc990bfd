#include "sepalg/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace sepalg {

UniPoly::UniPoly(VectorXc coeffs, double trim_tol) {
  Eigen::Index n = coeffs.size();
  while (n > 0 && std::abs(coeffs[n - 1]) <= trim_tol) --n;
  coeffs_ = coeffs.head(n);
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  VectorXc d(coeffs_.size() - 1);
  for (Eigen::Index k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return UniPoly(d, 0.0);
}

Fit fit_univariate(std::span<const Sample> samples, int degree) {
  if (degree < 0) throw FitError("negative degree");
  const auto m = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index cols = degree + 1;
  if (m < 2 * cols)
    throw FitError("insufficient samples: need " + std::to_string(2 * cols) + ", have " + std::to_string(m));
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a + 1; b < m; ++b)
      if (samples[a].t == samples[b].t) throw FitError("duplicate t-value at samples " + std::to_string(a) + " and " + std::to_string(b));

  MatrixXc V(m, cols);
  VectorXc rhs(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    Complex p{1.0, 0.0};
    for (Eigen::Index c = 0; c < cols; ++c) {
      V(r, c) = p;
      p *= samples[r].t;
    }
    rhs[r] = samples[r].v;
  }
  Eigen::VectorXd scale = V.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (scale[c] == 0.0) scale[c] = 1.0;
    V.col(c) /= scale[c];
  }
  VectorXc x = V.colPivHouseholderQr().solve(rhs);
  const double rms = std::sqrt((V * x - rhs).squaredNorm() / static_cast<double>(m));
  for (Eigen::Index c = 0; c < cols; ++c) x[c] /= scale[c];
  return {UniPoly(x), rms};
}

double relative_residual(const Fit& fit, std::span<const Sample> samples) {
  double s = 0.0;
  for (const auto& smp : samples) s += std::norm(smp.v);
  const double rms = samples.empty() ? 0.0 : std::sqrt(s / static_cast<double>(samples.size()));
  return fit.residual / (rms + 1.0);
}

std::optional<DegreeReading> detect_degree(std::span<const Sample> samples, int max_degree, double tol) {
  if (static_cast<int>(samples.size()) < 2 * (max_degree + 1))
    throw FitError("insufficient samples for max_degree " + std::to_string(max_degree));
  for (int d = 0; d <= max_degree; ++d) {
    Fit fit = fit_univariate(samples, d);
    const double rel = relative_residual(fit, samples);
    if (rel < tol) {
      const double lead = fit.poly.degree() == d ? std::abs(fit.poly.leading()) : 0.0;
      return DegreeReading{d, lead, rel};
    }
  }
  return std::nullopt;
}

std::vector<Complex> annulus_points(int count, double inner, double outer) {
  // Golden-angle spiral with area-uniform radii.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double u = (k + 0.5) / count;
    const double r = std::sqrt(inner * inner + u * (outer * outer - inner * inner));
    out.push_back(std::polar(r, golden * k));
  }
  return out;
}

std::vector<Complex> annulus_points(int count, Rng& rng, double inner, double outer) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(sample_annulus(rng, inner, outer));
  return out;
}

MultiPoly::MultiPoly(int n, Terms terms) : n_(n) {
  for (auto& [e, c] : terms) add_term(e, c);
}

void MultiPoly::add_term(Exponents e, Complex c) {
  if (static_cast<int>(e.size()) != n_ + 1)
    throw std::invalid_argument("exponent tuple must have n+1 entries");
  for (int k : e)
    if (k < 0) throw std::invalid_argument("negative exponent");
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.emplace(std::move(e), c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

MultiPoly MultiPoly::normalized(double trim_tol) const {
  auto unit = [](const Terms& t) {
    double s = 0.0;
    for (const auto& [e, c] : t) s += std::norm(c);
    Terms out;
    if (s == 0.0) return out;
    const double inv = 1.0 / std::sqrt(s);
    for (const auto& [e, c] : t) out.emplace(e, c * inv);
    return out;
  };
  Terms t = unit(terms_);
  std::erase_if(t, [&](const auto& kv) { return std::abs(kv.second) < trim_tol; });
  t = unit(t);
  if (!t.empty()) {
    const Complex lead = t.rbegin()->second;
    const Complex phase = std::conj(lead) / std::abs(lead);
    for (auto& [e, c] : t) c *= phase;
    t.rbegin()->second = {std::abs(lead), 0.0};
  }
  MultiPoly out(n_);
  out.terms_ = std::move(t);
  return out;
}

MultiPoly MultiPoly::scaled(Complex lambda) const {
  MultiPoly out(n_);
  for (const auto& [e, c] : terms_) out.add_term(e, c * lambda);
  return out;
}

double MultiPoly::distance(const MultiPoly& other) const {
  double d = 0.0;
  for (const auto& [e, c] : terms_) {
    auto it = other.terms_.find(e);
    d = std::max(d, std::abs(c - (it == other.terms_.end() ? Complex{} : it->second)));
  }
  for (const auto& [e, c] : other.terms_)
    if (!terms_.contains(e)) d = std::max(d, std::abs(c));
  return d;
}

bool MultiPoly::has_f_term() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first[0] >= 1; });
}

namespace {

Complex ipow(Complex x, int k) {
  Complex acc{1.0, 0.0};
  for (; k > 0; --k) acc *= x;
  return acc;
}

Complex monomial_value(const Exponents& e, Complex fval, const Point& z) {
  Complex v = ipow(fval, e[0]);
  for (std::size_t i = 1; i < e.size(); ++i) v *= ipow(z[static_cast<Eigen::Index>(i - 1)], e[i]);
  return v;
}

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

Complex eval_multipoly(const MultiPoly& p, Complex fval, const Point& z) {
  Complex s{};
  for (const auto& [e, c] : p.terms()) s += c * monomial_value(e, fval, z);
  return s;
}

double term_magnitude(const MultiPoly& p, Complex fval, const Point& z) {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s += std::abs(c * monomial_value(e, fval, z));
  return s;
}

std::string to_string(const MultiPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += i == 0 ? "f" : "z" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    const bool real = std::abs(c.imag()) <= 1e-12 * std::abs(c);
    std::string coef;
    bool negative = false;
    if (real) {
      negative = c.real() < 0;
      coef = sig6(std::abs(c.real()));
    } else {
      coef = "(" + sig6(c.real()) + (c.imag() < 0 ? "-" : "+") + sig6(std::abs(c.imag())) + "i)";
    }
    if (first) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    out += mono.empty() ? coef : coef + "*" + mono;
    first = false;
  }
  return out;
}

}  // namespace sepalg
