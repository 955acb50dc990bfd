#include "sepalg/io.hpp"

#include <cmath>
#include <stdexcept>

namespace sepalg {

namespace {

// JSON has no infinities; report them as null.
Json real(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(Complex c) { return Json::array({real(c.real()), real(c.imag())}); }

Json to_json(const VectorXc& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

Json to_json(const MultiPoly& p) {
  Json a = Json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it)
    a.push_back({{"exponents", it->first}, {"re", it->second.real()}, {"im", it->second.imag()}});
  return a;
}

MultiPoly multipoly_from_json(const Json& j, int n) {
  if (!j.is_array()) throw std::runtime_error("polynomial must be an array of terms");
  MultiPoly p(n);
  for (const auto& t : j) {
    auto e = t.at("exponents").get<std::vector<int>>();
    if (static_cast<int>(e.size()) != n + 1)
      throw std::runtime_error("term has " + std::to_string(e.size()) + " exponents, expected " + std::to_string(n + 1));
    p.add_term(std::move(e), {t.at("re").get<double>(), t.at("im").get<double>()});
  }
  return p;
}

Json to_json(const DegreeProfile& p) {
  Json d = Json::array();
  for (Eigen::Index i = 0; i < p.d.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index m = 0; m < p.d.cols(); ++m) row.push_back(p.d(i, m));
    d.push_back(row);
  }
  Json pv = Json::array();
  for (Eigen::Index m = 0; m < p.p.size(); ++m) pv.push_back(p.p[m]);
  return {{"d", d},
          {"p", pv},
          {"subdomain_center", to_json(p.subdomain_center)},
          {"subdomain_radius", p.subdomain_radius},
          {"support", p.support},
          {"trials", p.trials},
          {"confirmed", p.confirmed},
          {"discarded", p.discarded},
          {"warnings", p.warnings}};
}

Json to_json(const RegularityReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"params", to_json(s.params)},
                       {"roundtrip_error", real(s.roundtrip_error)},
                       {"condition", real(s.condition)},
                       {"error", s.error.empty() ? Json(nullptr) : Json(s.error)}});
  return {{"family", r.family + 1},
          {"pass", r.pass},
          {"max_roundtrip_error", real(r.max_roundtrip_error)},
          {"max_condition", real(r.max_condition)},
          {"failures", r.failures},
          {"samples", samples}};
}

Json to_json(const GeneralPositionReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"point", to_json(s.z)},
                       {"abs_det", real(s.abs_det)},
                       {"ratio", real(s.ratio)},
                       {"error", s.error.empty() ? Json(nullptr) : Json(s.error)}});
  return {{"pass", r.pass},
          {"min_abs_det", real(r.min_abs_det)},
          {"min_ratio", real(r.min_ratio)},
          {"worst_point", r.worst_point.size() ? to_json(r.worst_point) : Json(nullptr)},
          {"failures", r.failures},
          {"samples", samples}};
}

Json to_json(const KTrace& t) {
  return {{"K", t.K},
          {"columns", t.columns},
          {"rows", t.rows},
          {"sigma_ratio", real(t.sigma_ratio)},
          {"nullity", t.nullity},
          {"validation_residual", t.validation_residual < 0 ? Json(nullptr) : real(t.validation_residual)},
          {"outcome", t.outcome}};
}

namespace {

Json trace_json(const std::vector<KTrace>& trace) {
  Json a = Json::array();
  for (const auto& t : trace) a.push_back(to_json(t));
  return a;
}

}  // namespace

Json to_json(const RelationCertificate& c) {
  return {{"status", "relation_found"},
          {"polynomial", to_json(c.P)},
          {"rendered", to_string(c.P)},
          {"K", c.K},
          {"N", c.N ? Json(*c.N) : Json(nullptr)},
          {"restriction_polynomial", c.profile.has_value()},
          {"residuals", {{"fit", real(c.fit_residual)}, {"validation", real(c.validation_residual)}}},
          {"sample_counts", {{"fit", c.fit_samples}, {"validation", c.validation_samples}}},
          {"profile", c.profile ? to_json(*c.profile) : Json(nullptr)},
          {"seed", c.rng_seed},
          {"trace", trace_json(c.trace)},
          {"notes",
           {"degree profile stabilized by Monte Carlo sampling with a confirmation ball, not proved constant",
            "regularity and general position audited at samples only"}}};
}

Json to_json(const NoRelation& r) {
  return {{"status", r.degenerate ? "degenerate_relation" : "no_relation_found"},
          {"seed", r.rng_seed},
          {"trace", trace_json(r.trace)}};
}

}  // namespace sepalg
