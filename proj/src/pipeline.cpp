#include "sepalg/pipeline.hpp"

#include <fstream>
#include <ostream>

namespace sepalg {

namespace fs = std::filesystem;

Json AuditResult::regularity_json() const {
  Json fams = Json::array();
  bool ok = true;
  for (const auto& r : regularity) {
    fams.push_back(to_json(r));
    ok = ok && r.pass;
  }
  return {{"status", ok ? "pass" : "fail"}, {"families", fams}};
}

Json AuditResult::general_position_json() const {
  Json j = to_json(general_position);
  Json out = {{"status", general_position.pass ? "pass" : "fail"}};
  out.update(j);
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

AuditResult audit(const JobConfig& job) {
  AuditResult res;
  res.pass = true;
  for (const auto& F : job.families.families) {
    res.regularity.push_back(check_regularity(F, job.knobs.audit_samples, job.knobs.rng_seed));
    res.pass = res.pass && res.regularity.back().pass;
  }
  res.general_position = check_general_position(job.families, job.knobs.audit_samples, job.knobs.rng_seed);
  res.pass = res.pass && res.general_position.pass;
  return res;
}

int run(const JobConfig& job, const fs::path& out_dir, std::ostream& log) {
  fs::create_directories(out_dir);
  Json artifacts = Json::array();
  auto emit = [&](const std::string& name, const Json& j) {
    write_json(out_dir / name, j);
    artifacts.push_back(name);
  };
  auto finish = [&](int code, const std::string& status) {
    Json manifest = {{"status", status},
                     {"exit_code", code},
                     {"config_hash", job.source_hash},
                     {"function", job.function_text},
                     {"n", job.n},
                     {"seed", job.knobs.rng_seed},
                     {"knobs",
                      {{"K_min", job.knobs.K_min},
                       {"K_max", job.knobs.K_max},
                       {"max_degree", job.knobs.max_degree},
                       {"n_trials", job.knobs.n_trials},
                       {"audit_samples", job.knobs.audit_samples},
                       {"tol", job.knobs.tol},
                       {"degree_tol", job.knobs.degree_tol},
                       {"validation_tol", job.knobs.validation_tol}}},
                     {"artifacts", artifacts}};
    write_json(out_dir / "manifest.json", manifest);
    log << "status: " << status << " (exit " << code << ")\n";
    return code;
  };

  {
    std::ofstream cfg(out_dir / "config.json", std::ios::binary);
    cfg << job.source;
    artifacts.push_back("config.json");
  }

  log << "auditing regularity and general position (" << job.knobs.audit_samples << " samples)\n";
  const AuditResult aud = audit(job);
  emit("regularity.json", aud.regularity_json());
  emit("general_position.json", aud.general_position_json());
  if (!aud.pass) return finish(kExitPrecondition, "precondition_failed");

  log << "stabilizing degree profile (" << job.knobs.n_trials << " trials)\n";
  std::optional<DegreeProfile> profile;
  Json pj;
  StabilizeOptions so;
  so.n_trials = job.knobs.n_trials;
  so.max_degree = job.knobs.max_degree;
  so.tol = job.knobs.degree_tol;
  try {
    profile = stabilize_degrees(job.families, job.function, so, job.knobs.rng_seed);
    pj = {{"status", "stable"}, {"profile", to_json(*profile)}};
  } catch (const NotPolynomialError& e) {
    pj = {{"status", "not_polynomial"}, {"message", e.what()}, {"profile", nullptr}};
  } catch (const NoStableProfileError& e) {
    pj = {{"status", "no_stable_profile"}, {"message", e.what()}, {"profile", nullptr}};
  }
  emit("profile.json", pj);
  if (!profile) log << "degree profile unavailable (" << pj["status"].get<std::string>() << "); searching without N(K)\n";

  log << "searching for a relation, K = " << job.knobs.K_min << ".." << job.knobs.K_max << "\n";
  RelationOptions ro;
  ro.K_min = job.knobs.K_min;
  ro.K_max = job.knobs.K_max;
  ro.tol = job.knobs.tol;
  ro.validation_tol = job.knobs.validation_tol;
  const RelationResult result = find_relation(job.function, job.families, profile, ro, job.knobs.rng_seed);

  if (const auto* cert = std::get_if<RelationCertificate>(&result)) {
    Json cj = to_json(*cert);
    cj["config_hash"] = job.source_hash;
    emit("certificate.json", cj);
    log << "P = " << to_string(cert->P) << "  (K = " << cert->K << ")\n";
    return finish(kExitRelation, "relation_found");
  }
  const auto& none = std::get<NoRelation>(result);
  Json nj = to_json(none);
  nj["config_hash"] = job.source_hash;
  emit("no_relation.json", nj);
  return finish(kExitNoRelation, none.degenerate ? "degenerate_relation" : "no_relation_found");
}

VerifyResult verify_certificate(const Json& certificate, const JobConfig& job, int samples,
                                std::optional<std::uint64_t> seed) {
  const MultiPoly P = multipoly_from_json(certificate.at("polynomial"), job.n);
  VerifyResult v;
  v.samples = samples;
  const Json& stored = certificate.at("residuals").at("validation");
  v.stored_residual = stored.is_number() ? stored.get<double>() : 0.0;
  v.threshold = 10.0 * std::max(v.stored_residual, 1e-15);
  const std::uint64_t s = seed ? *seed : certificate.at("seed").get<std::uint64_t>();
  Rng rng(derive_seed(s, 0x7E51F));
  const auto pts = sample_evaluable(job.function, job.families.domain, samples, 5, rng);
  v.max_residual = relation_residual(P, job.function, pts);
  v.pass = v.max_residual <= v.threshold;
  return v;
}

}  // namespace sepalg
