#include "sepalg/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace sepalg;

int config_error(const std::string& what) {
  std::cerr << "error: " << what << '\n';
  return kExitConfig;
}

int solve(const std::string& config_path, std::optional<std::string> out, std::optional<std::uint64_t> seed,
          std::optional<int> k_max, std::optional<double> tol) {
  JobConfig job = load_config(config_path);
  if (seed) job.knobs.rng_seed = *seed;
  if (k_max) job.knobs.K_max = *k_max;
  if (tol) job.knobs.tol = *tol;
  validate_knobs(job.knobs);
  std::filesystem::path dir = out ? *out : (job.output.empty() ? std::string("out") : job.output);
  return run(job, dir, std::cout);
}

int check(const std::string& config_path) {
  const JobConfig job = load_config(config_path);
  const AuditResult a = audit(job);
  Json j = {{"status", a.pass ? "pass" : "precondition_failed"},
            {"config_hash", job.source_hash},
            {"regularity", a.regularity_json()},
            {"general_position", a.general_position_json()}};
  std::cout << j.dump(2) << '\n';
  return a.pass ? kExitRelation : kExitPrecondition;
}

int verify(const std::string& cert_path, const std::string& config_path) {
  const JobConfig job = load_config(config_path);
  std::ifstream in(cert_path, std::ios::binary);
  if (!in) return config_error("cannot read certificate '" + cert_path + "'");
  Json cert;
  try {
    cert = Json::parse(in);
  } catch (const Json::parse_error& e) {
    return config_error(std::string("malformed certificate: ") + e.what());
  }
  if (cert.value("status", "") != "relation_found") return config_error("file is not a relation certificate");
  if (cert.contains("config_hash") && cert["config_hash"] != job.source_hash)
    std::cerr << "warning: certificate was produced from a different config (hash mismatch)\n";
  const VerifyResult v = verify_certificate(cert, job);
  Json j = {{"status", v.pass ? "verified" : "failed"},
            {"samples", v.samples},
            {"max_residual", v.max_residual},
            {"stored_residual", v.stored_residual},
            {"threshold", v.threshold}};
  std::cout << j.dump(2) << '\n';
  return v.pass ? kExitRelation : kExitNoRelation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover polynomial relations for separately algebraic functions"};
  app.require_subcommand(1);

  std::string config, certificate;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> k_max;
  std::optional<double> tol;

  auto* solve_cmd = app.add_subcommand("solve", "run audits, degree stabilization and relation search");
  solve_cmd->add_option("config", config, "job configuration (JSON)")->required();
  solve_cmd->add_option("--out", out, "output directory");
  solve_cmd->add_option("--seed", seed, "override knobs.rng_seed");
  solve_cmd->add_option("--k-max", k_max, "override knobs.K_max");
  solve_cmd->add_option("--tol", tol, "override knobs.tol");

  auto* check_cmd = app.add_subcommand("check", "run only the regularity and general-position audits");
  check_cmd->add_option("config", config, "job configuration (JSON)")->required();

  auto* verify_cmd = app.add_subcommand("verify", "re-validate a stored certificate on fresh samples");
  verify_cmd->add_option("certificate", certificate, "certificate.json from a solve run")->required();
  verify_cmd->add_option("config", config, "job configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*solve_cmd) return solve(config, out, seed, k_max, tol);
    if (*check_cmd) return check(config);
    if (*verify_cmd) return verify(certificate, config);
  } catch (const ConfigError& e) {
    return config_error(e.what());
  } catch (const std::exception& e) {
    return config_error(e.what());
  }
  return kExitConfig;
}
