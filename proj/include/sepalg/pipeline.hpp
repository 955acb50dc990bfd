#pragma once

// Job orchestration: audits -> degree stabilization -> relation search.
//
// Exit codes: 0 relation certified, 1 configuration or IO error,
// 2 regularity / general-position audit failed, 3 no relation found.

#include "sepalg/config.hpp"
#include "sepalg/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace sepalg {

enum ExitCode : int { kExitRelation = 0, kExitConfig = 1, kExitPrecondition = 2, kExitNoRelation = 3 };

struct AuditResult {
  std::vector<RegularityReport> regularity;
  GeneralPositionReport general_position;
  bool pass = false;

  Json regularity_json() const;
  Json general_position_json() const;
};

AuditResult audit(const JobConfig& job);

/// Runs the whole job, writing artifacts and manifest.json into out_dir.
/// Progress goes to `log`; artifacts never contain timings, so equal
/// configs give byte-identical output.
int run(const JobConfig& job, const std::filesystem::path& out_dir, std::ostream& log);

struct VerifyResult {
  double max_residual = 0.0;
  double stored_residual = 0.0;
  double threshold = 0.0;
  int samples = 0;
  bool pass = false;
};

/// Re-evaluates a stored certificate on fresh samples from the job's domain.
/// Passes when the worst normalized residual is within 10x the stored one
/// (floored at 1e-15).
VerifyResult verify_certificate(const Json& certificate, const JobConfig& job, int samples = 1000,
                                std::optional<std::uint64_t> seed = std::nullopt);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace sepalg
