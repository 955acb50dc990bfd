#pragma once

#include "sepalg/curves.hpp"
#include "sepalg/expr.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace sepalg {

/// Schema violation; `pointer` is the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct Knobs {
  int K_min = 1;
  int K_max = 8;
  int max_degree = 24;
  int n_trials = 400;
  int audit_samples = 64;
  double tol = 1e-8;
  double degree_tol = 1e-8;
  double validation_tol = 1e-8;
  std::uint64_t rng_seed = 42;
};

struct JobConfig {
  std::string function_text;
  Expr function;  // over z1..zn
  int n = 0;
  FamilySet families;
  Knobs knobs;
  std::string output;
  std::string source;       // raw config text
  std::string source_hash;  // sha256 of source, hex
};

/// Parses and validates a job config, filling defaults.
JobConfig load_config_text(const std::string& text);
JobConfig load_config(const std::filesystem::path& path);

/// Re-checks knob invariants after command-line overrides.
void validate_knobs(const Knobs& k);

std::string sha256_hex(const std::string& bytes);

}  // namespace sepalg
