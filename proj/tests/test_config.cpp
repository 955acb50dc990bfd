#include "sepalg/config.hpp"

#include <doctest.h>

using namespace sepalg;

namespace {

const char* kMinimal = R"({
  "function": "z1*z2",
  "families": [
    {"coords": [["0", "1"], ["c1"]]},
    {"coords": [["c1"], ["0", "1"]]}
  ],
  "domain": {"center": [[0, 0], [0, 0]], "radius": [1, 1]}
})";

std::string error_pointer(const std::string& text) {
  try {
    load_config_text(text);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<no error>";
}

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const JobConfig job = load_config_text(kMinimal);
  CHECK(job.n == 2);
  CHECK(job.families.dim() == 2);
  CHECK(job.knobs.tol == 1e-8);
  CHECK(job.knobs.K_min == 1);
  CHECK(job.knobs.K_max == 8);
  CHECK(job.knobs.n_trials == 400);
  CHECK(job.knobs.max_degree == 24);
  CHECK(job.knobs.rng_seed == 42);
  CHECK(job.source_hash == sha256_hex(kMinimal));
  // Default parameter domain: centered at 0, twice the reach of D.
  CHECK(job.families.families[0].parameter_domain().radius[0] == doctest::Approx(2.0));
}

TEST_CASE("knob overrides and validation") {
  const JobConfig job = load_config_text(with("\"domain\"", "\"knobs\": {\"K_max\": 3, \"rng_seed\": 7, \"tol\": 1e-9}, \"domain\""));
  CHECK(job.knobs.K_max == 3);
  CHECK(job.knobs.rng_seed == 7);
  CHECK(job.knobs.tol == 1e-9);

  CHECK(error_pointer(with("\"domain\"", "\"knobs\": {\"K_max\": 0}, \"domain\"")) == "/knobs/K_max");
  CHECK(error_pointer(with("\"domain\"", "\"knobs\": {\"K_min\": 3, \"K_max\": 2}, \"domain\"")) == "/knobs/K_max");
  CHECK(error_pointer(with("\"domain\"", "\"knobs\": {\"tol\": -1}, \"domain\"")) == "/knobs/tol");
  Knobs k;
  k.K_min = 0;
  CHECK_THROWS_AS(validate_knobs(k), ConfigError);
}

TEST_CASE("family count must match the ambient dimension") {
  const std::string one = R"({
    "function": "z1*z2",
    "families": [{"coords": [["0", "1"], ["c1"]]}],
    "domain": {"center": [[0, 0], [0, 0]], "radius": [1, 1]}
  })";
  CHECK(error_pointer(one) == "/families");
}

TEST_CASE("schema errors carry JSON pointers") {
  CHECK(error_pointer("{") == "/");
  CHECK(error_pointer("[]") == "/");
  CHECK(error_pointer(with("\"function\": \"z1*z2\",", "")) == "/function");
  CHECK(error_pointer(with("z1*z2", "z1**z2")) == "/function");
  CHECK(error_pointer(with("\"radius\": [1, 1]", "\"radius\": [1, -1]")) == "/domain/radius/1");
  CHECK(error_pointer(with("\"radius\": [1, 1]", "\"radius\": [1]")) == "/domain/radius");
  CHECK(error_pointer(with("[\"c1\"], [\"0\", \"1\"]", "[\"c1\"], [\"0\", \"c2\"]")) == "/families/1/coords/1/1");
  CHECK(error_pointer(with("[\"c1\"], [\"0\", \"1\"]", "[\"c1\"], []")) == "/families/1/coords/1");
  CHECK(error_pointer(with("[\"c1\"], [\"0\", \"1\"]", "[\"c1\"], [\"5\"]")) == "/families");
}

TEST_CASE("parse errors report the position") {
  try {
    load_config_text(with("z1*z2", "z1*(z2"));
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.pointer() == "/function");
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("numeric coefficients and explicit parameter domains") {
  const JobConfig job = load_config_text(with(
      "{\"coords\": [[\"c1\"], [\"0\", \"1\"]]}",
      "{\"coords\": [[\"c1\"], [0, 1.5]], \"params\": {\"center\": [[0, 0], [1, 0]], \"radius\": [3, 3]}}"));
  const auto& F = job.families.families[1];
  CHECK(F.parameter_domain().center[1] == Complex(1.0, 0.0));
  CHECK(F.max_t_degree() == 1);
  VectorXc c(1);
  c << 2.0;
  Point z = curve_point(F, 2.0, c);
  CHECK(z[1] == Complex(3.0, 0.0));
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
