#include "sepalg/pipeline.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace sepalg;
namespace fs = std::filesystem;

namespace {

fs::path catalog(const std::string& name) { return fs::path(SEPALG_CATALOG_DIR) / (name + ".json"); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sepalg_tests" / name;
  fs::remove_all(dir);
  return dir;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Golden {
  const char* name;
  int exit_code;
  std::vector<std::pair<Exponents, double>> terms;  // unnormalized real oracle, empty if none
};

MultiPoly oracle(const Golden& g) {
  MultiPoly p(2);
  for (const auto& [e, c] : g.terms) p.add_term(e, c);
  return p.normalized();
}

}  // namespace

TEST_CASE("catalog golden runs") {
  const std::vector<Golden> goldens = {
      {"coordinate_lines_product", 0, {{{1, 0, 0}, 1.0}, {{0, 1, 1}, -1.0}}},
      {"coordinate_lines_sqrt", 0, {{{2, 0, 0}, 1.0}, {{0, 1, 1}, -1.0}, {{0, 0, 0}, -1.0}}},
      {"quadratic_product", 0, {{{1, 0, 0}, 1.0}, {{0, 1, 1}, -1.0}}},
      {"sheared_product", 0, {{{1, 0, 0}, 1.0}, {{0, 1, 1}, -1.0}, {{0, 1, 0}, -1.0}}},
      {"coordinate_lines_exp", 3, {}},
      {"identical_families", 2, {}},
  };
  for (const auto& g : goldens) {
    CAPTURE(g.name);
    const JobConfig job = load_config(catalog(g.name));
    const fs::path out = scratch(g.name);
    std::ostringstream log;
    CHECK(run(job, out, log) == g.exit_code);

    const Json manifest = read_json(out / "manifest.json");
    CHECK(manifest["exit_code"] == g.exit_code);
    CHECK(manifest["config_hash"] == job.source_hash);
    for (const auto& a : manifest["artifacts"]) {
      CHECK(fs::exists(out / a.get<std::string>()));
      if (a != "config.json") CHECK(read_json(out / a.get<std::string>()).contains("status"));
    }

    if (g.exit_code == 0) {
      const Json cert = read_json(out / "certificate.json");
      const MultiPoly P = multipoly_from_json(cert["polynomial"], 2);
      CHECK(P.distance(oracle(g)) < 1e-6);
      CHECK(cert["residuals"]["validation"].get<double>() <= 1e-9);
      const VerifyResult v = verify_certificate(cert, job);
      CHECK(v.samples == 1000);
      CHECK(v.pass);
    }
    if (g.exit_code == 3) {
      const Json none = read_json(out / "no_relation.json");
      CHECK(none["trace"].size() == 4);
      for (const auto& t : none["trace"]) CHECK(t["sigma_ratio"].get<double>() > 1e-4);
    }
    if (g.exit_code == 2) {
      CHECK(read_json(out / "general_position.json")["status"] == "fail");
      CHECK_FALSE(fs::exists(out / "certificate.json"));
    }
  }
}

TEST_CASE("profiles in the catalog") {
  const JobConfig job = load_config(catalog("quadratic_product"));
  const fs::path out = scratch("profile");
  std::ostringstream log;
  REQUIRE(run(job, out, log) == 0);
  const Json p = read_json(out / "profile.json");
  CHECK(p["status"] == "stable");
  CHECK(p["profile"]["p"] == Json::array({3, 1}));
  const Json cert = read_json(out / "certificate.json");
  CHECK(cert["N"] == degree_cap(1, [] {
          DegreeProfile P;
          P.d.resize(2, 2);
          P.d << 1, 0, 2, 1;
          P.p = Eigen::Vector2i(3, 1);
          return P;
        }()));

  const JobConfig sq = load_config(catalog("coordinate_lines_sqrt"));
  const fs::path out2 = scratch("profile_sqrt");
  REQUIRE(run(sq, out2, log) == 0);
  CHECK(read_json(out2 / "profile.json")["status"] == "not_polynomial");
  CHECK(read_json(out2 / "certificate.json")["restriction_polynomial"] == false);
}

TEST_CASE("runs are byte-identical") {
  const JobConfig job = load_config(catalog("coordinate_lines_sqrt"));
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  run(job, a, log);
  run(job, b, log);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    CAPTURE(e.path().filename().string());
    CHECK(read_bytes(e.path()) == read_bytes(b / e.path().filename()));
    ++files;
  }
  CHECK(files >= 6);
}

TEST_CASE("a different seed changes samples but not the relation") {
  JobConfig job = load_config(catalog("coordinate_lines_sqrt"));
  job.knobs.rng_seed = 1234;
  const fs::path out = scratch("seed");
  std::ostringstream log;
  REQUIRE(run(job, out, log) == 0);
  const Json cert = read_json(out / "certificate.json");
  CHECK(cert["seed"] == 1234);
  const MultiPoly want = oracle({"", 0, {{{2, 0, 0}, 1.0}, {{0, 1, 1}, -1.0}, {{0, 0, 0}, -1.0}}});
  CHECK(multipoly_from_json(cert["polynomial"], 2).distance(want) < 1e-6);
}

TEST_CASE("verify rejects a wrong certificate") {
  const JobConfig job = load_config(catalog("coordinate_lines_product"));
  Json cert = {{"polynomial", to_json(MultiPoly(2, {{{1, 0, 0}, 1.0}, {{0, 1, 0}, -1.0}}).normalized())},
               {"residuals", {{"validation", 1e-15}}},
               {"seed", 1}};
  CHECK_FALSE(verify_certificate(cert, job).pass);
}
