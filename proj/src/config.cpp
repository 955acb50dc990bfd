#include "sepalg/config.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace sepalg {

using nlohmann::json;

namespace {

std::string ptr(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string ptr(const std::string& base, std::size_t k) { return base + "/" + std::to_string(k); }

const json& require(const json& obj, const std::string& key, const std::string& at) {
  if (!obj.is_object()) throw ConfigError(at.empty() ? "/" : at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(ptr(at, key), "required field is missing");
  return *it;
}

const json& require_array(const json& v, const std::string& at, std::size_t size) {
  if (!v.is_array()) throw ConfigError(at, "expected an array");
  if (v.size() != size)
    throw ConfigError(at, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  return v;
}

double number(const json& v, const std::string& at) {
  if (!v.is_number()) throw ConfigError(at, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(at, "must be finite");
  return x;
}

Complex complex_value(const json& v, const std::string& at) {
  if (v.is_number()) return {number(v, at), 0.0};
  require_array(v, at, 2);
  return {number(v[0], ptr(at, 0)), number(v[1], ptr(at, 1))};
}

Polydisc polydisc(const json& v, const std::string& at, int n) {
  Polydisc d;
  const json& center = require_array(require(v, "center", at), ptr(at, "center"), static_cast<std::size_t>(n));
  const json& radius = require_array(require(v, "radius", at), ptr(at, "radius"), static_cast<std::size_t>(n));
  d.center.resize(n);
  d.radius.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    d.center[i] = complex_value(center[k], ptr(ptr(at, "center"), k));
    d.radius[i] = number(radius[k], ptr(ptr(at, "radius"), k));
    if (d.radius[i] <= 0.0) throw ConfigError(ptr(ptr(at, "radius"), k), "radius must be positive");
  }
  return d;
}

std::string coefficient_text(const json& v, const std::string& at) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << number(v, at);
    return os.str();
  }
  throw ConfigError(at, "coefficient must be an expression string or a number");
}

int ambient_dimension(const std::string& text) {
  static const std::regex zvar(R"((^|[^A-Za-z0-9_])z([0-9]+)(?![A-Za-z0-9_]))");
  int n = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), zvar); it != std::sregex_iterator(); ++it)
    n = std::max(n, std::stoi((*it)[2].str()));
  return n;
}

int positive_int(const json& knobs, const char* key, int fallback, const std::string& at) {
  auto it = knobs.find(key);
  if (it == knobs.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError(ptr(at, key), "expected an integer");
  const auto v = it->get<long long>();
  if (v <= 0 || v > 1'000'000) throw ConfigError(ptr(at, key), "must be a positive integer");
  return static_cast<int>(v);
}

double positive_real(const json& knobs, const char* key, double fallback, const std::string& at) {
  auto it = knobs.find(key);
  if (it == knobs.end()) return fallback;
  const double v = number(*it, ptr(at, key));
  if (v <= 0.0) throw ConfigError(ptr(at, key), "must be positive");
  return v;
}

}  // namespace

void validate_knobs(const Knobs& k) {
  if (k.K_min < 1) throw ConfigError("/knobs/K_min", "must be >= 1");
  if (k.K_max < k.K_min) throw ConfigError("/knobs/K_max", "must be >= K_min");
  if (k.max_degree < 1) throw ConfigError("/knobs/max_degree", "must be >= 1");
  if (k.n_trials < 1) throw ConfigError("/knobs/n_trials", "must be >= 1");
  if (k.audit_samples < 1) throw ConfigError("/knobs/audit_samples", "must be >= 1");
  if (!(k.tol > 0.0)) throw ConfigError("/knobs/tol", "must be positive");
  if (!(k.degree_tol > 0.0)) throw ConfigError("/knobs/degree_tol", "must be positive");
  if (!(k.validation_tol > 0.0)) throw ConfigError("/knobs/validation_tol", "must be positive");
}

JobConfig load_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("/", "expected an object");

  JobConfig cfg;
  cfg.source = text;
  cfg.source_hash = sha256_hex(text);

  const json& fn = require(root, "function", "");
  if (!fn.is_string()) throw ConfigError("/function", "expected an expression string");
  cfg.function_text = fn.get<std::string>();
  cfg.n = ambient_dimension(cfg.function_text);
  if (cfg.n == 0) throw ConfigError("/function", "function must use at least one variable z1..zn");
  std::vector<std::string> zvars;
  for (int i = 1; i <= cfg.n; ++i) zvars.push_back("z" + std::to_string(i));
  try {
    cfg.function = parse(cfg.function_text, zvars);
  } catch (const ParseError& e) {
    throw ConfigError("/function", e.what());
  }

  const int n = cfg.n;
  const Polydisc domain = polydisc(require(root, "domain", ""), "/domain", n);

  const json& fams = require(root, "families", "");
  if (!fams.is_array()) throw ConfigError("/families", "expected an array");
  if (static_cast<int>(fams.size()) != n)
    throw ConfigError("/families", "family count " + std::to_string(fams.size()) +
                                       " does not match ambient dimension " + std::to_string(n) +
                                       " inferred from the function's z-variables");

  const json* top_params = nullptr;
  if (auto it = root.find("params"); it != root.end()) {
    if (!it->is_array()) throw ConfigError("/params", "expected an array with one parameter domain per family");
    top_params = &require_array(*it, "/params", static_cast<std::size_t>(n));
  }

  double reach = 0.0;
  for (int i = 0; i < n; ++i) reach = std::max(reach, std::abs(domain.center[i]) + domain.radius[i]);
  const Polydisc default_params{VectorXc::Zero(n), Eigen::VectorXd::Constant(n, 2.0 * reach)};

  std::vector<CurveFamily> families;
  const auto names = parameter_names(n);
  for (int m = 0; m < n; ++m) {
    const auto mk = static_cast<std::size_t>(m);
    const std::string at = ptr("/families", mk);
    const json& coords = require_array(require(fams[mk], "coords", at), ptr(at, "coords"), static_cast<std::size_t>(n));
    std::vector<std::vector<Expr>> rules;
    for (int i = 0; i < n; ++i) {
      const auto ik = static_cast<std::size_t>(i);
      const std::string rat = ptr(ptr(at, "coords"), ik);
      const json& rule = coords[ik];
      if (!rule.is_array() || rule.empty()) throw ConfigError(rat, "expected a non-empty list of t-coefficients");
      auto& out = rules.emplace_back();
      for (std::size_t j = 0; j < rule.size(); ++j) {
        try {
          out.push_back(parse(coefficient_text(rule[j], ptr(rat, j)), names));
        } catch (const ParseError& e) {
          throw ConfigError(ptr(rat, j), e.what());
        }
      }
    }
    Polydisc params = default_params;
    if (auto it = fams[mk].find("params"); it != fams[mk].end()) params = polydisc(*it, ptr(at, "params"), n);
    else if (top_params) params = polydisc((*top_params)[mk], ptr("/params", mk), n);
    try {
      families.emplace_back(m, std::move(rules), std::move(params));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(at, e.what());
    }
  }
  try {
    cfg.families = FamilySet(std::move(families), domain);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/families", e.what());
  }

  if (auto it = root.find("knobs"); it != root.end()) {
    const json& k = *it;
    if (!k.is_object()) throw ConfigError("/knobs", "expected an object");
    Knobs d;
    cfg.knobs.K_min = positive_int(k, "K_min", d.K_min, "/knobs");
    cfg.knobs.K_max = positive_int(k, "K_max", d.K_max, "/knobs");
    cfg.knobs.max_degree = positive_int(k, "max_degree", d.max_degree, "/knobs");
    cfg.knobs.n_trials = positive_int(k, "n_trials", d.n_trials, "/knobs");
    cfg.knobs.audit_samples = positive_int(k, "audit_samples", d.audit_samples, "/knobs");
    cfg.knobs.tol = positive_real(k, "tol", d.tol, "/knobs");
    cfg.knobs.degree_tol = positive_real(k, "degree_tol", d.degree_tol, "/knobs");
    cfg.knobs.validation_tol = positive_real(k, "validation_tol", d.validation_tol, "/knobs");
    if (auto s = k.find("rng_seed"); s != k.end()) {
      if (!s->is_number_unsigned()) throw ConfigError("/knobs/rng_seed", "expected a non-negative integer");
      cfg.knobs.rng_seed = s->get<std::uint64_t>();
    }
  }
  validate_knobs(cfg.knobs);

  if (auto it = root.find("output"); it != root.end()) {
    if (!it->is_string()) throw ConfigError("/output", "expected a path string");
    cfg.output = it->get<std::string>();
  }
  return cfg;
}

JobConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str());
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

}  // namespace sepalg
