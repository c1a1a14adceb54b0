#include "dsm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dsm/errors.hpp"

namespace dsm {

namespace {

double require_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigInvalid(std::string("missing or non-numeric field '") + key +
                        "'");
  return j[key].get<double>();
}

}  // namespace

Density parse_density(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw ConfigInvalid("density spec must be an object with a 'family'");
  std::string fam = j["family"].get<std::string>();
  try {
    if (fam == "constant") return Density::constant(require_number(j, "value"));
    if (fam == "linear")
      return Density::linear(require_number(j, "a"), require_number(j, "b"));
    if (fam == "exp") {
      double scale = j.contains("scale") ? require_number(j, "scale") : 1.0;
      return Density::exponential(require_number(j, "gamma"), scale);
    }
    if (fam == "power")
      return Density::power(require_number(j, "coeff"),
                            require_number(j, "exponent"));
    if (fam == "table") {
      if (!j.contains("points") || !j["points"].is_array())
        throw ConfigInvalid("table family needs a 'points' array");
      std::vector<double> s, v;
      for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
            !p[1].is_number())
          throw ConfigInvalid("table points must be [s, v] number pairs");
        s.push_back(p[0].get<double>());
        v.push_back(p[1].get<double>());
      }
      return Density::table(s, v);
    }
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const Error& e) {
    throw ConfigInvalid(std::string("invalid density parameters: ") + e.what());
  }
  throw ConfigInvalid("unknown density family '" + fam + "'");
}

Config parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigInvalid("config must be a JSON object");
  Config cfg;
  cfg.raw = j;
  if (!j.contains("f") || !j.contains("g"))
    throw ConfigInvalid("config needs density specs 'f' and 'g'");
  cfg.model.f = parse_density(j["f"]);
  cfg.model.g = parse_density(j["g"]);
  cfg.model.c = require_number(j, "c");
  if (!(cfg.model.c > 0) || !std::isfinite(cfg.model.c))
    throw ConfigInvalid("aspect ratio c must be positive and finite");
  double nd = require_number(j, "n");
  cfg.n = std::llround(nd);
  if (cfg.n < 1 || std::abs(nd - static_cast<double>(cfg.n)) > 1e-9)
    throw ConfigInvalid("n must be a positive integer");
  cfg.k = std::llround(cfg.model.c * static_cast<double>(cfg.n));
  if (j.contains("k")) {
    double kd = require_number(j, "k");
    if (std::llround(kd) != cfg.k ||
        std::abs(kd - static_cast<double>(cfg.k)) > 1e-9)
      throw ConfigInvalid("k = " + std::to_string(std::llround(kd)) +
                          " contradicts round(c*n) = " + std::to_string(cfg.k) +
                          "; fix the config rather than relying on a silent "
                          "adjustment");
  }
  try {
    discretize(cfg.model, static_cast<int>(cfg.n));
  } catch (const Error& e) {
    throw ConfigInvalid(std::string("specialization rejected: ") + e.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("command") && j.contains("config"))
    j = j["config"];  // accept a manifest for exact reruns
  return parse_config(j);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(header[i]);
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << csv_escape(row[i]);
    }
    os << '\n';
  }
  write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

Json partition_to_json(const Partition& lam) {
  Json arr = Json::array();
  for (int p : lam.parts) arr.push_back(p);
  return arr;
}

namespace {
Json finite_or_string(double v) {
  if (std::isfinite(v)) return Json(v);
  return Json(format_double(v));
}
}  // namespace

Json support_to_json(const SupportData& sup) {
  Json j;
  j["z_minus"] = finite_or_string(sup.z_minus);
  j["z_plus"] = finite_or_string(sup.z_plus);
  j["x_minus"] = finite_or_string(sup.x_minus);
  j["x_plus"] = finite_or_string(sup.x_plus);
  j["edge_density_minus"] = sup.edge_density_minus;
  j["edge_density_plus"] = sup.edge_density_plus;
  return j;
}

std::string environment_text(const Environment& env) {
  std::ostringstream os;
  os << env.n << ' ' << env.k << '\n';
  for (int i = 1; i <= env.n; ++i) {
    for (int j = 1; j <= env.k; ++j) {
      if (j > 1) os << ' ';
      os << static_cast<int>(env.bit(i, j));
    }
    os << '\n';
  }
  return os.str();
}

void write_distribution_csv(const std::string& path,
                            const ExactDistribution& dist) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(dist.lambdas.size());
  for (std::size_t i = 0; i < dist.lambdas.size(); ++i)
    rows.push_back({partition_to_json(dist.lambdas[i]).dump(),
                    format_double(dist.weights[i]),
                    format_double(dist.probability[i])});
  write_csv(path, {"partition", "weight", "probability"}, rows);
}

void write_manifest(const std::string& path, const std::string& command,
                    const Json& config_echo, std::uint64_t seed, int workers,
                    const std::map<std::string, double>& timings_ms,
                    const std::vector<std::string>& outputs) {
  Json j;
  j["command"] = command;
  j["config"] = config_echo;
  j["seed"] = seed;
  j["workers"] = workers;
  j["versions"] = {{"artifact", kVersion}, {"format", kFormatVersion}};
  Json t = Json::object();
  for (const auto& [name, ms] : timings_ms) t[name] = ms;
  j["timings_ms"] = t;
  j["outputs"] = outputs;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace dsm
