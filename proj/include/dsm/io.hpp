#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsm/density.hpp"
#include "dsm/limit_shape.hpp"
#include "dsm/partition.hpp"
#include "dsm/sampler.hpp"
#include "dsm/schur.hpp"

namespace dsm {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

struct Config {
  Model model;
  long long n = 0;
  long long k = 0;  // always round(c n); explicit k in the file must agree
  Json raw;         // config document as given, echoed into manifests
};

// {"family": "constant"|"linear"|"exp"|"power"|"table", ...params}
Density parse_density(const Json& j);

Config parse_config(const Json& j);

// reads either a config document or a manifest (its "config" sub-object)
Config load_config(const std::string& path);

// shortest decimal that round-trips; "inf"/"-inf"/"nan" for non-finite
std::string format_double(double v);

std::string csv_escape(const std::string& field);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& content);

Json partition_to_json(const Partition& lam);
Json support_to_json(const SupportData& sup);

// "n k" header line, then n rows of k space-separated bits
std::string environment_text(const Environment& env);

// rows (partition, weight, probability); partition serialized as JSON
void write_distribution_csv(const std::string& path,
                            const ExactDistribution& dist);

void write_manifest(const std::string& path, const std::string& command,
                    const Json& config_echo, std::uint64_t seed, int workers,
                    const std::map<std::string, double>& timings_ms,
                    const std::vector<std::string>& outputs);

}  // namespace dsm
