#pragma once

#include <string>

#include "json.hpp"
#include "symdyn/factor.hpp"
#include "symdyn/lowering.hpp"
#include "symdyn/sets.hpp"

namespace symdyn {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::uint64_t seed = 1;
  std::vector<long long> m_list{2, 3, 4};
  long long n_max = 24;
  double lambda_tol = 1e-6;
  std::string out;
};

RunConfig parse_run_config(const Json& j);
Json run_config_json(const RunConfig& c);

// System documents: {"kind": "subshift"|"fan", ...}; unknown fields rejected.
struct SystemSpec {
  bool is_fan = false;
  Subshift shift;
};
SystemSpec parse_system(const Json& j);
Json system_json(const SystemSpec& s);
Json system_json(const Subshift& s);

CompactSetPtr parse_set(const Json& j);
Json set_json(const CompactSet& K);

SlidingBlockCode parse_code(const Json& j);
Json code_json(const SlidingBlockCode& c);

Json staged_artifact_json(const StagedFamily& fam, const LoweringCertificate& cert,
                          const RunConfig& config);
// Re-validates the family and reproduces the certificate integers bit-exactly.
struct ArtifactCheck {
  bool valid = false;
  std::string message;
};
ArtifactCheck verify_staged_artifact(const Json& artifact);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string canonical_dump(const Json& j);

// Bit-exact double round-trip through hex float text.
std::string double_to_text(double x);
double double_from_text(const std::string& s);

}  // namespace symdyn
