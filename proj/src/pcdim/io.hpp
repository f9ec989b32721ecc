#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcdim/estimator.hpp"
#include "pcdim/sim.hpp"
#include "vendor/json.hpp"

namespace pcdim {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0.0";
inline constexpr const char* kToolName = "pcdim";
inline constexpr const char* kToolVersion = "1.0.0";

struct ReadOptions {
  std::string delimiter = "auto";  // "auto", ",", ";", "tab", "space"
  bool columns_are_observations = false;
  bool header = false;
};

DataMatrix parse_matrix_text(const std::string& text, const ReadOptions& opts,
                             const std::string& origin);
DataMatrix read_matrix(const std::string& path, const ReadOptions& opts);

std::string read_text_file(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const void* data, std::size_t len);
// "fnv1a64:<16 hex digits>" over the raw file bytes.
std::string file_fingerprint(const std::string& path);

struct EstimateDocOptions {
  double alpha = 0.1;
  bool run_dagostino = true;
  bool run_triples = true;
  std::size_t max_k = kAutoM;
  bool center = false;
  bool standardize = false;
  ReadOptions read;
};

EstimateDocOptions estimate_options_from_json(const std::string& json_text);
Json build_estimate_document(const std::string& input_path, const EstimateDocOptions& opts);

struct SweepDocOptions {
  EstimateDocOptions base;
  std::vector<double> alphas;
};

SweepDocOptions sweep_options_from_json(const std::string& json_text);
// input_path may be a delimited matrix or a previously written estimate
// document (detected by a leading '{'); the latter reuses its p-values.
Json build_alpha_sweep_document(const std::string& input_path, const SweepDocOptions& opts);

// "I".."IV" presets for (s, g, beta, distribution).
struct CasePreset {
  double s, g, beta;
  Distribution distribution;
};
CasePreset case_preset(const std::string& name);

SimSpec sim_spec_from_json(const std::string& json_text, std::string* case_label);
Json build_simulate_document(const SimSpec& spec, const std::string& case_label);

}  // namespace pcdim
