#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dagmm/graph.hpp"
#include "dagmm/posterior.hpp"
#include "dagmm/sampler.hpp"
#include "dagmm/synthgen.hpp"

namespace dagmm {

class IoError : public Error {
 public:
  using Error::Error;
};

namespace io {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

json to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const json& j);

json to_json(const Hyperparams& h);
Hyperparams hyperparams_from_json(const json& j);
json to_json(const ChainConfig& cfg);
ChainConfig chain_config_from_json(const json& j);

json to_json(const CleanReport& report);

/// C and D row-major, order as node ids, alpha; Z only when include_z.
json state_to_json(const ModelState& state, std::span<const std::string> ids, bool include_z);
/// Inverse of state_to_json; Z is left empty when absent.
ModelState state_from_json(const json& j, std::span<const std::string> ids);

/// iter,log_joint,alpha,C_1_1..C_K_K
std::string trace_header(int K);
std::string trace_row(std::int64_t iter, double log_joint, const ModelState& state);
std::string trace_csv(const Chain& chain);

/// Posterior accumulations written by fit: samples, C_mean, D_mean, alpha
/// stats and the position histogram.
json posterior_to_json(const PosteriorSummary& summary);
PosteriorSummary posterior_from_json(const json& j, double threshold);

json truth_to_json(const SynthTruth& truth, bool include_z);

}  // namespace io
}  // namespace dagmm
