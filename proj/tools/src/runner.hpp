#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace finharm::cli {

/// Outcome of one experiment; the numeric value is the process exit code.
enum class Status : int {
  Pass = 0,
  ConclusionFailed = 1,
  HypothesisOnly = 2,  ///< nothing failed, but at least one statement was vacuous
};

inline constexpr int kUsageExit = 3;

Status worst(Status a, Status b);
std::string to_string(Status s);

/// Invalid configuration; `pointer` is the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct RunContext {
  std::uint64_t seed = 42;
  std::filesystem::path out = "out";
  double grid_density = 20.0;  ///< grid points per unit length for continuous grids
  std::ostream* log = nullptr;
  std::vector<std::filesystem::path> artifacts;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
};

const std::vector<ExperimentInfo>& registry();

/// Validates `params` for experiment `name`, runs it and writes its CSV files into ctx.out.
Status run_experiment(const std::string& name, const nlohmann::json& params, RunContext& ctx);

/// Experiment name, seed and params from a versioned config document.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 42;
  bool has_seed = false;
  nlohmann::json params = nlohmann::json::object();
};

ExperimentConfig parse_config(const nlohmann::json& doc);

}  // namespace finharm::cli
