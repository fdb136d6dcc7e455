#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hhslab/axioms.hpp"
#include "hhslab/coarse.hpp"
#include "hhslab/walls.hpp"

namespace hhslab {

/// Everything that determines a report's content. Echoed verbatim into every
/// artifact; thread count is deliberately absent since it never changes
/// results.
struct RunConfig {
  std::string command;
  std::string graph;  // path as given
  int radius = 6;
  std::uint64_t seed = 1;
  double threshold_s = 10;
  double contraction_a = 0.5;
  double tau_min = kTauMin;
  double growth_slope = kGrowthSlope;
  std::size_t budget = kDefaultBallBudget;
  std::string space = "ts";  // classify, cone
  std::string structure = "original";  // check-axioms, distance-formula
  std::vector<std::string> words;  // classify, contracting, stability
  std::size_t pairs = 200;  // distance-formula
  int k = 2;  // random-subgroups
  int steps = 15;
  int trials = 20;
};

nlohmann::json to_json(const RunConfig& c);

/// Error tagged with the pipeline stage that raised it.
class StageError : public std::runtime_error {
 public:
  enum class Kind { Usage, Resource, Internal };
  StageError(Kind kind, const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), kind_(kind), stage_(stage) {}
  Kind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  Kind kind_;
  std::string stage_;
};

struct Artifact {
  std::string name;
  std::string content;
};

struct Report {
  std::string command;
  nlohmann::json config;
  nlohmann::json result = nlohmann::json::object();
  bool pass = true;
  std::vector<Artifact> extra;  // DOT / CSV side files

  /// Sorted keys, two-space indent, trailing newline.
  std::string to_json() const;
};

/// Subcommands: ball, walls, contact, domains, restructure, cone, largest,
/// classify, check-axioms, distance-formula, contracting, stability,
/// random-subgroups, pentagon-report, square-report, f2-report.
Report run_report(const RunConfig& config, unsigned threads = 1);
const std::vector<std::string>& report_commands();

/// Golden pipelines; the default graph is the shipped example when empty.
Report pentagon_report(RunConfig config);
Report square_report(RunConfig config);
Report f2_report(RunConfig config);

}  // namespace hhslab
