#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hhslab/projection.hpp"

namespace hhslab {

struct AxiomConfig {
  std::size_t samples = 400;
  std::uint64_t seed = 1;
  /// Threshold κ_u for uniqueness, also the relevance cutoff for ν and
  /// large links.
  double kappa_u = 3;
  std::size_t delta_samples = 4000;
};

struct FactorDelta {
  std::string type;
  double delta = 0;
  bool exhaustive = false;
  std::size_t vertices = 0;
};

/// Sampled constants. Samples are drawn from the core ball of radius
/// ⌈r/2⌉ so that geodesics between them stay well inside the ball.
struct AxiomReport {
  StructureKind kind = StructureKind::Original;
  AxiomConfig config;
  int radius = 0;
  int core_radius = 0;
  std::size_t domains = 0;

  std::vector<FactorDelta> delta;
  double kappa0 = 0;
  std::size_t kappa_samples = 0;
  double e_bgi = 0;
  std::size_t bgi_samples = 0;
  double theta_e = 0;
  double alpha = 0;
  std::size_t realization_samples = 0;
  double theta_u = 0;
  std::size_t uniqueness_pairs = 0;
  double nu = 0;
  std::size_t nu_samples = 0;
  double lambda = 0;
  std::size_t large_link_witnesses = 0;
  std::size_t xi = 0;
  double xi_prime = 0;
  int nesting_chain = 0;
  ContainerCheck containers;
  std::size_t skipped = 0;
  /// Some sampler found candidates but completed fewer than a quarter of
  /// its budget.
  bool partial = false;
  std::map<std::string, bool> verdicts;

  bool pass() const;
};

AxiomReport check_axioms(const ProjectionTable& table,
                         const AxiomConfig& config = {});

}  // namespace hhslab
