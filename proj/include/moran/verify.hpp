#ifndef MORAN_VERIFY_HPP
#define MORAN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "moran/ancestry.hpp"
#include "moran/lineage.hpp"

namespace moran {

/// One verification criterion: a property of the simulator against the
/// limit objects (wave profile, wavespeed, lineage stationary density,
/// pair coalescent) checked at desk scale with pinned tolerances.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;   // measured values vs thresholds
  double seconds = 0.0;
};

/// Cross-criterion artifacts: the exactness checks (criterion 7) assert
/// structural invariants on every path traced by criteria 5 and 6.
struct VerifyArtifacts {
  // criterion 5: per sampled lineage, the ancestor chain (most recent first)
  std::vector<std::vector<AncestryRecorder::PathStep>> stat_paths;
  // forward coalescence times for sampled pairs, with both chains
  std::vector<std::pair<size_t, size_t>> stat_pairs;  // indices into stat_paths
  std::vector<double> stat_pair_tc;                   // forward time, -inf if none
  // criterion 6: pairwise backward coalescence matrices (k0 = 4)
  std::vector<CoalescenceMatrix> pair_taus;
};

CriterionResult criterion1_analytic(uint64_t seed);
CriterionResult criterion2_pde_wave(uint64_t seed);
CriterionResult criterion3_sde_stationary(uint64_t seed);
CriterionResult criterion4_forward_vs_pde(uint64_t seed);
CriterionResult criterion5_lineage_stationary(uint64_t seed, VerifyArtifacts* art);
CriterionResult criterion6_pair_coalescent(uint64_t seed, VerifyArtifacts* art);
CriterionResult criterion7_tracer_exactness(uint64_t seed, const VerifyArtifacts* art);
CriterionResult criterion8_pair_counts(uint64_t seed);
CriterionResult criterion9_kingman_reference(uint64_t seed);

/// Runs the requested criteria (all nine when ids is empty), sharing
/// artifacts between 5/6 and 7.  budget_seconds > 0 skips (as failures)
/// criteria that would start after the budget is exhausted.
std::vector<CriterionResult> run_criteria(std::vector<int> ids, uint64_t seed,
                                          double budget_seconds = 0.0);

}  // namespace moran

#endif
