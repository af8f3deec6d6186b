#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "secreg/dist.hpp"
#include "secreg/polyhedra.hpp"
#include "secreg/rng.hpp"

namespace secreg {

// Built-in rate regions for the two-sender / two-receiver channel with an
// eavesdropper. *_RAW entries are the pre-elimination proof systems; the
// others are the published regions they project to.
enum class RegionId {
  thm1_inner,
  cor1_degraded_inner,
  thm2_outer_degraded,
  thm3_switch_capacity,
  thm4_outer_general,
  thm5_noiseless_switch,
  thm7_strong_raw,
  thm7_strong_reduced,
  thm8_macwt,
  appb_raw,
  appc_raw,
};

RegionId region_id_from_string(const std::string& name);
std::string region_id_to_string(RegionId id);
std::vector<std::string> all_region_ids();

struct RegionSpec {
  RegionId id;
  IneqSystem system;
  // Shape of the admissible input/channel factorization; tables are
  // placeholders, only the target/given structure is used (residual
  // validation and conditional-independence detection).
  FactorizationSpec factorization_template;
};

RegionSpec builtin_system(RegionId id);
inline RegionSpec builtin_system(const std::string& name) {
  return builtin_system(region_id_from_string(name));
}

// Switch-channel capacity when both hops are noiseless selectors: the
// legitimate link listens to sender 1 with probability tau1, the
// eavesdropper with probability tau2. R1max = (tau1-tau2)+ H(X1),
// R2max = (tau2-tau1)+ H(X2), encoded branch by branch because (.)+ is
// not linear in entropy atoms.
IneqSystem noiseless_switch_system(const Rat& tau1, const Rat& tau2);

// Separation of a and b given c in the undirected reading of the
// factorization: restrict to the ancestral factor set, take one clique per
// factor over targets+givens, delete c, test connectivity. Sound for any
// joint that factorizes accordingly.
bool d_separated(const FactorizationSpec& shape, const VarSet& a,
                 const VarSet& b, const VarSet& c);

// Adds, as paired-assumption equalities, every conditional independence
// I(S\T; T\S | SnT) = 0 detectable by d_separated among atom pairs already
// present in the system. These let the redundancy engine use the
// factorization when pruning.
void add_independence_assumptions(IneqSystem& system,
                                  const FactorizationSpec& shape);

struct DeriveResult {
  IneqSystem derived;
  nlohmann::json certificates;          // per-elimination redundancy audit
  std::size_t raw_inequality_count = 0; // projection size before any pruning
};

// Eliminates the listed rate variables one at a time (declaration order),
// pruning after each step. Independence assumptions from the template are
// installed first; atom-only consequences surface in derived.assumptions.
DeriveResult derive_from_raw(const RegionSpec& raw,
                             const std::vector<std::string>& eliminate,
                             RedundancyMode mode = RedundancyMode::farkas_shannon,
                             bool count_unpruned = false);

struct AssumptionViolation {
  std::string tag;
  double slack = 0.0;  // evaluated constant; violation when < -tol
};

struct EvalResult {
  NumericRegion region;
  double residual = 0.0;  // factorization mismatch, max norm
  std::vector<AssumptionViolation> violations;
};

// Numeric region of the spec on a concrete joint. The joint must match the
// spec's factorization within residual_tol; assumption violations beyond
// assume_tol are reported but not fatal.
EvalResult evaluate(const RegionSpec& spec, const JointPmf& joint,
                    bool clamp_negative_rhs = true, double residual_tol = 1e-9,
                    double assume_tol = 1e-6);

enum class Sampler { dirichlet, grid };

struct AuxSearchConfig {
  std::size_t q_cardinality = 1;
  std::size_t aux_cardinality = 2;
  Sampler sampler = Sampler::dirichlet;
  std::size_t samples = 2000;
  std::size_t refinement_passes = 3;
  std::size_t grid_resolution = 3;  // points per simplex coordinate
  std::vector<std::pair<double, double>> directions = {{1.0, 0.0}, {0.0, 1.0},
                                                       {1.0, 1.0}};
  std::uint64_t seed = 1;
  double assume_tol = 1e-6;  // samples violating assumptions are skipped
};

struct EnvelopePoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  std::vector<double> params;  // achieving input-factor tables, concatenated
};

struct RegionEnvelope {
  std::vector<EnvelopePoint> points;  // Pareto frontier, sorted by r1
  std::vector<EnvelopePoint> per_direction;
};

// Maximizes lambda1 R1 + lambda2 R2 over sampled auxiliary/input
// distributions for a fixed channel p(outputs | X1, X2). The template
// factors whose targets the channel does not produce are instantiated with
// sampled conditional tables; refinement does golden-section line searches
// toward each simplex corner, one coordinate at a time. Deterministic
// given cfg.seed.
RegionEnvelope search_envelope(const RegionSpec& spec,
                               const FactorizationSpec& channel,
                               const AuxSearchConfig& cfg);

struct Remark2Report {
  double lhs = 0.0;        // grouped-layer leakage
  double rhs = 0.0;        // split-layer leakage minus correlation penalties
  double slack = 0.0;      // rhs - lhs; the assumption holds when >= -tol
  bool holds = false;
  double cross_term = 0.0; // I(U1,V1; U2,V2 | Q,U0,V0,Z)
  bool implication_ok = false;  // holds ==> cross_term ~ 0
};

// Checks, on a concrete joint over the full auxiliary scope, that the
// packing assumption holds only when the two satellite layers are
// conditionally independent given everything else and the eavesdropper
// output.
Remark2Report check_remark2(const JointPmf& joint, double tol = 1e-9,
                            double cross_tol = 1e-6);

struct ContainmentReport {
  bool contained = false;
  double max_violation = 0.0;
  std::vector<double> direction_gaps;  // outer support minus inner, per point
};

ContainmentReport compare_bounds(const RegionEnvelope& inner,
                                 const NumericRegion& outer, double tol = 1e-9);

// Direct expressions for the classical special cases the achievable region
// collapses to; used as oracles for the reduction tests.
IneqSystem compound_mac_system();   // no eavesdropper, both receivers decode
IneqSystem mac_wiretap_system();    // single legitimate receiver + eavesdropper
IneqSystem bcc_system();            // single sender, confidential message

// Subsystem with every inequality mentioning the given variable removed
// (used when a receiver or input is absent from the reduced model).
IneqSystem drop_atoms_with(const IneqSystem& system, const std::string& var);

nlohmann::json envelope_to_json(const RegionEnvelope& envelope);
std::string envelope_to_csv(const RegionEnvelope& envelope);
nlohmann::json containment_to_json(const ContainmentReport& report);

}  // namespace secreg
