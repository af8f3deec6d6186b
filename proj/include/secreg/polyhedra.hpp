#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "secreg/info.hpp"
#include "secreg/rational.hpp"

namespace secreg {

// One inequality, always stored as  sum coeffs[v] * v  <=  constant,
// where the constant is a symbolic entropy expression. Canonical scaling:
// the first nonzero rate coefficient (by variable name) has magnitude 1;
// atom-only inequalities scale by their first nonzero atom coefficient.
struct LinIneq {
  std::map<std::string, Rat> coeffs;
  InfoExpr constant;
  std::string tag;  // human label, carried through derivations

  bool atom_only() const { return coeffs.empty(); }
  LinIneq canonical() const;
  std::string to_string() const;

  friend bool operator==(const LinIneq& a, const LinIneq& b) {
    return a.coeffs == b.coeffs && a.constant == b.constant;
  }
};

struct IneqSystem {
  std::vector<std::string> rate_vars;
  std::vector<LinIneq> inequalities;
  // Atom-only facts "0 <= constant" assumed to hold on the admissible
  // distributions (factorization identities, emergent elimination
  // consequences). Equalities are stored as two opposed members.
  std::vector<LinIneq> assumptions;

  void add(LinIneq ineq);             // canonicalize + dedup + route atom-only
  void add_assumption(LinIneq ineq);  // canonicalize + dedup
  void validate() const;              // declared vars, canonical, no dupes
};

// Nonnegative-combination certificate that one inequality follows from a
// system: target = sum multiplier * source + nonnegative slack.
struct FarkasCertificate {
  std::vector<std::pair<std::string, Rat>> multipliers;  // source tag -> weight
  Rat slack = 0;
};

enum class RedundancyMode { farkas, farkas_shannon };

struct RemoveRedundantResult {
  IneqSystem system;
  // tag of dropped inequality -> its certificate
  std::vector<std::pair<std::string, FarkasCertificate>> dropped;
};

// Projection of the system onto rate_vars minus `var`: pairs every upper
// bound with every lower bound. Nonnegativity of all rate variables is
// adjoined first. Results with no rate coefficients become assumptions.
IneqSystem fm_eliminate(const IneqSystem& system, const std::string& var);

// Drops every inequality certified as implied by the others together with
// rate nonnegativity, the system's assumptions, and (in shannon mode)
// entropy monotonicity/submodularity instances over the atoms present.
// Conservative: inequalities without a certificate are kept.
RemoveRedundantResult remove_redundant(const IneqSystem& system,
                                       RedundancyMode mode);

// True iff the target inequality is a nonnegative combination of the
// system's inequalities, rate nonnegativity, assumptions, and (shannon
// mode) monotonicity/submodularity facts.
std::optional<FarkasCertificate> implies(const IneqSystem& system,
                                         const LinIneq& target,
                                         RedundancyMode mode);

struct SymbolicVerdict {
  bool equal = false;
  std::optional<LinIneq> witness;  // first unimplied inequality when unequal
  std::string direction;           // which inclusion failed
};

// Mutual certified implication on the canonical irredundant forms. Robust
// to representation differences: two systems compare equal whenever each
// inequality of one is implied by the other (shannon mode).
SymbolicVerdict symbolic_equal(const IneqSystem& a, const IneqSystem& b);

struct NumericIneq {
  std::map<std::string, double> coeffs;
  double rhs = 0.0;
  std::string tag;
};

struct NumericRegion {
  std::vector<std::string> rate_vars;
  std::vector<NumericIneq> inequalities;     // includes orthant bounds
  std::vector<std::array<double, 2>> vertices;  // 2-D systems only, CCW
  bool empty = false;
};

// Instantiates every symbolic constant on the joint and intersects with the
// nonnegative orthant. For two rate variables the vertex list is computed
// by pairwise line intersection with feasibility tolerance 1e-9 and sorted
// counterclockwise. `clamp_negative_rhs` replaces a negative right-hand
// side by zero on inequalities with nonnegative coefficients (used when a
// bound formula goes negative and the region degenerates onto an axis).
NumericRegion numeric_region(const IneqSystem& system, const JointPmf& joint,
                             bool clamp_negative_rhs = false);

nlohmann::json system_to_json(const IneqSystem& system);
IneqSystem system_from_json(const nlohmann::json& j);
nlohmann::json certificates_to_json(const RemoveRedundantResult& result);

nlohmann::json expr_to_json(const InfoExpr& expr);
InfoExpr expr_from_json(const nlohmann::json& j);

}  // namespace secreg
