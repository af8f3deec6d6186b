#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace secreg {

struct VariableSpec {
  std::string name;
  std::size_t cardinality = 1;

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

// Labeled finite joint pmf. Variables are kept sorted by name so tensors
// built along different factorization paths are directly comparable.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<VariableSpec> variables, std::vector<double> probs);

  const std::vector<VariableSpec>& variables() const { return vars_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

  std::size_t var_index(const std::string& name) const;
  bool has_var(const std::string& name) const;

  // Flat index from a full assignment (one symbol per variable, in order).
  std::size_t flat_index(const std::vector<std::size_t>& assignment) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  double prob(const std::vector<std::size_t>& assignment) const {
    return probs_[flat_index(assignment)];
  }

  void validate() const;  // nonnegative, normalized within 1e-12

 private:
  std::vector<VariableSpec> vars_;
  std::vector<double> probs_;
};

// Conditional factor p(targets | givens). The table is indexed with the
// given variables as the outer (slow) axes and targets as the inner axes.
struct Factor {
  std::vector<VariableSpec> targets;
  std::vector<VariableSpec> givens;
  std::vector<double> table;

  std::size_t target_size() const;
  std::size_t given_size() const;
  void validate() const;  // rows normalized within 1e-12, disjoint scopes
};

struct FactorizationSpec {
  std::vector<Factor> factors;

  // All variables in target order of appearance.
  std::vector<VariableSpec> scope() const;
  FactorizationSpec& append(const FactorizationSpec& tail);
};

// Product of all factors over the full scope, validated against the
// topological-order invariant. Result variables are sorted by name.
JointPmf compose_joint(const FactorizationSpec& spec);

JointPmf marginalize(const JointPmf& joint, const std::vector<std::string>& keep);

// Conditional p(targets|givens) extracted from a joint. Rows whose
// conditioning event has probability below `zero_tol` are rejected unless
// `allow_undefined` fills them uniformly.
Factor conditional(const JointPmf& joint, const std::vector<std::string>& targets,
                   const std::vector<std::string>& givens,
                   bool allow_undefined = false, double zero_tol = 1e-12);

// Max-norm distance between a joint and the closest joint with the shape of
// `shape` (conditionals refit from the joint itself). Zero iff the joint
// factorizes accordingly.
double factorization_residual(const JointPmf& joint, const FactorizationSpec& shape);

struct SwitchChannelParams {
  double tau1 = 0.5;  // P(listen to transmitter 1); single-switch models use tau1
  double tau2 = 0.5;
  std::optional<Factor> branch1;  // p(y1|x1), state 1
  std::optional<Factor> branch2;  // p(y1|x2), state 2
};

// Degraded switch channel: one shared state S feeds a chain
// p(y1|x1,x2,s) p(y2|y1,s) p(z|y2,s); conditioned on s=1 the first hop
// listens only to x1, on s=2 only to x2. Outputs carry the state as an
// ordinary random variable, so the augmented observations are the sets
// {Y1,S}, {Y2,S}, {Z,S}. Returns the channel-side factors only; prepend the
// input factors before composing.
FactorizationSpec build_degraded_switch(const SwitchChannelParams& params,
                                        const Factor& y2_given_y1,
                                        const Factor& z_given_y2);

// Noiseless switch channel: both legitimate receivers share switch S1
// (P(S1=1)=tau1), the eavesdropper has independent S2 (P(S2=1)=tau2);
// the selected input is passed through unchanged and Y2=Y1. Augmented
// observations are {Y1,S1}, {Y2,S1}, {Z,S2}.
FactorizationSpec build_noiseless_switch(const SwitchChannelParams& params,
                                         std::size_t input_cardinality = 2);

nlohmann::json factorization_to_json(const FactorizationSpec& spec);
FactorizationSpec factorization_from_json(const nlohmann::json& j);

// Small builders used all over the tests and fixtures.
Factor marginal_factor(const VariableSpec& var, std::vector<double> pmf);
Factor deterministic_copy(const VariableSpec& from, const std::string& to_name);
Factor binary_symmetric(const std::string& input, const std::string& output,
                        double crossover);

}  // namespace secreg
