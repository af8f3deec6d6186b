#include "secreg/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace secreg {

namespace {

constexpr double kNormTol = 1e-12;

std::size_t product_cardinality(const std::vector<VariableSpec>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= v.cardinality;
  return n;
}

}  // namespace

JointPmf::JointPmf(std::vector<VariableSpec> variables, std::vector<double> probs)
    : vars_(std::move(variables)), probs_(std::move(probs)) {
  if (probs_.size() != product_cardinality(vars_)) {
    throw std::invalid_argument("JointPmf: tensor length mismatch");
  }
  validate();
}

std::size_t JointPmf::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw std::invalid_argument("JointPmf: unknown variable " + name);
}

bool JointPmf::has_var(const std::string& name) const {
  return std::any_of(vars_.begin(), vars_.end(),
                     [&](const auto& v) { return v.name == name; });
}

std::size_t JointPmf::flat_index(const std::vector<std::size_t>& assignment) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    idx = idx * vars_[i].cardinality + assignment[i];
  }
  return idx;
}

std::vector<std::size_t> JointPmf::unflatten(std::size_t flat) const {
  std::vector<std::size_t> a(vars_.size());
  for (std::size_t i = vars_.size(); i-- > 0;) {
    a[i] = flat % vars_[i].cardinality;
    flat /= vars_[i].cardinality;
  }
  return a;
}

void JointPmf::validate() const {
  std::set<std::string> names;
  for (const auto& v : vars_) {
    if (v.cardinality < 1) throw std::invalid_argument("cardinality must be >= 1");
    if (!names.insert(v.name).second) {
      throw std::invalid_argument("duplicate variable name " + v.name);
    }
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (p < -kNormTol) throw std::invalid_argument("negative probability entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTol) {
    throw std::invalid_argument("JointPmf not normalized: sum = " + std::to_string(sum));
  }
}

std::size_t Factor::target_size() const { return product_cardinality(targets); }
std::size_t Factor::given_size() const { return product_cardinality(givens); }

void Factor::validate() const {
  std::set<std::string> names;
  for (const auto& v : targets) names.insert(v.name);
  for (const auto& v : givens) {
    if (names.count(v.name)) {
      throw std::invalid_argument("Factor: targets and givens overlap on " + v.name);
    }
  }
  const std::size_t rows = given_size();
  const std::size_t cols = target_size();
  if (table.size() != rows * cols) {
    throw std::invalid_argument("Factor: table size mismatch");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = table[r * cols + c];
      if (p < -kNormTol) throw std::invalid_argument("Factor: negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kNormTol) {
      throw std::invalid_argument("Factor: row not normalized");
    }
  }
}

std::vector<VariableSpec> FactorizationSpec::scope() const {
  std::vector<VariableSpec> out;
  for (const auto& f : factors) {
    out.insert(out.end(), f.targets.begin(), f.targets.end());
  }
  return out;
}

FactorizationSpec& FactorizationSpec::append(const FactorizationSpec& tail) {
  factors.insert(factors.end(), tail.factors.begin(), tail.factors.end());
  return *this;
}

JointPmf compose_joint(const FactorizationSpec& spec) {
  // Topological-order check: givens must be targets of earlier factors.
  std::set<std::string> produced;
  for (const auto& f : spec.factors) {
    f.validate();
    for (const auto& g : f.givens) {
      if (!produced.count(g.name)) {
        throw std::invalid_argument("compose_joint: given " + g.name +
                                    " not produced by an earlier factor");
      }
    }
    for (const auto& t : f.targets) {
      if (!produced.insert(t.name).second) {
        throw std::invalid_argument("compose_joint: " + t.name +
                                    " is a target of two factors");
      }
    }
  }

  std::vector<VariableSpec> vars = spec.scope();
  std::sort(vars.begin(), vars.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });

  std::vector<std::size_t> pos(vars.size());
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].name == name) return i;
    }
    throw std::logic_error("compose_joint: lost variable " + name);
  };

  const std::size_t total = product_cardinality(vars);
  std::vector<double> probs(total, 0.0);
  std::vector<std::size_t> assign(vars.size(), 0);

  // Per-factor index maps into the sorted assignment.
  struct FactorView {
    const Factor* f;
    std::vector<std::size_t> given_pos;
    std::vector<std::size_t> target_pos;
  };
  std::vector<FactorView> views;
  views.reserve(spec.factors.size());
  for (const auto& f : spec.factors) {
    FactorView v{&f, {}, {}};
    for (const auto& g : f.givens) v.given_pos.push_back(index_of(g.name));
    for (const auto& t : f.targets) v.target_pos.push_back(index_of(t.name));
    views.push_back(std::move(v));
  }

  for (std::size_t flat = 0; flat < total; ++flat) {
    double p = 1.0;
    for (const auto& v : views) {
      std::size_t row = 0;
      for (std::size_t i = 0; i < v.f->givens.size(); ++i) {
        row = row * v.f->givens[i].cardinality + assign[v.given_pos[i]];
      }
      std::size_t col = 0;
      for (std::size_t i = 0; i < v.f->targets.size(); ++i) {
        col = col * v.f->targets[i].cardinality + assign[v.target_pos[i]];
      }
      p *= v.f->table[row * v.f->target_size() + col];
      if (p == 0.0) break;
    }
    probs[flat] = p;
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++assign[i] < vars[i].cardinality) break;
      assign[i] = 0;
    }
  }
  return JointPmf(std::move(vars), std::move(probs));
}

JointPmf marginalize(const JointPmf& joint, const std::vector<std::string>& keep) {
  std::vector<std::size_t> keep_pos;
  std::vector<VariableSpec> kept;
  for (const auto& name : keep) {
    keep_pos.push_back(joint.var_index(name));
  }
  std::sort(keep_pos.begin(), keep_pos.end());
  keep_pos.erase(std::unique(keep_pos.begin(), keep_pos.end()), keep_pos.end());
  for (auto i : keep_pos) kept.push_back(joint.variables()[i]);

  const std::size_t out_size = product_cardinality(kept);
  std::vector<double> out(out_size, 0.0);
  const auto& vars = joint.variables();
  std::vector<std::size_t> assign(vars.size(), 0);
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < keep_pos.size(); ++k) {
      idx = idx * kept[k].cardinality + assign[keep_pos[k]];
    }
    out[idx] += joint.probs()[flat];
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++assign[i] < vars[i].cardinality) break;
      assign[i] = 0;
    }
  }
  return JointPmf(std::move(kept), std::move(out));
}

Factor conditional(const JointPmf& joint, const std::vector<std::string>& targets,
                   const std::vector<std::string>& givens, bool allow_undefined,
                   double zero_tol) {
  std::vector<std::string> all = givens;
  all.insert(all.end(), targets.begin(), targets.end());
  JointPmf sub = marginalize(joint, all);

  Factor out;
  for (const auto& n : targets) out.targets.push_back(sub.variables()[sub.var_index(n)]);
  for (const auto& n : givens) out.givens.push_back(sub.variables()[sub.var_index(n)]);
  const std::size_t rows = out.given_size();
  const std::size_t cols = out.target_size();
  out.table.assign(rows * cols, 0.0);

  // Walk the sub-joint and scatter into (row, col).
  const auto& vars = sub.variables();
  std::vector<std::size_t> assign(vars.size(), 0);
  std::vector<std::size_t> given_pos, target_pos;
  for (const auto& g : out.givens) given_pos.push_back(sub.var_index(g.name));
  for (const auto& t : out.targets) target_pos.push_back(sub.var_index(t.name));
  for (std::size_t flat = 0; flat < sub.size(); ++flat) {
    std::size_t row = 0, col = 0;
    for (std::size_t i = 0; i < given_pos.size(); ++i) {
      row = row * out.givens[i].cardinality + assign[given_pos[i]];
    }
    for (std::size_t i = 0; i < target_pos.size(); ++i) {
      col = col * out.targets[i].cardinality + assign[target_pos[i]];
    }
    out.table[row * cols + col] += sub.probs()[flat];
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++assign[i] < vars[i].cardinality) break;
      assign[i] = 0;
    }
  }

  for (std::size_t r = 0; r < rows; ++r) {
    double mass = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mass += out.table[r * cols + c];
    if (mass <= zero_tol) {
      if (!allow_undefined) {
        throw std::domain_error("conditional: conditioning event has zero probability");
      }
      for (std::size_t c = 0; c < cols; ++c) out.table[r * cols + c] = 1.0 / cols;
    } else {
      for (std::size_t c = 0; c < cols; ++c) out.table[r * cols + c] /= mass;
    }
  }
  return out;
}

double factorization_residual(const JointPmf& joint, const FactorizationSpec& shape) {
  FactorizationSpec refit;
  for (const auto& f : shape.factors) {
    std::vector<std::string> t, g;
    for (const auto& v : f.targets) t.push_back(v.name);
    for (const auto& v : f.givens) g.push_back(v.name);
    refit.factors.push_back(conditional(joint, t, g, /*allow_undefined=*/true));
  }
  JointPmf rebuilt = compose_joint(refit);
  std::vector<std::string> scope_names;
  for (const auto& v : rebuilt.variables()) scope_names.push_back(v.name);
  JointPmf reference = marginalize(joint, scope_names);
  double residual = 0.0;
  for (std::size_t i = 0; i < rebuilt.size(); ++i) {
    residual = std::max(residual, std::abs(rebuilt.probs()[i] - reference.probs()[i]));
  }
  return residual;
}

FactorizationSpec build_degraded_switch(const SwitchChannelParams& params,
                                        const Factor& y2_given_y1,
                                        const Factor& z_given_y2) {
  if (params.tau1 < 0.0 || params.tau1 > 1.0) {
    throw std::invalid_argument("switch probability out of range");
  }
  if (!params.branch1 || !params.branch2) {
    throw std::invalid_argument("degraded switch needs both branch factors");
  }
  const Factor& b1 = *params.branch1;
  const Factor& b2 = *params.branch2;
  b1.validate();
  b2.validate();
  if (b1.targets.size() != 1 || b2.targets.size() != 1 ||
      b1.givens.size() != 1 || b2.givens.size() != 1 ||
      b1.targets[0].cardinality != b2.targets[0].cardinality) {
    throw std::invalid_argument("malformed branch factor");
  }

  const VariableSpec s{"S", 2};
  const VariableSpec x1 = b1.givens[0];
  const VariableSpec x2 = b2.givens[0];
  const VariableSpec y1{"Y1", b1.targets[0].cardinality};

  FactorizationSpec out;
  out.factors.push_back(marginal_factor(s, {params.tau1, 1.0 - params.tau1}));

  // p(y1|x1,x2,s): state 1 uses branch1(x1), state 2 uses branch2(x2).
  Factor mix;
  mix.targets = {y1};
  mix.givens = {s, x1, x2};
  mix.table.assign(2 * x1.cardinality * x2.cardinality * y1.cardinality, 0.0);
  for (std::size_t sv = 0; sv < 2; ++sv) {
    for (std::size_t a = 0; a < x1.cardinality; ++a) {
      for (std::size_t b = 0; b < x2.cardinality; ++b) {
        const std::size_t row = (sv * x1.cardinality + a) * x2.cardinality + b;
        for (std::size_t y = 0; y < y1.cardinality; ++y) {
          mix.table[row * y1.cardinality + y] =
              sv == 0 ? b1.table[a * y1.cardinality + y]
                      : b2.table[b * y1.cardinality + y];
        }
      }
    }
  }
  out.factors.push_back(std::move(mix));

  Factor f2 = y2_given_y1;
  Factor f3 = z_given_y2;
  f2.validate();
  f3.validate();
  out.factors.push_back(std::move(f2));
  out.factors.push_back(std::move(f3));
  return out;
}

FactorizationSpec build_noiseless_switch(const SwitchChannelParams& params,
                                         std::size_t input_cardinality) {
  if (params.tau1 < 0.0 || params.tau1 > 1.0 || params.tau2 < 0.0 || params.tau2 > 1.0) {
    throw std::invalid_argument("switch probability out of range");
  }
  const std::size_t k = input_cardinality;
  const VariableSpec s1{"S1", 2}, s2{"S2", 2};
  const VariableSpec x1{"X1", k}, x2{"X2", k};
  const VariableSpec y1{"Y1", k};

  FactorizationSpec out;
  out.factors.push_back(marginal_factor(s1, {params.tau1, 1.0 - params.tau1}));
  out.factors.push_back(marginal_factor(s2, {params.tau2, 1.0 - params.tau2}));

  auto selector = [&](const std::string& name, const VariableSpec& state) {
    Factor f;
    f.targets = {VariableSpec{name, k}};
    f.givens = {state, x1, x2};
    f.table.assign(2 * k * k * k, 0.0);
    for (std::size_t sv = 0; sv < 2; ++sv) {
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          const std::size_t row = (sv * k + a) * k + b;
          f.table[row * k + (sv == 0 ? a : b)] = 1.0;
        }
      }
    }
    return f;
  };
  out.factors.push_back(selector("Y1", s1));
  out.factors.push_back(deterministic_copy(y1, "Y2"));
  out.factors.push_back(selector("Z", s2));
  return out;
}

nlohmann::json factorization_to_json(const FactorizationSpec& spec) {
  nlohmann::json j;
  j["factors"] = nlohmann::json::array();
  for (const auto& f : spec.factors) {
    nlohmann::json jf;
    for (const auto& t : f.targets) {
      jf["targets"].push_back({{"name", t.name}, {"card", t.cardinality}});
    }
    jf["givens"] = nlohmann::json::array();
    for (const auto& g : f.givens) {
      jf["givens"].push_back({{"name", g.name}, {"card", g.cardinality}});
    }
    jf["table"] = f.table;
    j["factors"].push_back(std::move(jf));
  }
  return j;
}

FactorizationSpec factorization_from_json(const nlohmann::json& j) {
  FactorizationSpec spec;
  for (const auto& jf : j.at("factors")) {
    Factor f;
    for (const auto& t : jf.at("targets")) {
      f.targets.push_back({t.at("name").get<std::string>(), t.at("card").get<std::size_t>()});
    }
    if (jf.contains("givens")) {
      for (const auto& g : jf.at("givens")) {
        f.givens.push_back({g.at("name").get<std::string>(), g.at("card").get<std::size_t>()});
      }
    }
    for (const auto& p : jf.at("table")) {
      if (p.is_string()) {
        f.table.push_back(std::stod(p.get<std::string>()));
      } else {
        f.table.push_back(p.get<double>());
      }
    }
    f.validate();
    spec.factors.push_back(std::move(f));
  }
  return spec;
}

Factor marginal_factor(const VariableSpec& var, std::vector<double> pmf) {
  Factor f;
  f.targets = {var};
  f.table = std::move(pmf);
  f.validate();
  return f;
}

Factor deterministic_copy(const VariableSpec& from, const std::string& to_name) {
  Factor f;
  f.targets = {VariableSpec{to_name, from.cardinality}};
  f.givens = {from};
  f.table.assign(from.cardinality * from.cardinality, 0.0);
  for (std::size_t i = 0; i < from.cardinality; ++i) {
    f.table[i * from.cardinality + i] = 1.0;
  }
  return f;
}

Factor binary_symmetric(const std::string& input, const std::string& output,
                        double crossover) {
  Factor f;
  f.targets = {VariableSpec{output, 2}};
  f.givens = {VariableSpec{input, 2}};
  f.table = {1.0 - crossover, crossover, crossover, 1.0 - crossover};
  return f;
}

}  // namespace secreg
