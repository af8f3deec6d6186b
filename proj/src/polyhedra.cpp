#include "secreg/polyhedra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "secreg/simplex.hpp"

namespace secreg {

namespace {

Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Nonnegativity source "-v <= 0" adjoined to every implication check and
// before every elimination; the regions of interest live in the
// nonnegative orthant.
LinIneq nonneg_ineq(const std::string& var) {
  LinIneq ineq;
  ineq.coeffs[var] = -1;
  ineq.tag = "nonneg:" + var;
  return ineq;
}

bool same_content(const LinIneq& a, const LinIneq& b) {
  return a.coeffs == b.coeffs && a.constant == b.constant;
}

}  // namespace

LinIneq LinIneq::canonical() const {
  LinIneq out = *this;
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
    if (it->second == 0) {
      it = out.coeffs.erase(it);
    } else {
      ++it;
    }
  }
  Rat scale = 0;
  if (!out.coeffs.empty()) {
    scale = rat_abs(out.coeffs.begin()->second);
  } else if (!out.constant.terms().empty()) {
    scale = rat_abs(out.constant.terms().begin()->second);
  } else if (out.constant.offset() != 0) {
    scale = rat_abs(out.constant.offset());
  }
  if (scale != 0 && scale != 1) {
    for (auto& [var, c] : out.coeffs) c /= scale;
    out.constant = out.constant * (Rat(1) / scale);
  }
  return out;
}

std::string LinIneq::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [var, c] : coeffs) {
    Rat mag = rat_abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1) os << rational_to_string(mag) << "*";
    os << var;
  }
  if (first) os << "0";
  os << " <= " << constant.to_string();
  return os.str();
}

void IneqSystem::add(LinIneq ineq) {
  ineq = ineq.canonical();
  if (ineq.atom_only()) {
    // 0 <= c with c a plain nonnegative number is vacuous.
    if (ineq.constant.is_constant() && ineq.constant.offset() >= 0) return;
    add_assumption(std::move(ineq));
    return;
  }
  for (const auto& existing : inequalities) {
    if (same_content(existing, ineq)) return;
  }
  for (const auto& [var, c] : ineq.coeffs) {
    if (std::find(rate_vars.begin(), rate_vars.end(), var) == rate_vars.end()) {
      throw std::invalid_argument("inequality references undeclared rate variable " +
                                  var);
    }
  }
  inequalities.push_back(std::move(ineq));
}

void IneqSystem::add_assumption(LinIneq ineq) {
  ineq = ineq.canonical();
  if (!ineq.atom_only()) {
    throw std::invalid_argument("assumptions must not reference rate variables");
  }
  if (ineq.constant.is_zero()) return;
  for (const auto& existing : assumptions) {
    if (same_content(existing, ineq)) return;
  }
  assumptions.push_back(std::move(ineq));
}

void IneqSystem::validate() const {
  std::set<std::string> declared(rate_vars.begin(), rate_vars.end());
  if (declared.size() != rate_vars.size()) {
    throw std::invalid_argument("duplicate rate variable declaration");
  }
  for (std::size_t i = 0; i < inequalities.size(); ++i) {
    const auto& ineq = inequalities[i];
    if (!same_content(ineq, ineq.canonical())) {
      throw std::invalid_argument("inequality not canonical: " + ineq.to_string());
    }
    if (ineq.coeffs.empty() && ineq.constant.is_zero()) {
      throw std::invalid_argument("vacuous inequality");
    }
    for (const auto& [var, c] : ineq.coeffs) {
      if (!declared.count(var)) {
        throw std::invalid_argument("undeclared rate variable " + var);
      }
    }
    for (std::size_t j = i + 1; j < inequalities.size(); ++j) {
      if (same_content(ineq, inequalities[j])) {
        throw std::invalid_argument("duplicate inequality: " + ineq.to_string());
      }
    }
  }
  for (const auto& a : assumptions) {
    if (!a.atom_only()) {
      throw std::invalid_argument("assumption references rate variables");
    }
  }
}

IneqSystem fm_eliminate(const IneqSystem& system, const std::string& var) {
  if (std::find(system.rate_vars.begin(), system.rate_vars.end(), var) ==
      system.rate_vars.end()) {
    throw std::invalid_argument("cannot eliminate unknown rate variable " + var);
  }

  std::vector<LinIneq> work = system.inequalities;
  for (const auto& v : system.rate_vars) {
    LinIneq nn = nonneg_ineq(v);
    bool present = false;
    for (const auto& existing : work) {
      if (same_content(existing, nn)) present = true;
    }
    if (!present) work.push_back(std::move(nn));
  }

  IneqSystem out;
  for (const auto& v : system.rate_vars) {
    if (v != var) out.rate_vars.push_back(v);
  }
  out.assumptions = system.assumptions;

  std::vector<const LinIneq*> uppers;  // coefficient of var > 0
  std::vector<const LinIneq*> lowers;  // coefficient of var < 0
  for (const auto& ineq : work) {
    auto it = ineq.coeffs.find(var);
    if (it == ineq.coeffs.end() || it->second == 0) {
      out.add(ineq);
    } else if (it->second > 0) {
      uppers.push_back(&ineq);
    } else {
      lowers.push_back(&ineq);
    }
  }

  std::size_t counter = 0;
  for (const auto* up : uppers) {
    const Rat cu = up->coeffs.at(var);
    for (const auto* lo : lowers) {
      const Rat cl = lo->coeffs.at(var);  // negative
      LinIneq combined;
      for (const auto& [v, c] : up->coeffs) combined.coeffs[v] += (-cl) * c;
      for (const auto& [v, c] : lo->coeffs) combined.coeffs[v] += cu * c;
      combined.coeffs.erase(var);
      combined.constant = up->constant * (-cl) + lo->constant * cu;
      combined.tag = "fme:" + var + ":" + std::to_string(counter++);
      combined = combined.canonical();
      if (combined.coeffs.empty() && combined.constant.is_zero()) continue;
      out.add(std::move(combined));
    }
  }
  return out;
}

namespace {

// Facts over the entropy atoms already present in the system: monotonicity
// H(S) <= H(T) for nested members, and submodularity
// H(S) + H(T) >= H(S u T) + H(S n T) when union and intersection stay in
// the family. Each fact is an InfoExpr known to be >= 0.
struct Fact {
  InfoExpr expr;
  std::string tag;
};

std::vector<Fact> shannon_facts(const IneqSystem& system) {
  std::set<VarSet> family;
  auto harvest = [&](const InfoExpr& e) {
    for (const auto& [atom, coeff] : e.terms()) family.insert(atom);
  };
  for (const auto& ineq : system.inequalities) harvest(ineq.constant);
  for (const auto& a : system.assumptions) harvest(a.constant);

  std::vector<VarSet> atoms(family.begin(), family.end());
  std::vector<Fact> facts;
  // Monotonicity, transitively reduced: H(S) <= H(T) only for covering
  // pairs (no family member strictly between); chains follow by addition.
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (i == j || atoms[i] == atoms[j]) continue;
      if (!is_subset(atoms[i], atoms[j])) continue;
      bool covered = true;
      for (std::size_t k = 0; k < atoms.size() && covered; ++k) {
        if (k == i || k == j || atoms[k] == atoms[i] || atoms[k] == atoms[j]) {
          continue;
        }
        if (is_subset(atoms[i], atoms[k]) && is_subset(atoms[k], atoms[j])) {
          covered = false;
        }
      }
      if (!covered) continue;
      InfoExpr e;
      e.add_term(atoms[j], 1);
      e.add_term(atoms[i], -1);
      if (e.is_zero()) continue;
      facts.push_back({std::move(e), "mono:" + std::to_string(i) + "<" +
                                         std::to_string(j)});
    }
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (is_subset(atoms[i], atoms[j]) || is_subset(atoms[j], atoms[i])) continue;
      VarSet uni = set_union(atoms[i], atoms[j]);
      VarSet inter = set_intersection(atoms[i], atoms[j]);
      if (!family.count(uni)) continue;
      if (!inter.empty() && !family.count(inter)) continue;
      InfoExpr e;
      e.add_term(atoms[i], 1);
      e.add_term(atoms[j], 1);
      e.add_term(uni, -1);
      if (!inter.empty()) e.add_term(inter, -1);
      if (e.is_zero()) continue;
      facts.push_back({std::move(e), "submod:" + std::to_string(i) + "," +
                                         std::to_string(j)});
    }
  }
  return facts;
}

// Feasibility of  target = sum lambda_s * source_s (+ facts on the constant
// side) with all multipliers nonnegative. Columns: one per source, per
// fact, plus one slack for the scalar offset. Rows: one equality per rate
// variable, per entropy atom, plus the offset row.
std::optional<FarkasCertificate> check_implied(
    const std::vector<const LinIneq*>& sources, const std::vector<Fact>& facts,
    const LinIneq& target) {
  std::vector<std::string> vars;
  std::vector<VarSet> atoms;
  auto note_var = [&](const std::string& v) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  };
  auto note_atoms = [&](const InfoExpr& e) {
    for (const auto& [atom, c] : e.terms()) {
      if (std::find(atoms.begin(), atoms.end(), atom) == atoms.end()) {
        atoms.push_back(atom);
      }
    }
  };
  for (const auto* s : sources) {
    for (const auto& [v, c] : s->coeffs) note_var(v);
    note_atoms(s->constant);
  }
  for (const auto& f : facts) note_atoms(f.expr);
  for (const auto& [v, c] : target.coeffs) note_var(v);
  note_atoms(target.constant);

  const std::size_t ncols = sources.size() + facts.size() + 1;
  const std::size_t nrows = vars.size() + atoms.size() + 1;

  auto build = [&](auto zero) {
    using T = decltype(zero);
    std::vector<std::vector<T>> A(nrows, std::vector<T>(ncols, T(0)));
    std::vector<T> b(nrows, T(0));
    auto coef = [](const Rat& r, T) {
      if constexpr (std::is_same_v<T, double>) {
        return to_double(r);
      } else {
        return r;
      }
    };
    for (std::size_t r = 0; r < vars.size(); ++r) {
      for (std::size_t s = 0; s < sources.size(); ++s) {
        auto it = sources[s]->coeffs.find(vars[r]);
        if (it != sources[s]->coeffs.end()) A[r][s] = coef(it->second, zero);
      }
      auto it = target.coeffs.find(vars[r]);
      if (it != target.coeffs.end()) b[r] = coef(it->second, zero);
    }
    for (std::size_t r = 0; r < atoms.size(); ++r) {
      const std::size_t row = vars.size() + r;
      for (std::size_t s = 0; s < sources.size(); ++s) {
        auto it = sources[s]->constant.terms().find(atoms[r]);
        if (it != sources[s]->constant.terms().end()) {
          A[row][s] = coef(it->second, zero);
        }
      }
      for (std::size_t f = 0; f < facts.size(); ++f) {
        auto it = facts[f].expr.terms().find(atoms[r]);
        if (it != facts[f].expr.terms().end()) {
          A[row][sources.size() + f] = coef(it->second, zero);
        }
      }
      auto it = target.constant.terms().find(atoms[r]);
      if (it != target.constant.terms().end()) b[row] = coef(it->second, zero);
    }
    const std::size_t off = nrows - 1;
    for (std::size_t s = 0; s < sources.size(); ++s) {
      A[off][s] = coef(sources[s]->constant.offset(), zero);
    }
    for (std::size_t f = 0; f < facts.size(); ++f) {
      A[off][sources.size() + f] = coef(facts[f].expr.offset(), zero);
    }
    A[off][ncols - 1] = T(1);  // slack absorbing leftover constant
    b[off] = coef(target.constant.offset(), zero);
    return std::pair(std::move(A), std::move(b));
  };

  // Fast double prefilter; treating its "infeasible" as final only keeps
  // an inequality, which is sound.
  auto [Ad, bd] = build(double(0));
  auto pre = lp_feasible<double>(std::move(Ad), std::move(bd), 1e-7);
  if (!pre.feasible) return std::nullopt;

  // Exact confirmation, first restricted to the prefilter's support. The
  // threshold sits above the prefilter's anti-degeneracy perturbation so
  // artifact columns do not inflate the exact subproblem.
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (std::abs(pre.x[c]) > 1e-7) support.push_back(c);
  }
  auto solve_exact = [&](const std::vector<std::size_t>& cols)
      -> std::optional<std::vector<Rat>> {
    auto [A, b] = build(Rat(0));
    std::vector<std::vector<Rat>> sub(nrows, std::vector<Rat>(cols.size()));
    for (std::size_t r = 0; r < nrows; ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) sub[r][c] = A[r][cols[c]];
    }
    auto res = lp_feasible<Rat>(std::move(sub), std::move(b));
    if (!res.feasible) return std::nullopt;
    std::vector<Rat> full(ncols, 0);
    for (std::size_t c = 0; c < cols.size(); ++c) full[cols[c]] = res.x[c];
    return full;
  };

  std::optional<std::vector<Rat>> x;
  if (!support.empty()) x = solve_exact(support);
  if (!x && ncols <= 2000) {
    // Full exact fallback only when affordable; skipping it just keeps an
    // inequality, which is sound.
    std::vector<std::size_t> all(ncols);
    for (std::size_t c = 0; c < ncols; ++c) all[c] = c;
    x = solve_exact(all);
  }
  if (!x) return std::nullopt;

  FarkasCertificate cert;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    if ((*x)[s] != 0) cert.multipliers.emplace_back(sources[s]->tag, (*x)[s]);
  }
  for (std::size_t f = 0; f < facts.size(); ++f) {
    if ((*x)[sources.size() + f] != 0) {
      cert.multipliers.emplace_back(facts[f].tag, (*x)[sources.size() + f]);
    }
  }
  cert.slack = (*x)[ncols - 1];
  return cert;
}

std::vector<Fact> gather_facts(const IneqSystem& system, RedundancyMode mode) {
  std::vector<Fact> facts;
  if (mode == RedundancyMode::farkas_shannon) facts = shannon_facts(system);
  for (std::size_t i = 0; i < system.assumptions.size(); ++i) {
    // Assumption "0 <= K" contributes the fact K >= 0.
    facts.push_back({system.assumptions[i].constant,
                     system.assumptions[i].tag.empty()
                         ? "assume:" + std::to_string(i)
                         : system.assumptions[i].tag});
  }
  return facts;
}

}  // namespace

std::optional<FarkasCertificate> implies(const IneqSystem& system,
                                         const LinIneq& target,
                                         RedundancyMode mode) {
  std::vector<LinIneq> nonnegs;
  for (const auto& v : system.rate_vars) nonnegs.push_back(nonneg_ineq(v));
  std::vector<const LinIneq*> sources;
  for (const auto& ineq : system.inequalities) sources.push_back(&ineq);
  for (const auto& nn : nonnegs) sources.push_back(&nn);
  return check_implied(sources, gather_facts(system, mode), target.canonical());
}

RemoveRedundantResult remove_redundant(const IneqSystem& system,
                                       RedundancyMode mode) {
  RemoveRedundantResult result;
  result.system = system;
  const auto facts = gather_facts(system, mode);

  std::vector<LinIneq> nonnegs;
  for (const auto& v : system.rate_vars) nonnegs.push_back(nonneg_ineq(v));

  auto& ineqs = result.system.inequalities;
  for (std::size_t i = 0; i < ineqs.size();) {
    std::vector<const LinIneq*> sources;
    for (std::size_t j = 0; j < ineqs.size(); ++j) {
      if (j != i) sources.push_back(&ineqs[j]);
    }
    for (const auto& nn : nonnegs) sources.push_back(&nn);
    auto cert = check_implied(sources, facts, ineqs[i]);
    if (cert) {
      result.dropped.emplace_back(ineqs[i].tag, std::move(*cert));
      ineqs.erase(ineqs.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return result;
}

SymbolicVerdict symbolic_equal(const IneqSystem& a, const IneqSystem& b) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(a.rate_vars) != sorted(b.rate_vars)) {
    throw std::invalid_argument("systems declare different rate variables");
  }

  // Compare over the union of assumption lists: both systems describe the
  // same class of distributions, so either side's identities may be used.
  auto merge_assumptions = [](IneqSystem sys, const IneqSystem& other) {
    for (const auto& asm_ineq : other.assumptions) sys.add_assumption(asm_ineq);
    return sys;
  };
  IneqSystem ax = merge_assumptions(a, b);
  IneqSystem bx = merge_assumptions(b, a);
  IneqSystem ar = remove_redundant(ax, RedundancyMode::farkas_shannon).system;
  IneqSystem br = remove_redundant(bx, RedundancyMode::farkas_shannon).system;

  SymbolicVerdict verdict;
  for (const auto& ineq : ar.inequalities) {
    if (!implies(br, ineq, RedundancyMode::farkas_shannon)) {
      verdict.witness = ineq;
      verdict.direction = "first system inequality not implied by second";
      return verdict;
    }
  }
  for (const auto& ineq : br.inequalities) {
    if (!implies(ar, ineq, RedundancyMode::farkas_shannon)) {
      verdict.witness = ineq;
      verdict.direction = "second system inequality not implied by first";
      return verdict;
    }
  }
  verdict.equal = true;
  return verdict;
}

NumericRegion numeric_region(const IneqSystem& system, const JointPmf& joint,
                             bool clamp_negative_rhs) {
  NumericRegion region;
  region.rate_vars = system.rate_vars;
  for (const auto& ineq : system.inequalities) {
    NumericIneq n;
    for (const auto& [v, c] : ineq.coeffs) n.coeffs[v] = to_double(c);
    n.rhs = eval_expr(ineq.constant, joint);
    n.tag = ineq.tag;
    if (clamp_negative_rhs && n.rhs < 0) {
      bool nonneg_coeffs = true;
      for (const auto& [v, c] : n.coeffs) {
        if (c < 0) nonneg_coeffs = false;
      }
      if (nonneg_coeffs) n.rhs = 0.0;
    }
    region.inequalities.push_back(std::move(n));
  }
  for (const auto& v : system.rate_vars) {
    NumericIneq n;
    n.coeffs[v] = -1.0;
    n.rhs = 0.0;
    n.tag = "nonneg:" + v;
    region.inequalities.push_back(std::move(n));
  }

  if (system.rate_vars.size() != 2) return region;
  const std::string& vx = system.rate_vars[0];
  const std::string& vy = system.rate_vars[1];
  constexpr double tol = 1e-9;

  auto coeff = [](const NumericIneq& n, const std::string& v) {
    auto it = n.coeffs.find(v);
    return it == n.coeffs.end() ? 0.0 : it->second;
  };
  auto feasible = [&](double x, double y) {
    for (const auto& n : region.inequalities) {
      if (coeff(n, vx) * x + coeff(n, vy) * y > n.rhs + tol) return false;
    }
    return true;
  };

  std::vector<std::array<double, 2>> pts;
  const auto& ineqs = region.inequalities;
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    for (std::size_t j = i + 1; j < ineqs.size(); ++j) {
      const double a1 = coeff(ineqs[i], vx), b1 = coeff(ineqs[i], vy);
      const double a2 = coeff(ineqs[j], vx), b2 = coeff(ineqs[j], vy);
      const double det = a1 * b2 - a2 * b1;
      if (std::abs(det) < 1e-12) continue;
      const double x = (ineqs[i].rhs * b2 - ineqs[j].rhs * b1) / det;
      const double y = (a1 * ineqs[j].rhs - a2 * ineqs[i].rhs) / det;
      if (!feasible(x, y)) continue;
      bool dup = false;
      for (const auto& p : pts) {
        if (std::abs(p[0] - x) < 1e-9 && std::abs(p[1] - y) < 1e-9) dup = true;
      }
      if (!dup) pts.push_back({x, y});
    }
  }
  if (pts.empty()) {
    region.empty = true;
    return region;
  }
  double cx = 0, cy = 0;
  for (const auto& p : pts) {
    cx += p[0];
    cy += p[1];
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
    return std::atan2(p[1] - cy, p[0] - cx) < std::atan2(q[1] - cy, q[0] - cx);
  });
  region.vertices = std::move(pts);
  return region;
}

nlohmann::json expr_to_json(const InfoExpr& expr) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [atom, coeff] : expr.terms()) {
    terms.push_back({{"atom", atom}, {"coeff", rational_to_string(coeff)}});
  }
  return {{"terms", std::move(terms)},
          {"offset", rational_to_string(expr.offset())}};
}

InfoExpr expr_from_json(const nlohmann::json& j) {
  InfoExpr e;
  for (const auto& t : j.at("terms")) {
    e.add_term(make_varset(t.at("atom").get<std::vector<std::string>>()),
               parse_rational(t.at("coeff").get<std::string>()));
  }
  e.add_offset(parse_rational(j.at("offset").get<std::string>()));
  return e;
}

namespace {

nlohmann::json ineq_to_json(const LinIneq& ineq) {
  nlohmann::json coeffs = nlohmann::json::object();
  for (const auto& [v, c] : ineq.coeffs) coeffs[v] = rational_to_string(c);
  return {{"coeffs", std::move(coeffs)},
          {"constant", expr_to_json(ineq.constant)},
          {"tag", ineq.tag},
          {"pretty", ineq.to_string()}};
}

LinIneq ineq_from_json(const nlohmann::json& j) {
  LinIneq ineq;
  for (const auto& [v, c] : j.at("coeffs").items()) {
    ineq.coeffs[v] = parse_rational(c.get<std::string>());
  }
  ineq.constant = expr_from_json(j.at("constant"));
  ineq.tag = j.value("tag", "");
  return ineq;
}

}  // namespace

nlohmann::json system_to_json(const IneqSystem& system) {
  nlohmann::json ineqs = nlohmann::json::array();
  for (const auto& i : system.inequalities) ineqs.push_back(ineq_to_json(i));
  nlohmann::json assumptions = nlohmann::json::array();
  for (const auto& a : system.assumptions) assumptions.push_back(ineq_to_json(a));
  return {{"rate_vars", system.rate_vars},
          {"inequalities", std::move(ineqs)},
          {"assumptions", std::move(assumptions)}};
}

IneqSystem system_from_json(const nlohmann::json& j) {
  IneqSystem system;
  system.rate_vars = j.at("rate_vars").get<std::vector<std::string>>();
  for (const auto& i : j.at("inequalities")) system.add(ineq_from_json(i));
  for (const auto& a : j.value("assumptions", nlohmann::json::array())) {
    system.add_assumption(ineq_from_json(a));
  }
  return system;
}

nlohmann::json certificates_to_json(const RemoveRedundantResult& result) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [tag, cert] : result.dropped) {
    nlohmann::json mults = nlohmann::json::array();
    for (const auto& [src, weight] : cert.multipliers) {
      mults.push_back({{"source", src}, {"weight", rational_to_string(weight)}});
    }
    out.push_back({{"dropped", tag},
                   {"multipliers", std::move(mults)},
                   {"slack", rational_to_string(cert.slack)}});
  }
  return out;
}

}  // namespace secreg
