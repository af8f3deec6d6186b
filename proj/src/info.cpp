#include "secreg/info.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace secreg {

VarSet make_varset(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

VarSet set_difference(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool is_subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

InfoExpr InfoExpr::entropy_of(const VarSet& vars, const Rat& coeff) {
  InfoExpr e;
  e.add_term(vars, coeff);
  return e;
}

InfoExpr InfoExpr::constant(const Rat& value) {
  InfoExpr e;
  e.offset_ = value;
  return e;
}

InfoExpr& InfoExpr::add_term(const VarSet& atom, const Rat& coeff) {
  if (coeff == 0) return *this;
  if (atom.empty()) return add_offset(0);  // H(empty) = 0, dropped
  if (!std::is_sorted(atom.begin(), atom.end()) ||
      std::adjacent_find(atom.begin(), atom.end()) != atom.end()) {
    throw std::invalid_argument("entropy atom must be a sorted set");
  }
  auto it = terms_.find(atom);
  if (it == terms_.end()) {
    terms_.emplace(atom, coeff);
  } else {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

InfoExpr& InfoExpr::add_offset(const Rat& value) {
  offset_ += value;
  return *this;
}

InfoExpr& InfoExpr::operator+=(const InfoExpr& other) {
  for (const auto& [atom, coeff] : other.terms_) add_term(atom, coeff);
  offset_ += other.offset_;
  return *this;
}

InfoExpr& InfoExpr::operator-=(const InfoExpr& other) {
  for (const auto& [atom, coeff] : other.terms_) add_term(atom, -coeff);
  offset_ -= other.offset_;
  return *this;
}

InfoExpr InfoExpr::operator+(const InfoExpr& other) const {
  InfoExpr out = *this;
  out += other;
  return out;
}

InfoExpr InfoExpr::operator-(const InfoExpr& other) const {
  InfoExpr out = *this;
  out -= other;
  return out;
}

InfoExpr InfoExpr::operator*(const Rat& scale) const {
  InfoExpr out;
  if (scale == 0) return out;
  for (const auto& [atom, coeff] : terms_) out.terms_.emplace(atom, coeff * scale);
  out.offset_ = offset_ * scale;
  return out;
}

std::string InfoExpr::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [atom, coeff] : terms_) {
    Rat mag = coeff < 0 ? Rat(-coeff) : coeff;
    if (first) {
      if (coeff < 0) os << "-";
    } else {
      os << (coeff < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1) os << rational_to_string(mag) << "*";
    os << "H(";
    for (std::size_t i = 0; i < atom.size(); ++i) {
      if (i) os << ",";
      os << atom[i];
    }
    os << ")";
  }
  if (offset_ != 0 || first) {
    Rat mag = offset_ < 0 ? Rat(-offset_) : offset_;
    if (first) {
      if (offset_ < 0) os << "-";
    } else {
      os << (offset_ < 0 ? " - " : " + ");
    }
    os << rational_to_string(mag);
  }
  return os.str();
}

double entropy(const JointPmf& joint, const VarSet& subset) {
  for (const auto& v : subset) {
    if (!joint.has_var(v)) throw std::invalid_argument("unknown variable " + v);
  }
  if (subset.empty()) return 0.0;

  // Accumulate the marginal over `subset` by striding the full tensor.
  std::vector<std::size_t> idx;
  std::size_t cells = 1;
  for (const auto& v : subset) {
    idx.push_back(joint.var_index(v));
    cells *= joint.variables()[idx.back()].cardinality;
  }
  std::vector<double> marginal(cells, 0.0);
  const auto& probs = joint.probs();
  for (std::size_t flat = 0; flat < probs.size(); ++flat) {
    if (probs[flat] == 0.0) continue;
    auto assignment = joint.unflatten(flat);
    std::size_t key = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      key = key * joint.variables()[idx[k]].cardinality + assignment[idx[k]];
    }
    marginal[key] += probs[flat];
  }
  double h = 0.0;
  for (double p : marginal) {
    if (p < 1e-15) continue;
    h -= p * std::log2(p);
  }
  return h;
}

InfoExpr cond_entropy_expr(const VarSet& a, const VarSet& b) {
  InfoExpr e;
  e.add_term(set_union(a, b), 1);
  e.add_term(b, -1);
  return e;
}

InfoExpr mutual_info_expr(const VarSet& a, const VarSet& b, const VarSet& c) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("mutual information needs nonempty arguments");
  }
  if (!set_intersection(a, b).empty() || !set_intersection(a, c).empty() ||
      !set_intersection(b, c).empty()) {
    throw std::invalid_argument("mutual information arguments must be disjoint");
  }
  InfoExpr e;
  e.add_term(set_union(a, c), 1);
  e.add_term(set_union(b, c), 1);
  e.add_term(set_union(set_union(a, b), c), -1);
  e.add_term(c, -1);
  return e;
}

double eval_expr(const InfoExpr& expr, const JointPmf& joint) {
  double out = to_double(expr.offset());
  for (const auto& [atom, coeff] : expr.terms()) {
    out += to_double(coeff) * entropy(joint, atom);
  }
  return out;
}

double mutual_info(const JointPmf& joint, const VarSet& a, const VarSet& b,
                   const VarSet& c) {
  return eval_expr(mutual_info_expr(a, b, c), joint);
}

}  // namespace secreg
