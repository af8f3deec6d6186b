#pragma once

#include <map>
#include <string>
#include <vector>

#include "secreg/dist.hpp"
#include "secreg/rational.hpp"

namespace secreg {

// Sorted, deduplicated variable subset. The basis object of all symbolic
// information expressions is the joint entropy H(atom).
using VarSet = std::vector<std::string>;

VarSet make_varset(std::vector<std::string> names);
VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_intersection(const VarSet& a, const VarSet& b);
VarSet set_difference(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& a, const VarSet& b);

// Exact-rational linear combination of joint-entropy atoms plus a scalar
// offset. Canonical: zero coefficients are never stored, so equality of the
// term maps is equality of expressions.
class InfoExpr {
 public:
  InfoExpr() = default;

  static InfoExpr entropy_of(const VarSet& vars, const Rat& coeff = 1);
  static InfoExpr constant(const Rat& value);

  const std::map<VarSet, Rat>& terms() const { return terms_; }
  const Rat& offset() const { return offset_; }
  bool is_zero() const { return terms_.empty() && offset_ == 0; }
  bool is_constant() const { return terms_.empty(); }

  InfoExpr& add_term(const VarSet& atom, const Rat& coeff);
  InfoExpr& add_offset(const Rat& value);

  InfoExpr operator+(const InfoExpr& other) const;
  InfoExpr operator-(const InfoExpr& other) const;
  InfoExpr operator*(const Rat& scale) const;
  InfoExpr operator-() const { return *this * Rat(-1); }
  InfoExpr& operator+=(const InfoExpr& other);
  InfoExpr& operator-=(const InfoExpr& other);

  friend bool operator==(const InfoExpr&, const InfoExpr&) = default;
  friend auto operator<=>(const InfoExpr&, const InfoExpr&) = default;

  std::string to_string() const;  // canonical H-atom form

 private:
  std::map<VarSet, Rat> terms_;
  Rat offset_ = 0;
};

// H(subset) in bits, direct summation with 0 log 0 := 0; probabilities
// below 1e-15 are treated as zero.
double entropy(const JointPmf& joint, const VarSet& subset);

// H(A|B) = H(A u B) - H(B) as a canonical expression.
InfoExpr cond_entropy_expr(const VarSet& a, const VarSet& b);

// I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C); H(empty) terms are dropped.
// A and B must be nonempty and disjoint from each other and from C.
InfoExpr mutual_info_expr(const VarSet& a, const VarSet& b, const VarSet& c = {});

double eval_expr(const InfoExpr& expr, const JointPmf& joint);

// Numeric conditional mutual information, routed through eval_expr.
double mutual_info(const JointPmf& joint, const VarSet& a, const VarSet& b,
                   const VarSet& c = {});

}  // namespace secreg
