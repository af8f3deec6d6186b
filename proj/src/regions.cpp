#include "secreg/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace secreg {

namespace {

VarSet vs(std::initializer_list<const char*> names) {
  std::vector<std::string> v;
  for (const char* n : names) v.emplace_back(n);
  return make_varset(std::move(v));
}

InfoExpr Ix(std::initializer_list<const char*> a,
            std::initializer_list<const char*> b,
            std::initializer_list<const char*> c = {}) {
  return mutual_info_expr(vs(a), vs(b), vs(c));
}

InfoExpr Hx(std::initializer_list<const char*> a,
            std::initializer_list<const char*> c = {}) {
  return cond_entropy_expr(vs(a), vs(c));
}

using Coeffs = std::vector<std::pair<const char*, int>>;

// lhs <= rhs
LinIneq ub(const Coeffs& lhs, InfoExpr rhs, std::string tag) {
  LinIneq ineq;
  for (const auto& [v, c] : lhs) ineq.coeffs[v] += c;
  ineq.constant = std::move(rhs);
  ineq.tag = std::move(tag);
  return ineq;
}

// lhs >= rhs, stored negated
LinIneq lb(const Coeffs& lhs, InfoExpr rhs, std::string tag) {
  LinIneq ineq;
  for (const auto& [v, c] : lhs) ineq.coeffs[v] -= c;
  ineq.constant = -std::move(rhs);
  ineq.tag = std::move(tag);
  return ineq;
}

void add_equality(IneqSystem& sys, const Coeffs& lhs, const Coeffs& rhs,
                  const std::string& tag) {
  LinIneq fwd;
  for (const auto& [v, c] : lhs) fwd.coeffs[v] += c;
  for (const auto& [v, c] : rhs) fwd.coeffs[v] -= c;
  fwd.tag = tag + ":le";
  LinIneq bwd = fwd;
  for (auto& [v, c] : bwd.coeffs) c = -c;
  bwd.tag = tag + ":ge";
  sys.add(fwd);
  sys.add(bwd);
}

Factor shape_factor(std::initializer_list<const char*> targets,
                    std::initializer_list<const char*> givens = {}) {
  Factor f;
  for (const char* t : targets) f.targets.push_back({t, 2});
  for (const char* g : givens) f.givens.push_back({g, 2});
  return f;
}

// The packing constraint that accompanies the weak-secrecy inner bound: the
// grouped satellite leakage cannot exceed the per-receiver leakages minus
// the correlation spent on coordinating the satellite pairs.
InfoExpr packing_slack_expr() {
  return Ix({"U1", "V1"}, {"Z"}, {"U0", "V0"}) +
         Ix({"U2", "V2"}, {"Z"}, {"U0", "V0"}) - Ix({"U1"}, {"U2"}, {"U0"}) -
         Ix({"V1"}, {"V2"}, {"V0"}) -
         Ix({"U1", "U2", "V1", "V2"}, {"Z"}, {"U0", "V0"});
}

FactorizationSpec layered_template() {
  FactorizationSpec t;
  t.factors = {shape_factor({"Q"}),
               shape_factor({"U0"}, {"Q"}),
               shape_factor({"U1", "U2"}, {"U0"}),
               shape_factor({"V0"}, {"Q"}),
               shape_factor({"V1", "V2"}, {"V0"}),
               shape_factor({"X1"}, {"U0", "U1", "U2"}),
               shape_factor({"X2"}, {"V0", "V1", "V2"}),
               shape_factor({"Y1", "Y2", "Z"}, {"X1", "X2"})};
  return t;
}

IneqSystem thm1_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  s.add(ub({{"R1", 1}},
           Ix({"U0", "U1"}, {"Y1"}, {"Q", "V0", "V1"}) - Ix({"U0"}, {"Z"}, {"Q"}) -
               Ix({"U1"}, {"Z"}, {"Q", "U0", "V0"}),
           "r1_rx1"));
  s.add(ub({{"R1", 1}},
           Ix({"U0", "U2"}, {"Y2"}, {"Q", "V0", "V2"}) - Ix({"U0"}, {"Z"}, {"Q"}) -
               Ix({"U2"}, {"Z"}, {"Q", "U0", "V0"}),
           "r1_rx2"));
  s.add(ub({{"R2", 1}},
           Ix({"V0", "V1"}, {"Y1"}, {"Q", "U0", "U1"}) - Ix({"V0"}, {"Z"}, {"Q"}) -
               Ix({"V1"}, {"Z"}, {"Q", "U0", "V0"}),
           "r2_rx1"));
  s.add(ub({{"R2", 1}},
           Ix({"V0", "V2"}, {"Y2"}, {"Q", "U0", "U2"}) - Ix({"V0"}, {"Z"}, {"Q"}) -
               Ix({"V2"}, {"Z"}, {"Q", "U0", "V0"}),
           "r2_rx2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U0", "U1", "V0", "V1"}, {"Y1"}, {"Q"}) -
               Ix({"U0", "U1", "V0", "V1"}, {"Z"}, {"Q"}),
           "sum_rx1"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U0", "U2", "V0", "V2"}, {"Y2"}, {"Q"}) -
               Ix({"U0", "U2", "V0", "V2"}, {"Z"}, {"Q"}),
           "sum_rx2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U0", "U1"}, {"Y1"}, {"Q", "V0", "V1"}) +
               Ix({"V0", "V2"}, {"Y2"}, {"Q", "U0", "U2"}) -
               Ix({"U0", "V0"}, {"Z"}, {"Q"}) -
               Ix({"U1"}, {"Z"}, {"Q", "U0", "V0"}) -
               Ix({"V2"}, {"Z"}, {"Q", "U0", "V0"}),
           "sum_cross_12"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"V0", "V1"}, {"Y1"}, {"Q", "U0", "U1"}) +
               Ix({"U0", "U2"}, {"Y2"}, {"Q", "V0", "V2"}) -
               Ix({"U0", "V0"}, {"Z"}, {"Q"}) -
               Ix({"U2"}, {"Z"}, {"Q", "U0", "V0"}) -
               Ix({"V1"}, {"Z"}, {"Q", "U0", "V0"}),
           "sum_cross_21"));
  LinIneq packing;
  packing.constant = packing_slack_expr();
  packing.tag = "packing";
  s.add_assumption(packing);
  return s;
}

IneqSystem cor1_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  s.add(ub({{"R1", 1}},
           Ix({"U0"}, {"Y2"}, {"Q", "V0"}) - Ix({"U0"}, {"Z"}, {"Q"}), "r1"));
  s.add(ub({{"R2", 1}},
           Ix({"V0"}, {"Y2"}, {"Q", "U0"}) - Ix({"V0"}, {"Z"}, {"Q"}), "r2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U0", "V0"}, {"Y2"}, {"Q"}) - Ix({"U0"}, {"Z"}, {"Q"}) -
               Ix({"V0"}, {"Z"}, {"Q"}),
           "sum"));
  return s;
}

IneqSystem thm2_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  s.add(ub({{"R1", 1}}, Ix({"U0"}, {"Y2"}, {"Q"}) - Ix({"U0"}, {"Z"}, {"Q"}),
           "r1"));
  s.add(ub({{"R2", 1}}, Ix({"V0"}, {"Y2"}, {"Q"}) - Ix({"V0"}, {"Z"}, {"Q"}),
           "r2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U0", "V0"}, {"Y2"}, {"Q"}) - Ix({"U0", "V0"}, {"Z"}, {"Q"}),
           "sum"));
  return s;
}

IneqSystem thm3_system() {
  // The receivers observe the switch state, so the effective outputs are
  // the pairs (Y2,S) and (Z,S).
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  s.add(ub({{"R1", 1}},
           Ix({"U0"}, {"S", "Y2"}, {"Q", "V0"}) - Ix({"U0"}, {"S", "Z"}, {"Q"}),
           "r1"));
  s.add(ub({{"R2", 1}},
           Ix({"V0"}, {"S", "Y2"}, {"Q", "U0"}) - Ix({"V0"}, {"S", "Z"}, {"Q"}),
           "r2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U0", "V0"}, {"S", "Y2"}, {"Q"}) -
               Ix({"U0", "V0"}, {"S", "Z"}, {"Q"}),
           "sum"));
  return s;
}

IneqSystem thm4_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  s.add(ub({{"R1", 1}},
           Ix({"U0"}, {"Y1", "Y2"}, {"Q"}) - Ix({"U0"}, {"Z"}, {"Q"}), "r1"));
  s.add(ub({{"R2", 1}},
           Ix({"V0"}, {"Y1", "Y2"}, {"Q"}) - Ix({"V0"}, {"Z"}, {"Q"}), "r2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U0", "V0"}, {"Y1", "Y2"}, {"Q"}) -
               Ix({"U0", "V0"}, {"Z"}, {"Q"}),
           "sum"));
  return s;
}

// Strong-secrecy pre-elimination system. Rate variables: R1, R2 plus the
// secured index rates Rt1, Rt2 (cloud layers) and the satellite
// randomization rates Ru1, Ru2, Rv1, Rv2. No time-sharing variable here.
IneqSystem thm7_raw_system(bool reduced) {
  IneqSystem s;
  s.rate_vars = {"R1", "R2", "Rt1", "Rt2", "Ru1", "Ru2", "Rv1", "Rv2"};
  s.add(ub({{"R1", 1}, {"Rt1", 1}}, Hx({"U0"}, {"Z"}), "sec_cloud1"));
  s.add(ub({{"R2", 1}, {"Rt2", 1}}, Hx({"V0"}, {"Z"}), "sec_cloud2"));
  s.add(ub({{"R1", 1}, {"Rt1", 1}, {"R2", 1}, {"Rt2", 1}},
           Hx({"U0", "V0"}, {"Z"}), "sec_cloud12"));
  const char* base[] = {"U0", "V0", "Z"};
  auto cond = vs({"U0", "V0", "Z"});
  (void)base;
  auto HS = [&](std::initializer_list<const char*> a) {
    return cond_entropy_expr(vs(a), cond);
  };
  s.add(ub({{"Ru1", 1}}, HS({"U1"}), "sec_u1"));
  s.add(ub({{"Ru2", 1}}, HS({"U2"}), "sec_u2"));
  s.add(ub({{"Rv1", 1}}, HS({"V1"}), "sec_v1"));
  s.add(ub({{"Rv2", 1}}, HS({"V2"}), "sec_v2"));
  s.add(ub({{"Ru1", 1}, {"Rv1", 1}}, HS({"U1", "V1"}), "sec_u1v1"));
  s.add(ub({{"Ru2", 1}, {"Rv2", 1}}, HS({"U2", "V2"}), "sec_u2v2"));
  if (!reduced) {
    s.add(ub({{"Ru1", 1}, {"Rv2", 1}}, HS({"U1", "V2"}), "sec_u1v2"));
    s.add(ub({{"Ru2", 1}, {"Rv1", 1}}, HS({"U2", "V1"}), "sec_u2v1"));
    s.add(ub({{"Ru1", 1}, {"Ru2", 1}}, HS({"U1", "U2"}), "sec_u1u2"));
    s.add(ub({{"Rv1", 1}, {"Rv2", 1}}, HS({"V1", "V2"}), "sec_v1v2"));
    s.add(ub({{"Ru1", 1}, {"Ru2", 1}, {"Rv1", 1}}, HS({"U1", "U2", "V1"}),
             "sec_u1u2v1"));
    s.add(ub({{"Ru1", 1}, {"Ru2", 1}, {"Rv2", 1}}, HS({"U1", "U2", "V2"}),
             "sec_u1u2v2"));
    s.add(ub({{"Ru1", 1}, {"Rv1", 1}, {"Rv2", 1}}, HS({"U1", "V1", "V2"}),
             "sec_u1v1v2"));
    s.add(ub({{"Ru2", 1}, {"Rv1", 1}, {"Rv2", 1}}, HS({"U2", "V1", "V2"}),
             "sec_u2v1v2"));
    s.add(ub({{"Ru1", 1}, {"Ru2", 1}, {"Rv1", 1}, {"Rv2", 1}},
             HS({"U1", "U2", "V1", "V2"}), "sec_all"));
  }
  for (int j = 1; j <= 2; ++j) {
    const std::string js = std::to_string(j);
    const std::string uj = "U" + js;
    const std::string vj = "V" + js;
    const std::string yj = "Y" + js;
    const std::string ruj = "Ru" + js;
    const std::string rvj = "Rv" + js;
    auto mk = [&](std::initializer_list<std::string> names) {
      std::vector<std::string> v(names);
      return make_varset(std::move(v));
    };
    LinIneq dec1;
    dec1.coeffs["Rt1"] -= 1;
    dec1.coeffs[ruj] -= 1;
    dec1.constant = -cond_entropy_expr(mk({"U0", uj}), mk({"V0", vj, yj}));
    dec1.tag = "dec_cloud1_rx" + js;
    s.add(dec1);
    LinIneq dec2;
    dec2.coeffs["Rt2"] -= 1;
    dec2.coeffs[rvj] -= 1;
    dec2.constant = -cond_entropy_expr(mk({"V0", vj}), mk({"U0", uj, yj}));
    dec2.tag = "dec_cloud2_rx" + js;
    s.add(dec2);
    LinIneq dec12;
    dec12.coeffs["Rt1"] -= 1;
    dec12.coeffs[ruj] -= 1;
    dec12.coeffs["Rt2"] -= 1;
    dec12.coeffs[rvj] -= 1;
    dec12.constant = -cond_entropy_expr(mk({"U0", uj, "V0", vj}), mk({yj}));
    dec12.tag = "dec_both_rx" + js;
    s.add(dec12);
  }
  if (reduced) {
    LinIneq packing;
    packing.constant = packing_slack_expr();
    packing.tag = "packing";
    s.add_assumption(packing);
  }
  return s;
}

FactorizationSpec thm7_template() {
  FactorizationSpec t;
  t.factors = {shape_factor({"U0", "U1", "U2", "X1"}),
               shape_factor({"V0", "V1", "V2", "X2"}),
               shape_factor({"Y1", "Y2", "Z"}, {"X1", "X2"})};
  return t;
}

IneqSystem thm8_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "Rd1", "R2", "Rd2"};
  s.add(ub({{"R1", 1}},
           Ix({"U"}, {"Y"}, {"Q", "V"}) - Ix({"U"}, {"Z"}, {"Q"}), "r1"));
  s.add(ub({{"R2", 1}},
           Ix({"V"}, {"Y"}, {"Q", "U"}) - Ix({"V"}, {"Z"}, {"Q"}), "r2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"U", "V"}, {"Y"}, {"Q"}) - Ix({"U", "V"}, {"Z"}, {"Q"}), "sum"));
  s.add(lb({{"Rd1", 1}},
           Ix({"U"}, {"Z"}, {"Q"}) + Ix({"X1"}, {"Z"}, {"Q", "U", "V"}),
           "dummy1"));
  s.add(lb({{"Rd2", 1}},
           Ix({"V"}, {"Z"}, {"Q"}) + Ix({"X2"}, {"Z"}, {"Q", "U", "V"}),
           "dummy2"));
  s.add(lb({{"Rd1", 1}, {"Rd2", 1}},
           Ix({"U", "V"}, {"Z"}, {"Q"}) +
               Ix({"X1", "X2"}, {"Z"}, {"Q", "U", "V"}),
           "dummy12"));
  return s;
}

IneqSystem appb_raw_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "Rd1", "R2", "Rd2", "R11", "R12", "R21", "R22"};
  s.add(ub({{"R1", 1}, {"R11", 1}}, Ix({"U"}, {"Y"}, {"Q", "V"}), "dec1"));
  s.add(ub({{"R2", 1}, {"R21", 1}}, Ix({"V"}, {"Y"}, {"Q", "U"}), "dec2"));
  s.add(ub({{"R1", 1}, {"R11", 1}, {"R2", 1}, {"R21", 1}},
           Ix({"U", "V"}, {"Y"}, {"Q"}), "dec12"));
  s.add(lb({{"R11", 1}}, Ix({"U"}, {"Z"}, {"Q"}), "bin1"));
  s.add(lb({{"R21", 1}}, Ix({"V"}, {"Z"}, {"Q"}), "bin2"));
  s.add(lb({{"R11", 1}, {"R21", 1}}, Ix({"U", "V"}, {"Z"}, {"Q"}), "bin12"));
  s.add(lb({{"R12", 1}}, Ix({"X1"}, {"Z"}, {"Q", "U", "V"}), "chan1"));
  s.add(lb({{"R22", 1}}, Ix({"X2"}, {"Z"}, {"Q", "U", "V"}), "chan2"));
  s.add(lb({{"R12", 1}, {"R22", 1}}, Ix({"X1", "X2"}, {"Z"}, {"Q", "U", "V"}),
           "chan12"));
  add_equality(s, {{"Rd1", 1}}, {{"R11", 1}, {"R12", 1}}, "split1");
  add_equality(s, {{"Rd2", 1}}, {{"R21", 1}, {"R22", 1}}, "split2");
  return s;
}

FactorizationSpec macwt_template() {
  FactorizationSpec t;
  t.factors = {shape_factor({"Q"}),          shape_factor({"U"}, {"Q"}),
               shape_factor({"V"}, {"Q"}),   shape_factor({"X1"}, {"U"}),
               shape_factor({"X2"}, {"V"}),  shape_factor({"Y", "Z"}, {"X1", "X2"})};
  return t;
}

IneqSystem appc_raw_system() {
  // Rate variables: messages R1, R2; secured cloud indices Rt1, Rt2;
  // satellite codebook rates T1, T2 (first sender) and S1, S2 (second);
  // product-bin rates Rb11, Rb12 (first sender) and Rb21, Rb22 (second).
  IneqSystem s;
  s.rate_vars = {"R1", "R2", "Rt1", "Rt2", "T1",   "T2",
                 "S1", "S2", "Rb11", "Rb12", "Rb21", "Rb22"};
  s.add(ub({{"Rb11", 1}, {"Rb12", 1}, {"T1", -1}, {"T2", -1}},
           -Ix({"U1"}, {"U2"}, {"U0"}), "marton1"));
  s.add(ub({{"Rb21", 1}, {"Rb22", 1}, {"S1", -1}, {"S2", -1}},
           -Ix({"V1"}, {"V2"}, {"V0"}), "marton2"));
  s.add(ub({{"Rt1", 1}, {"T1", 1}}, Ix({"U0", "U1"}, {"Y1"}, {"Q", "V0", "V1"}),
           "dec1_rx1"));
  s.add(ub({{"Rt2", 1}, {"S1", 1}}, Ix({"V0", "V1"}, {"Y1"}, {"Q", "U0", "U1"}),
           "dec2_rx1"));
  s.add(ub({{"Rt1", 1}, {"T1", 1}, {"Rt2", 1}, {"S1", 1}},
           Ix({"U0", "U1", "V0", "V1"}, {"Y1"}, {"Q"}), "dec12_rx1"));
  s.add(ub({{"Rt1", 1}, {"T2", 1}}, Ix({"U0", "U2"}, {"Y2"}, {"Q", "V0", "V2"}),
           "dec1_rx2"));
  s.add(ub({{"Rt2", 1}, {"S2", 1}}, Ix({"V0", "V2"}, {"Y2"}, {"Q", "U0", "U2"}),
           "dec2_rx2"));
  s.add(ub({{"Rt1", 1}, {"T2", 1}, {"Rt2", 1}, {"S2", 1}},
           Ix({"U0", "U2", "V0", "V2"}, {"Y2"}, {"Q"}), "dec12_rx2"));
  s.add(lb({{"Rt1", 1}, {"R1", -1}, {"Rt2", 1}, {"R2", -1}},
           Ix({"U0", "V0"}, {"Z"}, {"Q"}), "leak_cloud12"));
  s.add(lb({{"Rt1", 1}, {"R1", -1}}, Ix({"U0"}, {"Z"}, {"Q"}), "leak_cloud1"));
  s.add(lb({{"Rt2", 1}, {"R2", -1}}, Ix({"V0"}, {"Z"}, {"Q"}), "leak_cloud2"));
  s.add(lb({{"T1", 1}, {"S1", 1}}, Ix({"U1", "V1"}, {"Z"}, {"Q", "U0", "V0"}),
           "leak_sat_rx1"));
  s.add(lb({{"T1", 1}}, Ix({"U1"}, {"Z"}, {"Q", "U0", "V0"}), "leak_u1"));
  s.add(lb({{"S1", 1}}, Ix({"V1"}, {"Z"}, {"Q", "U0", "V0"}), "leak_v1"));
  s.add(lb({{"T2", 1}, {"S2", 1}}, Ix({"U2", "V2"}, {"Z"}, {"Q", "U0", "V0"}),
           "leak_sat_rx2"));
  s.add(lb({{"T2", 1}}, Ix({"U2"}, {"Z"}, {"Q", "U0", "V0"}), "leak_u2"));
  s.add(lb({{"S2", 1}}, Ix({"V2"}, {"Z"}, {"Q", "U0", "V0"}), "leak_v2"));
  s.add(ub({{"T1", 1}, {"S1", 1}, {"T2", 1}, {"S2", 1},
            {"Rb11", -1}, {"Rb12", -1}, {"Rb21", -1}, {"Rb22", -1}},
           Ix({"U1", "V1"}, {"Z"}, {"Q", "U0", "V0"}) +
               Ix({"U2", "V2"}, {"Z"}, {"Q", "U0", "V0"}) -
               Ix({"U1", "U2", "V1", "V2"}, {"Z"}, {"U0", "V0"}),
           "leak_total"));
  return s;
}

FactorizationSpec degraded_template(bool joint_cloud) {
  FactorizationSpec t;
  t.factors.push_back(shape_factor({"Q"}));
  if (joint_cloud) {
    t.factors.push_back(shape_factor({"U0", "V0"}, {"Q"}));
  } else {
    t.factors.push_back(shape_factor({"U0"}, {"Q"}));
    t.factors.push_back(shape_factor({"V0"}, {"Q"}));
  }
  t.factors.push_back(shape_factor({"X1"}, {"U0"}));
  t.factors.push_back(shape_factor({"X2"}, {"V0"}));
  t.factors.push_back(shape_factor({"Y1"}, {"X1", "X2"}));
  t.factors.push_back(shape_factor({"Y2"}, {"Y1"}));
  t.factors.push_back(shape_factor({"Z"}, {"Y2"}));
  return t;
}

FactorizationSpec switch_template() {
  FactorizationSpec t;
  t.factors = {shape_factor({"Q"}),
               shape_factor({"U0"}, {"Q"}),
               shape_factor({"V0"}, {"Q"}),
               shape_factor({"X1"}, {"U0"}),
               shape_factor({"X2"}, {"V0"}),
               shape_factor({"S"}),
               shape_factor({"Y1"}, {"S", "X1", "X2"}),
               shape_factor({"Y2"}, {"S", "Y1"}),
               shape_factor({"Z"}, {"S", "Y2"})};
  return t;
}

FactorizationSpec general_outer_template() {
  FactorizationSpec t;
  t.factors = {shape_factor({"Q"}), shape_factor({"U0", "V0"}, {"Q"}),
               shape_factor({"X1"}, {"U0"}), shape_factor({"X2"}, {"V0"}),
               shape_factor({"Y1", "Y2", "Z"}, {"X1", "X2"})};
  return t;
}

FactorizationSpec noiseless_switch_template() {
  FactorizationSpec t;
  t.factors = {shape_factor({"X1"}),
               shape_factor({"X2"}),
               shape_factor({"S1"}),
               shape_factor({"S2"}),
               shape_factor({"Y1"}, {"S1", "X1", "X2"}),
               shape_factor({"Y2"}, {"Y1"}),
               shape_factor({"Z"}, {"S2", "X1", "X2"})};
  return t;
}

}  // namespace

IneqSystem noiseless_switch_system(const Rat& tau1, const Rat& tau2) {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  const Rat a = tau1 > tau2 ? Rat(tau1 - tau2) : Rat(0);
  const Rat b = tau2 > tau1 ? Rat(tau2 - tau1) : Rat(0);
  s.add(ub({{"R1", 1}}, InfoExpr::entropy_of(vs({"X1"}), a), "r1"));
  s.add(ub({{"R2", 1}}, InfoExpr::entropy_of(vs({"X2"}), b), "r2"));
  return s;
}

RegionId region_id_from_string(const std::string& name) {
  for (const auto& id : {RegionId::thm1_inner, RegionId::cor1_degraded_inner,
                         RegionId::thm2_outer_degraded,
                         RegionId::thm3_switch_capacity,
                         RegionId::thm4_outer_general,
                         RegionId::thm5_noiseless_switch,
                         RegionId::thm7_strong_raw, RegionId::thm7_strong_reduced,
                         RegionId::thm8_macwt, RegionId::appb_raw,
                         RegionId::appc_raw}) {
    if (region_id_to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown region id: " + name);
}

std::string region_id_to_string(RegionId id) {
  switch (id) {
    case RegionId::thm1_inner: return "THM1_INNER";
    case RegionId::cor1_degraded_inner: return "COR1_DEGRADED_INNER";
    case RegionId::thm2_outer_degraded: return "THM2_OUTER_DEGRADED";
    case RegionId::thm3_switch_capacity: return "THM3_SWITCH_CAPACITY";
    case RegionId::thm4_outer_general: return "THM4_OUTER_GENERAL";
    case RegionId::thm5_noiseless_switch: return "THM5_NOISELESS_SWITCH";
    case RegionId::thm7_strong_raw: return "THM7_STRONG_RAW";
    case RegionId::thm7_strong_reduced: return "THM7_STRONG_REDUCED";
    case RegionId::thm8_macwt: return "THM8_MACWT";
    case RegionId::appb_raw: return "APPB_RAW";
    case RegionId::appc_raw: return "APPC_RAW";
  }
  throw std::invalid_argument("unknown region id");
}

std::vector<std::string> all_region_ids() {
  return {"THM1_INNER",      "COR1_DEGRADED_INNER", "THM2_OUTER_DEGRADED",
          "THM3_SWITCH_CAPACITY", "THM4_OUTER_GENERAL", "THM5_NOISELESS_SWITCH",
          "THM7_STRONG_RAW", "THM7_STRONG_REDUCED", "THM8_MACWT",
          "APPB_RAW",        "APPC_RAW"};
}

RegionSpec builtin_system(RegionId id) {
  RegionSpec spec;
  spec.id = id;
  switch (id) {
    case RegionId::thm1_inner:
      spec.system = thm1_system();
      spec.factorization_template = layered_template();
      break;
    case RegionId::cor1_degraded_inner:
      spec.system = cor1_system();
      spec.factorization_template = degraded_template(/*joint_cloud=*/false);
      break;
    case RegionId::thm2_outer_degraded:
      spec.system = thm2_system();
      spec.factorization_template = degraded_template(/*joint_cloud=*/true);
      break;
    case RegionId::thm3_switch_capacity:
      spec.system = thm3_system();
      spec.factorization_template = switch_template();
      break;
    case RegionId::thm4_outer_general:
      spec.system = thm4_system();
      spec.factorization_template = general_outer_template();
      break;
    case RegionId::thm5_noiseless_switch:
      // Default switch biases from the worked example; use
      // noiseless_switch_system directly for other values.
      spec.system = noiseless_switch_system(Rat(7, 10), Rat(3, 10));
      spec.factorization_template = noiseless_switch_template();
      break;
    case RegionId::thm7_strong_raw:
      spec.system = thm7_raw_system(/*reduced=*/false);
      spec.factorization_template = thm7_template();
      break;
    case RegionId::thm7_strong_reduced:
      spec.system = thm7_raw_system(/*reduced=*/true);
      spec.factorization_template = thm7_template();
      break;
    case RegionId::thm8_macwt:
      spec.system = thm8_system();
      spec.factorization_template = macwt_template();
      break;
    case RegionId::appb_raw:
      spec.system = appb_raw_system();
      spec.factorization_template = macwt_template();
      break;
    case RegionId::appc_raw:
      spec.system = appc_raw_system();
      spec.factorization_template = layered_template();
      break;
  }
  return spec;
}

bool d_separated(const FactorizationSpec& shape, const VarSet& a,
                 const VarSet& b, const VarSet& c) {
  VarSet left = set_difference(a, c);
  VarSet right = set_difference(b, c);
  if (left.empty() || right.empty()) return true;

  // Restrict to the ancestral factor set of the query variables.
  std::set<std::string> needed(a.begin(), a.end());
  needed.insert(b.begin(), b.end());
  needed.insert(c.begin(), c.end());
  std::vector<bool> used(shape.factors.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < shape.factors.size(); ++i) {
      if (used[i]) continue;
      bool hit = false;
      for (const auto& t : shape.factors[i].targets) {
        if (needed.count(t.name)) hit = true;
      }
      if (!hit) continue;
      used[i] = true;
      changed = true;
      for (const auto& t : shape.factors[i].targets) needed.insert(t.name);
      for (const auto& g : shape.factors[i].givens) needed.insert(g.name);
    }
  }

  // One clique per used factor over targets+givens, conditioning set
  // removed; separation = no path from `left` to `right`.
  std::set<std::string> blocked(c.begin(), c.end());
  std::map<std::string, std::vector<std::string>> adj;
  for (std::size_t i = 0; i < shape.factors.size(); ++i) {
    if (!used[i]) continue;
    std::vector<std::string> clique;
    for (const auto& t : shape.factors[i].targets) {
      if (!blocked.count(t.name)) clique.push_back(t.name);
    }
    for (const auto& g : shape.factors[i].givens) {
      if (!blocked.count(g.name)) clique.push_back(g.name);
    }
    for (const auto& u : clique) {
      for (const auto& v : clique) {
        if (u != v) adj[u].push_back(v);
      }
    }
  }
  std::set<std::string> seen(left.begin(), left.end());
  std::queue<std::string> frontier;
  for (const auto& v : left) frontier.push(v);
  while (!frontier.empty()) {
    auto v = frontier.front();
    frontier.pop();
    for (const auto& w : adj[v]) {
      if (seen.insert(w).second) frontier.push(w);
    }
  }
  for (const auto& v : right) {
    if (seen.count(v)) return false;
  }
  return true;
}

void add_independence_assumptions(IneqSystem& system,
                                  const FactorizationSpec& shape) {
  std::set<VarSet> family;
  auto harvest = [&](const InfoExpr& e) {
    for (const auto& [atom, coeff] : e.terms()) family.insert(atom);
  };
  for (const auto& ineq : system.inequalities) harvest(ineq.constant);
  for (const auto& a : system.assumptions) harvest(a.constant);

  std::vector<VarSet> atoms(family.begin(), family.end());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (is_subset(atoms[i], atoms[j]) || is_subset(atoms[j], atoms[i])) {
        continue;
      }
      VarSet uni = set_union(atoms[i], atoms[j]);
      VarSet inter = set_intersection(atoms[i], atoms[j]);
      if (!family.count(uni)) continue;
      if (!inter.empty() && !family.count(inter)) continue;
      VarSet left = set_difference(atoms[i], inter);
      VarSet right = set_difference(atoms[j], inter);
      if (!d_separated(shape, left, right, inter)) continue;
      // I(left; right | inter) = 0: the >= 0 side is a generic
      // submodularity instance, so only the <= 0 side is recorded.
      InfoExpr e;
      e.add_term(atoms[i], -1);
      e.add_term(atoms[j], -1);
      e.add_term(uni, 1);
      if (!inter.empty()) e.add_term(inter, 1);
      if (e.is_zero()) continue;
      LinIneq assumption;
      assumption.constant = std::move(e);
      std::ostringstream tag;
      tag << "indep:";
      for (const auto& v : left) tag << v;
      tag << "_";
      for (const auto& v : right) tag << v;
      tag << "|";
      for (const auto& v : inter) tag << v;
      assumption.tag = tag.str();
      system.add_assumption(std::move(assumption));
    }
  }
}

namespace {

// Widens the entropy-atom family by one level of pairwise unions and
// intersections. New atoms are anchored through trivially true H(S) >= 0
// assumptions (tag "atom:") so the redundancy engine's fact generator sees
// them, then independence detection reruns over the widened family. Some
// redundancies certify only through facts on union atoms that no surviving
// inequality mentions; this pass makes those certificates reachable.
void enrich_atom_family(IneqSystem& system, const FactorizationSpec& shape,
                        std::size_t max_atoms = 128) {
  std::set<VarSet> family;
  auto harvest = [&](const InfoExpr& e) {
    for (const auto& [atom, coeff] : e.terms()) family.insert(atom);
  };
  for (const auto& ineq : system.inequalities) harvest(ineq.constant);
  for (const auto& a : system.assumptions) harvest(a.constant);

  std::vector<VarSet> atoms(family.begin(), family.end());
  std::set<VarSet> fresh;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      VarSet uni = set_union(atoms[i], atoms[j]);
      if (!family.count(uni)) fresh.insert(std::move(uni));
      VarSet inter = set_intersection(atoms[i], atoms[j]);
      if (!inter.empty() && !family.count(inter)) fresh.insert(std::move(inter));
    }
  }
  for (const auto& atom : fresh) {
    if (family.size() >= max_atoms) break;
    family.insert(atom);
    InfoExpr e;
    e.add_term(atom, 1);
    LinIneq anchor;
    anchor.constant = std::move(e);
    std::ostringstream tag;
    tag << "atom:";
    for (const auto& v : atom) tag << v;
    anchor.tag = tag.str();
    system.add_assumption(std::move(anchor));
  }
  add_independence_assumptions(system, shape);
}

}  // namespace

DeriveResult derive_from_raw(const RegionSpec& raw,
                             const std::vector<std::string>& eliminate,
                             RedundancyMode mode, bool count_unpruned) {
  DeriveResult result;
  IneqSystem sys = raw.system;
  add_independence_assumptions(sys, raw.factorization_template);

  // Informational: projection size with deduplication but no pruning.
  // Grows combinatorially, so it is opt-in and capped (0 = not computed).
  if (count_unpruned) {
    IneqSystem plain = sys;
    bool ok = true;
    for (const auto& var : eliminate) {
      // Bail on the worst-case pairing estimate before paying for an
      // elimination step whose output could not be counted anyway.
      std::size_t uppers = 0, lowers = 1;  // the variable's nonnegativity
      std::size_t neutral = 0;
      for (const auto& iq : plain.inequalities) {
        auto it = iq.coeffs.find(var);
        if (it == iq.coeffs.end() || it->second.is_zero()) {
          ++neutral;
        } else if (it->second > 0) {
          ++uppers;
        } else {
          ++lowers;
        }
      }
      if (neutral + uppers * lowers > 20000) {
        ok = false;
        break;
      }
      plain = fm_eliminate(plain, var);
      if (plain.inequalities.size() > 20000) {
        ok = false;
        break;
      }
    }
    result.raw_inequality_count = ok ? plain.inequalities.size() : 0;
  }

  nlohmann::json steps = nlohmann::json::array();
  for (const auto& var : eliminate) {
    sys = fm_eliminate(sys, var);
    auto rr = remove_redundant(sys, mode);
    steps.push_back({{"eliminated", var},
                     {"kept", rr.system.inequalities.size()},
                     {"dropped", certificates_to_json(rr)}});
    sys = std::move(rr.system);
  }

  // Final pass over the widened atom family, plus cleanup of assumptions
  // that are generic consequences (Shannon facts or factorization
  // identities) rather than genuine constraints on the admissible
  // distributions. The anchor assumptions exist only for this sweep.
  IneqSystem deep = sys;
  if (mode == RedundancyMode::farkas_shannon) {
    enrich_atom_family(deep, raw.factorization_template);
  }
  auto final_rr = remove_redundant(deep, mode);
  steps.push_back({{"eliminated", nullptr},
                   {"kept", final_rr.system.inequalities.size()},
                   {"dropped", certificates_to_json(final_rr)}});
  sys.inequalities = std::move(final_rr.system.inequalities);
  std::vector<LinIneq> kept_assumptions;
  for (std::size_t i = 0; i < sys.assumptions.size(); ++i) {
    // Installed factorization identities are not emergent constraints.
    if (sys.assumptions[i].tag.rfind("indep:", 0) == 0) continue;
    IneqSystem probe;
    probe.rate_vars = sys.rate_vars;
    for (std::size_t j = 0; j < sys.assumptions.size(); ++j) {
      if (j != i) probe.assumptions.push_back(sys.assumptions[j]);
    }
    LinIneq target = sys.assumptions[i];
    if (!implies(probe, target, mode)) kept_assumptions.push_back(target);
  }
  sys.assumptions = std::move(kept_assumptions);

  result.derived = std::move(sys);
  result.certificates = std::move(steps);
  return result;
}

EvalResult evaluate(const RegionSpec& spec, const JointPmf& joint,
                    bool clamp_negative_rhs, double residual_tol,
                    double assume_tol) {
  EvalResult result;
  result.residual = factorization_residual(joint, spec.factorization_template);
  if (result.residual >= residual_tol) {
    throw std::invalid_argument(
        "joint does not match the region's factorization (residual " +
        std::to_string(result.residual) + ")");
  }
  for (const auto& a : spec.system.assumptions) {
    const double slack = eval_expr(a.constant, joint);
    if (slack < -assume_tol) result.violations.push_back({a.tag, slack});
  }
  result.region = numeric_region(spec.system, joint, clamp_negative_rhs);
  return result;
}

namespace {

struct SampledFactor {
  std::vector<VariableSpec> targets;
  std::vector<VariableSpec> givens;
  std::size_t rows = 0;
  std::size_t width = 0;  // row length
  std::size_t offset = 0; // into the parameter vector
};

struct SearchPlan {
  std::vector<SampledFactor> inputs;
  FactorizationSpec channel;
  std::size_t total = 0;
};

SearchPlan build_plan(const RegionSpec& spec, const FactorizationSpec& channel,
                      const AuxSearchConfig& cfg) {
  std::map<std::string, std::size_t> cards;
  for (const auto& f : channel.factors) {
    for (const auto& t : f.targets) cards[t.name] = t.cardinality;
    for (const auto& g : f.givens) {
      if (!cards.count(g.name)) cards[g.name] = g.cardinality;
    }
  }
  std::set<std::string> channel_targets;
  for (const auto& f : channel.factors) {
    for (const auto& t : f.targets) channel_targets.insert(t.name);
  }

  SearchPlan plan;
  plan.channel = channel;
  for (const auto& f : spec.factorization_template.factors) {
    bool produced = true;
    for (const auto& t : f.targets) {
      if (!channel_targets.count(t.name)) produced = false;
    }
    if (produced) continue;
    SampledFactor sf;
    sf.rows = 1;
    sf.width = 1;
    for (const auto& t : f.targets) {
      std::size_t card;
      if (cards.count(t.name)) {
        card = cards[t.name];
      } else if (t.name == "Q") {
        card = cfg.q_cardinality;
      } else {
        card = cfg.aux_cardinality;
      }
      cards[t.name] = card;
      sf.targets.push_back({t.name, card});
      sf.width *= card;
    }
    for (const auto& g : f.givens) {
      if (!cards.count(g.name)) {
        cards[g.name] = g.name == "Q" ? cfg.q_cardinality : cfg.aux_cardinality;
      }
      sf.givens.push_back({g.name, cards[g.name]});
      sf.rows *= cards[g.name];
    }
    sf.offset = plan.total;
    plan.total += sf.rows * sf.width;
    plan.inputs.push_back(std::move(sf));
  }
  return plan;
}

JointPmf realize(const SearchPlan& plan, const std::vector<double>& params) {
  FactorizationSpec full;
  for (const auto& sf : plan.inputs) {
    Factor f;
    f.targets = sf.targets;
    f.givens = sf.givens;
    f.table.assign(params.begin() + static_cast<std::ptrdiff_t>(sf.offset),
                   params.begin() +
                       static_cast<std::ptrdiff_t>(sf.offset +
                                                   sf.rows * sf.width));
    // Renormalize each row; refinement moves may drift slightly.
    for (std::size_t r = 0; r < sf.rows; ++r) {
      double sum = 0.0;
      for (std::size_t k = 0; k < sf.width; ++k) sum += f.table[r * sf.width + k];
      if (sum <= 0.0) {
        for (std::size_t k = 0; k < sf.width; ++k) {
          f.table[r * sf.width + k] = 1.0 / static_cast<double>(sf.width);
        }
      } else {
        for (std::size_t k = 0; k < sf.width; ++k) f.table[r * sf.width + k] /= sum;
      }
    }
    full.factors.push_back(std::move(f));
  }
  for (const auto& f : plan.channel.factors) full.factors.push_back(f);
  return compose_joint(full);
}

double score(const RegionSpec& spec, const SearchPlan& plan,
             const std::vector<double>& params, double lambda1, double lambda2,
             double assume_tol, double* r1 = nullptr, double* r2 = nullptr) {
  JointPmf joint = realize(plan, params);
  // Input distributions that violate an admissibility assumption score
  // strictly below every admissible one, ordered by the violation, so the
  // refinement can descend onto the admissible surface (which may have
  // measure zero under the samplers) instead of stalling.
  double violation = 0.0;
  for (const auto& a : spec.system.assumptions) {
    const double slack = eval_expr(a.constant, joint);
    if (slack < -assume_tol) violation += -slack;
  }
  if (violation > 0.0) return -1e9 * (1.0 + violation);
  NumericRegion region = numeric_region(spec.system, joint, true);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : region.vertices) {
    const double val = lambda1 * v[0] + lambda2 * v[1];
    if (val > best) {
      best = val;
      if (r1) *r1 = v[0];
      if (r2) *r2 = v[1];
    }
  }
  // Clamping flattens the score wherever some bound is negative, which can
  // deadlock single-coordinate moves; a small reward for raising negative
  // bounds restores a gradient across that plateau without displacing the
  // optimum (all active bounds are nonnegative there).
  double shaping = 0.0;
  for (const auto& iq : spec.system.inequalities) {
    shaping += std::min(0.0, eval_expr(iq.constant, joint));
  }
  return best + 1e-3 * shaping;
}

// Enumerates lattice points of the simplex (compositions of `resolution`
// into `width` parts); used by the exhaustive grid sampler.
void compositions(std::size_t total, std::size_t width,
                  std::vector<std::vector<double>>& out) {
  std::vector<std::size_t> parts(width, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx,
                                                          std::size_t left) {
    if (idx + 1 == width) {
      parts[idx] = left;
      std::vector<double> row(width);
      for (std::size_t k = 0; k < width; ++k) {
        row[k] = static_cast<double>(parts[k]) / static_cast<double>(total);
      }
      out.push_back(std::move(row));
      return;
    }
    for (std::size_t take = 0; take <= left; ++take) {
      parts[idx] = take;
      rec(idx + 1, left - take);
    }
  };
  rec(0, total);
}

}  // namespace

RegionEnvelope search_envelope(const RegionSpec& spec,
                               const FactorizationSpec& channel,
                               const AuxSearchConfig& cfg) {
  if (spec.system.rate_vars.size() != 2) {
    throw std::invalid_argument("envelope search needs a two-rate region");
  }
  SearchPlan plan = build_plan(spec, channel, cfg);

  std::vector<std::vector<double>> candidates;
  if (cfg.sampler == Sampler::dirichlet) {
    candidates.reserve(cfg.samples);
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      Rng rng(split_seed(cfg.seed, s));
      std::vector<double> params(plan.total);
      for (const auto& sf : plan.inputs) {
        for (std::size_t r = 0; r < sf.rows; ++r) {
          auto row = rng.dirichlet(sf.width);
          std::copy(row.begin(), row.end(),
                    params.begin() + static_cast<std::ptrdiff_t>(
                                         sf.offset + r * sf.width));
        }
      }
      candidates.push_back(std::move(params));
    }
  } else {
    // Cartesian product of per-row simplex lattices.
    std::vector<std::vector<std::vector<double>>> row_choices;
    for (const auto& sf : plan.inputs) {
      for (std::size_t r = 0; r < sf.rows; ++r) {
        std::vector<std::vector<double>> rows;
        compositions(cfg.grid_resolution, sf.width, rows);
        row_choices.push_back(std::move(rows));
      }
    }
    std::size_t combos = 1;
    for (const auto& rc : row_choices) {
      combos *= rc.size();
      if (combos > 200000) {
        throw std::invalid_argument("grid sampler would enumerate too many points");
      }
    }
    for (std::size_t c = 0; c < combos; ++c) {
      std::vector<double> params;
      params.reserve(plan.total);
      std::size_t rem = c;
      for (const auto& rc : row_choices) {
        const auto& row = rc[rem % rc.size()];
        rem /= rc.size();
        params.insert(params.end(), row.begin(), row.end());
      }
      candidates.push_back(std::move(params));
    }
  }

  RegionEnvelope envelope;
  constexpr double phi = 0.6180339887498949;
  constexpr std::size_t max_starts = 8;
  for (const auto& [l1, l2] : cfg.directions) {
    // Rank every sampled candidate and refine the strongest few; coordinate
    // ascent can stall in flat corners, so independent starts matter more
    // than extra passes from a single one.
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      ranked.emplace_back(
          score(spec, plan, candidates[i], l1, l2, cfg.assume_tol), i);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<double> overall_params;
    double overall = -std::numeric_limits<double>::infinity();
    const std::size_t starts = std::min(max_starts, ranked.size());
    for (std::size_t s = 0; s < starts; ++s) {
      double best = ranked[s].first;
      std::vector<double> best_params = candidates[ranked[s].second];

      // Coordinate refinement: for each table entry, a golden-section line
      // search along the segment from the current row to the corner that
      // puts all mass on that entry.
      for (std::size_t pass = 0; pass < cfg.refinement_passes; ++pass) {
        const double before = best;
        for (const auto& sf : plan.inputs) {
          for (std::size_t r = 0; r < sf.rows; ++r) {
            const std::size_t base = sf.offset + r * sf.width;
            for (std::size_t k = 0; k < sf.width; ++k) {
              std::vector<double> row(best_params.begin() + base,
                                      best_params.begin() + base + sf.width);
              auto with_weight = [&](double w) {
                std::vector<double> trial = best_params;
                for (std::size_t m = 0; m < sf.width; ++m) {
                  trial[base + m] = (1.0 - w) * row[m] + (m == k ? w : 0.0);
                }
                return trial;
              };
              double lo = 0.0, hi = 1.0;
              double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
              double f1 =
                  score(spec, plan, with_weight(m1), l1, l2, cfg.assume_tol);
              double f2 =
                  score(spec, plan, with_weight(m2), l1, l2, cfg.assume_tol);
              for (int it = 0; it < 18; ++it) {
                if (f1 < f2) {
                  lo = m1;
                  m1 = m2;
                  f1 = f2;
                  m2 = lo + phi * (hi - lo);
                  f2 = score(spec, plan, with_weight(m2), l1, l2,
                             cfg.assume_tol);
                } else {
                  hi = m2;
                  m2 = m1;
                  f2 = f1;
                  m1 = hi - phi * (hi - lo);
                  f1 = score(spec, plan, with_weight(m1), l1, l2,
                             cfg.assume_tol);
                }
              }
              const double wbest = (lo + hi) / 2.0;
              for (double w : {wbest, 1.0}) {
                auto trial = with_weight(w);
                const double val =
                    score(spec, plan, trial, l1, l2, cfg.assume_tol);
                if (val > best) {
                  best = val;
                  best_params = std::move(trial);
                }
              }
            }
          }
        }
        if (best <= before) break;  // the pass made no progress
      }
      if (best > overall) {
        overall = best;
        overall_params = std::move(best_params);
      }
    }
    if (overall_params.empty()) continue;

    EnvelopePoint point;
    point.lambda1 = l1;
    point.lambda2 = l2;
    score(spec, plan, overall_params, l1, l2, cfg.assume_tol, &point.r1,
          &point.r2);
    point.params = overall_params;
    envelope.per_direction.push_back(std::move(point));
  }

  // Pareto frontier of the per-direction optima.
  for (const auto& p : envelope.per_direction) {
    bool dominated = false;
    for (const auto& q : envelope.per_direction) {
      if (q.r1 >= p.r1 + 1e-12 && q.r2 >= p.r2 + 1e-12) dominated = true;
      if (q.r1 >= p.r1 + 1e-12 && q.r2 >= p.r2 - 1e-12) dominated = true;
    }
    if (!dominated) envelope.points.push_back(p);
  }
  std::sort(envelope.points.begin(), envelope.points.end(),
            [](const EnvelopePoint& a, const EnvelopePoint& b) {
              return a.r1 < b.r1;
            });
  return envelope;
}

Remark2Report check_remark2(const JointPmf& joint, double tol,
                            double cross_tol) {
  Remark2Report report;
  report.lhs = eval_expr(Ix({"U1", "U2", "V1", "V2"}, {"Z"}, {"U0", "V0"}), joint);
  report.rhs = eval_expr(Ix({"U1", "V1"}, {"Z"}, {"U0", "V0"}) +
                             Ix({"U2", "V2"}, {"Z"}, {"U0", "V0"}) -
                             Ix({"U1"}, {"U2"}, {"U0"}) -
                             Ix({"V1"}, {"V2"}, {"V0"}),
                         joint);
  report.slack = report.rhs - report.lhs;
  report.holds = report.slack >= -tol;
  report.cross_term = eval_expr(
      Ix({"U1", "V1"}, {"U2", "V2"}, {"Q", "U0", "V0", "Z"}), joint);
  report.implication_ok = !report.holds || report.cross_term < cross_tol;
  return report;
}

ContainmentReport compare_bounds(const RegionEnvelope& inner,
                                 const NumericRegion& outer, double tol) {
  ContainmentReport report;
  report.contained = true;
  if (outer.rate_vars.size() != 2) {
    throw std::invalid_argument("containment check needs a two-rate outer region");
  }
  const std::string& vx = outer.rate_vars[0];
  const std::string& vy = outer.rate_vars[1];
  for (const auto& p : inner.points) {
    for (const auto& ineq : outer.inequalities) {
      double lhs = 0.0;
      auto it = ineq.coeffs.find(vx);
      if (it != ineq.coeffs.end()) lhs += it->second * p.r1;
      it = ineq.coeffs.find(vy);
      if (it != ineq.coeffs.end()) lhs += it->second * p.r2;
      const double violation = lhs - ineq.rhs;
      report.max_violation = std::max(report.max_violation, violation);
      if (violation > tol) report.contained = false;
    }
    double support = 0.0;
    for (const auto& v : outer.vertices) {
      support = std::max(support, p.lambda1 * v[0] + p.lambda2 * v[1]);
    }
    report.direction_gaps.push_back(support -
                                    (p.lambda1 * p.r1 + p.lambda2 * p.r2));
  }
  return report;
}

IneqSystem compound_mac_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  for (const char* y : {"Y1", "Y2"}) {
    std::vector<std::string> yv = {y};
    s.add(ub({{"R1", 1}},
             mutual_info_expr(vs({"X1"}), make_varset(yv), vs({"Q", "X2"})),
             std::string("r1_") + y));
    s.add(ub({{"R2", 1}},
             mutual_info_expr(vs({"X2"}), make_varset(yv), vs({"Q", "X1"})),
             std::string("r2_") + y));
    s.add(ub({{"R1", 1}, {"R2", 1}},
             mutual_info_expr(vs({"X1", "X2"}), make_varset(yv), vs({"Q"})),
             std::string("sum_") + y));
  }
  return s;
}

IneqSystem mac_wiretap_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  s.add(ub({{"R1", 1}},
           Ix({"X1"}, {"Y1"}, {"Q", "X2"}) - Ix({"X1"}, {"Z"}, {"Q"}), "r1"));
  s.add(ub({{"R2", 1}},
           Ix({"X2"}, {"Y1"}, {"Q", "X1"}) - Ix({"X2"}, {"Z"}, {"Q"}), "r2"));
  s.add(ub({{"R1", 1}, {"R2", 1}},
           Ix({"X1", "X2"}, {"Y1"}, {"Q"}) - Ix({"X1", "X2"}, {"Z"}, {"Q"}),
           "sum"));
  return s;
}

IneqSystem bcc_system() {
  IneqSystem s;
  s.rate_vars = {"R1", "R2"};
  s.add(ub({{"R1", 1}},
           Ix({"U0"}, {"Y1"}, {"Q"}) - Ix({"U0"}, {"Z"}, {"Q"}), "r1"));
  s.add(ub({{"R2", 1}}, InfoExpr::constant(0), "r2"));
  return s;
}

IneqSystem drop_atoms_with(const IneqSystem& system, const std::string& var) {
  IneqSystem out;
  out.rate_vars = system.rate_vars;
  auto mentions = [&](const InfoExpr& e) {
    for (const auto& [atom, coeff] : e.terms()) {
      if (std::binary_search(atom.begin(), atom.end(), var)) return true;
    }
    return false;
  };
  for (const auto& ineq : system.inequalities) {
    if (!mentions(ineq.constant)) out.add(ineq);
  }
  for (const auto& a : system.assumptions) {
    if (!mentions(a.constant)) out.add_assumption(a);
  }
  return out;
}

nlohmann::json envelope_to_json(const RegionEnvelope& envelope) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : envelope.points) {
    points.push_back({{"lambda1", p.lambda1},
                      {"lambda2", p.lambda2},
                      {"R1", p.r1},
                      {"R2", p.r2},
                      {"params", p.params}});
  }
  nlohmann::json per_direction = nlohmann::json::array();
  for (const auto& p : envelope.per_direction) {
    per_direction.push_back({{"lambda1", p.lambda1},
                             {"lambda2", p.lambda2},
                             {"R1", p.r1},
                             {"R2", p.r2}});
  }
  return {{"points", std::move(points)},
          {"per_direction", std::move(per_direction)}};
}

std::string envelope_to_csv(const RegionEnvelope& envelope) {
  std::ostringstream os;
  os << "lambda1,lambda2,R1,R2\n";
  for (const auto& p : envelope.per_direction) {
    os << p.lambda1 << "," << p.lambda2 << "," << p.r1 << "," << p.r2 << "\n";
  }
  return os.str();
}

nlohmann::json containment_to_json(const ContainmentReport& report) {
  return {{"contained", report.contained},
          {"max_violation", report.max_violation},
          {"direction_gaps", report.direction_gaps}};
}

}  // namespace secreg
