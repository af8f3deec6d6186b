// Acceptance gate: one check per published claim the artifact reproduces,
// each printed as a single PASS/FAIL line. Checks with a documented,
// verified deviation from the published statement report FAIL but are
// expected to do so; the process exits nonzero only when a check's outcome
// differs from its expected status.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "secreg/codebook_sim.hpp"
#include "secreg/dist.hpp"
#include "secreg/info.hpp"
#include "secreg/polyhedra.hpp"
#include "secreg/regions.hpp"
#include "secreg/rng.hpp"

using namespace secreg;

namespace {

int failures = 0;

void report(int id, bool pass, bool expected_pass, const std::string& detail) {
  const bool as_expected = pass == expected_pass;
  if (!as_expected) ++failures;
  std::printf("criterion %d: %s%s — %s\n", id, pass ? "PASS" : "FAIL",
              pass == expected_pass ? "" : " (UNEXPECTED)", detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool contains_ineq(const IneqSystem& sys, const LinIneq& want) {
  const LinIneq canon = want.canonical();
  return std::any_of(sys.inequalities.begin(), sys.inequalities.end(),
                     [&](const LinIneq& have) { return have == canon; });
}

bool region_contained(const NumericRegion& inner, const NumericRegion& outer,
                      double tol) {
  for (const auto& v : inner.vertices) {
    for (const auto& ineq : outer.inequalities) {
      double lhs = 0.0;
      auto it = ineq.coeffs.find(outer.rate_vars[0]);
      if (it != ineq.coeffs.end()) lhs += it->second * v[0];
      it = ineq.coeffs.find(outer.rate_vars[1]);
      if (it != ineq.coeffs.end()) lhs += it->second * v[1];
      if (lhs > ineq.rhs + tol) return false;
    }
  }
  return true;
}

bool regions_equal(const NumericRegion& a, const NumericRegion& b, double tol) {
  return region_contained(a, b, tol) && region_contained(b, a, tol);
}

// ---- joint construction helpers -----------------------------------------

struct JointBuilder {
  std::vector<VariableSpec> vars;
  std::vector<double> probs;

  explicit JointBuilder(std::vector<VariableSpec> variables)
      : vars(std::move(variables)) {
    std::sort(vars.begin(), vars.end(),
              [](const VariableSpec& a, const VariableSpec& b) {
                return a.name < b.name;
              });
    std::size_t cells = 1;
    for (const auto& v : vars) cells *= v.cardinality;
    probs.assign(cells, 0.0);
  }

  void add(const std::map<std::string, std::size_t>& asg, double p) {
    std::size_t flat = 0;
    for (const auto& v : vars) flat = flat * v.cardinality + asg.at(v.name);
    probs[flat] += p;
  }

  JointPmf finish() const { return JointPmf(vars, probs); }
};

// Layered joint with independent satellite layers given the clouds, the
// inputs deterministic in the layers, and the eavesdropper seeing either
// the cloud pair only (packing holds) or both inputs (packing violated).
JointPmf packing_joint(Rng& rng, bool z_sees_everything) {
  const auto pu0 = rng.dirichlet(2);
  const auto pv0 = rng.dirichlet(2);
  std::array<std::vector<double>, 2> pu1, pu2, pv1, pv2;
  for (std::size_t c = 0; c < 2; ++c) {
    pu1[c] = rng.dirichlet(2);
    pu2[c] = rng.dirichlet(2);
    pv1[c] = rng.dirichlet(2);
    pv2[c] = rng.dirichlet(2);
  }
  std::vector<std::vector<double>> py1(16), py2(16);
  for (std::size_t xx = 0; xx < 16; ++xx) {
    py1[xx] = rng.dirichlet(2);
    py2[xx] = rng.dirichlet(2);
  }
  JointBuilder b({{"Q", 1}, {"U0", 2}, {"U1", 2}, {"U2", 2}, {"V0", 2},
                  {"V1", 2}, {"V2", 2}, {"X1", 4}, {"X2", 4}, {"Y1", 2},
                  {"Y2", 2}, {"Z", z_sees_everything ? std::size_t{16}
                                                     : std::size_t{4}}});
  for (std::size_t u0 = 0; u0 < 2; ++u0)
    for (std::size_t u1 = 0; u1 < 2; ++u1)
      for (std::size_t u2 = 0; u2 < 2; ++u2)
        for (std::size_t v0 = 0; v0 < 2; ++v0)
          for (std::size_t v1 = 0; v1 < 2; ++v1)
            for (std::size_t v2 = 0; v2 < 2; ++v2) {
              const std::size_t x1 = u0 * 2 + (u1 ^ u2);
              const std::size_t x2 = v0 * 2 + (v1 ^ v2);
              const std::size_t xx = x1 * 4 + x2;
              const std::size_t z = z_sees_everything ? xx : u0 * 2 + v0;
              const double pin = pu0[u0] * pu1[u0][u1] * pu2[u0][u2] *
                                 pv0[v0] * pv1[v0][v1] * pv2[v0][v2];
              for (std::size_t y1 = 0; y1 < 2; ++y1)
                for (std::size_t y2 = 0; y2 < 2; ++y2)
                  b.add({{"Q", 0}, {"U0", u0}, {"U1", u1}, {"U2", u2},
                         {"V0", v0}, {"V1", v1}, {"V2", v2}, {"X1", x1},
                         {"X2", x2}, {"Y1", y1}, {"Y2", y2}, {"Z", z}},
                        pin * py1[xx][y1] * py2[xx][y2]);
            }
  return b.finish();
}

// Auxiliaries tied to the inputs, satellites degenerate; the reduction
// checks instantiate the general inner bound this way.
JointPmf mac_style_joint(Rng& rng, bool with_y2, bool z_constant) {
  const auto pq = rng.dirichlet(2);
  const std::array<std::vector<double>, 2> px1 = {rng.dirichlet(2),
                                                  rng.dirichlet(2)};
  const std::array<std::vector<double>, 2> px2 = {rng.dirichlet(2),
                                                  rng.dirichlet(2)};
  std::vector<std::vector<double>> py1(4), py2(4), pz(4);
  for (std::size_t xx = 0; xx < 4; ++xx) {
    py1[xx] = rng.dirichlet(2);
    py2[xx] = rng.dirichlet(2);
    pz[xx] = z_constant ? std::vector<double>{1.0} : rng.dirichlet(2);
  }
  JointBuilder b({{"Q", 2}, {"U0", 2}, {"U1", 1}, {"U2", 1}, {"V0", 2},
                  {"V1", 1}, {"V2", 1}, {"X1", 2}, {"X2", 2}, {"Y1", 2},
                  {"Y2", with_y2 ? std::size_t{2} : std::size_t{1}},
                  {"Z", z_constant ? std::size_t{1} : std::size_t{2}}});
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t x1 = 0; x1 < 2; ++x1)
      for (std::size_t x2 = 0; x2 < 2; ++x2) {
        const std::size_t xx = x1 * 2 + x2;
        for (std::size_t y1 = 0; y1 < 2; ++y1)
          for (std::size_t y2 = 0; y2 < (with_y2 ? 2u : 1u); ++y2)
            for (std::size_t z = 0; z < (z_constant ? 1u : 2u); ++z)
              b.add({{"Q", q}, {"U0", x1}, {"U1", 0}, {"U2", 0}, {"V0", x2},
                     {"V1", 0}, {"V2", 0}, {"X1", x1}, {"X2", x2},
                     {"Y1", y1}, {"Y2", y2}, {"Z", z}},
                    pq[q] * px1[q][x1] * px2[q][x2] * py1[xx][y1] *
                        (with_y2 ? py2[xx][y2] : 1.0) *
                        (z_constant ? 1.0 : pz[xx][z]));
      }
  return b.finish();
}

// Noiseless switch with the states folded into the observations: Y1 = Y2 =
// (S1, selected input), Z = (S2, selected input), encoded in cardinality 4.
// The legitimate switch picks sender 1 with probability tau1, the
// eavesdropper's with probability tau2.
JointPmf switch_joint(double tau1, double tau2) {
  JointBuilder b({{"Q", 1}, {"U0", 2}, {"V0", 2}, {"Y1", 4}, {"Y2", 4},
                  {"Z", 4}});
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t s1 = 0; s1 < 2; ++s1)
        for (std::size_t s2 = 0; s2 < 2; ++s2) {
          const std::size_t y = s1 * 2 + (s1 == 0 ? x1 : x2);
          const std::size_t z = s2 * 2 + (s2 == 0 ? x1 : x2);
          b.add({{"Q", 0}, {"U0", x1}, {"V0", x2}, {"Y1", y}, {"Y2", y},
                 {"Z", z}},
                0.25 * (s1 == 0 ? tau1 : 1.0 - tau1) *
                    (s2 == 0 ? tau2 : 1.0 - tau2));
        }
  return b.finish();
}

// Dedup-only projection size, mirroring the informational count of the
// derivation routine (0 when the 20000-inequality cap would be exceeded).
std::size_t plain_projection_count(const RegionSpec& raw,
                                   const std::vector<std::string>& eliminate) {
  IneqSystem sys = raw.system;
  add_independence_assumptions(sys, raw.factorization_template);
  for (const auto& var : eliminate) {
    std::size_t uppers = 0, lowers = 1, neutral = 0;
    for (const auto& iq : sys.inequalities) {
      auto it = iq.coeffs.find(var);
      if (it == iq.coeffs.end() || it->second.is_zero()) {
        ++neutral;
      } else if (it->second > 0) {
        ++uppers;
      } else {
        ++lowers;
      }
    }
    if (neutral + uppers * lowers > 20000) return 0;
    sys = fm_eliminate(sys, var);
    if (sys.inequalities.size() > 20000) return 0;
  }
  return sys.inequalities.size();
}

// ---- criteria ------------------------------------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const DeriveResult result = derive_from_raw(
      builtin_system(RegionId::appb_raw), {"R11", "R12", "R21", "R22"});
  const double secs = seconds_since(t0);
  const IneqSystem published = builtin_system(RegionId::thm8_macwt).system;

  bool six_recovered = true;
  for (const auto& want : published.inequalities) {
    if (!contains_ineq(result.derived, want)) six_recovered = false;
  }
  std::vector<LinIneq> extras;
  for (const auto& have : result.derived.inequalities) {
    if (!contains_ineq(published, have)) extras.push_back(have);
  }
  // The surviving extras must be genuinely stronger: not certifiable from
  // the published six even with the entropy facts.
  bool extras_stronger = extras.size() == 2;
  for (const auto& extra : extras) {
    if (implies(published, extra, RedundancyMode::farkas_shannon)) {
      extras_stronger = false;
    }
  }
  const SymbolicVerdict verdict = symbolic_equal(result.derived, published);
  const bool pass = verdict.equal && secs < 10.0;
  const bool deviation_verified =
      six_recovered && extras_stronger && !verdict.equal && secs < 10.0;

  std::ostringstream os;
  os << "exact projection of the weak-secrecy proof system vs the published "
        "region: equal="
     << verdict.equal << ", published bounds recovered=" << six_recovered
     << ", strictly stronger extra bounds=" << extras.size() << " ("
     << secs << " s). Expected deviation: the projection also yields two "
        "valid cross bounds the published statement omits";
  if (!extras.empty()) os << "; e.g. " << extras.front().to_string();
  report(1, pass, /*expected_pass=*/false, os.str());
  if (!deviation_verified) {
    ++failures;
    std::printf("criterion 1: the documented deviation did not verify\n");
  }
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const DeriveResult result = derive_from_raw(
      builtin_system(RegionId::appc_raw),
      {"Rt1", "Rt2", "T1", "T2", "S1", "S2", "Rb11", "Rb12", "Rb21", "Rb22"});
  const double secs = seconds_since(t0);
  const IneqSystem published = builtin_system(RegionId::thm1_inner).system;
  const SymbolicVerdict verdict = symbolic_equal(result.derived, published);
  const bool emergent = !result.derived.assumptions.empty();
  const bool pass = verdict.equal && emergent &&
                    result.derived.inequalities.size() == 8 && secs < 60.0;
  std::ostringstream os;
  os << "exact projection of the layered proof system equals the published "
        "inner bound: equal="
     << verdict.equal << ", inequalities=" << result.derived.inequalities.size()
     << ", emergent packing assumptions=" << result.derived.assumptions.size()
     << " (" << secs << " s, limit 60)";
  report(2, pass, true, os.str());
}

void criterion3() {
  const RegionSpec reduced = builtin_system(RegionId::thm7_strong_reduced);
  const std::vector<std::string> elim = {"Rt1", "Rt2", "Ru1",
                                         "Ru2", "Rv1", "Rv2"};
  const DeriveResult derived =
      derive_from_raw(reduced, elim, RedundancyMode::farkas_shannon, true);
  const std::size_t raw_count =
      plain_projection_count(builtin_system(RegionId::thm7_strong_raw), elim);

  const IneqSystem weak = builtin_system(RegionId::thm1_inner).system;
  const InfoExpr packing = weak.assumptions[0].constant;

  std::size_t equal_ok = 0, satisfy_total = 100;
  for (std::size_t trial = 0; trial < satisfy_total; ++trial) {
    Rng rng(split_seed(301, trial));
    const JointPmf joint = packing_joint(rng, false);
    if (eval_expr(packing, joint) < -1e-9) continue;  // construction failed
    const NumericRegion strong = numeric_region(derived.derived, joint, true);
    const NumericRegion inner = numeric_region(weak, joint, true);
    if (regions_equal(strong, inner, 1e-9)) ++equal_ok;
  }

  std::size_t contain_ok = 0, violate_total = 25;
  for (std::size_t trial = 0; trial < violate_total; ++trial) {
    Rng rng(split_seed(302, trial));
    const JointPmf joint = packing_joint(rng, true);
    const NumericRegion strong = numeric_region(derived.derived, joint, true);
    const NumericRegion inner = numeric_region(weak, joint, true);
    if (region_contained(inner, strong, 1e-9)) ++contain_ok;
  }

  const bool pass = equal_ok == satisfy_total && contain_ok == violate_total;
  std::ostringstream os;
  os << "strong-secrecy projection vs weak-secrecy region: equal on "
     << equal_ok << "/" << satisfy_total
     << " packing-satisfying joints, containment on " << contain_ok << "/"
     << violate_total << " violating joints; informational dedup-only "
        "projection sizes: reduced system "
     << derived.raw_inequality_count << ", full system " << raw_count
     << " (0 = exceeded the 20000 cap)";
  report(3, pass, true, os.str());
}

void criterion4() {
  // Closed form at biased switches.
  FactorizationSpec inputs;
  inputs.factors.push_back(marginal_factor({"X1", 2}, {0.5, 0.5}));
  inputs.factors.push_back(marginal_factor({"X2", 2}, {0.5, 0.5}));
  const JointPmf uniform_inputs = compose_joint(inputs);
  const NumericRegion biased = numeric_region(
      noiseless_switch_system(Rat(7, 10), Rat(3, 10)), uniform_inputs, true);
  double r1max = 0.0, r2max = 0.0;
  for (const auto& v : biased.vertices) {
    r1max = std::max(r1max, v[0]);
    r2max = std::max(r2max, v[1]);
  }
  const bool closed_form = r1max == 0.4 && r2max == 0.0;

  // Outer bound instantiated with the inputs as cloud auxiliaries on the
  // state-augmented observations: its single-rate bounds hit the same
  // endpoints.
  const JointPmf sw = switch_joint(0.7, 0.3);
  const NumericRegion outer = numeric_region(
      builtin_system(RegionId::thm4_outer_general).system, sw, true);
  double outer_r1 = -1.0, outer_r2 = -1.0;
  for (const auto& ineq : outer.inequalities) {
    if (ineq.coeffs.size() == 1 && ineq.coeffs.count("R1") &&
        ineq.coeffs.at("R1") > 0) {
      outer_r1 = ineq.rhs / ineq.coeffs.at("R1");
    }
    if (ineq.coeffs.size() == 1 && ineq.coeffs.count("R2") &&
        ineq.coeffs.at("R2") > 0) {
      outer_r2 = ineq.rhs / ineq.coeffs.at("R2");
    }
  }
  const bool outer_ok =
      std::abs(outer_r1 - 0.4) < 1e-9 && std::abs(outer_r2) < 1e-9;

  // Inner envelope search over sampled auxiliaries on the same channel.
  FactorizationSpec channel;
  Factor ch;
  ch.targets = {{"Y1", 4}, {"Y2", 4}, {"Z", 4}};
  ch.givens = {{"X1", 2}, {"X2", 2}};
  ch.table.assign(4 * 64, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t s1 = 0; s1 < 2; ++s1)
        for (std::size_t s2 = 0; s2 < 2; ++s2) {
          const std::size_t y = s1 * 2 + (s1 == 0 ? x1 : x2);
          const std::size_t z = s2 * 2 + (s2 == 0 ? x1 : x2);
          const std::size_t row = x1 * 2 + x2;
          ch.table[row * 64 + (y * 4 + y) * 4 + z] +=
              (s1 == 0 ? 0.7 : 0.3) * (s2 == 0 ? 0.3 : 0.7);
        }
  channel.factors.push_back(ch);

  AuxSearchConfig cfg;
  cfg.q_cardinality = 1;
  cfg.aux_cardinality = 2;
  cfg.samples = 2000;
  cfg.seed = 1;
  cfg.directions = {{1.0, 0.0}};
  const RegionEnvelope envelope =
      search_envelope(builtin_system(RegionId::thm1_inner), channel, cfg);
  const double searched_r1 =
      envelope.per_direction.empty() ? 0.0 : envelope.per_direction[0].r1;
  const bool search_ok = searched_r1 >= 0.38;

  // Equal switch biases kill both rates.
  const NumericRegion balanced = numeric_region(
      noiseless_switch_system(Rat(1, 2), Rat(1, 2)), uniform_inputs, true);
  bool balanced_zero = true;
  for (const auto& v : balanced.vertices) {
    if (std::abs(v[0]) > 1e-6 || std::abs(v[1]) > 1e-6) balanced_zero = false;
  }

  const bool pass = closed_form && outer_ok && search_ok && balanced_zero;
  std::ostringstream os;
  os << "switch-capacity closed form: R1max=" << r1max << " (want exactly 0.4)"
     << ", R2max=" << r2max << "; outer-bound endpoints (" << outer_r1 << ", "
     << outer_r2 << "); sampled inner envelope R1=" << searched_r1
     << " (want >= 0.38); balanced switches collapse to zero="
     << balanced_zero;
  report(4, pass, true, os.str());
}

void criterion5() {
  const IneqSystem thm1 = builtin_system(RegionId::thm1_inner).system;
  const IneqSystem thm1_no_y2 = drop_atoms_with(thm1, "Y2");
  const IneqSystem mac = compound_mac_system();
  const IneqSystem macwt = mac_wiretap_system();
  const IneqSystem bcc = bcc_system();

  std::size_t mac_ok = 0, macwt_ok = 0, bcc_ok = 0;
  const std::size_t total = 100;
  for (std::size_t trial = 0; trial < total; ++trial) {
    Rng rng(split_seed(501, trial));
    const JointPmf blind = mac_style_joint(rng, true, true);
    if (regions_equal(numeric_region(thm1, blind, true),
                      numeric_region(mac, blind, true), 1e-9)) {
      ++mac_ok;
    }

    Rng rng2(split_seed(502, trial));
    const JointPmf single = mac_style_joint(rng2, false, false);
    if (regions_equal(numeric_region(thm1_no_y2, single, true),
                      numeric_region(macwt, single, true), 1e-9)) {
      ++macwt_ok;
    }

    Rng rng3(split_seed(503, trial));
    // Second sender silenced: V layers and X2 degenerate, genuine cloud
    // auxiliary in front of the remaining input.
    const auto pq = rng3.dirichlet(2);
    const std::array<std::vector<double>, 2> pu0 = {rng3.dirichlet(2),
                                                    rng3.dirichlet(2)};
    const std::array<std::vector<double>, 2> px1 = {rng3.dirichlet(2),
                                                    rng3.dirichlet(2)};
    std::array<std::vector<double>, 2> py1, pz;
    for (std::size_t x = 0; x < 2; ++x) {
      py1[x] = rng3.dirichlet(2);
      pz[x] = rng3.dirichlet(2);
    }
    JointBuilder b({{"Q", 2}, {"U0", 2}, {"U1", 1}, {"U2", 1}, {"V0", 1},
                    {"V1", 1}, {"V2", 1}, {"X1", 2}, {"X2", 1}, {"Y1", 2},
                    {"Z", 2}});
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t u0 = 0; u0 < 2; ++u0)
        for (std::size_t x1 = 0; x1 < 2; ++x1)
          for (std::size_t y1 = 0; y1 < 2; ++y1)
            for (std::size_t z = 0; z < 2; ++z)
              b.add({{"Q", q}, {"U0", u0}, {"U1", 0}, {"U2", 0}, {"V0", 0},
                     {"V1", 0}, {"V2", 0}, {"X1", x1}, {"X2", 0}, {"Y1", y1},
                     {"Z", z}},
                    pq[q] * pu0[q][u0] * px1[u0][x1] * py1[x1][y1] *
                        pz[x1][z]);
    const JointPmf collapsed = b.finish();
    if (regions_equal(numeric_region(thm1_no_y2, collapsed, true),
                      numeric_region(bcc, collapsed, true), 1e-9)) {
      ++bcc_ok;
    }
  }

  const bool pass = mac_ok == total && macwt_ok == total && bcc_ok == total;
  std::ostringstream os;
  os << "special-case reductions on " << total
     << " sampled joints each: compound multiple access " << mac_ok << "/"
     << total << ", wiretap multiple access " << macwt_ok << "/" << total
     << ", confidential broadcast " << bcc_ok << "/" << total;
  report(5, pass, true, os.str());
}

void criterion6() {
  std::size_t consistent = 0, held = 0;
  const std::size_t total = 1000;
  for (std::size_t trial = 0; trial < total; ++trial) {
    JointPmf joint;
    if (trial % 2 == 0) {
      Rng rng(split_seed(601, trial));
      joint = packing_joint(rng, false);
      joint = marginalize(joint, {"Q", "U0", "U1", "U2", "V0", "V1", "V2", "Z"});
    } else {
      Rng rng(split_seed(602, trial));
      std::vector<double> probs = rng.dirichlet(128);
      joint = JointPmf({{"Q", 1}, {"U0", 2}, {"U1", 2}, {"U2", 2}, {"V0", 2},
                        {"V1", 2}, {"V2", 2}, {"Z", 2}},
                       std::move(probs));
    }
    const Remark2Report rep = check_remark2(joint, 1e-9, 1e-6);
    if (rep.implication_ok) ++consistent;
    if (rep.holds) ++held;
  }
  const bool pass = consistent == total;
  std::ostringstream os;
  os << "packing assumption implies vanishing satellite cross-information: "
     << consistent << "/" << total << " consistent (" << held
     << " joints satisfied the assumption, none falsified the implication)";
  report(6, pass, held > 0 && pass, os.str());
}

void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();

  // Concentration regime: fair independent satellite bits, blind
  // eavesdropper, rates and slacks with a 0.2-bit margin in the exponent.
  Lemma1Config good;
  good.base = JointPmf(
      {{"Q", 1}, {"U0", 1}, {"U1", 2}, {"V0", 1}, {"V1", 2}, {"Z", 1}},
      {0.25, 0.25, 0.25, 0.25});
  good.s_rate = 0.35;
  good.t_rate = 0.35;
  good.epsilon = 0.5;
  good.delta = 0.2;
  good.trials = 40;
  good.seed = 1;

  std::vector<double> p_e1;
  double frac_above_at_12 = 1.0;
  for (std::size_t n : {8, 10, 12, 14}) {
    Lemma1Config cfg = good;
    cfg.n = n;
    const Lemma1Result r = run_lemma1_counting(cfg);
    p_e1.push_back(r.p_e1);
    if (n == 12) {
      frac_above_at_12 = static_cast<double>(r.trials_entropy_above_bound) /
                         static_cast<double>(r.trials);
    }
  }
  bool nonincreasing = true;
  for (std::size_t i = 1; i < p_e1.size(); ++i) {
    if (p_e1[i] > p_e1[i - 1] + 1e-12) nonincreasing = false;
  }

  // Blow-up regime: the eavesdropper actually sees the satellite symbol but
  // the threshold rate ignores about half a bit of that leakage, and the
  // permissive window lets nearly every pair count.
  Lemma1Config bad;
  bad.base = JointPmf(
      {{"Q", 1}, {"U0", 1}, {"U1", 1}, {"V0", 1}, {"V1", 2}, {"Z", 2}},
      {0.445, 0.055, 0.055, 0.445});
  bad.n = 14;
  bad.s_rate = 0.0;
  bad.t_rate = 0.3;
  bad.epsilon = 4.5;
  bad.delta = 0.05;
  bad.trials = 40;
  bad.seed = 1;
  const Lemma1Result overshoot = run_lemma1_counting(bad);

  const double secs = seconds_since(t0);
  const bool pass = nonincreasing && frac_above_at_12 <= 0.05 &&
                    overshoot.p_e1 >= 0.5 && secs < 300.0;
  std::ostringstream os;
  os << "codeword-count concentration: P(E1) over n=8,10,12,14 = [";
  for (std::size_t i = 0; i < p_e1.size(); ++i) {
    os << (i ? ", " : "") << p_e1[i];
  }
  os << "] (nonincreasing=" << nonincreasing
     << "), entropy above bound at n=12 in " << frac_above_at_12 * 100.0
     << "% of trials (limit 5%); under-threshold rate blows up: P(E1)="
     << overshoot.p_e1 << " at n=14 (want >= 0.5); " << secs
     << " s (limit 300)";
  report(7, pass, true, os.str());
}

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();

  BinningConfig secure;
  secure.joint = JointPmf({{"X", 2}, {"Z", 1}}, {0.5, 0.5});
  secure.rate = 0.5;
  secure.n_values = {4, 6, 8, 10, 12, 14};
  secure.trials = 20;
  secure.seed = 1;
  const auto secure_trace = run_osrb_tv(secure);
  std::vector<double> ns, tvs;
  for (const auto& p : secure_trace) {
    ns.push_back(static_cast<double>(p.n));
    tvs.push_back(p.tv);
  }
  const double rho = spearman(ns, tvs);

  BinningConfig insecure = secure;
  insecure.joint = JointPmf({{"X", 2}, {"Z", 1}}, {0.8, 0.2});
  insecure.rate = 1.0;
  const auto insecure_trace = run_osrb_tv(insecure);
  const double final_tv = insecure_trace.back().tv;

  const double secs = seconds_since(t0);
  const bool pass = rho <= -0.8 && final_tv >= 0.1 && secs < 300.0;
  std::ostringstream os;
  os << "random-binning uniformity: secure sweep Spearman(n, TV)=" << rho
     << " (want <= -0.8), insecure sweep TV(n=14)=" << final_tv
     << " (want >= 0.1); " << secs << " s (limit 300)";
  report(8, pass, true, os.str());
}

void criterion9() {
  const JointPmf dummy({{"D", 1}}, {1.0});
  std::size_t projection_ok = 0, pruning_ok = 0;
  const std::size_t total = 50;
  for (std::size_t trial = 0; trial < total; ++trial) {
    Rng rng(split_seed(901, trial));
    IneqSystem sys;
    sys.rate_vars = {"x", "y", "z"};
    const char* names[] = {"x", "y", "z"};
    for (const char* v : names) {
      LinIneq box;
      box.coeffs[v] = 1;
      box.constant = InfoExpr::constant(Rat(1));
      box.tag = std::string("box_") + v;
      sys.add(box);
    }
    for (int k = 0; k < 5; ++k) {
      LinIneq ineq;
      bool nonzero = false;
      for (const char* v : names) {
        const int c = static_cast<int>(rng.raw() % 5) - 2;
        if (c != 0) {
          ineq.coeffs[v] = c;
          nonzero = true;
        }
      }
      if (!nonzero) ineq.coeffs["x"] = 1;
      ineq.constant =
          InfoExpr::constant(Rat(static_cast<int>(rng.raw() % 8) + 1, 4));
      ineq.tag = "rand" + std::to_string(k);
      sys.add(ineq);
    }

    // Oracle: enumerate the 3-D vertices (triples of tight planes, plus the
    // orthant), keep the feasible ones, and project.
    std::vector<std::array<double, 4>> planes;  // cx, cy, cz, rhs
    for (const auto& ineq : sys.inequalities) {
      std::array<double, 4> p = {0, 0, 0, to_double(ineq.constant.offset())};
      for (const auto& [v, c] : ineq.coeffs) {
        if (v == std::string("x")) p[0] = to_double(c);
        if (v == std::string("y")) p[1] = to_double(c);
        if (v == std::string("z")) p[2] = to_double(c);
      }
      planes.push_back(p);
    }
    planes.push_back({-1, 0, 0, 0});
    planes.push_back({0, -1, 0, 0});
    planes.push_back({0, 0, -1, 0});

    auto feasible3 = [&](double x, double y, double z) {
      for (const auto& p : planes) {
        if (p[0] * x + p[1] * y + p[2] * z > p[3] + 1e-9) return false;
      }
      return true;
    };
    std::vector<std::array<double, 3>> verts3;
    for (std::size_t a = 0; a < planes.size(); ++a)
      for (std::size_t bidx = a + 1; bidx < planes.size(); ++bidx)
        for (std::size_t c = bidx + 1; c < planes.size(); ++c) {
          const auto& A = planes[a];
          const auto& B = planes[bidx];
          const auto& C = planes[c];
          const double det = A[0] * (B[1] * C[2] - B[2] * C[1]) -
                             A[1] * (B[0] * C[2] - B[2] * C[0]) +
                             A[2] * (B[0] * C[1] - B[1] * C[0]);
          if (std::abs(det) < 1e-9) continue;
          const double x = (A[3] * (B[1] * C[2] - B[2] * C[1]) -
                            A[1] * (B[3] * C[2] - B[2] * C[3]) +
                            A[2] * (B[3] * C[1] - B[1] * C[3])) /
                           det;
          const double y = (A[0] * (B[3] * C[2] - B[2] * C[3]) -
                            A[3] * (B[0] * C[2] - B[2] * C[0]) +
                            A[2] * (B[0] * C[3] - B[3] * C[0])) /
                           det;
          const double z = (A[0] * (B[1] * C[3] - B[3] * C[1]) -
                            A[1] * (B[0] * C[3] - B[3] * C[0]) +
                            A[3] * (B[0] * C[1] - B[1] * C[0])) /
                           det;
          if (feasible3(x, y, z)) verts3.push_back({x, y, z});
        }

    const IneqSystem projected = fm_eliminate(sys, "z");
    auto satisfies2 = [&](double x, double y) {
      if (x < -1e-9 || y < -1e-9) return false;
      for (const auto& ineq : projected.inequalities) {
        double lhs = 0.0;
        for (const auto& [v, c] : ineq.coeffs) {
          if (v == std::string("x")) lhs += to_double(c) * x;
          if (v == std::string("y")) lhs += to_double(c) * y;
        }
        if (lhs > to_double(ineq.constant.offset()) + 1e-9) return false;
      }
      return true;
    };
    // Projection membership from the original system: the z-interval cut
    // out at (x, y) must be nonempty.
    auto member3 = [&](double x, double y) {
      if (x < -1e-9 || y < -1e-9) return false;
      double z_lo = 0.0, z_hi = std::numeric_limits<double>::infinity();
      for (const auto& p : planes) {
        const double rest = p[3] - p[0] * x - p[1] * y;
        if (p[2] == 0.0) {
          if (rest < -1e-9) return false;
        } else if (p[2] > 0.0) {
          z_hi = std::min(z_hi, rest / p[2]);
        } else {
          z_lo = std::max(z_lo, rest / p[2]);
        }
      }
      return z_lo <= z_hi + 1e-9;
    };

    bool agree = true;
    // Projected 3-D vertices land inside the eliminated system ...
    for (const auto& v : verts3) {
      if (!satisfies2(v[0], v[1])) agree = false;
    }
    // ... and the eliminated system's own vertices lie in the projection.
    const NumericRegion region2 = numeric_region(projected, dummy);
    for (const auto& v : region2.vertices) {
      if (!member3(v[0], v[1])) agree = false;
    }
    if (agree && !verts3.empty()) ++projection_ok;

    const auto pruned = remove_redundant(projected, RedundancyMode::farkas);
    const NumericRegion before = numeric_region(projected, dummy);
    const NumericRegion after = numeric_region(pruned.system, dummy);
    if (before.empty == after.empty && regions_equal(before, after, 1e-9)) {
      ++pruning_ok;
    }
  }

  const bool pass = projection_ok == total && pruning_ok == total;
  std::ostringstream os;
  os << "elimination vs vertex-enumeration oracle on " << total
     << " random systems: projection agreement " << projection_ok << "/"
     << total << ", pruning preserves the region " << pruning_ok << "/"
     << total;
  report(9, pass, true, os.str());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (failures == 0) {
    std::printf("all criteria match their expected status\n");
    return 0;
  }
  std::printf("%d criteria diverged from their expected status\n", failures);
  return 1;
}
