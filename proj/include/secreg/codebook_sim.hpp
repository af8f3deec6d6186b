#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "secreg/dist.hpp"

namespace secreg {

// Counting experiment for the codeword-count/entropy bound: per trial, a
// side sequence (Q^n, U0^n, V0^n, Z^n) is drawn i.i.d. from the base
// joint's marginal, 2^ceil(nS) U1-codewords are drawn i.i.d. from
// p(u1|u0) and 2^ceil(nT) V1-codewords from p(v1|v0), and N counts the
// codeword pairs that are jointly strongly typical with the side sequence.
struct Lemma1Config {
  std::size_t n = 8;
  JointPmf base;  // joint over exactly {Q, U0, U1, V0, V1, Z}
  double s_rate = 0.0;  // bits, codebook size 2^ceil(n*s_rate)
  double t_rate = 0.0;
  double epsilon = 0.1;  // typicality slack: |freq - p| <= epsilon * p
  double delta = -1.0;   // exponent slack in the count threshold; < 0 -> epsilon
  double delta1 = 0.1;   // multiplicative concentration slack
  double delta2 = -1.0;  // entropy-bound slack; < 0 -> 3 * delta
  std::size_t trials = 40;
  std::uint64_t seed = 1;
};

struct Lemma1Result {
  double p_e1 = 0.0;        // fraction of trials where the count threshold broke
  double mean_count = 0.0;  // mean N over all trials
  double max_count = 0.0;
  double entropy_bits = 0.0;  // mean log2(N) over trials with N >= 1
  double bound_bits = 0.0;    // n (S + T - I(U1,V1; Z | Q,U0,V0) + delta2)
  double mutual_info_bits = 0.0;
  std::size_t codewords_u = 0;  // 2^ceil(nS)
  std::size_t codewords_v = 0;
  std::size_t trials = 0;
  std::size_t excluded_trials = 0;  // N = 0, no typical pair to index
  std::size_t trials_entropy_above_bound = 0;
};

// Rejects configurations needing more than 2^26 codeword-pair evaluations
// per trial. Deterministic given cfg.seed (independent per-trial seeds).
Lemma1Result run_lemma1_counting(const Lemma1Config& cfg);

// Plug-in conditional entropy of the uniformly chosen typical index pair
// given the side sequence and the codebooks; equals the entropy_bits field.
double estimate_entropy_LK(const Lemma1Config& cfg);

// Random binning independence experiment: X^n i.i.d., each x^n assigned a
// uniform bin at rate R; total variation between the exact induced joint of
// (bin, Z^n) and uniform x p(z^n), averaged over trials, per blocklength.
struct BinningConfig {
  std::vector<std::size_t> n_values = {4, 6, 8, 10, 12, 14};
  JointPmf joint;  // joint over exactly {X, Z}; Z may have cardinality 1
  double rate = 0.0;  // bits, 2^ceil(n*rate) bins
  std::size_t trials = 20;
  std::uint64_t seed = 1;
};

struct TvPoint {
  std::size_t n = 0;
  double tv = 0.0;
  std::size_t trials = 0;
};

// Exact enumeration; rejects blocklengths with |X|^n * |Z|^n > 2^22 states.
std::vector<TvPoint> run_osrb_tv(const BinningConfig& cfg);

// Spearman rank correlation with average ranks on ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

Lemma1Config lemma1_config_from_json(const nlohmann::json& j);
nlohmann::json lemma1_result_to_json(const Lemma1Result& result);
BinningConfig binning_config_from_json(const nlohmann::json& j);
// CSV columns: n, metric, value, trials.
std::string tv_trace_to_csv(const std::vector<TvPoint>& trace);

}  // namespace secreg
