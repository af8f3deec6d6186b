#include "secreg/codebook_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>

#include "secreg/info.hpp"
#include "secreg/rng.hpp"

namespace secreg {

namespace {

std::size_t pow2_ceil_bits(std::size_t n, double rate) {
  const double bits = std::ceil(static_cast<double>(n) * rate - 1e-9);
  if (bits < 0.0 || bits > 40.0) {
    throw std::invalid_argument("codebook exponent out of range");
  }
  return std::size_t{1} << static_cast<std::size_t>(bits);
}

std::size_t card(const JointPmf& joint, const std::string& name) {
  return joint.variables()[joint.var_index(name)].cardinality;
}

std::size_t stride(const JointPmf& joint, const std::string& name) {
  std::size_t s = 1;
  for (std::size_t i = joint.variables().size(); i-- > 0;) {
    if (joint.variables()[i].name == name) return s;
    s *= joint.variables()[i].cardinality;
  }
  throw std::invalid_argument("no variable " + name);
}

}  // namespace

Lemma1Result run_lemma1_counting(const Lemma1Config& cfg) {
  if (cfg.n < 1 || cfg.trials < 1) {
    throw std::invalid_argument("need n >= 1 and trials >= 1");
  }
  if (cfg.s_rate < 0.0 || cfg.t_rate < 0.0 || cfg.epsilon <= 0.0) {
    throw std::invalid_argument("need S, T >= 0 and epsilon > 0");
  }
  const std::vector<std::string> expected = {"Q", "U0", "U1", "V0", "V1", "Z"};
  for (const auto& name : expected) {
    if (!cfg.base.has_var(name)) {
      throw std::invalid_argument("base joint must contain variable " + name);
    }
  }
  if (cfg.base.variables().size() != expected.size()) {
    throw std::invalid_argument("base joint must be over Q,U0,U1,V0,V1,Z only");
  }
  cfg.base.validate();

  const double delta = cfg.delta >= 0.0 ? cfg.delta : cfg.epsilon;
  const double delta2 = cfg.delta2 >= 0.0 ? cfg.delta2 : 3.0 * delta;
  const std::size_t n = cfg.n;
  const std::size_t m_u = pow2_ceil_bits(n, cfg.s_rate);
  const std::size_t m_v = pow2_ceil_bits(n, cfg.t_rate);
  if (m_u > (std::size_t{1} << 26) / std::max<std::size_t>(m_v, 1)) {
    throw std::invalid_argument("codebook pair count exceeds the 2^26 guard");
  }

  Lemma1Result result;
  result.codewords_u = m_u;
  result.codewords_v = m_v;
  result.trials = cfg.trials;
  result.mutual_info_bits = mutual_info(cfg.base, {"U1", "V1"}, {"Z"},
                                        {"Q", "U0", "V0"});
  result.bound_bits =
      static_cast<double>(n) *
      (cfg.s_rate + cfg.t_rate - result.mutual_info_bits + delta2);
  const double count_threshold =
      (1.0 + cfg.delta1) *
      std::exp2(static_cast<double>(n) *
                (cfg.s_rate + cfg.t_rate - result.mutual_info_bits + delta));

  // Side-sequence law and codeword conditionals.
  const JointPmf side = marginalize(cfg.base, {"Q", "U0", "V0", "Z"});
  const Factor pu = conditional(cfg.base, {"U1"}, {"U0"}, true);
  const Factor pv = conditional(cfg.base, {"V1"}, {"V0"}, true);
  const std::size_t cu = card(cfg.base, "U1");
  const std::size_t cv = card(cfg.base, "V1");
  const std::size_t su = stride(cfg.base, "U1");
  const std::size_t sv = stride(cfg.base, "V1");
  const std::size_t sq = stride(cfg.base, "Q");
  const std::size_t su0 = stride(cfg.base, "U0");
  const std::size_t sv0 = stride(cfg.base, "V0");
  const std::size_t sz = stride(cfg.base, "Z");
  // side is sorted as Q,U0,V0,Z.
  const std::size_t cells = cfg.base.size();

  // Per-cell integer count windows for strong typicality.
  std::vector<double> lo(cells), hi(cells);
  std::vector<std::size_t> required;  // cells that must appear
  for (std::size_t c = 0; c < cells; ++c) {
    const double p = cfg.base.probs()[c];
    lo[c] = static_cast<double>(n) * p * (1.0 - cfg.epsilon) - 1e-9;
    hi[c] = static_cast<double>(n) * p * (1.0 + cfg.epsilon) + 1e-9;
    if (p > 0.0 && lo[c] > 0.0) required.push_back(c);
  }

  double sum_count = 0.0, sum_entropy = 0.0;
  std::size_t e1_trials = 0, included = 0;
  std::vector<std::size_t> seq_q(n), seq_u0(n), seq_v0(n), seq_z(n);
  std::vector<std::size_t> base_cell(n);
  std::vector<std::size_t> cw_u(m_u * n), cw_v(m_v * n);
  std::vector<std::uint32_t> counts(cells, 0);
  std::vector<std::size_t> touched;
  touched.reserve(n);

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng(split_seed(cfg.seed, trial));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t flat = rng.sample_pmf(side.probs());
      const auto asg = side.unflatten(flat);
      seq_q[i] = asg[side.var_index("Q")];
      seq_u0[i] = asg[side.var_index("U0")];
      seq_v0[i] = asg[side.var_index("V0")];
      seq_z[i] = asg[side.var_index("Z")];
      base_cell[i] =
          seq_q[i] * sq + seq_u0[i] * su0 + seq_v0[i] * sv0 + seq_z[i] * sz;
    }
    for (std::size_t l = 0; l < m_u; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        cw_u[l * n + i] = rng.sample_pmf(
            std::span<const double>(pu.table.data() + seq_u0[i] * cu, cu));
      }
    }
    for (std::size_t k = 0; k < m_v; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        cw_v[k * n + i] = rng.sample_pmf(
            std::span<const double>(pv.table.data() + seq_v0[i] * cv, cv));
      }
    }

    std::size_t typical_pairs = 0;
    for (std::size_t l = 0; l < m_u; ++l) {
      for (std::size_t k = 0; k < m_v; ++k) {
        touched.clear();
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t cell =
              base_cell[i] + cw_u[l * n + i] * su + cw_v[k * n + i] * sv;
          if (counts[cell]++ == 0) touched.push_back(cell);
        }
        bool ok = true;
        for (const std::size_t cell : touched) {
          const double c = counts[cell];
          if (cfg.base.probs()[cell] <= 0.0 || c < lo[cell] || c > hi[cell]) {
            ok = false;
            break;
          }
        }
        if (ok) {
          for (const std::size_t cell : required) {
            if (counts[cell] == 0) {
              ok = false;
              break;
            }
          }
        }
        if (ok) ++typical_pairs;
        for (const std::size_t cell : touched) counts[cell] = 0;
      }
    }

    const double count = static_cast<double>(typical_pairs);
    sum_count += count;
    result.max_count = std::max(result.max_count, count);
    if (count >= count_threshold) ++e1_trials;
    if (typical_pairs >= 1) {
      const double h = std::log2(count);
      sum_entropy += h;
      ++included;
      if (h > result.bound_bits) ++result.trials_entropy_above_bound;
    } else {
      ++result.excluded_trials;
    }
  }

  result.p_e1 = static_cast<double>(e1_trials) / static_cast<double>(cfg.trials);
  result.mean_count = sum_count / static_cast<double>(cfg.trials);
  result.entropy_bits =
      included > 0 ? sum_entropy / static_cast<double>(included) : 0.0;
  return result;
}

double estimate_entropy_LK(const Lemma1Config& cfg) {
  return run_lemma1_counting(cfg).entropy_bits;
}

std::vector<TvPoint> run_osrb_tv(const BinningConfig& cfg) {
  if (cfg.rate < 0.0 || cfg.trials < 1) {
    throw std::invalid_argument("need rate >= 0 and trials >= 1");
  }
  if (!cfg.joint.has_var("X") || !cfg.joint.has_var("Z") ||
      cfg.joint.variables().size() != 2) {
    throw std::invalid_argument("binning joint must be over X and Z only");
  }
  cfg.joint.validate();
  const std::size_t cx = card(cfg.joint, "X");
  const std::size_t cz = card(cfg.joint, "Z");
  const std::size_t xi = cfg.joint.var_index("X");
  std::vector<double> px(cx, 0.0);
  std::vector<double> pzx(cx * cz, 0.0);  // p(z|x), rows by x
  for (std::size_t c = 0; c < cfg.joint.size(); ++c) {
    const auto asg = cfg.joint.unflatten(c);
    const std::size_t x = asg[xi];
    const std::size_t z = asg[1 - xi];
    px[x] += cfg.joint.probs()[c];
    pzx[x * cz + z] += cfg.joint.probs()[c];
  }
  for (std::size_t x = 0; x < cx; ++x) {
    for (std::size_t z = 0; z < cz; ++z) {
      pzx[x * cz + z] = px[x] > 0.0 ? pzx[x * cz + z] / px[x] : 1.0 / cz;
    }
  }

  std::vector<TvPoint> trace;
  for (std::size_t n : cfg.n_values) {
    double states = std::pow(static_cast<double>(cx * cz), static_cast<double>(n));
    if (n < 1 || states > std::exp2(22.0) + 0.5) {
      throw std::invalid_argument("enumeration exceeds the 2^22 state guard");
    }
    std::size_t x_states = 1, z_states = 1;
    for (std::size_t i = 0; i < n; ++i) {
      x_states *= cx;
      z_states *= cz;
    }
    const std::size_t bins = pow2_ceil_bits(n, cfg.rate);

    // Sequence probabilities and per-sequence conditionals, shared by trials.
    std::vector<double> pxn(x_states);
    std::vector<std::size_t> digits(n);
    for (std::size_t xs = 0; xs < x_states; ++xs) {
      std::size_t rem = xs;
      double p = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        digits[i] = rem % cx;
        rem /= cx;
        p *= px[digits[i]];
      }
      pxn[xs] = p;
    }

    double tv_sum = 0.0;
    std::vector<double> induced(bins * z_states);
    std::vector<double> pz_marg(z_states);
    std::vector<std::size_t> xdig(n);
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      Rng rng(split_seed(cfg.seed, n * 1000003ULL + trial));
      std::fill(induced.begin(), induced.end(), 0.0);
      std::fill(pz_marg.begin(), pz_marg.end(), 0.0);
      for (std::size_t xs = 0; xs < x_states; ++xs) {
        const std::size_t bin = rng.raw() & (bins - 1);  // bins is a power of 2
        if (pxn[xs] <= 0.0) continue;
        std::size_t rem = xs;
        for (std::size_t i = 0; i < n; ++i) {
          xdig[i] = rem % cx;
          rem /= cx;
        }
        for (std::size_t zs = 0; zs < z_states; ++zs) {
          std::size_t zrem = zs;
          double p = pxn[xs];
          for (std::size_t i = 0; i < n; ++i) {
            p *= pzx[xdig[i] * cz + zrem % cz];
            zrem /= cz;
          }
          induced[bin * z_states + zs] += p;
          pz_marg[zs] += p;
        }
      }
      double tv = 0.0;
      for (std::size_t w = 0; w < bins; ++w) {
        for (std::size_t zs = 0; zs < z_states; ++zs) {
          tv += std::abs(induced[w * z_states + zs] -
                         pz_marg[zs] / static_cast<double>(bins));
        }
      }
      tv_sum += 0.5 * tv;
    }
    trace.push_back({n, tv_sum / static_cast<double>(cfg.trials), cfg.trials});
  }
  return trace;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("spearman needs two equal-length series");
  }
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t m = v.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(m);
    std::size_t i = 0;
    while (i < m) {
      std::size_t j = i;
      while (j + 1 < m && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double m = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= m;
  mb /= m;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

Lemma1Config lemma1_config_from_json(const nlohmann::json& j) {
  Lemma1Config cfg;
  cfg.base = compose_joint(factorization_from_json(j.at("factorization")));
  cfg.n = j.at("n").get<std::size_t>();
  cfg.s_rate = j.at("S").get<double>();
  cfg.t_rate = j.at("T").get<double>();
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.delta1 = j.value("delta1", cfg.delta1);
  cfg.delta2 = j.value("delta2", cfg.delta2);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

nlohmann::json lemma1_result_to_json(const Lemma1Result& result) {
  return {{"p_e1", result.p_e1},
          {"mean_count", result.mean_count},
          {"max_count", result.max_count},
          {"entropy_bits", result.entropy_bits},
          {"bound_bits", result.bound_bits},
          {"mutual_info_bits", result.mutual_info_bits},
          {"codewords_u", result.codewords_u},
          {"codewords_v", result.codewords_v},
          {"trials", result.trials},
          {"excluded_trials", result.excluded_trials},
          {"trials_entropy_above_bound", result.trials_entropy_above_bound}};
}

BinningConfig binning_config_from_json(const nlohmann::json& j) {
  BinningConfig cfg;
  cfg.joint = compose_joint(factorization_from_json(j.at("factorization")));
  if (j.contains("n_values")) {
    cfg.n_values = j.at("n_values").get<std::vector<std::size_t>>();
  }
  cfg.rate = j.at("rate").get<double>();
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

std::string tv_trace_to_csv(const std::vector<TvPoint>& trace) {
  std::ostringstream os;
  os << "n,metric,value,trials\n";
  for (const auto& point : trace) {
    os << point.n << ",tv_mean," << point.tv << "," << point.trials << "\n";
  }
  return os.str();
}

}  // namespace secreg
