#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "secreg/codebook_sim.hpp"
#include "secreg/dsl.hpp"
#include "secreg/regions.hpp"

namespace {

using nlohmann::json;
using namespace secreg;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json load_json(const std::string& path) { return json::parse(read_file(path)); }

// Accepts either a builtin id or a DSL file path.
RegionSpec load_region(const std::string& ref) {
  try {
    return builtin_system(ref);
  } catch (const std::invalid_argument&) {
    RegionSpec spec;
    spec.id = RegionId::thm1_inner;  // placeholder; file systems carry no id
    spec.system = parse_system(read_file(ref));
    return spec;
  }
}

RedundancyMode parse_mode(const std::string& mode) {
  if (mode == "farkas") return RedundancyMode::farkas;
  if (mode == "farkas+shannon") return RedundancyMode::farkas_shannon;
  throw std::runtime_error("mode must be farkas or farkas+shannon");
}

json region_to_json(const NumericRegion& region) {
  json ineqs = json::array();
  for (const auto& ineq : region.inequalities) {
    ineqs.push_back(
        {{"coeffs", ineq.coeffs}, {"rhs", ineq.rhs}, {"tag", ineq.tag}});
  }
  json vertices = json::array();
  for (const auto& v : region.vertices) vertices.push_back({v[0], v[1]});
  return {{"rate_vars", region.rate_vars},
          {"inequalities", std::move(ineqs)},
          {"vertices", std::move(vertices)},
          {"empty", region.empty}};
}

NumericRegion region_from_json(const json& j) {
  NumericRegion region;
  region.rate_vars = j.at("rate_vars").get<std::vector<std::string>>();
  for (const auto& ij : j.at("inequalities")) {
    NumericIneq ineq;
    ineq.coeffs = ij.at("coeffs").get<std::map<std::string, double>>();
    ineq.rhs = ij.at("rhs").get<double>();
    ineq.tag = ij.value("tag", "");
    region.inequalities.push_back(std::move(ineq));
  }
  for (const auto& vj : j.at("vertices")) {
    region.vertices.push_back({vj.at(0).get<double>(), vj.at(1).get<double>()});
  }
  region.empty = j.value("empty", false);
  return region;
}

RegionEnvelope envelope_from_json(const json& j) {
  RegionEnvelope envelope;
  auto read_points = [](const json& arr) {
    std::vector<EnvelopePoint> points;
    for (const auto& pj : arr) {
      EnvelopePoint p;
      p.lambda1 = pj.at("lambda1").get<double>();
      p.lambda2 = pj.at("lambda2").get<double>();
      p.r1 = pj.at("R1").get<double>();
      p.r2 = pj.at("R2").get<double>();
      if (pj.contains("params")) {
        p.params = pj.at("params").get<std::vector<double>>();
      }
      points.push_back(std::move(p));
    }
    return points;
  };
  envelope.points = read_points(j.at("points"));
  if (j.contains("per_direction")) {
    envelope.per_direction = read_points(j.at("per_direction"));
  }
  return envelope;
}

AuxSearchConfig search_config_from_json(const json& j) {
  AuxSearchConfig cfg;
  cfg.q_cardinality = j.value("q_cardinality", cfg.q_cardinality);
  cfg.aux_cardinality = j.value("aux_cardinality", cfg.aux_cardinality);
  if (j.contains("sampler")) {
    const auto s = j.at("sampler").get<std::string>();
    if (s == "dirichlet") {
      cfg.sampler = Sampler::dirichlet;
    } else if (s == "grid") {
      cfg.sampler = Sampler::grid;
    } else {
      throw std::runtime_error("sampler must be dirichlet or grid");
    }
  }
  cfg.samples = j.value("samples", cfg.samples);
  cfg.refinement_passes = j.value("refinement_passes", cfg.refinement_passes);
  cfg.grid_resolution = j.value("grid_resolution", cfg.grid_resolution);
  if (j.contains("directions")) {
    cfg.directions.clear();
    for (const auto& d : j.at("directions")) {
      cfg.directions.emplace_back(d.at(0).get<double>(), d.at(1).get<double>());
    }
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.assume_tol = j.value("assume_tol", cfg.assume_tol);
  return cfg;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

int cmd_exit = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secrecy rate region toolkit"};
  app.require_subcommand(1);

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "parse a DSL file and print it canonically");
  std::string parse_in, parse_out;
  bool parse_json = false;
  parse_cmd->add_option("--in", parse_in, "DSL file")->required();
  parse_cmd->add_option("--out", parse_out, "output path (default stdout)");
  parse_cmd->add_flag("--json", parse_json, "emit JSON instead of DSL text");
  parse_cmd->callback([&] {
    IneqSystem system = parse_system(read_file(parse_in));
    write_output(parse_out,
                 parse_json ? system_to_json(system).dump(2) + "\n"
                            : print_system(system));
  });

  // builtin
  auto* builtin_cmd = app.add_subcommand("builtin", "list or emit builtin systems");
  bool builtin_list = false;
  std::string builtin_emit, builtin_out;
  bool builtin_json = false;
  builtin_cmd->add_flag("--list", builtin_list, "list builtin ids");
  builtin_cmd->add_option("--emit", builtin_emit, "emit one builtin as DSL text");
  builtin_cmd->add_option("--out", builtin_out, "output path (default stdout)");
  builtin_cmd->add_flag("--json", builtin_json, "emit JSON instead of DSL text");
  builtin_cmd->callback([&] {
    if (builtin_list) {
      std::string text;
      for (const auto& id : all_region_ids()) text += id + "\n";
      write_output(builtin_out, text);
      return;
    }
    if (builtin_emit.empty()) {
      throw std::runtime_error("builtin requires --list or --emit <id>");
    }
    RegionSpec spec = builtin_system(builtin_emit);
    write_output(builtin_out,
                 builtin_json ? system_to_json(spec.system).dump(2) + "\n"
                              : print_system(spec.system));
  });

  // derive
  auto* derive_cmd = app.add_subcommand("derive", "eliminate rate variables and prune");
  std::string derive_raw, derive_elim, derive_mode = "farkas+shannon";
  std::string derive_target, derive_out;
  derive_cmd->add_option("--raw", derive_raw, "builtin id or DSL file")->required();
  derive_cmd->add_option("--eliminate", derive_elim, "comma-separated rate variables")
      ->required();
  derive_cmd->add_option("--mode", derive_mode, "farkas or farkas+shannon");
  derive_cmd->add_option("--target", derive_target,
                         "builtin id or DSL file to compare against");
  derive_cmd->add_option("--out", derive_out, "output path (default stdout)");
  derive_cmd->callback([&] {
    RegionSpec raw = load_region(derive_raw);
    const auto mode = parse_mode(derive_mode);
    DeriveResult result = derive_from_raw(raw, split_list(derive_elim), mode);
    json out = {{"derived", system_to_json(result.derived)},
                {"pretty", print_system(result.derived)},
                {"raw_inequality_count", result.raw_inequality_count},
                {"certificates", result.certificates}};
    if (!derive_target.empty()) {
      RegionSpec target = load_region(derive_target);
      SymbolicVerdict verdict = symbolic_equal(result.derived, target.system);
      json vj = {{"equal", verdict.equal}, {"direction", verdict.direction}};
      if (verdict.witness) vj["witness"] = verdict.witness->to_string();
      out["verdict"] = std::move(vj);
      json assumptions = json::array();
      for (const auto& a : result.derived.assumptions) {
        assumptions.push_back({{"tag", a.tag}, {"pretty", a.constant.to_string()}});
      }
      out["assumptions"] = std::move(assumptions);
    }
    write_output(derive_out, out.dump(2) + "\n");
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "numeric region on a concrete joint");
  std::string eval_region, eval_joint, eval_out, eval_csv;
  std::string eval_tau1, eval_tau2;
  bool eval_noclamp = false;
  eval_cmd->add_option("--region", eval_region, "builtin id")->required();
  eval_cmd->add_option("--joint", eval_joint, "factorization JSON file")->required();
  eval_cmd->add_option("--tau1", eval_tau1, "switch bias p/q (noiseless switch only)");
  eval_cmd->add_option("--tau2", eval_tau2, "eavesdropper bias p/q");
  eval_cmd->add_option("--out", eval_out, "JSON output path (default stdout)");
  eval_cmd->add_option("--csv", eval_csv, "also write vertices as CSV");
  eval_cmd->add_flag("--no-clamp", eval_noclamp,
                     "keep negative right-hand sides instead of clamping to 0");
  eval_cmd->callback([&] {
    RegionSpec spec = builtin_system(eval_region);
    if (!eval_tau1.empty() || !eval_tau2.empty()) {
      if (spec.id != RegionId::thm5_noiseless_switch) {
        throw std::runtime_error("--tau1/--tau2 apply to THM5_NOISELESS_SWITCH");
      }
      spec.system = noiseless_switch_system(
          parse_rational(eval_tau1.empty() ? "1/2" : eval_tau1),
          parse_rational(eval_tau2.empty() ? "1/2" : eval_tau2));
    }
    JointPmf joint = compose_joint(factorization_from_json(load_json(eval_joint)));
    EvalResult result = evaluate(spec, joint, !eval_noclamp);
    json violations = json::array();
    for (const auto& v : result.violations) {
      violations.push_back({{"tag", v.tag}, {"slack", v.slack}});
    }
    json out = {{"region", region_to_json(result.region)},
                {"residual", result.residual},
                {"assumption_violations", std::move(violations)}};
    write_output(eval_out, out.dump(2) + "\n");
    if (!eval_csv.empty()) {
      std::ostringstream os;
      os << "R1,R2\n";
      for (const auto& v : result.region.vertices) {
        os << v[0] << "," << v[1] << "\n";
      }
      write_output(eval_csv, os.str());
    }
    if (!result.violations.empty()) cmd_exit = 2;
  });

  // search
  auto* search_cmd = app.add_subcommand("search", "envelope search over auxiliaries");
  std::string search_region, search_channel, search_config, search_out, search_json_out;
  std::uint64_t search_seed = 0;
  bool search_seed_set = false;
  search_cmd->add_option("--region", search_region, "builtin id")->required();
  search_cmd->add_option("--channel", search_channel, "channel factorization JSON")
      ->required();
  search_cmd->add_option("--config", search_config, "search config JSON");
  search_cmd
      ->add_option_function<std::uint64_t>(
          "--seed",
          [&](const std::uint64_t& s) {
            search_seed = s;
            search_seed_set = true;
          },
          "seed override")
      ->expected(1);
  search_cmd->add_option("--out", search_out, "CSV output path (default stdout)");
  search_cmd->add_option("--json-out", search_json_out, "JSON output path");
  search_cmd->callback([&] {
    RegionSpec spec = builtin_system(search_region);
    FactorizationSpec channel = factorization_from_json(load_json(search_channel));
    AuxSearchConfig cfg;
    if (!search_config.empty()) cfg = search_config_from_json(load_json(search_config));
    if (search_seed_set) cfg.seed = search_seed;
    RegionEnvelope envelope = search_envelope(spec, channel, cfg);
    write_output(search_out, envelope_to_csv(envelope));
    if (!search_json_out.empty()) {
      write_output(search_json_out, envelope_to_json(envelope).dump(2) + "\n");
    }
  });

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "inner/outer containment check");
  std::string compare_inner, compare_outer, compare_out;
  double compare_tol = 1e-9;
  compare_cmd->add_option("--inner", compare_inner, "envelope JSON (from search)")
      ->required();
  compare_cmd
      ->add_option("--outer", compare_outer,
                   "region JSON (from eval) or envelope JSON")
      ->required();
  compare_cmd->add_option("--tol", compare_tol, "containment tolerance");
  compare_cmd->add_option("--out", compare_out, "output path (default stdout)");
  compare_cmd->callback([&] {
    RegionEnvelope inner = envelope_from_json(load_json(compare_inner));
    json outer_json = load_json(compare_outer);
    if (outer_json.contains("region")) outer_json = outer_json.at("region");
    ContainmentReport report;
    if (outer_json.contains("inequalities")) {
      report = compare_bounds(inner, region_from_json(outer_json), compare_tol);
    } else {
      // Outer given as an envelope: containment = every inner point is
      // dominated componentwise by some outer point.
      RegionEnvelope outer = envelope_from_json(outer_json);
      report.contained = true;
      for (const auto& p : inner.points) {
        double best_short = std::numeric_limits<double>::infinity();
        double support = 0.0;
        for (const auto& q : outer.points) {
          best_short = std::min(best_short, std::max(p.r1 - q.r1, p.r2 - q.r2));
          support = std::max(support, p.lambda1 * q.r1 + p.lambda2 * q.r2);
        }
        if (outer.points.empty()) best_short = std::max(p.r1, p.r2);
        report.max_violation = std::max(report.max_violation, best_short);
        if (best_short > compare_tol) report.contained = false;
        report.direction_gaps.push_back(support -
                                        (p.lambda1 * p.r1 + p.lambda2 * p.r2));
      }
    }
    write_output(compare_out, containment_to_json(report).dump(2) + "\n");
    if (!report.contained) cmd_exit = 2;
  });

  // simulate-lemma1
  auto* lemma_cmd = app.add_subcommand("simulate-lemma1", "codeword counting experiment");
  std::string lemma_config, lemma_out, lemma_csv;
  lemma_cmd->add_option("--config", lemma_config, "config JSON")->required();
  lemma_cmd->add_option("--out", lemma_out, "JSON output path (default stdout)");
  lemma_cmd->add_option("--csv", lemma_csv, "sweep trace CSV path");
  lemma_cmd->callback([&] {
    json j = load_json(lemma_config);
    std::vector<std::size_t> sweep;
    if (j.contains("n_values")) {
      sweep = j.at("n_values").get<std::vector<std::size_t>>();
    }
    Lemma1Config cfg = lemma1_config_from_json(j);
    if (sweep.empty()) sweep = {cfg.n};
    json results = json::array();
    std::ostringstream csv;
    csv << "n,metric,value,trials\n";
    for (const std::size_t n : sweep) {
      cfg.n = n;
      Lemma1Result result = run_lemma1_counting(cfg);
      json rj = lemma1_result_to_json(result);
      rj["n"] = n;
      results.push_back(std::move(rj));
      csv << n << ",p_e1," << result.p_e1 << "," << result.trials << "\n";
      csv << n << ",entropy_bits," << result.entropy_bits << ","
          << result.trials - result.excluded_trials << "\n";
    }
    write_output(lemma_out, results.dump(2) + "\n");
    if (!lemma_csv.empty()) write_output(lemma_csv, csv.str());
  });

  // simulate-osrb
  auto* osrb_cmd = app.add_subcommand("simulate-osrb", "binning independence experiment");
  std::string osrb_config, osrb_out, osrb_json_out;
  osrb_cmd->add_option("--config", osrb_config, "config JSON")->required();
  osrb_cmd->add_option("--out", osrb_out, "CSV output path (default stdout)");
  osrb_cmd->add_option("--json-out", osrb_json_out, "summary JSON path");
  osrb_cmd->callback([&] {
    BinningConfig cfg = binning_config_from_json(load_json(osrb_config));
    std::vector<TvPoint> trace = run_osrb_tv(cfg);
    write_output(osrb_out, tv_trace_to_csv(trace));
    if (!osrb_json_out.empty()) {
      std::vector<double> ns, tvs;
      for (const auto& point : trace) {
        ns.push_back(static_cast<double>(point.n));
        tvs.push_back(point.tv);
      }
      json out = {{"spearman_tv_vs_n", ns.size() >= 2 ? spearman(ns, tvs) : 0.0},
                  {"final_tv", trace.empty() ? 0.0 : trace.back().tv}};
      write_output(osrb_json_out, out.dump(2) + "\n");
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return cmd_exit;
}
