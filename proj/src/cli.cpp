#include "concentration/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "concentration/asymptotics.hpp"
#include "concentration/dataset.hpp"
#include "concentration/errors.hpp"
#include "concentration/pnorm.hpp"
#include "concentration/serialize.hpp"
#include "concentration/verify.hpp"

namespace conc::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

/// Command, config fingerprint, seed and tool version for one invocation.
struct RunManifest {
  std::string command;
  json config;
  std::optional<std::uint64_t> master_seed;
  std::string started_at = utc_now();

  json to_json() const {
    json j;
    j["command"] = command;
    j["config_hash"] = fnv1a_hex(config.dump());
    j["config"] = config;
    j["master_seed"] = master_seed ? json(*master_seed) : json(nullptr);
    j["tool_version"] = CONCENTRATION_VERSION;
    j["started_at"] = started_at;
    j["finished_at"] = utc_now();
    return j;
  }
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
  f << text;
}

void emit_json(const json& j, const std::string& out_path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    out << text;
  else
    write_file(out_path, text);
}

// --dist accepts a family name or an inline JSON object.
struct DistOptions {
  std::string dist = "uniform01";
  double offset = 1.0;
  std::string data;

  void add_to(CLI::App* app) {
    app->add_option("--dist", dist,
                    "uniform01 | normal | mixture | empirical, or a JSON object")
        ->capture_default_str();
    app->add_option("--offset", offset, "mixture component offset")->capture_default_str();
    app->add_option("--data", data, "CSV of values for --dist empirical");
  }

  DistributionSpec build() const {
    if (!dist.empty() && dist.front() == '{') {
      json j;
      try {
        j = json::parse(dist);
      } catch (const json::exception& e) {
        throw InvalidSpec(std::string("--dist is not valid JSON: ") + e.what());
      }
      return distribution_from_json(j);
    }
    json j{{"family", dist}};
    if (dist == "mixture") j["offset"] = offset;
    if (dist == "empirical") {
      if (data.empty()) throw InvalidSpec("--dist empirical needs --data FILE");
      j["path"] = data;
    }
    return distribution_from_json(j);
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidInput("not a number in list: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

std::vector<std::uint64_t> parse_dimensions(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (double v : parse_list(text)) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15)
      throw InvalidInput("dimensions must be positive integers");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

// ---------------------------------------------------------------- predict

struct PredictOptions {
  DistOptions dist;
  double p = 0.0;
  std::uint64_t d = 0;
  std::optional<double> epsilon;
  std::optional<double> support_C;
  bool force = false;
  std::string out;
};

int cmd_predict(const PredictOptions& o, std::ostream& out, std::ostream& err) {
  if (!(o.p > 0.0) || !std::isfinite(o.p)) throw InvalidInput("--p must be a finite number > 0");
  if (o.d < 1) throw InvalidInput("--d must be >= 1");
  if (o.epsilon && !(*o.epsilon > 0.0)) throw InvalidInput("--epsilon must be > 0");
  if (o.support_C && !o.epsilon) throw InvalidInput("--support-C needs --epsilon");
  if (o.support_C && !(*o.support_C > 0.0)) throw InvalidInput("--support-C must be > 0");

  const DistributionSpec spec = o.dist.build();
  RunManifest manifest{"predict", json{{"dist", to_json(spec)}, {"p", o.p}, {"d", o.d}}, std::nullopt};
  if (o.epsilon) manifest.config["epsilon"] = *o.epsilon;
  if (o.support_C) manifest.config["support_C"] = *o.support_C;

  const MomentPair m = moments(spec, o.p);
  PredictionReport prediction = predict(m, o.d);
  prediction.assumption_checks = {check_assumptions(spec, o.p, Proposition::Prop2),
                                  check_assumptions(spec, o.p, Proposition::IFC)};
  json caveats = json::array({"leading-order asymptotics in d; remainder terms are not estimated"});

  for (const auto& c : prediction.assumption_checks) {
    if (c.holds == TriState::No && !o.force) {
      err << "assumption failed (" << to_string(c.proposition) << "): " << c.note << "\n";
      return kAssumption;
    }
  }

  json report;
  report["manifest"] = nullptr;
  report["moments"] = to_json(m);
  report["prediction"] = to_json(prediction);

  if (o.epsilon) {
    std::optional<double> C = o.support_C;
    if (C) {
      AssumptionCheck fh = check_assumptions(spec, o.p, Proposition::FhII);
      prediction.assumption_checks.push_back(fh);
      report["prediction"] = to_json(prediction);
      if (fh.holds == TriState::No) {
        if (!o.force) {
          err << "assumption failed (fh_ii): " << fh.note << "\n";
          return kAssumption;
        }
        caveats.push_back("bounded-difference bound reported despite failed hypothesis: " +
                          fh.note);
        if (o.p < 1.0) C.reset();
      }
      if (C && spec.support_bound() > *C)
        caveats.push_back("support_C is smaller than the largest |X| of the law");
    }
    report["bounds"] = to_json(bounds(m, o.d, *o.epsilon, C));
  }
  report["caveats"] = caveats;
  report["manifest"] = manifest.to_json();
  emit_json(report, o.out, out);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string config_path;
  DistOptions dist;
  double p = 2.0;
  std::string d = "1000";
  std::uint64_t n = 1;
  std::optional<double> n_exponent;
  double n_coefficient = 1.0;
  std::int64_t replicates = 1000;
  std::optional<std::uint64_t> seed;
  std::string statistic = "norm-moments";
  unsigned workers = 0;
  std::size_t sample_cap = 1'000'000;
  bool keep_all = false;
  bool force = false;
  bool strict_repro = false;
  double memory_budget_mb = 2048;
  std::string out_dir = "pnormconc_out";
  bool no_samples = false;
};

int cmd_simulate(const SimulateOptions& o, const CLI::App& app, std::ostream& out,
                 std::ostream& err) {
  SimulationConfig config;
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw InvalidInput("cannot open config '" + o.config_path + "'");
    json j;
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    config = simulation_config_from_json(j, fs::path(o.config_path).parent_path());
    if (o.seed) config.master_seed = *o.seed;
    else if (!j.contains("master_seed") && o.strict_repro)
      throw InvalidInput("--strict-repro requires a seed (--seed or master_seed in the config)");
    if (o.workers) config.workers = o.workers;
  } else {
    if (o.replicates < 1) throw InvalidInput("--replicates must be >= 1");
    if (!(o.p > 0.0) || !std::isfinite(o.p)) throw InvalidInput("--p must be a finite number > 0");
    const auto stat = parse_statistic(o.statistic);
    if (!stat) throw InvalidInput("unknown --statistic '" + o.statistic + "'");
    if (o.strict_repro && !o.seed) throw InvalidInput("--strict-repro requires --seed");
    config.spec = o.dist.build();
    config.p = o.p;
    config.d_values = parse_dimensions(o.d);
    config.n = o.n_exponent ? SampleSizeRule::power(*o.n_exponent, o.n_coefficient)
                            : SampleSizeRule::fixed(o.n);
    config.replicates = static_cast<std::uint64_t>(o.replicates);
    config.statistic = *stat;
    config.force = o.force;
    config.workers = o.workers;
    config.sample_cap = o.sample_cap;
    config.keep_all_samples = o.keep_all;
    config.memory_budget_bytes = static_cast<std::size_t>(o.memory_budget_mb * 1048576.0);
    if (o.seed) {
      config.master_seed = *o.seed;
    } else {
      std::random_device rd;
      config.master_seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      err << "no --seed given; using " << config.master_seed << "\n";
    }
  }
  (void)app;

  json config_echo = to_json(config);
  config_echo.erase("workers");
  RunManifest manifest{"simulate", config_echo, config.master_seed};

  std::vector<SimulationResult> results;
  if (config.d_values.size() == 1)
    results.push_back(simulate(config));
  else
    results = simulate_schedule(config);

  json summary;
  summary["manifest"] = nullptr;
  summary["results"] = json::array();
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  for (const auto& r : results) {
    json jr = to_json(r);
    if (!o.no_samples) {
      const std::string name = results.size() == 1
                                   ? std::string("samples.csv")
                                   : "samples_d" + std::to_string(r.d) + ".csv";
      std::ostringstream csv;
      write_samples_csv(csv, r.empirical_samples, std::string(to_string(config.statistic)));
      write_file(dir / name, csv.str());
      jr["samples_csv"] = name;
    }
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    summary["results"].push_back(jr);
  }
  summary["manifest"] = manifest.to_json();
  write_file(dir / "manifest.json", summary["manifest"].dump(2) + "\n");
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  out << summary.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::string suite;
  std::string budget = "standard";
  std::uint64_t seed = verify::kDefaultSeed;
  unsigned workers = 0;
  std::string json_out;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream&) {
  const auto budget = verify::parse_budget(o.budget);
  if (!budget) throw InvalidInput("unknown --budget '" + o.budget + "' (fast, standard, paper)");
  std::vector<std::string> names;
  if (o.suite == "all") {
    names = verify::suite_names();
  } else {
    const auto& all = verify::suite_names();
    if (std::find(all.begin(), all.end(), o.suite) == all.end())
      throw InvalidInput("unknown suite '" + o.suite + "'");
    names = {o.suite};
  }

  RunManifest manifest{"verify", json{{"suites", names}, {"budget", o.budget}, {"seed", o.seed}},
                       o.seed};
  json report;
  report["manifest"] = nullptr;
  report["suites"] = json::array();
  bool all_passed = true;
  for (const auto& name : names) {
    const auto r = verify::run_suite(name, *budget, o.seed, o.workers);
    json js{{"suite", r.suite}, {"budget", o.budget}, {"passed", r.passed()},
            {"seconds", r.seconds}, {"checks", json::array()}};
    for (const auto& c : r.checks) {
      if (c.comparison == "report")
        out << "INFO  " << name << "  " << c.name << "  value=" << format_double(c.value);
      else
        out << (c.passed ? "PASS" : "FAIL") << "  " << name << "  " << c.name << "  value="
            << format_double(c.value) << " " << c.comparison << " "
            << format_double(c.threshold);
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << "\n";
      js["checks"].push_back(json{{"name", c.name},
                                  {"value", c.value},
                                  {"threshold", c.threshold},
                                  {"comparison", c.comparison},
                                  {"passed", c.passed},
                                  {"detail", c.detail}});
    }
    out << (r.passed() ? "SUITE PASS  " : "SUITE FAIL  ") << name << "  (" << std::fixed
        << std::setprecision(2) << r.seconds << " s)\n";
    out.unsetf(std::ios::floatfield);
    all_passed = all_passed && r.passed();
    report["suites"].push_back(js);
  }
  report["passed"] = all_passed;
  report["manifest"] = manifest.to_json();
  if (!o.json_out.empty()) write_file(o.json_out, report.dump(2) + "\n");
  return all_passed ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseOptions {
  std::string dataset;
  std::string p_list = "0.5,1,2,4";
  double threshold = 0.1;
  std::string out;
};

int cmd_diagnose(const DiagnoseOptions& o, std::ostream& out, std::ostream& err) {
  if (!(o.threshold >= 0.0)) throw InvalidInput("--threshold must be >= 0");
  const Dataset ds = read_dataset_csv(o.dataset);
  if (ds.n() < 2) throw InvalidInput("diagnose needs at least 2 rows");
  std::vector<double> ps = parse_list(o.p_list);
  for (double p : ps)
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("p values must be finite and > 0");
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  std::vector<double> pooled;
  pooled.reserve(ds.n() * ds.d());
  for (const auto& row : ds.rows) pooled.insert(pooled.end(), row.begin(), row.end());
  std::optional<DistributionSpec> marginal;
  json caveats = json::array(
      {"the query point is the origin; distances are the row norms",
       "predictions treat coordinates as i.i.d. draws from the pooled empirical marginal; real "
       "coordinates are usually dependent and not identically distributed, so the predicted "
       "values are an idealization",
       "the low-contrast threshold is a configurable heuristic, not a derived constant"});
  try {
    marginal = DistributionSpec::empirical(pooled, "pooled dataset coordinates");
  } catch (const InvalidSpec&) {
    caveats.push_back("all coordinates are equal; no marginal prediction is possible");
  }

  json rows = json::array();
  for (double p : ps) {
    const auto norms = dataset_norms(ds.rows, p);
    const ContrastStats cs = contrast_stats(norms);
    json row;
    row["p"] = p;
    row["max_norm"] = cs.max_norm;
    row["min_norm"] = cs.min_norm;
    row["contrast"] = cs.contrast;
    row["relative_contrast"] = cs.relative_contrast ? json(*cs.relative_contrast) : json(nullptr);
    row["rsd_scaled_limit"] = nullptr;
    row["predicted_rsd"] = nullptr;
    if (marginal) {
      const MomentPair m = moments(*marginal, p);
      if (m.mu_p > 0.0) {
        const double limit = m.sigma_p / (p * m.mu_p);
        row["rsd_scaled_limit"] = limit;
        row["predicted_rsd"] = limit / std::sqrt(static_cast<double>(ds.d()));
      }
    }
    row["flagged_low_contrast"] =
        cs.relative_contrast ? json(*cs.relative_contrast < o.threshold) : json(nullptr);
    rows.push_back(row);
  }

  RunManifest manifest{"diagnose", json{{"dataset", o.dataset}, {"p", ps}, {"threshold", o.threshold}}, std::nullopt};
  json report;
  report["manifest"] = manifest.to_json();
  report["dataset"] = json{{"path", o.dataset}, {"n", ds.n()}, {"d", ds.d()}};
  report["threshold"] = o.threshold;
  report["rows"] = rows;
  report["caveats"] = caveats;
  err << "note: predictions assume i.i.d. coordinates (pooled marginal); see caveats\n";
  emit_json(report, o.out, out);
  return kOk;
}

// ---------------------------------------------------------------- table

struct TableOptions {
  std::string law = "gumbel-sum";
  std::uint64_t n = 5;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t points = 801;
  std::string out_dir = "pnormconc_out";
};

int cmd_table(const TableOptions& o, std::ostream& out, std::ostream&) {
  LimitLawTable t;
  json config{{"law", o.law}};
  std::optional<std::uint64_t> seed;
  if (o.points < 2) throw InvalidInput("--points must be >= 2");
  if (o.law == "gumbel-sum") {
    t = tabulate_gumbel_sum(linspace(-8.0, 16.0, o.points));
  } else if (o.law == "normal-range") {
    if (o.n < 2) throw InvalidInput("--n must be >= 2");
    const double hi = 2.0 * std::sqrt(2.0 * std::log(static_cast<double>(o.n))) + 8.0;
    t = tabulate_normal_range(o.n, linspace(0.0, hi, o.points));
    config["n"] = o.n;
  } else if (o.law == "ratio") {
    if (o.n < 2) throw InvalidInput("--n must be >= 2");
    RngStream rng(o.seed, 0);
    t = ratio_law_table(o.n, o.samples, rng);
    config["n"] = o.n;
    config["samples"] = o.samples;
    seed = o.seed;
  } else {
    throw InvalidInput("unknown --law '" + o.law + "' (gumbel-sum, normal-range, ratio)");
  }
  if (!t.empirical) config["points"] = o.points;
  RunManifest manifest{"table", config, seed};

  const fs::path dir(o.out_dir);
  std::ostringstream csv;
  write_table_csv(csv, t);
  write_file(dir / "table.csv", csv.str());
  json meta = table_metadata(t);
  meta["manifest"] = manifest.to_json();
  write_file(dir / "table.json", meta.dump(2) + "\n");
  out << meta.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-norm concentration: predictions, simulation and verification"};
  app.name("pnormconc");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CONCENTRATION_VERSION));

  PredictOptions predict_opts;
  auto* predict_cmd = app.add_subcommand("predict", "leading-order predictions and tail bounds");
  predict_opts.dist.add_to(predict_cmd);
  predict_cmd->add_option("--p", predict_opts.p, "norm exponent (> 0)")->required();
  predict_cmd->add_option("--d", predict_opts.d, "dimension")->required();
  predict_cmd->add_option("--epsilon", predict_opts.epsilon, "relative deviation for the bounds");
  predict_cmd->add_option("--support-C", predict_opts.support_C,
                          "a.s. bound on |X| for the bounded-difference bound");
  predict_cmd->add_flag("--force", predict_opts.force, "report even if a hypothesis fails");
  predict_cmd->add_option("--out", predict_opts.out, "write JSON here instead of stdout");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo of a norm statistic");
  sim_cmd->add_option("--config", sim.config_path, "JSON simulation config");
  sim.dist.add_to(sim_cmd);
  sim_cmd->add_option("--p", sim.p, "norm exponent")->capture_default_str();
  sim_cmd->add_option("--d", sim.d, "dimension, or comma-separated schedule")->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "points per replicate")->capture_default_str();
  sim_cmd->add_option("--n-exponent", sim.n_exponent, "use n(d) = floor(c d^e) with this e");
  sim_cmd->add_option("--n-coefficient", sim.n_coefficient, "c in n(d) = floor(c d^e)");
  sim_cmd->add_option("--replicates", sim.replicates)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "master seed");
  sim_cmd->add_option("--statistic", sim.statistic,
                      "norm-moments | contrast | relative-contrast | scaled-range-tcl | "
                      "normalized-range-yu | ratio-stat")
      ->capture_default_str();
  sim_cmd->add_option("--workers", sim.workers, "threads (0 = all cores)");
  sim_cmd->add_option("--sample-cap", sim.sample_cap, "reservoir size for stored samples")
      ->capture_default_str();
  sim_cmd->add_flag("--keep-all-samples", sim.keep_all, "store every replicate value");
  sim_cmd->add_flag("--force", sim.force, "run even if a hypothesis fails");
  sim_cmd->add_flag("--strict-repro", sim.strict_repro, "refuse to run without a seed");
  sim_cmd->add_option("--memory-budget-mb", sim.memory_budget_mb)->capture_default_str();
  sim_cmd->add_option("--out-dir", sim.out_dir)->capture_default_str();
  sim_cmd->add_flag("--no-samples", sim.no_samples, "skip the samples CSV");

  VerifyOptions ver;
  auto* ver_cmd = app.add_subcommand("verify", "run a verification suite");
  ver_cmd->add_option("suite", ver.suite, "suite name or 'all'")->required();
  ver_cmd->add_option("--budget", ver.budget, "fast | standard | paper")->capture_default_str();
  ver_cmd->add_option("--seed", ver.seed)->capture_default_str();
  ver_cmd->add_option("--workers", ver.workers);
  ver_cmd->add_option("--json", ver.json_out, "write the JSON report here");

  DiagnoseOptions diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "distance concentration of a CSV dataset");
  diag_cmd->add_option("dataset", diag.dataset, "CSV, one point per row")->required();
  diag_cmd->add_option("--p", diag.p_list, "comma-separated exponents")->capture_default_str();
  diag_cmd->add_option("--threshold", diag.threshold, "low relative contrast threshold")
      ->capture_default_str();
  diag_cmd->add_option("--out", diag.out, "write JSON here instead of stdout");

  TableOptions tab;
  auto* tab_cmd = app.add_subcommand("table", "tabulate a limit law as CSV");
  tab_cmd->add_option("--law", tab.law, "gumbel-sum | normal-range | ratio")->capture_default_str();
  tab_cmd->add_option("--n", tab.n)->capture_default_str();
  tab_cmd->add_option("--samples", tab.samples, "Monte Carlo size for the ratio law")
      ->capture_default_str();
  tab_cmd->add_option("--seed", tab.seed)->capture_default_str();
  tab_cmd->add_option("--points", tab.points)->capture_default_str();
  tab_cmd->add_option("--out-dir", tab.out_dir)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << CONCENTRATION_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*predict_cmd) return cmd_predict(predict_opts, out, err);
    if (*sim_cmd) return cmd_simulate(sim, *sim_cmd, out, err);
    if (*ver_cmd) return cmd_verify(ver, out, err);
    if (*diag_cmd) return cmd_diagnose(diag, out, err);
    if (*tab_cmd) return cmd_table(tab, out, err);
  } catch (const AssumptionViolation& e) {
    err << "assumption violation: " << e.what() << "\n";
    return kAssumption;
  } catch (const DegenerateDistribution& e) {
    err << "degenerate distribution: " << e.what() << "\n";
    return kAssumption;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidSpec& e) {
    err << "invalid distribution: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace conc::cli
