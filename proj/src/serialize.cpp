#include "concentration/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "concentration/dataset.hpp"
#include "concentration/errors.hpp"

namespace conc {

namespace {

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

template <typename T>
json optional_number(const std::optional<T>& v) {
  if (v) return number_or_null(static_cast<double>(*v));
  return nullptr;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

DistributionSpec distribution_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw InvalidSpec("distribution must be an object with a string 'family'");
  const auto family = j["family"].get<std::string>();
  if (family == "uniform01" || family == "uniform") return DistributionSpec::uniform01();
  if (family == "normal" || family == "standard_normal") return DistributionSpec::standard_normal();
  if (family == "mixture") {
    const double offset = j.value("offset", 1.0);
    return DistributionSpec::gaussian_mixture(offset);
  }
  if (family == "empirical") {
    if (j.contains("values")) {
      if (!j["values"].is_array()) throw InvalidSpec("empirical 'values' must be an array");
      return DistributionSpec::empirical(j["values"].get<std::vector<double>>(),
                                         j.value("description", "empirical (inline values)"));
    }
    if (j.contains("path") && j["path"].is_string()) {
      std::filesystem::path path = j["path"].get<std::string>();
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      return DistributionSpec::empirical(read_values_csv(path.string()),
                                         "empirical:" + j["path"].get<std::string>());
    }
    throw InvalidSpec("empirical distribution needs 'path' or 'values'");
  }
  throw InvalidSpec("unknown distribution family '" + family + "'");
}

json to_json(const DistributionSpec& spec) {
  json j;
  j["family"] = std::string(to_string(spec.family()));
  if (spec.family() == Family::GaussianMixtureSym) j["offset"] = spec.offset();
  if (spec.family() == Family::Empirical) {
    j["size"] = spec.values().size();
    std::string bytes(reinterpret_cast<const char*>(spec.values().data()),
                      spec.values().size() * sizeof(double));
    j["fingerprint"] = fnv1a_hex(bytes);
  }
  j["description"] = spec.description();
  return j;
}

json to_json(const MomentPair& m) {
  return json{{"p", m.p},
              {"mu_p", m.mu_p},
              {"sigma_p", m.sigma_p},
              {"method", std::string(to_string(m.method))},
              {"abs_error_bound", m.abs_error_bound},
              {"variance_clamped", m.variance_clamped}};
}

json to_json(const AssumptionCheck& c) {
  return json{{"proposition", std::string(to_string(c.proposition))},
              {"p", c.p},
              {"required_order", c.required_order},
              {"holds", std::string(to_string(c.holds))},
              {"note", c.note}};
}

json to_json(const PredictionReport& r) {
  json checks = json::array();
  for (const auto& c : r.assumption_checks) checks.push_back(to_json(c));
  return json{{"p", r.p},
              {"d", r.d},
              {"mu_p", r.mu_p},
              {"sigma_p", r.sigma_p},
              {"mean_leading", number_or_null(r.mean_leading)},
              {"mean_second_order", number_or_null(r.mean_second_order)},
              {"var_leading", number_or_null(r.var_leading)},
              {"rsd_scaled_limit", number_or_null(r.rsd_scaled_limit)},
              {"leading_order", r.leading_order},
              {"assumption_checks", checks}};
}

json to_json(const BoundReport& b) {
  return json{{"epsilon", b.epsilon},
              {"chebyshev_bound", number_or_null(b.chebyshev_bound)},
              {"chebyshev_bound_clamped", number_or_null(b.chebyshev_bound_clamped)},
              {"mcdiarmid_bound", optional_number(b.mcdiarmid_bound)},
              {"support_bound_C", optional_number(b.support_bound_C)},
              {"leading_order", b.leading_order}};
}

json to_json(const KsReport& k) {
  return json{{"statistic", k.statistic},
              {"sample_size", k.sample_size},
              {"reference_law", k.reference_law},
              {"pass_threshold", k.pass_threshold},
              {"verdict", k.verdict}};
}

json to_json(const RateFit& f) {
  json pts = json::array();
  for (const auto& [x, y] : f.points) pts.push_back(json::array({x, y}));
  return json{{"points", pts},
              {"slope", f.slope},
              {"intercept", f.intercept},
              {"slope_stderr", number_or_null(f.slope_stderr)}};
}

json to_json(const GumbelConstants& g) {
  return json{{"n", g.n}, {"a_n", g.a_n}, {"b_n", g.b_n}};
}

json to_json(const SimulationConfig& c) {
  json j;
  j["spec"] = to_json(c.spec);
  j["p"] = c.p;
  if (c.d_values.size() == 1)
    j["d"] = c.d_values.front();
  else
    j["d"] = c.d_values;
  if (c.n.is_fixed())
    j["n"] = c.n(1);
  else
    j["n"] = json{{"rule", "power"}, {"exponent", c.n.exponent()}, {"coefficient", c.n.coefficient()}};
  j["replicates"] = c.replicates;
  j["master_seed"] = c.master_seed;
  j["statistic"] = std::string(to_string(c.statistic));
  j["force"] = c.force;
  j["workers"] = c.workers;
  j["sample_cap"] = c.sample_cap;
  j["keep_all_samples"] = c.keep_all_samples;
  j["memory_budget_bytes"] = c.memory_budget_bytes;
  return j;
}

SimulationConfig simulation_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InvalidInput("simulation config must be a JSON object");
  SimulationConfig c;
  try {
    if (j.contains("spec")) c.spec = distribution_from_json(j["spec"], base_dir);
    c.p = j.value("p", c.p);
    if (j.contains("d")) {
      if (j["d"].is_array())
        c.d_values = j["d"].get<std::vector<std::uint64_t>>();
      else
        c.d_values = {j["d"].get<std::uint64_t>()};
    }
    if (j.contains("n")) {
      const auto& n = j["n"];
      if (n.is_number_integer()) {
        c.n = SampleSizeRule::fixed(n.get<std::uint64_t>());
      } else if (n.is_object()) {
        c.n = SampleSizeRule::power(n.at("exponent").get<double>(), n.value("coefficient", 1.0));
      } else {
        throw InvalidInput("'n' must be an integer or a {rule, exponent, coefficient} object");
      }
    }
    c.replicates = j.value("replicates", c.replicates);
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("statistic")) {
      const auto s = parse_statistic(j["statistic"].get<std::string>());
      if (!s) throw InvalidInput("unknown statistic '" + j["statistic"].get<std::string>() + "'");
      c.statistic = *s;
    }
    c.force = j.value("force", c.force);
    c.workers = j.value("workers", c.workers);
    c.sample_cap = j.value("sample_cap", c.sample_cap);
    c.keep_all_samples = j.value("keep_all_samples", c.keep_all_samples);
    c.memory_budget_bytes = j.value("memory_budget_bytes", c.memory_budget_bytes);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad simulation config: ") + e.what());
  }
  return c;
}

json to_json(const SimulationResult& r) {
  json j;
  j["config"] = to_json(r.config);
  j["d"] = r.d;
  j["n"] = r.n;
  j["count"] = r.count;
  j["dropped"] = r.dropped;
  j["mean"] = number_or_null(r.mean);
  j["variance"] = number_or_null(r.variance);
  j["standard_error"] = number_or_null(r.standard_error());
  j["samples_stored"] = r.empirical_samples.size();
  j["samples_thinned"] = r.samples_thinned;
  j["seed_provenance"] = json{{"master_seed", r.config.master_seed},
                              {"stream_id_first", r.stream_id_first},
                              {"stream_id_count", r.count + r.dropped}};
  j["moments"] = r.moments ? to_json(*r.moments) : json(nullptr);
  j["tags"] = r.tags;
  j["warnings"] = r.warnings;
  return j;
}

json table_metadata(const LimitLawTable& t) {
  json j;
  j["law"] = law_name(t.law);
  j["n"] = t.law == LawKind::GumbelSum ? json(nullptr) : json(t.n);
  j["quad_error"] = t.quad_error;
  j["empirical"] = t.empirical;
  j["seed"] = t.seed ? json(*t.seed) : json(nullptr);
  j["samples"] = t.samples ? json(*t.samples) : json(nullptr);
  j["points"] = t.grid.size();
  return j;
}

void write_samples_csv(std::ostream& out, std::span<const double> samples,
                       const std::string& column) {
  out << column << '\n';
  for (double v : samples) out << format_double(v) << '\n';
}

void write_table_csv(std::ostream& out, const LimitLawTable& t) {
  out << "x,cdf\n";
  for (std::size_t i = 0; i < t.grid.size(); ++i)
    out << format_double(t.grid[i]) << ',' << format_double(t.cdf_values[i]) << '\n';
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace conc
