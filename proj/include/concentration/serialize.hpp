#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "concentration/asymptotics.hpp"
#include "concentration/distributions.hpp"
#include "concentration/goodness.hpp"
#include "concentration/limit_laws.hpp"
#include "concentration/montecarlo.hpp"

namespace conc {

using json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// {"family":"uniform01"}, {"family":"normal"}, {"family":"mixture","offset":1},
/// {"family":"empirical","path":"values.csv"} or {"family":"empirical","values":[...]}.
/// Relative paths resolve against base_dir.
DistributionSpec distribution_from_json(const json& j,
                                        const std::filesystem::path& base_dir = {});
json to_json(const DistributionSpec& spec);

json to_json(const MomentPair& m);
json to_json(const AssumptionCheck& c);
json to_json(const PredictionReport& r);
json to_json(const BoundReport& b);
json to_json(const KsReport& k);
json to_json(const RateFit& f);
json to_json(const GumbelConstants& g);

/// Same shape as accepted by simulation_config_from_json, except that an
/// empirical law is echoed by size and fingerprint instead of its values.
json to_json(const SimulationConfig& c);
SimulationConfig simulation_config_from_json(const json& j,
                                             const std::filesystem::path& base_dir = {});

/// Summary without the samples (those go to CSV).
json to_json(const SimulationResult& r);

/// Metadata sidecar of a tabulated law.
json table_metadata(const LimitLawTable& t);

/// One value per line after a single-column header.
void write_samples_csv(std::ostream& out, std::span<const double> samples,
                       const std::string& column = "value");
/// Columns x, cdf.
void write_table_csv(std::ostream& out, const LimitLawTable& t);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace conc
