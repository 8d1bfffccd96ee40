#pragma once

#include <string>

#include <json.hpp>

#include "homoglab/calculus.hpp"
#include "homoglab/corrector.hpp"
#include "homoglab/extraction.hpp"
#include "homoglab/harness.hpp"

namespace homoglab {

using Json = nlohmann::ordered_json;

/// Deterministic JSON writer: keys in insertion order, every floating-point
/// number rendered with 17 significant digits (%.17g).
std::string dump_json(const Json& j, int indent = 2);

/// %.17g rendering of one double (matches dump_json).
std::string format_double(double v);

Json to_json(const NormReport& r);
Json to_json(const DecayFit& r);
Json to_json(const Decomposition& r);
Json to_json(const GnsReport& r);
Json to_json(const HomogenizedTensor& r);
Json to_json(const SolveStats& r);
Json to_json(const DefectCorrector& r);
Json to_json(const FixedPointResult& r);
Json to_json(const SweepReport& r);
Json to_json(const SubsequenceReport& r);
Json to_json(const Counterexample2DResult& r);

void write_text_file(const std::string& path, const std::string& content);

/// CSV table: one row per ε (SweepReport) or per n (SubsequenceReport).
std::string sweep_csv(const SweepReport& r);
std::string subsequence_csv(const SubsequenceReport& r);

/// Plot-ready two-column data "ln_eps ln_err" for the chosen error series.
std::string sweep_plot_data(const SweepReport& r);

} // namespace homoglab
