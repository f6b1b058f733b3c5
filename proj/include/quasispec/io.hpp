#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "quasispec/analysis.hpp"
#include "quasispec/atomic_measure.hpp"
#include "quasispec/dynamics.hpp"
#include "quasispec/measures.hpp"

namespace quasispec::io {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// CSV text with a header row and LF line endings.
std::string measure_csv(const AtomicMeasure& m);         // position,weight
std::string trace_csv(const FourierTrace& trace);        // xi,re,im,abs
std::string amplitude_csv(const AmplitudeSeries& series); // t,re,im,abs

nlohmann::json to_json(const AtomicMeasure& m);
nlohmann::json to_json(const DecayFit& fit);
nlohmann::json to_json(std::span<const BlockMaximum> blocks);

/// Writes `contents` to `path`; throws IoError when the directory does not
/// exist or the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Parses "site:re[:im],site:re[:im],..." or, with a leading '@', a JSON file
/// holding [{"site": n, "re": x, "im": y}, ...] ("im" optional).
SparseState parse_state(std::string_view text);
SparseState state_from_json(const nlohmann::json& j);

}  // namespace quasispec::io
