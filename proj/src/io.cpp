#include "quasispec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "quasispec/error.hpp"

namespace quasispec::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void append_row(std::string& out, std::initializer_list<double> fields) {
  bool first = true;
  for (double f : fields) {
    if (!first) out += ',';
    out += format_double(f);
    first = false;
  }
  out += '\n';
}

template <class Grid, class Values>
std::string complex_csv(std::string_view header, const Grid& grid, const Values& values) {
  std::string out(header);
  out += '\n';
  for (std::size_t i = 0; i < grid.size(); ++i)
    append_row(out, {grid[i], values[i].real(), values[i].imag(), std::abs(values[i])});
  return out;
}

}  // namespace

std::string measure_csv(const AtomicMeasure& m) {
  std::string out = "position,weight\n";
  for (const auto& a : m.atoms()) append_row(out, {a.position, a.weight});
  return out;
}

std::string trace_csv(const FourierTrace& trace) { return complex_csv("xi,re,im,abs", trace.xi, trace.values); }

std::string amplitude_csv(const AmplitudeSeries& series) {
  return complex_csv("t,re,im,abs", series.t, series.values);
}

nlohmann::json to_json(const AtomicMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : m.atoms()) atoms.push_back({a.position, a.weight});
  return {{"total_mass", m.total_mass()}, {"dropped_mass", m.dropped_mass()}, {"atom_count", m.size()},
          {"atoms", std::move(atoms)}};
}

nlohmann::json to_json(std::span<const BlockMaximum> blocks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : blocks)
    out.push_back({{"center", b.center}, {"left", b.left}, {"right", b.right}, {"value", b.value}});
  return out;
}

nlohmann::json to_json(const DecayFit& fit) {
  return {{"epsilon", fit.epsilon},
          {"intercept", fit.intercept},
          {"window", {fit.window_min, fit.window_max}},
          {"stderr", fit.stderr_epsilon},
          {"block_maxima", to_json(std::span<const BlockMaximum>(fit.block_maxima))}};
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  const auto dir = path.parent_path();
  if (!dir.empty() && !std::filesystem::is_directory(dir))
    throw IoError("output directory does not exist: " + dir.string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

double parse_number(std::string_view s, std::string_view what) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value))
    throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  return value;
}

long parse_site(std::string_view s) {
  long value = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("cannot parse site index from '" + std::string(s) + "'");
  return value;
}

}  // namespace

SparseState state_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("state JSON must be an array of {site, re, im} objects");
  SparseState state;
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("site") || !entry.contains("re"))
      throw ConfigError("state entries need 'site' and 're'");
    const double im = entry.contains("im") ? entry.at("im").get<double>() : 0.0;
    state.push_back({entry.at("site").get<long>(), {entry.at("re").get<double>(), im}});
  }
  return state;
}

SparseState parse_state(std::string_view text) {
  if (!text.empty() && text.front() == '@') {
    const std::string path(text.substr(1));
    std::ifstream in(path);
    if (!in) throw IoError("cannot read state file: " + path);
    try {
      return state_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("invalid state file " + path + ": " + e.what());
    }
  }
  SparseState state;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    if (item.empty()) throw ConfigError("empty entry in state list");
    const std::size_t c1 = item.find(':');
    if (c1 == std::string_view::npos) throw ConfigError("state entries look like site:re[:im], got '" + std::string(item) + "'");
    const std::size_t c2 = item.find(':', c1 + 1);
    const long site = parse_site(item.substr(0, c1));
    const double re = parse_number(item.substr(c1 + 1, c2 == std::string_view::npos ? std::string_view::npos : c2 - c1 - 1), "amplitude");
    const double im = c2 == std::string_view::npos ? 0.0 : parse_number(item.substr(c2 + 1), "amplitude");
    state.push_back({site, {re, im}});
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return state;
}

}  // namespace quasispec::io
