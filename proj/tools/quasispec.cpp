// Command-line driver: dos, decay, average, tensor-check, report.

#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasispec/analysis.hpp"
#include "quasispec/dynamics.hpp"
#include "quasispec/error.hpp"
#include "quasispec/io.hpp"
#include "quasispec/measures.hpp"
#include "quasispec/pipeline.hpp"
#include "quasispec/spectral.hpp"

namespace fs = std::filesystem;
using namespace quasispec;
using nlohmann::json;

namespace {

struct RunConfig {
  double coupling = 0.5;
  int half_width = 2000;
  double phase = 0.0;
  double t_max = 1024.0;
  double xi_max = 1000.0;
  std::size_t xi_points = 20001;
  std::size_t t_points = 20481;
  int blocks_per_decade = kDefaultBlocksPerDecade;
  double bin_width = 0.0;  // 0: default_bin_width(V)
  std::string psi = "0:1";
  std::string phi = "0:1";
  std::string out = ".";
  std::string format = "csv";
  unsigned threads = 0;  // 0: QUASISPEC_THREADS or 1
  std::uint64_t seed = 1;
  std::string method = "auto";
  std::string measure = "dos";
  std::string t_grid = "linear";
  std::string instance = "random";
  int factors = 2;
  int dimension = 2;
  double fit_start = kDefaultFitStart;

  [[nodiscard]] ModelParams params() const {
    ModelParams p;
    p.coupling = coupling;
    p.half_width = half_width;
    p.phase = phase;
    p.validate();
    return p;
  }
  [[nodiscard]] bool json_format() const { return format == "json"; }
};

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QUASISPEC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw ConfigError("QUASISPEC_THREADS must be a positive integer");
  }
  return 1;
}

void check_output_dir(const RunConfig& cfg) {
  if (!fs::is_directory(cfg.out)) throw IoError("output directory does not exist: " + cfg.out);
}

void write(const RunConfig& cfg, const std::string& name, const std::string& text) {
  const fs::path path = fs::path(cfg.out) / name;
  io::write_file(path, text);
  std::cerr << "wrote " << path.string() << '\n';
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) { write(cfg, name, j.dump(2) + "\n"); }

json config_json(const RunConfig& cfg) {
  return {{"coupling", cfg.coupling}, {"half_width", cfg.half_width}, {"phase", cfg.phase},
          {"t_max", cfg.t_max},       {"xi_max", cfg.xi_max},         {"xi_points", cfg.xi_points},
          {"t_points", cfg.t_points}, {"blocks_per_decade", cfg.blocks_per_decade},
          {"seed", cfg.seed},         {"threads", cfg.threads},       {"method", cfg.method}};
}

std::vector<double> xi_grid(const RunConfig& cfg) {
  if (!(cfg.xi_max > 0.0)) throw ConfigError("--xi-max must be positive");
  return linear_grid(0.0, cfg.xi_max, cfg.xi_points);
}

std::vector<double> t_grid(const RunConfig& cfg) {
  if (!(cfg.t_max > 0.0)) throw ConfigError("--t-max must be positive");
  if (cfg.t_grid == "log") {
    auto grid = log_grid(cfg.t_max / std::pow(10.0, 4.0), cfg.t_max, cfg.t_points - 1);
    grid.insert(grid.begin(), 0.0);
    return grid;
  }
  return linear_grid(0.0, cfg.t_max, cfg.t_points);
}

std::string blocks_csv(std::span<const BlockMaximum> blocks) {
  std::string out = "center,left,right,value\n";
  for (const auto& b : blocks)
    out += io::format_double(b.center) + ',' + io::format_double(b.left) + ',' + io::format_double(b.right) + ',' +
           io::format_double(b.value) + '\n';
  return out;
}

json l2_json(const L2Evidence& l2) {
  return {{"power", l2.power}, {"cutoffs", l2.cutoffs}, {"integrals", l2.integrals}, {"final_ratio", l2.final_ratio}};
}

json escape_json(const EscapeOfMass& e) {
  return {{"block_maxima", io::to_json(std::span<const BlockMaximum>(e.blocks))},
          {"strictly_decreasing", e.strictly_decreasing},
          {"last_over_first", e.last_over_first}};
}

// dos: DOS (or the single-phase site measure) as CSV/JSON plus a summary.
void cmd_dos(const RunConfig& cfg) {
  check_output_dir(cfg);
  const auto p = cfg.params();
  AtomicMeasure measure;
  json summary;
  if (cfg.measure == "site") {
    measure = site_spectral_measure(build_hamiltonian(p), 0, model_coalesce_tolerance(p.coupling));
    summary["measure"] = "site";
  } else {
    DensityOfStatesOptions opts;
    opts.threads = cfg.threads;
    auto dos = density_of_states(p, opts);
    measure = std::move(dos.measure);
    summary["measure"] = "dos";
    summary["breakpoint_count"] = dos.breakpoint_count;
    summary["distinct_problems"] = dos.distinct_problems;
  }
  summary["total_mass"] = measure.total_mass();
  summary["dropped_mass"] = measure.dropped_mass();
  summary["atom_count"] = measure.size();
  summary["config"] = config_json(cfg);
  if (cfg.json_format()) {
    write_json(cfg, "dos.json", io::to_json(measure));
  } else {
    write(cfg, "dos.csv", io::measure_csv(measure));
  }
  write_json(cfg, "dos_summary.json", summary);
}

// decay: Fourier trace of the DOS and the fitted decay exponent.
void cmd_decay(const RunConfig& cfg) {
  check_output_dir(cfg);
  const auto grid = xi_grid(cfg);
  const auto res = decay_pipeline(cfg.params(), grid, parse_trace_method(cfg.method), cfg.blocks_per_decade,
                                  cfg.threads, cfg.fit_start, cfg.xi_max);
  json fit = io::to_json(res.fit);
  fit["method"] = std::string(to_string(res.method));
  fit["config"] = config_json(cfg);
  if (cfg.json_format()) {
    json trace = json::array();
    for (std::size_t i = 0; i < res.trace.xi.size(); ++i)
      trace.push_back({res.trace.xi[i], res.trace.values[i].real(), res.trace.values[i].imag()});
    write_json(cfg, "trace.json", {{"columns", {"xi", "re", "im"}}, {"rows", trace}});
  } else {
    write(cfg, "trace.csv", io::trace_csv(res.trace));
  }
  write_json(cfg, "fit.json", fit);
  std::cout << "epsilon " << io::format_double(res.fit.epsilon) << " stderr "
            << io::format_double(res.fit.stderr_epsilon) << '\n';
}

// average: phase-averaged amplitude of the configured psi, phi.
void cmd_average(const RunConfig& cfg) {
  check_output_dir(cfg);
  const auto psi = io::parse_state(cfg.psi);
  const auto phi = io::parse_state(cfg.phi);
  AverageOptions opts;
  opts.threads = cfg.threads;
  const auto series = phase_averaged_amplitude(psi, phi, t_grid(cfg), cfg.params(), opts);
  if (cfg.json_format()) {
    json rows = json::array();
    for (std::size_t i = 0; i < series.t.size(); ++i)
      rows.push_back({series.t[i], series.values[i].real(), series.values[i].imag()});
    write_json(cfg, "amplitude.json", {{"columns", {"t", "re", "im"}}, {"rows", rows}, {"config", config_json(cfg)}});
  } else {
    write(cfg, "amplitude.csv", io::amplitude_csv(series));
  }
}

// tensor-check: direct tensor spectral measure against the convolution of factors.
void cmd_tensor_check(const RunConfig& cfg) {
  check_output_dir(cfg);
  std::vector<Eigen::MatrixXd> factors;
  std::vector<Eigen::VectorXcd> states;
  if (cfg.instance == "free-pair") {
    Eigen::MatrixXd x(2, 2);
    x << 0, 1, 1, 0;
    const Eigen::VectorXcd e0 = Eigen::VectorXcd::Unit(2, 0);
    factors = {x, x};
    states = {e0, e0};
  } else if (cfg.instance == "random") {
    if (cfg.factors < 1 || cfg.dimension < 1) throw ConfigError("--factors and --dimension must be positive");
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g;
    for (int k = 0; k < cfg.factors; ++k) {
      Eigen::MatrixXd a(cfg.dimension, cfg.dimension);
      for (int i = 0; i < cfg.dimension; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
      Eigen::VectorXcd v(cfg.dimension);
      for (int i = 0; i < cfg.dimension; ++i) v(i) = {g(rng), g(rng)};
      factors.push_back(a);
      states.push_back(v.normalized());
    }
  } else {
    throw ConfigError("--instance must be random or free-pair");
  }
  const double discrepancy = tensor_spectral_check(factors, states);
  const bool pass = discrepancy <= 1e-9;
  write_json(cfg, "tensor_check.json",
             {{"instance", cfg.instance},
              {"factors", factors.size()},
              {"dimension", factors.front().rows()},
              {"seed", cfg.seed},
              {"max_discrepancy", discrepancy},
              {"tolerance", 1e-9},
              {"pass", pass}});
  std::cout << (pass ? "pass" : "fail") << " max_discrepancy " << io::format_double(discrepancy) << '\n';
}

// report: DOS summary, decay fit, L2 evidence and escape of mass in one bundle.
void cmd_report(const RunConfig& cfg) {
  check_output_dir(cfg);
  const auto p = cfg.params();
  const auto method = resolve_method(parse_trace_method(cfg.method), p);
  const auto grid = xi_grid(cfg);

  json dos_summary{{"breakpoint_count", phase_partition(p).breakpoints.size()}};
  std::optional<AtomicMeasure> dos;
  if (method == TraceMethod::exact) {
    DensityOfStatesOptions opts;
    opts.threads = cfg.threads;
    auto d = density_of_states(p, opts);
    dos_summary["atom_count"] = d.measure.size();
    dos_summary["total_mass"] = d.measure.total_mass();
    dos_summary["distinct_problems"] = d.distinct_problems;
    dos = std::move(d.measure);
  }

  const auto decay = decay_pipeline(p, grid, method, cfg.blocks_per_decade, cfg.threads, cfg.fit_start, cfg.xi_max);
  if (!dos) dos_summary["total_mass"] = decay.trace.values.front().real();

  json report{{"config", config_json(cfg)}, {"method", std::string(to_string(method))}, {"dos", dos_summary}};
  json fit = io::to_json(decay.fit);
  report["fit"] = fit;

  std::optional<L2Evidence> l2;
  if (decay.fit.epsilon > 0.0) {
    const std::vector<double> cutoffs{cfg.xi_max / 4.0, cfg.xi_max / 2.0, cfg.xi_max};
    l2 = l2_evidence(decay.trace, decay.fit.epsilon, cutoffs);
    report["min_power_for_l2"] = l2->power;
    report["l2"] = l2_json(*l2);
    if (dos) {
      const double h = cfg.bin_width > 0.0 ? cfg.bin_width : default_bin_width(p.coupling);
      const auto power = convolution_power(*dos, l2->power, ConvolutionMode::binned, h);
      report["convolution_power"] = {{"power", l2->power},
                                     {"bin_width", h},
                                     {"atom_count", power.size()},
                                     {"total_mass", power.total_mass()},
                                     {"dropped_mass", power.dropped_mass()}};
    }
  } else {
    report["min_power_for_l2"] = nullptr;
  }

  AverageOptions opts;
  opts.threads = cfg.threads;
  const SparseState origin{{0, 1.0}};
  const auto series = phase_averaged_amplitude(origin, origin, t_grid(cfg), p, opts);
  // Dyadic windows [2^j, 2^(j+1)) for j = 2..9, limited to those inside [0, t_max].
  const int j_max = std::min(9, static_cast<int>(std::floor(std::log2(cfg.t_max))) - 1);
  if (j_max < 3) throw ConfigError("--t-max must be at least 16 for the escape-of-mass section");
  const auto escape = escape_of_mass(series, 2, j_max);
  report["escape_of_mass"] = escape_json(escape);

  if (cfg.json_format()) {
    write_json(cfg, "report.json", report);
    return;
  }
  write_json(cfg, "report_summary.json", report);
  write(cfg, "report_trace.csv", io::trace_csv(decay.trace));
  write(cfg, "report_fit_blocks.csv", blocks_csv(decay.fit.block_maxima));
  write(cfg, "report_escape_blocks.csv", blocks_csv(escape.blocks));
  if (l2) {
    std::string text = "cutoff,integral\n";
    for (std::size_t i = 0; i < l2->cutoffs.size(); ++i)
      text += io::format_double(l2->cutoffs[i]) + ',' + io::format_double(l2->integrals[i]) + '\n';
    write(cfg, "report_l2.csv", text);
  }
  if (dos) write(cfg, "report_dos.csv", io::measure_csv(*dos));
}

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--coupling", cfg.coupling, "Coupling V >= 0")->capture_default_str();
  app->add_option("--half-width", cfg.half_width, "Truncation half width L (sites -L..L)")->capture_default_str();
  app->add_option("--phase", cfg.phase, "Phase omega in [0, 1)")->capture_default_str();
  app->add_option("--out", cfg.out, "Existing output directory")->capture_default_str();
  app->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app->add_option("--threads", cfg.threads, "Worker threads (default: QUASISPEC_THREADS or 1)");
  app->add_option("--seed", cfg.seed, "Seed for randomized instances")->capture_default_str();
}

void add_xi(CLI::App* app, RunConfig& cfg) {
  app->add_option("--xi-max", cfg.xi_max, "Largest frequency")->capture_default_str();
  app->add_option("--xi-points", cfg.xi_points, "Points of the linear frequency grid on [0, xi-max]")
      ->capture_default_str();
  app->add_option("--blocks-per-decade", cfg.blocks_per_decade, "Envelope blocks per decade")->capture_default_str();
  app->add_option("--fit-start", cfg.fit_start, "Left end of the fit window")->capture_default_str();
  app->add_option("--method", cfg.method, "DOS transform: exact, moments or auto")
      ->check(CLI::IsMember({"exact", "moments", "auto"}))
      ->capture_default_str();
}

void add_t(CLI::App* app, RunConfig& cfg) {
  app->add_option("--t-max", cfg.t_max, "Largest time")->capture_default_str();
  app->add_option("--t-points", cfg.t_points, "Points of the time grid")->capture_default_str();
  app->add_option("--t-grid", cfg.t_grid, "Time grid spacing")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Fibonacci Hamiltonian spectral and dynamical experiments"};
  app.require_subcommand(1);

  auto* dos = app.add_subcommand("dos", "Density of states (CSV/JSON) with a JSON summary");
  add_common(dos, cfg);
  dos->add_option("--measure", cfg.measure, "dos (phase average) or site (spectral measure of delta_0 at --phase)")
      ->check(CLI::IsMember({"dos", "site"}))
      ->capture_default_str();

  auto* decay = app.add_subcommand("decay", "Fourier trace of the DOS and decay-exponent fit");
  add_common(decay, cfg);
  add_xi(decay, cfg);

  auto* average = app.add_subcommand("average", "Phase-averaged amplitude <exp(itH) psi, phi>");
  add_common(average, cfg);
  add_t(average, cfg);
  average->add_option("--psi", cfg.psi, "State as site:re[:im],... or @file.json")->capture_default_str();
  average->add_option("--phi", cfg.phi, "State as site:re[:im],... or @file.json")->capture_default_str();

  auto* tensor = app.add_subcommand("tensor-check", "Tensor spectral measure against convolution of factors");
  add_common(tensor, cfg);
  tensor->add_option("--instance", cfg.instance, "random or free-pair")->capture_default_str();
  tensor->add_option("--factors", cfg.factors, "Number of random factors")->capture_default_str();
  tensor->add_option("--dimension", cfg.dimension, "Dimension of each random factor")->capture_default_str();

  auto* report = app.add_subcommand("report", "DOS summary, decay fit, L2 evidence and escape of mass");
  add_common(report, cfg);
  add_xi(report, cfg);
  add_t(report, cfg);
  report->add_option("--bin-width", cfg.bin_width, "Lattice spacing for binned convolution (default 1e-4(4+2V))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.threads = resolve_threads(cfg.threads);
    if (dos->parsed()) cmd_dos(cfg);
    if (decay->parsed()) cmd_decay(cfg);
    if (average->parsed()) cmd_average(cfg);
    if (tensor->parsed()) cmd_tensor_check(cfg);
    if (report->parsed()) cmd_report(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
