#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "quasispec/error.hpp"
#include "quasispec/io.hpp"

using namespace quasispec;

TEST_CASE("format_double round trips") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-2.0) == "-2");
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -1e-300}) CHECK(std::stod(io::format_double(x)) == x);
}

TEST_CASE("csv writers") {
  const AtomicMeasure m({{0.0, 0.25}, {0.5, 0.75}});
  CHECK(io::measure_csv(m) == "position,weight\n0,0.25\n0.5,0.75\n");

  FourierTrace tr{{0.0, 1.0}, {{1.0, 0.0}, {0.0, -2.0}}};
  CHECK(io::trace_csv(tr) == "xi,re,im,abs\n0,1,0,1\n1,0,-2,2\n");

  AmplitudeSeries s{{2.5}, {{3.0, 4.0}}};
  CHECK(io::amplitude_csv(s) == "t,re,im,abs\n2.5,3,4,5\n");
}

TEST_CASE("json writers") {
  const auto j = io::to_json(AtomicMeasure({{1.0, 1.0}}));
  CHECK(j["atom_count"] == 1);
  CHECK(j["total_mass"] == 1.0);
  CHECK(j["atoms"][0][0] == 1.0);

  DecayFit fit;
  fit.epsilon = 0.3;
  fit.window_min = 10.0;
  fit.window_max = 100.0;
  fit.block_maxima.push_back({20.0, 15.0, 25.0, 0.5});
  const auto f = io::to_json(fit);
  CHECK(f["epsilon"] == 0.3);
  CHECK(f["window"][1] == 100.0);
  CHECK(f["block_maxima"][0]["value"] == 0.5);
}

TEST_CASE("write_file") {
  const auto dir = std::filesystem::temp_directory_path() / "quasispec_io_test";
  std::filesystem::create_directories(dir);
  io::write_file(dir / "a.txt", "hello");
  std::ifstream in(dir / "a.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "hello");
  CHECK_THROWS_AS(io::write_file(dir / "missing" / "a.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("parse_state") {
  const auto s = io::parse_state("0:1,-2:0.5:-0.25");
  REQUIRE(s.size() == 2);
  CHECK(s[0].site == 0);
  CHECK(s[0].value == std::complex<double>(1.0, 0.0));
  CHECK(s[1].site == -2);
  CHECK(s[1].value == std::complex<double>(0.5, -0.25));

  CHECK_THROWS_AS(io::parse_state("0"), ConfigError);
  CHECK_THROWS_AS(io::parse_state("a:1"), ConfigError);
  CHECK_THROWS_AS(io::parse_state("0:1,"), ConfigError);
  CHECK_THROWS_AS(io::parse_state("0:nan"), ConfigError);
  CHECK_THROWS_AS(io::parse_state("@/nonexistent/state.json"), IoError);

  const auto path = std::filesystem::temp_directory_path() / "quasispec_state.json";
  {
    std::ofstream out(path);
    out << R"([{"site": 3, "re": 0.5}, {"site": -1, "re": 0, "im": 1}])";
  }
  const auto f = io::parse_state("@" + path.string());
  REQUIRE(f.size() == 2);
  CHECK(f[0].site == 3);
  CHECK(f[1].value == std::complex<double>(0.0, 1.0));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::state_from_json(nlohmann::json::object()), ConfigError);
}
