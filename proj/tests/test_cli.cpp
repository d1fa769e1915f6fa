#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwave/cli.hpp"
#include "support.hpp"

using namespace cwave;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cwave");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cli spectra") {
  const auto r = cli({"spectra", "--n", "5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["zero_eig_present"] == true);
  CHECK(cli({"spectra", "--n", "1"}).code == 1);
  CHECK(cli({"spectra", "--n", "65"}).code == 1);
}

TEST_CASE("cli convergence reproduces the first table rows") {
  const auto r = cli({"convergence", "example1", "--grids", "1/10,1/16"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "h,tau,E,order");
  const auto field = [](const std::string& row, int idx) {
    std::stringstream ss(row);
    std::string item;
    for (int i = 0; i <= idx; ++i) std::getline(ss, item, ',');
    return std::stod(item);
  };
  CHECK(field(row1, 2) == doctest::Approx(7.6115e-05).epsilon(0.05));
  CHECK(field(row2, 2) == doctest::Approx(9.5211e-06).epsilon(0.05));
  CHECK(field(row2, 3) == doctest::Approx(4.4228).epsilon(0.3 / 4.4228));
  CHECK(cli({"convergence", "example2", "--grids", "1/10"}).err.find("no analytic solution") !=
        std::string::npos);
  CHECK(cli({"convergence", "example1", "--grids", "1/7x"}).code == 1);
}

TEST_CASE("cli stability") {
  const auto dir = testing::scratch_dir("cli_stab");
  std::ofstream(dir / "s.cfg") << "preset = \"example2\"\n[grid]\nh = \"1/40\"\n";
  const auto r = cli({"stability", (dir / "s.cfg").string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["tau_over_h"].get<double>() == doctest::Approx(0.1));
  CHECK(j["threshold"].get<double>() == doctest::Approx(2.0 / (3 * std::sqrt(3.0))));
}

TEST_CASE("cli usage errors") {
  const auto none = cli({});
  CHECK(none.code == 1);
  CHECK(none.err.find("error:") == 0);
  const auto unknown = cli({"frobnicate"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("run") != std::string::npos);
  CHECK(cli({"spectra", "--n", "4", "--bogus"}).code == 1);
  CHECK(cli({"run", "/nonexistent.cfg"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
  const auto presets = cli({"presets"});
  CHECK(presets.code == 0);
  CHECK(presets.out.find("example4-synthetic") != std::string::npos);
}

TEST_CASE("cli run writes snapshots and energy") {
  const auto dir = testing::scratch_dir("cli_run");
  std::ofstream(dir / "r.cfg") << R"(preset = "example2"
[grid]
h = 0.1
[time]
t_end = 0.1
[energy]
enabled = true
[output]
snapshot_every = 5
)";
  const auto r = cli({"run", (dir / "r.cfg").string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["steps"] == 10);
  CHECK(j["snapshots"].size() == 3);
  CHECK(fs::exists(dir / "out" / "snap_000000.cwsnap"));
  CHECK(fs::exists(dir / "out" / "snap_000010.cwsnap"));
  CHECK(fs::exists(dir / "out" / "energy.csv"));
  CHECK_FALSE(j.contains("max_error"));
}

TEST_CASE("cli reports instability with exit code 2") {
  const auto dir = testing::scratch_dir("cli_blowup");
  std::ofstream(dir / "b.cfg") << R"(preset = "example2"
[grid]
h = 0.1
[time]
tau = 0.1
t_end = 20
[run]
cfl_override = true
)";
  const auto r = cli({"run", (dir / "b.cfg").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("instability detected at step") != std::string::npos);

  std::ofstream(dir / "c.cfg") << "preset = \"example2\"\n[grid]\nh = 0.1\n[time]\ntau = 0.1\n";
  const auto gate = cli({"run", (dir / "c.cfg").string()});
  CHECK(gate.code == 1);
  CHECK(gate.err.find("CFL violation") != std::string::npos);
}
