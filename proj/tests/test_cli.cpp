#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavewall/cli.hpp"
#include "wavewall/trace.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  args.insert(args.begin(), "wavewall");
  const int code = wavewall::cli_dispatch(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kScenario = "schema_version: 1\nduration_s: 2\nevents:\n  - {t: 0, x: 0.375}\n";

}  // namespace

TEST_CASE("crc prints one hex byte") {
  const auto r = run({"crc", "313233343536373839"});
  CHECK(r.code == 0);
  CHECK(r.out == "0xF4\n");
  CHECK(run({"crc", "zz"}).code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"crc", "00", "--nope"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("simulate writes a trace that parses back") {
  const auto scen = temp("wavewall_cli.scenario");
  const auto trace = temp("wavewall_cli_trace.csv");
  std::ofstream(scen) << kScenario;
  auto r = run({"simulate", scen.string(), "--trace", trace.string()});
  REQUIRE(r.code == 0);
  const auto rows = wavewall::sim::parse_trace(slurp(trace));
  CHECK(rows.size() == 61);
  CHECK(rows.back().region == 1);

  r = run({"simulate", scen.string()});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(trace));

  r = run({"replay", trace.string(), "--fast"});
  CHECK(r.code == 0);
  CHECK(r.out.find("replayed 61 frames") != std::string::npos);

  std::ofstream(scen) << "schema_version: 1\nduration_s: 1\nbogus: 2\n";
  r = run({"simulate", scen.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
  std::filesystem::remove(scen);
  std::filesystem::remove(trace);
}

TEST_CASE("config file is honored and bad configs are reported") {
  const auto cfg = temp("wavewall_cli.yaml");
  const auto scen = temp("wavewall_cli2.scenario");
  std::ofstream(scen) << kScenario;
  std::ofstream(cfg) << "n_regions: 2\nm_panels: 2\n";
  auto r = run({"--config", cfg.string(), "simulate", scen.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.substr(0, r.out.find('\n')).find("base_2") == std::string::npos);

  std::ofstream(cfg) << "tick_hz: 500\n";
  r = run({"--config", cfg.string(), "simulate", scen.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("tick_hz") != std::string::npos);
  std::filesystem::remove(cfg);
  std::filesystem::remove(scen);
}

TEST_CASE("calibrate steps a servo from stdin and prints a snippet") {
  const auto r = run({"calibrate", "0", "--step", "10"}, "+\n++\nmin\n1800\nmax\nshow\ndone\n");
  CHECK(r.code == 0);
  CHECK(r.out.find("pulse_min = ") != std::string::npos);
  CHECK(r.out.find("pulse_max = 1800") != std::string::npos);
  CHECK(r.out.find("# servos[0]") != std::string::npos);
  CHECK(run({"calibrate", "99"}, "done\n").code == 1);
}

TEST_CASE("run with a tick limit over a file transport") {
  const auto cfg = temp("wavewall_cli_run.yaml");
  const auto out = temp("wavewall_cli_run.bin");
  const auto trace = temp("wavewall_cli_run.csv");
  std::filesystem::remove(out);
  std::ofstream(cfg) << "transport: {kind: file, path: " << out.string() << "}\n";
  const auto r = run({"--config", cfg.string(), "run", "--ticks", "5", "--trace", trace.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::file_size(out) > 0);
  CHECK(wavewall::sim::parse_trace(slurp(trace)).size() == 5);
  for (const auto& p : {cfg, out, trace}) std::filesystem::remove(p);
}
