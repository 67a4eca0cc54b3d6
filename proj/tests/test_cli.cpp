#include "gldpdq/cli.hpp"
#include "gldpdq/gld.hpp"

#include <catch_amalgamated.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace gldpdq;
using json = nlohmann::json;

namespace {

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path dir()
{
  static const auto d = [] {
    auto p = std::filesystem::temp_directory_path() / "gldpdq_cli_tests";
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
  }();
  return d;
}

std::string write_sample(const std::string& name, const GldParams& p, std::size_t n, std::uint64_t seed)
{
  const auto path = dir() / name;
  std::ofstream os(path);
  os << "id,value\n";
  const auto x = sample(p, n, seed);
  for (std::size_t i = 0; i < x.size(); ++i)
    os << i << ',' << fmt::format("{:.17g}", x[i]) << '\n';
  return path.string();
}

std::string write_text(const std::string& name, const std::string& text)
{
  const auto path = dir() / name;
  std::ofstream os(path, std::ios::binary);
  os << text;
  return path.string();
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json without_timing(json j)
{
  j.erase("elapsed_ms");
  return j;
}

} // namespace

TEST_CASE("usage")
{
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"fit", "--help"}).code == 0);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"fit"}).code == kExitUsage);
  CHECK(cli({"fit", "--input", "x.csv", "--bogus"}).code == kExitUsage);
  CHECK(cli({"--version"}).out == std::string(GLDPDQ_VERSION) + "\n");
}

TEST_CASE("fit command")
{
  const auto path = write_sample("uniform.csv", {0, 1, 1, 1}, 500, 1);
  const Run r = cli({"fit", "--input", path, "--header", "--column", "value"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  for (const char* key : {"lambda1", "lambda2", "lambda3", "lambda4", "objective", "J", "elapsed_ms", "warnings"})
    CHECK(j.contains(key));
  CHECK(j["J"] == 50);
  CHECK(j["objective"].get<double>() >= 0.0);

  const auto out = (dir() / "fit.json").string();
  const Run by_index = cli({"fit", "--input", path, "--header", "--column", "2", "--json-out", out});
  REQUIRE(by_index.code == 0);
  CHECK(without_timing(json::parse(slurp(out))) == without_timing(j));
}

// For uniform data at n = 500 the shape estimates have SD about 0.33 and an
// upward bias near 0.3, so the band holds for roughly 63% of samples.
// Reported, not gating.
TEST_CASE("fit command recovers uniform shapes", "[!mayfail]")
{
  const auto path = write_sample("uniform.csv", {0, 1, 1, 1}, 500, 1);
  const json j = json::parse(cli({"fit", "--input", path, "--header", "--column", "value"}).out);
  CHECK(j["lambda3"].get<double>() > 0.6);
  CHECK(j["lambda3"].get<double>() < 1.4);
  CHECK(j["lambda4"].get<double>() > 0.6);
  CHECK(j["lambda4"].get<double>() < 1.4);
}

TEST_CASE("fit errors")
{
  const auto path = write_sample("s.csv", {0, 1, 1, 1}, 50, 2);
  const Run missing = cli({"fit", "--input", path, "--header", "--column", "price"});
  CHECK(missing.code == kExitUsage);
  CHECK(missing.err.find("price") != std::string::npos);

  const auto small = write_text("small.csv", "x\n1\n2\nNA\n3\n\n4\n5\n");
  const Run few = cli({"fit", "--input", small, "--header", "--column", "x"});
  CHECK(few.code == kExitUsage);
  CHECK(few.err.find("insufficient data") != std::string::npos);

  CHECK(cli({"fit", "--input", small, "--header", "--column", "x", "--na", "fail"}).code == kExitUsage);
  CHECK(cli({"fit", "--input", (dir() / "absent.csv").string()}).code == kExitUsage);

  const auto flat = write_text("flat.csv", std::string("x\n") + [] {
    std::string s;
    for (int i = 0; i < 30; ++i)
      s += "4.2\n";
    return s;
  }());
  CHECK(cli({"fit", "--input", flat, "--header", "--column", "x"}).code == kExitNumeric);
}

TEST_CASE("ci command")
{
  const auto path = write_sample("sym.csv", {0, 1, 0.3, 0.3}, 300, 3);
  const std::vector<std::string> base{"ci", "--input", path, "--header", "--column", "value",
                                      "--functional", "skew", "--B", "200", "--seed", "17"};
  const Run r = cli(base);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "perc");
  CHECK(j["B"] == 200);
  CHECK(j["level"] == 0.95);
  CHECK(j["lower"].get<double>() < 0.0);
  CHECK(j["upper"].get<double>() > 0.0);
  CHECK_FALSE(j.contains("z0"));
  CHECK(without_timing(json::parse(cli(base).out)) == without_timing(j));

  auto workers = base;
  workers.insert(workers.end(), {"--workers", "3"});
  CHECK(without_timing(json::parse(cli(workers).out)) == without_timing(j));

  auto level = base;
  level.insert(level.end(), {"--level", "1.2"});
  CHECK(cli(level).code == kExitUsage);
  auto few = base;
  few[8] = "50";
  CHECK(cli(few).code == kExitUsage);
  CHECK(cli({"ci", "--input", path, "--method", "studentized"}).code == kExitUsage);
}

TEST_CASE("ci with BCa and two samples")
{
  const auto a = write_sample("a.csv", {0, 1, 0.5, 0.6}, 120, 4);
  const auto b = write_sample("b.csv", {1, 1, 0.5, 0.6}, 100, 5);
  const Run bca = cli({"ci", "--input", a, "--header", "--column", "value", "--method", "bca", "--B", "200"});
  REQUIRE(bca.code == 0);
  const json j = json::parse(bca.out);
  CHECK(j["method"] == "bca");
  CHECK(j.contains("z0"));
  CHECK(j.contains("accel"));

  const Run two = cli({"ci", "--input", a, "--input2", b, "--header", "--column", "value", "--B", "200"});
  REQUIRE(two.code == 0);
  const json k = json::parse(two.out);
  CHECK(k["estimate"].get<double>() < -0.5);
  CHECK(k["upper"].get<double>() < 0.0);
  CHECK(cli({"ci", "--input", a, "--input2", b, "--header", "--column", "value", "--functional", "skew"}).code ==
        kExitUsage);
}

TEST_CASE("gof command")
{
  const GldParams p(0, 1, 0.5, 0.6);
  std::string text = "x\n";
  for (int i = 0; i < 100; ++i)
    text += fmt::format("{:.17g}\n", quantile(p, (i + 0.5) / 100.0));
  const auto path = write_text("exact.csv", text);
  const auto qq = (dir() / "qq.csv").string();
  const Run r = cli({"gof", "--input", path, "--header", "--column", "x", "--params", "0,1,0.5,0.6", "--qq", qq});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["D"].get<double>() - 0.005) < 1e-9);
  CHECK(j["n"] == 100);
  CHECK(j["p_value"].get<double>() > 0.99);

  std::istringstream lines(slurp(qq));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "sample,model");
  int rows = 0;
  while (std::getline(lines, line))
    ++rows;
  CHECK(rows == 100);

  const auto fit_json = (dir() / "params.json").string();
  REQUIRE(cli({"fit", "--input", path, "--header", "--column", "x", "--json-out", fit_json}).code == 0);
  CHECK(cli({"gof", "--input", path, "--header", "--column", "x", "--params-file", fit_json}).code == 0);
  CHECK(cli({"gof", "--input", path, "--header", "--column", "x", "--fit"}).code == 0);

  const auto bad = write_text("bad.json", "{\"lambda1\": 0}");
  CHECK(cli({"gof", "--input", path, "--header", "--column", "x", "--params-file", bad}).code == kExitUsage);
  CHECK(cli({"gof", "--input", path, "--header", "--column", "x"}).code == kExitUsage);
  CHECK(cli({"gof", "--input", path, "--header", "--column", "x", "--params", "0,1,1"}).code == kExitUsage);
  CHECK(cli({"gof", "--input", path, "--header", "--column", "x", "--params", "0,1,1,1", "--fit"}).code ==
        kExitUsage);
}

TEST_CASE("sample command")
{
  const auto out = (dir() / "draws.csv").string();
  REQUIRE(cli({"sample", "--params", "0,1,1.5,1.5", "--n", "25", "--seed", "4", "--out", out}).code == 0);
  const std::string first = slurp(out);
  CHECK(first.rfind("x\n", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 26);
  const Run again = cli({"sample", "--params", "0,1,1.5,1.5", "--n", "25", "--seed", "4"});
  CHECK(again.out == first);
  CHECK(cli({"sample", "--params", "0,1,1.5,1.5", "--n", "25", "--seed", "5"}).out != first);

  std::istringstream lines(first);
  std::string line;
  std::getline(lines, line);
  const auto x = sample({0, 1, 1.5, 1.5}, 25, 4);
  for (double v : x) {
    std::getline(lines, line);
    CHECK(std::stod(line) == v);
  }

  CHECK(cli({"sample", "--params", "0,1,1.5,1.5", "--n", "0"}).code == kExitUsage);
  CHECK(cli({"sample", "--params", "0,0,1.5,1.5", "--n", "10"}).code == kExitUsage);
  CHECK(cli({"sample", "--params", "0,-2,1.5,1.5", "--n", "10"}).code == kExitUsage);
}

TEST_CASE("experiment command")
{
  const auto bad = write_text("bad_cfg.json", R"({"sample_sizes": [50], "metric": "mse"})");
  CHECK(cli({"experiment", "--config", bad, "--out-dir", (dir() / "bad").string()}).code == kExitUsage);
  CHECK(cli({"experiment", "--config", (dir() / "none.json").string()}).code == kExitUsage);

  const auto cfg = write_text("bench1.json",
                              R"({"benchmark": 1, "sample_sizes": [100, 250, 500, 1000],
                                  "replications": 100, "seed": 2021, "metric": "error-bias"})");
  const auto out1 = (dir() / "run1").string(), out2 = (dir() / "run2").string();
  const Run a = cli({"experiment", "--config", cfg, "--out-dir", out1});
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["rows"] == 16);
  REQUIRE(cli({"experiment", "--config", cfg, "--out-dir", out2, "--workers", "2"}).code == 0);
  const std::string csv = slurp(out1 + "/results.csv");
  CHECK(csv == slurp(out2 + "/results.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  const json meta = json::parse(slurp(out1 + "/metadata.json"));
  CHECK(meta["seed"] == 2021);
  CHECK(meta["rows"] == 16);
}

TEST_CASE("installed tool exit codes")
{
  const std::string tool = GLDPDQ_TOOL;
  const auto status = [&](const std::string& args) {
    const int s = std::system((tool + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status("--help") == 0);
  CHECK(status("sample --params 0,1,1,1 --n 0") == 2);
  CHECK(status("sample --params 0,1,1,1 --n 20") == 0);
}
