#include "gldpdq/cli.hpp"

#include "gldpdq/bootstrap.hpp"
#include "gldpdq/errors.hpp"
#include "gldpdq/fit.hpp"
#include "gldpdq/gld.hpp"
#include "gldpdq/gof.hpp"
#include "gldpdq/harness.hpp"
#include "gldpdq/io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

namespace gldpdq {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct DataFlags
{
  std::string input;
  std::string column = "1";
  bool header = false;
  std::string na = "skip";
  std::uint64_t seed = 1;
  std::string json_out;

  DataSpec spec(const std::string& path) const
  {
    return {path, column, header, na == "fail" ? NaPolicy::fail : NaPolicy::skip};
  }
};

void add_shared(CLI::App* cmd, DataFlags& f, bool needs_input)
{
  auto* in = cmd->add_option("--input", f.input, "CSV file with the data");
  if (needs_input)
    in->required();
  cmd->add_option("--column", f.column, "column name or 1-based index")->capture_default_str();
  cmd->add_flag("--header", f.header, "first line holds column names");
  cmd->add_option("--na", f.na, "missing values: skip or fail")
      ->check(CLI::IsMember({"skip", "fail"}))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  cmd->add_option("--json-out", f.json_out, "also write the JSON report here");
}

double elapsed_ms(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void emit(const json& report, const DataFlags& f, std::ostream& out)
{
  const std::string text = report.dump(2);
  out << text << '\n';
  if (!f.json_out.empty()) {
    std::ofstream os(f.json_out, std::ios::binary);
    if (!os)
      throw DataError("cannot write '" + f.json_out + "'");
    os << text << '\n';
  }
}

const char* method_name(IntervalMethod m)
{
  return m == IntervalMethod::bca ? "bca" : "perc";
}

int cmd_fit(const DataFlags& f, std::ostream& out)
{
  const auto t0 = Clock::now();
  const SortedSample s = load_sample(f.spec(f.input));
  const FitResult r = fit(s);
  json j;
  j["lambda1"] = r.params.lambda1();
  j["lambda2"] = r.params.lambda2();
  j["lambda3"] = r.params.lambda3();
  j["lambda4"] = r.params.lambda4();
  j["objective"] = r.objective;
  j["J"] = r.grid.size();
  j["elapsed_ms"] = elapsed_ms(t0);
  j["warnings"] = r.warnings;
  emit(j, f, out);
  return kExitOk;
}

struct CiFlags
{
  std::string functional = "location";
  std::string method = "perc";
  double level = 0.95;
  std::optional<std::size_t> b_count;
  std::string input2;
  unsigned workers = 1;
};

int cmd_ci(const DataFlags& f, const CiFlags& c, std::ostream& out)
{
  const auto t0 = Clock::now();
  if (!(c.level > 0.0 && c.level < 1.0))
    throw DomainError("--level must lie in (0, 1)");
  const IntervalMethod method = c.method == "bca" ? IntervalMethod::bca : IntervalMethod::percentile;
  const std::size_t b_count = c.b_count.value_or(
      method == IntervalMethod::bca ? kDefaultBcaResamples : kDefaultPercentileResamples);
  BootstrapOptions options;
  options.estimator = pdq_estimator();
  options.workers = c.workers;

  const SortedSample s = load_sample(f.spec(f.input));
  BootstrapInterval ci{};
  if (!c.input2.empty()) {
    if (c.functional != "location")
      throw DomainError("--input2 compares locations; use --functional location");
    const SortedSample s2 = load_sample(f.spec(c.input2));
    ci = two_sample_location_diff(s, s2, method, c.level, b_count, f.seed, options);
  } else {
    const Functional fn = c.functional == "skew" ? Functional::skew_diff() : Functional::location();
    const std::vector<double> boot = resample_estimates(s, fn, b_count, f.seed, options);
    ci = method == IntervalMethod::bca
             ? bca_interval(s, fn, boot, c.level, options)
             : percentile_interval(boot, c.level, fn.extract(options.estimator(s)));
  }

  json j;
  j["estimate"] = ci.estimate;
  j["lower"] = ci.lower;
  j["upper"] = ci.upper;
  j["method"] = method_name(ci.method);
  j["B"] = ci.b_count;
  j["level"] = ci.level;
  if (ci.z0)
    j["z0"] = *ci.z0;
  if (ci.accel)
    j["accel"] = *ci.accel;
  j["elapsed_ms"] = elapsed_ms(t0);
  j["warnings"] = ci.warnings;
  emit(j, f, out);
  return kExitOk;
}

struct GofFlags
{
  std::string params;
  std::string params_file;
  bool fit = false;
  std::string qq;
};

int cmd_gof(const DataFlags& f, const GofFlags& g, std::ostream& out)
{
  const int sources = int(!g.params.empty()) + int(!g.params_file.empty()) + int(g.fit);
  if (sources != 1)
    throw DomainError("give exactly one of --params, --params-file or --fit");
  const SortedSample s = load_sample(f.spec(f.input));
  const GldParams p = g.fit                   ? fit(s).params
                      : !g.params.empty()     ? parse_params_list(g.params)
                                              : read_params_file(g.params_file);
  const KsResult ks = ks_test(s, p);
  if (!g.qq.empty()) {
    std::ofstream os(g.qq, std::ios::binary);
    if (!os)
      throw DataError("cannot write '" + g.qq + "'");
    write_qq_csv(os, qq_data(s, p));
  }
  json j;
  j["D"] = ks.statistic;
  j["p_value"] = ks.p_value;
  j["n"] = ks.n;
  j["approximate"] = ks.approximate;
  emit(j, f, out);
  return kExitOk;
}

struct SampleFlags
{
  std::string params;
  long long n = -1;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_sample(const SampleFlags& sf, std::ostream& out)
{
  if (sf.n < 1)
    throw DomainError("--n must be at least 1");
  const GldParams p = parse_params_list(sf.params);
  const std::vector<double> x = sample(p, static_cast<std::size_t>(sf.n), sf.seed);
  std::ostringstream text;
  text << "x\n";
  for (double v : x)
    text << fmt::format("{:.17g}\n", v);
  if (sf.out.empty()) {
    out << text.str();
  } else {
    std::ofstream os(sf.out, std::ios::binary);
    if (!os)
      throw DataError("cannot write '" + sf.out + "'");
    os << text.str();
  }
  return kExitOk;
}

struct ExperimentFlags
{
  std::string config;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

int cmd_experiment(const ExperimentFlags& e, std::ostream& out)
{
  std::ifstream in(e.config, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open config '" + e.config + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  ExperimentConfig cfg = parse_config(text);
  if (e.seed)
    cfg.seed = *e.seed;
  if (e.workers)
    cfg.workers = *e.workers;
  const ExperimentOutput r = run_experiment(cfg, text, e.out_dir);
  json j;
  j["results"] = r.results.string();
  j["metadata"] = r.metadata.string();
  j["rows"] = r.rows;
  out << j.dump(2) << '\n';
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Fit FMKL generalized lambda distributions by the pdQ method"};
  app.set_version_flag("--version", std::string(GLDPDQ_VERSION));
  app.require_subcommand(1);

  DataFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "estimate lambda1..lambda4 from a data column");
  add_shared(fit_cmd, fit_flags, true);

  DataFlags ci_flags;
  CiFlags ci;
  auto* ci_cmd = app.add_subcommand("ci", "bootstrap interval for location or skewness");
  add_shared(ci_cmd, ci_flags, true);
  ci_cmd->add_option("--functional", ci.functional, "location or skew")
      ->check(CLI::IsMember({"location", "skew"}))
      ->capture_default_str();
  ci_cmd->add_option("--method", ci.method, "perc or bca")
      ->check(CLI::IsMember({"perc", "bca"}))
      ->capture_default_str();
  ci_cmd->add_option("--level", ci.level, "confidence level")->capture_default_str();
  ci_cmd->add_option("--B", ci.b_count, "bootstrap resamples (default 500, or 2000 for bca)");
  ci_cmd->add_option("--input2", ci.input2, "second sample; gives an interval for the location difference");
  ci_cmd->add_option("--workers", ci.workers, "worker threads")->capture_default_str();

  DataFlags gof_flags;
  GofFlags gof;
  auto* gof_cmd = app.add_subcommand("gof", "Kolmogorov-Smirnov test against a GLD");
  add_shared(gof_cmd, gof_flags, true);
  gof_cmd->add_option("--params", gof.params, "l1,l2,l3,l4");
  gof_cmd->add_option("--params-file", gof.params_file, "JSON with lambda1..lambda4");
  gof_cmd->add_flag("--fit", gof.fit, "test against the pdQ fit of the data");
  gof_cmd->add_option("--qq", gof.qq, "write QQ plot data to this CSV");

  SampleFlags sf;
  auto* sample_cmd = app.add_subcommand("sample", "draw from a GLD");
  sample_cmd->add_option("--params", sf.params, "l1,l2,l3,l4")->required();
  sample_cmd->add_option("--n", sf.n, "number of draws")->required();
  sample_cmd->add_option("--seed", sf.seed, "random seed")->capture_default_str();
  sample_cmd->add_option("--out", sf.out, "output CSV (default stdout)");

  ExperimentFlags ef;
  auto* exp_cmd = app.add_subcommand("experiment", "run a Monte-Carlo experiment");
  exp_cmd->add_option("--config", ef.config, "JSON experiment config")->required();
  exp_cmd->add_option("--out-dir", ef.out_dir, "output directory")->capture_default_str();
  exp_cmd->add_option("--seed", ef.seed, "override the config seed");
  exp_cmd->add_option("--workers", ef.workers, "override the config worker count");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("gldpdq");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store)
    argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << GLDPDQ_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (fit_cmd->parsed())
      return cmd_fit(fit_flags, out);
    if (ci_cmd->parsed())
      return cmd_ci(ci_flags, ci, out);
    if (gof_cmd->parsed())
      return cmd_gof(gof_flags, gof, out);
    if (sample_cmd->parsed())
      return cmd_sample(sf, out);
    if (exp_cmd->parsed())
      return cmd_experiment(ef, out);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

} // namespace gldpdq
