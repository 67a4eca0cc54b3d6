#include "gldpdq/harness.hpp"

#include "gldpdq/errors.hpp"
#include "gldpdq/parallel.hpp"
#include "gldpdq/random.hpp"
#include "gldpdq/stats.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

namespace gldpdq {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kBootstrapStream = 0xB0075;
constexpr std::size_t kMaxSampleRetries = 10;

const std::array<GldParams, 4> kBenchmarks{
    GldParams{0.0, 1.0, 1.5, 1.5},
    GldParams{0.0, 1.0, 2.5, 1.5},
    GldParams{0.0, 1.0, 2.0, 0.5},
    GldParams{0.0, 1.0, 0.5, 0.6},
};

std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t r)
{
  return derive_seed(derive_seed(seed, n), r);
}

double true_value(const GldParams& p, Parameter which)
{
  switch (which) {
  case Parameter::lambda1: return p.lambda1();
  case Parameter::lambda2: return p.lambda2();
  case Parameter::lambda3: return p.lambda3();
  case Parameter::lambda4: return p.lambda4();
  case Parameter::skew_diff: return p.lambda3() - p.lambda4();
  }
  return 0.0;
}

double estimated_value(const FitResult& r, Parameter which)
{
  return true_value(r.params, which);
}

// A simulated sample whose fit fails is redrawn from a derived seed.
template <class Body>
void with_sample(const GldParams& truth, std::size_t n, std::uint64_t seed, Body&& body)
{
  for (std::size_t attempt = 0; attempt <= kMaxSampleRetries; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt);
    try {
      body(SortedSample(sample(truth, n, s)), s);
      return;
    } catch (const NumericError&) {
    }
  }
  throw EstimationError("experiment: replication failed after " +
                        std::to_string(kMaxSampleRetries) + " redraws");
}

MetricRow summarise(const std::string& estimator, std::size_t n, Parameter which, double truth,
                    std::span<const double> estimates)
{
  return MetricRow{estimator,
                   n,
                   which,
                   standard_deviation(estimates),
                   std::abs(mean(estimates) - truth),
                   std::nullopt,
                   std::nullopt};
}

std::string format_number(double v)
{
  return fmt::format("{:.17g}", v);
}

Metric parse_metric(const std::string& s)
{
  if (s == "error-bias")
    return Metric::error_bias;
  if (s == "coverage")
    return Metric::coverage;
  if (s == "timing")
    return Metric::timing;
  throw ConfigError("unknown metric '" + s + "' (expected error-bias, coverage or timing)");
}

GldParams parse_params(const json& j)
{
  try {
    if (j.is_array() && j.size() == 4)
      return GldParams(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                       j[3].get<double>());
    if (j.is_object())
      return GldParams(j.at("lambda1").get<double>(), j.at("lambda2").get<double>(),
                       j.at("lambda3").get<double>(), j.at("lambda4").get<double>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("true_params: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("true_params: ") + e.what());
  }
  throw ConfigError("true_params must be [l1, l2, l3, l4] or an object with lambda1..lambda4");
}

} // namespace

void ExperimentConfig::validate() const
{
  if (replications < 1)
    throw ConfigError("replications must be at least 1");
  if (sample_sizes.empty())
    throw ConfigError("sample_sizes must not be empty");
  for (std::size_t n : sample_sizes)
    if (n < SortedSample::kMinSize)
      throw ConfigError("sample sizes must be at least " + std::to_string(SortedSample::kMinSize));
  if (metric == Metric::coverage && !bootstrap)
    throw ConfigError("coverage experiments need a bootstrap section");
  if (bootstrap) {
    if (bootstrap->b_count < kMinResamples)
      throw ConfigError("bootstrap b_count must be at least " + std::to_string(kMinResamples));
    if (!(bootstrap->level > 0.0 && bootstrap->level < 1.0))
      throw ConfigError("bootstrap level must lie in (0, 1)");
  }
  if (functional == FunctionalKind::custom)
    throw ConfigError("custom functionals cannot be configured from a file");
}

EstimatorHandle EstimatorHandle::pdq(BandwidthSpec spec)
{
  return {"pdQ", pdq_estimator(spec)};
}

std::vector<EstimatorHandle> registered_estimators()
{
  return {EstimatorHandle::pdq()};
}

EstimatorHandle find_estimator(std::string_view name)
{
  for (EstimatorHandle& h : registered_estimators())
    if (h.name == name)
      return h;
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(Parameter p)
{
  switch (p) {
  case Parameter::lambda1: return "lambda1";
  case Parameter::lambda2: return "lambda2";
  case Parameter::lambda3: return "lambda3";
  case Parameter::lambda4: return "lambda4";
  case Parameter::skew_diff: return "skew-diff";
  }
  return "?";
}

std::string_view to_string(Metric m)
{
  switch (m) {
  case Metric::error_bias: return "error-bias";
  case Metric::coverage: return "coverage";
  case Metric::timing: return "timing";
  }
  return "?";
}

std::span<const GldParams> benchmark_settings()
{
  return kBenchmarks;
}

std::vector<MetricRow> run_error_experiment(const ExperimentConfig& cfg, const EstimatorHandle& est)
{
  cfg.validate();
  constexpr std::array<Parameter, 4> params{Parameter::lambda1, Parameter::lambda2,
                                            Parameter::lambda3, Parameter::lambda4};
  std::vector<MetricRow> rows;
  for (std::size_t n : cfg.sample_sizes) {
    std::vector<std::array<double, 4>> fits(cfg.replications);
    parallel_for(cfg.replications, cfg.workers, [&](std::size_t r) {
      with_sample(cfg.true_params, n, replication_seed(cfg.seed, n, r),
                  [&](const SortedSample& s, std::uint64_t) {
                    const FitResult fr = est.procedure(s);
                    for (std::size_t k = 0; k < params.size(); ++k)
                      fits[r][k] = estimated_value(fr, params[k]);
                  });
    });
    for (std::size_t k = 0; k < params.size(); ++k) {
      std::vector<double> column(cfg.replications);
      for (std::size_t r = 0; r < cfg.replications; ++r)
        column[r] = fits[r][k];
      rows.push_back(summarise(est.name, n, params[k], true_value(cfg.true_params, params[k]),
                               column));
    }
  }
  return rows;
}

std::vector<MetricRow> run_coverage_experiment(const ExperimentConfig& cfg,
                                               const EstimatorHandle& est, const Functional& f)
{
  cfg.validate();
  if (!cfg.bootstrap)
    throw ConfigError("coverage experiments need bootstrap settings");
  if (f.kind == FunctionalKind::custom)
    throw DomainError("coverage experiments need a location or skew-diff functional");
  const BootstrapSettings& bs = *cfg.bootstrap;
  const Parameter which =
      f.kind == FunctionalKind::location ? Parameter::lambda1 : Parameter::skew_diff;
  const double truth = true_value(cfg.true_params, which);

  BootstrapOptions options;
  options.estimator = est.procedure;

  std::vector<MetricRow> rows;
  for (std::size_t n : cfg.sample_sizes) {
    std::vector<double> estimates(cfg.replications);
    std::vector<double> covered(cfg.replications);
    std::vector<double> widths(cfg.replications);
    parallel_for(cfg.replications, cfg.workers, [&](std::size_t r) {
      with_sample(cfg.true_params, n, replication_seed(cfg.seed, n, r),
                  [&](const SortedSample& s, std::uint64_t sample_seed) {
                    const std::vector<double> boot = resample_estimates(
                        s, f, bs.b_count, derive_seed(sample_seed, kBootstrapStream), options);
                    const BootstrapInterval ci =
                        bs.method == IntervalMethod::percentile
                            ? percentile_interval(boot, bs.level, f.extract(est.procedure(s)))
                            : bca_interval(s, f, boot, bs.level, options);
                    estimates[r] = ci.estimate;
                    covered[r] = (ci.lower <= truth && truth <= ci.upper) ? 1.0 : 0.0;
                    widths[r] = ci.upper - ci.lower;
                  });
    });
    MetricRow row = summarise(est.name, n, which, truth, estimates);
    row.coverage = mean(covered);
    row.mean_width = mean(widths);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TimingPoint> run_timing(const EstimatorHandle& est, std::span<const std::size_t> sizes,
                                    std::size_t reps, std::uint64_t seed)
{
  if (reps == 0)
    throw DomainError("run_timing: reps must be at least 1");
  const GldParams truth(0.0, 1.0, 0.5, 0.6);
  std::vector<TimingPoint> out;
  for (std::size_t n : sizes) {
    if (n < SortedSample::kMinSize)
      throw DomainError("run_timing: sample sizes must be at least 10");
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const SortedSample s(sample(truth, n, replication_seed(seed, n, r)));
      const auto t0 = std::chrono::steady_clock::now();
      const FitResult fr = est.procedure(s);
      const auto t1 = std::chrono::steady_clock::now();
      static_cast<void>(fr);
      total += std::chrono::duration<double>(t1 - t0).count();
    }
    out.push_back({n, total / static_cast<double>(reps)});
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known{"true_params", "benchmark",  "sample_sizes",
                                           "replications", "seed",      "metric",
                                           "bootstrap",   "functional", "estimator",
                                           "workers"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key))
      throw ConfigError("unknown config key '" + key + "'");

  ExperimentConfig cfg;
  try {
    if (j.contains("true_params") && j.contains("benchmark"))
      throw ConfigError("give either true_params or benchmark, not both");
    if (j.contains("true_params"))
      cfg.true_params = parse_params(j["true_params"]);
    if (j.contains("benchmark")) {
      const int b = j["benchmark"].get<int>();
      if (b < 1 || b > static_cast<int>(kBenchmarks.size()))
        throw ConfigError("benchmark must be 1..4");
      cfg.true_params = kBenchmarks[static_cast<std::size_t>(b - 1)];
    }
    if (!j.contains("sample_sizes"))
      throw ConfigError("sample_sizes is required");
    cfg.sample_sizes = j["sample_sizes"].get<std::vector<std::size_t>>();
    if (j.contains("replications"))
      cfg.replications = j["replications"].get<std::size_t>();
    if (j.contains("seed"))
      cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("metric"))
      cfg.metric = parse_metric(j["metric"].get<std::string>());
    if (j.contains("workers"))
      cfg.workers = j["workers"].get<unsigned>();
    if (j.contains("estimator"))
      cfg.estimator = j["estimator"].get<std::string>();
    if (j.contains("functional")) {
      const auto f = j["functional"].get<std::string>();
      if (f == "location")
        cfg.functional = FunctionalKind::location;
      else if (f == "skew-diff" || f == "skew")
        cfg.functional = FunctionalKind::skew_diff;
      else
        throw ConfigError("unknown functional '" + f + "'");
    }
    if (j.contains("bootstrap")) {
      const json& b = j["bootstrap"];
      BootstrapSettings bs;
      if (b.contains("method")) {
        const auto m = b["method"].get<std::string>();
        if (m == "percentile" || m == "perc")
          bs.method = IntervalMethod::percentile;
        else if (m == "bca") {
          bs.method = IntervalMethod::bca;
          bs.b_count = kDefaultBcaResamples;
        } else
          throw ConfigError("unknown bootstrap method '" + m + "'");
      }
      if (b.contains("b_count"))
        bs.b_count = b["b_count"].get<std::size_t>();
      if (b.contains("level"))
        bs.level = b["level"].get<double>();
      for (const auto& [key, value] : b.items())
        if (key != "method" && key != "b_count" && key != "level")
          throw ConfigError("unknown bootstrap key '" + key + "'");
      cfg.bootstrap = bs;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  find_estimator(cfg.estimator);
  cfg.validate();
  return cfg;
}

std::string config_hash(std::string_view text)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

void write_metric_csv(std::ostream& os, std::span<const MetricRow> rows)
{
  os << "estimator,n,parameter,se,abs_bias,coverage,mean_width\n";
  for (const MetricRow& r : rows) {
    os << r.estimator << ',' << r.n << ',' << to_string(r.parameter) << ',' << format_number(r.se)
       << ',' << format_number(r.abs_bias) << ','
       << (r.coverage ? format_number(*r.coverage) : std::string()) << ','
       << (r.mean_width ? format_number(*r.mean_width) : std::string()) << '\n';
  }
}

void write_timing_csv(std::ostream& os, std::span<const TimingPoint> points)
{
  os << "n,mean_seconds\n";
  for (const TimingPoint& p : points)
    os << p.n << ',' << format_number(p.mean_seconds) << '\n';
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::string_view config_text,
                                const std::filesystem::path& out_dir)
{
  cfg.validate();
  const EstimatorHandle est = find_estimator(cfg.estimator);
  std::filesystem::create_directories(out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentOutput out;
  if (cfg.metric == Metric::timing) {
    const std::vector<TimingPoint> points =
        run_timing(est, cfg.sample_sizes, cfg.replications, cfg.seed);
    out.results = out_dir / "timing.csv";
    std::ofstream os(out.results, std::ios::binary);
    write_timing_csv(os, points);
    out.rows = points.size();
  } else {
    const std::vector<MetricRow> rows =
        cfg.metric == Metric::error_bias
            ? run_error_experiment(cfg, est)
            : run_coverage_experiment(cfg, est,
                                      cfg.functional == FunctionalKind::location
                                          ? Functional::location()
                                          : Functional::skew_diff());
    out.results = out_dir / "results.csv";
    std::ofstream os(out.results, std::ios::binary);
    write_metric_csv(os, rows);
    out.rows = rows.size();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json meta;
  meta["seed"] = cfg.seed;
  meta["config_hash"] = config_hash(config_text);
  meta["software_version"] = GLDPDQ_VERSION;
  meta["wall_time_seconds"] = wall;
  meta["metric"] = std::string(to_string(cfg.metric));
  meta["estimator"] = est.name;
  meta["rows"] = out.rows;
  meta["results_file"] = out.results.filename().string();
  out.metadata = out_dir / "metadata.json";
  std::ofstream ms(out.metadata, std::ios::binary);
  ms << meta.dump(2) << '\n';
  return out;
}

} // namespace gldpdq
