#pragma once

#include "gldpdq/bootstrap.hpp"
#include "gldpdq/fit.hpp"
#include "gldpdq/gld.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gldpdq {

enum class Metric
{
  error_bias,
  coverage,
  timing
};

struct BootstrapSettings
{
  IntervalMethod method = IntervalMethod::percentile;
  std::size_t b_count = kDefaultPercentileResamples;
  double level = 0.95;
};

struct ExperimentConfig
{
  GldParams true_params{0.0, 1.0, 1.5, 1.5};
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 100;
  std::uint64_t seed = 1;
  Metric metric = Metric::error_bias;
  std::optional<BootstrapSettings> bootstrap;
  FunctionalKind functional = FunctionalKind::location;
  std::string estimator = "pdQ";
  unsigned workers = 1;

  //! Throws ConfigError when replications < 1 or any sample size < 10.
  void validate() const;
};

struct EstimatorHandle
{
  std::string name;
  Estimator procedure;

  static EstimatorHandle pdq(BandwidthSpec spec = {});
};

//! Estimators available to experiments by name. Only the pdQ estimator is
//! implemented; other methods plug in through EstimatorHandle.
std::vector<EstimatorHandle> registered_estimators();
EstimatorHandle find_estimator(std::string_view name);

enum class Parameter
{
  lambda1,
  lambda2,
  lambda3,
  lambda4,
  skew_diff
};

std::string_view to_string(Parameter p);
std::string_view to_string(Metric m);

struct MetricRow
{
  std::string estimator;
  std::size_t n;
  Parameter parameter;
  //! Standard deviation of the estimates across replications.
  double se;
  //! |mean of estimates - true value|
  double abs_bias;
  std::optional<double> coverage;
  std::optional<double> mean_width;
};

struct TimingPoint
{
  std::size_t n;
  double mean_seconds;
};

//! The four benchmark settings (0,1,1.5,1.5), (0,1,2.5,1.5), (0,1,2,0.5),
//! (0,1,0.5,0.6).
std::span<const GldParams> benchmark_settings();

//! Per sample size: se and abs_bias of each of the four parameter estimates.
std::vector<MetricRow> run_error_experiment(const ExperimentConfig& cfg, const EstimatorHandle& est);

//! Per sample size: bootstrap interval coverage and mean width for f.
std::vector<MetricRow> run_coverage_experiment(const ExperimentConfig& cfg,
                                               const EstimatorHandle& est, const Functional& f);

//! Mean wall time of one fit per sample size, data from GLD(0,1,0.5,0.6).
std::vector<TimingPoint> run_timing(const EstimatorHandle& est, std::span<const std::size_t> sizes,
                                    std::size_t reps, std::uint64_t seed);

//! Parses a JSON experiment configuration; throws ConfigError.
ExperimentConfig parse_config(std::string_view text);

//! FNV-1a 64-bit hash, hex encoded.
std::string config_hash(std::string_view text);

void write_metric_csv(std::ostream& os, std::span<const MetricRow> rows);
void write_timing_csv(std::ostream& os, std::span<const TimingPoint> points);

struct ExperimentOutput
{
  std::filesystem::path results;
  std::filesystem::path metadata;
  std::size_t rows;
};

//! Runs the configured experiment and writes results.csv (or timing.csv)
//! plus metadata.json into out_dir.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::string_view config_text,
                                const std::filesystem::path& out_dir);

} // namespace gldpdq
