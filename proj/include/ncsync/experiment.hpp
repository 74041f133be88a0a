#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncsync/sim.hpp"
#include "ncsync/topology.hpp"

namespace ncsync {

struct SweepConfig {
  std::vector<int> node_sizes{5, 8, 11};
  std::vector<double> pe_values{0.0, 0.1};
  std::vector<double> radius_grid{0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 1.4142135623730951};
  int samples_per_cell = 1000;
  std::uint64_t root_seed = 1;
  double degree_bucket_width = 0.5;
  std::size_t payload_len = BlockStore::kDefaultPayloadLen;
  int max_rejections = 10'000;
  int threads = 0;  ///< 0: NCSYNC_THREADS, else hardware concurrency

  /// Throws std::invalid_argument on empty lists or out-of-range values.
  void validate() const;
};

/// Reads a sweep config; `.toml` files are parsed as TOML, anything else as JSON.
/// Keys mirror the SweepConfig field names; missing keys keep their defaults.
SweepConfig load_sweep_config(const std::filesystem::path& path);
SweepConfig sweep_config_from_json(const std::string& text);
SweepConfig sweep_config_from_toml(const std::string& text);

struct SchemeRun {
  int slots = 0;
  bool converged = false;
  std::uint64_t ops = 0;
  int idle_turns = 0;

  bool operator==(const SchemeRun&) const = default;
};

/// All three schemes run on one topology sample at one loss rate.
struct SampleRow {
  int n = 0;
  int radius_index = 0;
  int sample = 0;
  int pe_index = 0;
  double pe = 0.0;
  Rational avg_degree;
  double bucket = 0.0;
  std::array<SchemeRun, 3> runs{};  ///< indexed by Scheme

  const SchemeRun& run(Scheme s) const { return runs[static_cast<std::size_t>(s)]; }
  bool operator==(const SampleRow&) const = default;
};

struct SweepSamples {
  std::vector<SampleRow> rows;
  /// (n, radius) cells abandoned because generation hit the rejection cap.
  std::vector<std::pair<int, double>> empty_cells;
};

struct ExperimentRecord {
  Scheme scheme = Scheme::UDbs;
  int n = 0;
  double pe = 0.0;
  double degree_bucket = 0.0;
  int n_samples = 0;                   ///< samples that landed in the bucket
  std::optional<double> mean_slots;    ///< over converged runs
  std::optional<double> mean_rpg;      ///< coded schemes only
  std::optional<double> mean_ops;      ///< over converged runs
  double convergence_rate = 0.0;
};

/// floor(d / width) * width
double degree_bucket(const Rational& avg_degree, double width);

/// Runs every scheme on every generated topology sample.
SweepSamples run_samples(const SweepConfig& cfg);

/// Groups rows by (scheme, n, pe, bucket), ascending.
std::vector<ExperimentRecord> aggregate(std::span<const SampleRow> rows);

std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg);

/// Mean slot count. Throws on empty input.
double compute_sd(std::span<const int> slots);

/// Mean over samples of uncoded_slots / coded_slots.
double compute_gd(std::span<const std::pair<int, int>> uncoded_coded);

inline constexpr const char* kCsvHeader =
    "scheme,n,pe,degree_bucket,n_samples,mean_slots,mean_rpg,mean_ops,convergence_rate";

std::string format_csv(std::span<const ExperimentRecord> records);
void write_csv(std::span<const ExperimentRecord> records, const std::filesystem::path& path);
std::string format_records_json(std::span<const ExperimentRecord> records);

/// Lower end of a one-sided percentile bootstrap interval for the mean.
double bootstrap_lower_bound(std::span<const double> values, double confidence, int resamples,
                             std::uint64_t seed);

/// Worker count: `requested` if positive, else NCSYNC_THREADS, else hardware.
int worker_count(int requested);

}  // namespace ncsync
