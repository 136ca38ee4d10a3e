#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossipsim/engine.hpp"
#include "gossipsim/paths.hpp"

namespace gossipsim::harness {

struct AdversarySpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  /// Schedule seed; when absent each run uses its own seed.
  std::optional<std::uint64_t> seed;
};

struct ProtocolSpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

struct InitialSpec {
  /// single-source, one-token-per-node or file.
  std::string kind = "single-source";
  NodeId source = 0;
  /// Token count for single-source; 0 means n.
  std::size_t k = 0;
  /// For kind == file: lines "node token".
  std::string file;
};

struct OutputSpec {
  std::string csv;
  std::string summary;
  std::string plot;
  /// Per-run trace path; {n} and {seed} are substituted.
  std::string trace;
};

struct ExperimentConfig {
  AdversarySpec adversary;
  ProtocolSpec protocol;
  InitialSpec initial;
  std::vector<std::size_t> n_values;
  std::vector<std::uint64_t> seeds;
  Round max_rounds = 0;
  OutputSpec output;
  /// completion or sentinel; used by sweeps.
  std::string metric = "completion";
  bool stop_after_sentinel = false;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
  /// FNV-1a of the canonical JSON form, as 16 hex digits.
  std::string hash() const;
  /// Throws ParameterError on unknown names or empty lists.
  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

struct GeneratedSchedule {
  AdversarySchedule schedule;
  std::optional<NetworkSnapshot> infrastructure;
  std::vector<PathSystem> systems;
};

std::vector<std::string> adversary_names();
bool is_protocol_name(std::string_view name);

/// Builds a named adversary. `horizon` is used by families whose length is
/// free; blocker constructions fix their own horizon.
GeneratedSchedule generate_adversary(const std::string& name, const nlohmann::json& params,
                                     std::size_t n, std::uint64_t seed, Round horizon);

TokenState make_initial(const InitialSpec& spec, std::size_t n);

/// First round a sentinel token reaches a target node, from blocker metadata.
class SentinelTracker {
 public:
  /// Returns nullopt if the metadata defines no sentinels.
  static std::optional<SentinelTracker> from_metadata(const nlohmann::json& meta, std::size_t universe);

  void start(const TokenState& state);
  void observe(Round round, std::span<const Arrival> arrivals);
  std::optional<Round> sentinel_round() const;
  /// True once no later arrival can lower sentinel_round().
  bool settled(Round now) const;

 private:
  std::vector<char> target_;
  std::vector<char> explicit_sentinel_;
  bool uncaptured_ = false;
  std::vector<std::pair<Round, std::vector<NodeId>>> captures_;
  std::vector<char> captured_;
  std::vector<Round> first_at_target_;
  Round last_capture_ = 0;
};

struct RunRecord {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string adversary;
  std::string protocol;
  std::optional<Round> completion_round;
  bool has_sentinel = false;
  std::optional<Round> sentinel_round;
  double wall_time_ms = 0.0;
  std::string error;
};

/// One (n, seed) cell: build or load the schedule, run, record.
RunRecord run_cell(const ExperimentConfig& config, std::size_t n, std::uint64_t seed);

/// Runs every cell on a worker pool (GOSSIPSIM_WORKERS caps it), returns the
/// records in (n, seed) order and writes the configured outputs.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, unsigned workers = 0);

unsigned default_workers();

std::string csv_header();
std::string csv_row(const RunRecord& record);
void write_csv(const std::filesystem::path& path, std::span<const RunRecord> records);
std::vector<RunRecord> read_csv(const std::filesystem::path& path);

struct SweepPoint {
  std::size_t n = 0;
  std::size_t runs = 0;
  std::size_t completed = 0;
  double median = 0.0;
  double mean = 0.0;
  double timeout_fraction = 0.0;
};

struct SweepSummary {
  std::vector<SweepPoint> points;
  std::optional<double> slope;
  std::string metric;
};

/// Least-squares slope of log2(y) against log2(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Aggregates records per n. Censored runs are excluded from medians and the
/// slope; the slope needs at least three n-values with completed runs.
SweepSummary summarize(std::span<const RunRecord> records, const std::string& metric);

/// run_experiment followed by summarize; writes summary and plot outputs.
SweepSummary run_sweep(const ExperimentConfig& config, unsigned workers = 0);

void write_summary_csv(const std::filesystem::path& path, const SweepSummary& summary);
void write_plot_data(const std::filesystem::path& path, const SweepSummary& summary);

}  // namespace gossipsim::harness
