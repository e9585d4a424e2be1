#ifndef LANE_EMDEN_IO_HPP
#define LANE_EMDEN_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lane_emden/asymptotics.hpp"
#include "lane_emden/limits.hpp"

namespace lane_emden {

enum class Discretization { kLattice, kRadial };

struct RunConfig {
  Domain domain = Domain::disk(1.0);
  Discretization discretization = Discretization::kLattice;
  double h = 1.0 / 128.0;
  double radial_t_min = -110.0;
  int radial_nodes = 8000;
  std::vector<double> schedule;
  double newton_tol = 1e-8;
  double linear_tol = 1e-8;  // principal eigenpair
  double sym_tol = 1e-8;
  int max_bisections = 5;
  bool report = true;
  bool limits = true;
  double r_min = 0.0;  // 0: 0.1 * diam
  std::string output = "out";
  std::vector<Point> guess_points;
};

/// Throws ConfigError with a message naming the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

/// Drops schedule entries above max_p. Throws ConfigError if none remain.
void truncate_schedule(RunConfig& c, double max_p);

// ---------------------------------------------------------------------------
// Checkpoints: <dir>/manifest.json plus one raw little-endian float64 file
// per solved exponent.

struct CheckpointEntry {
  double p;
  double residual;
  int newton_iters;
  bool underresolved;
  Eigen::VectorXd values;
};

struct Checkpoint {
  RunConfig config;
  std::vector<CheckpointEntry> entries;
};

class CheckpointWriter {
 public:
  /// Starts a new checkpoint, or continues `existing` entries when resuming.
  CheckpointWriter(std::filesystem::path dir, RunConfig config,
                   std::vector<CheckpointEntry> existing = {});
  void append(CheckpointEntry e);
  const std::vector<CheckpointEntry>& entries() const { return entries_; }

 private:
  void write_manifest() const;

  std::filesystem::path dir_;
  RunConfig config_;
  std::vector<CheckpointEntry> entries_;
};

/// Throws CorruptCheckpoint on missing files, size mismatches or non-finite data.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------

/// Fixed header of the per-exponent report table.
const std::vector<std::string>& report_columns();
void write_report_csv(std::ostream& os, std::span<const AsymptoticsReport> reports);
nlohmann::json limits_to_json(const LimitEstimates& e);

/// printf("%.17g") for doubles.
std::string format_double(double x);

}  // namespace lane_emden

#endif  // LANE_EMDEN_IO_HPP
