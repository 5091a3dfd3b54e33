#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mg1tail/distributions.hpp"

namespace mg1tail {

struct SweepRow {
  double x = 0.0;
  double heavy_traffic = 0.0;
  double heavy_tail = 0.0;
  double h = 0.0;
  double j = 0.0;
  std::optional<double> h_clt;
  std::optional<double> mc_estimate;
  std::optional<double> mc_rel_err;
  std::optional<bool> mc_converged;
  /// heavy-traffic | transition | heavy-tail, or n/a for models without a tail index.
  std::string regime;

  bool operator==(const SweepRow&) const = default;
};

struct SweepMetadata {
  std::string model;
  double rho = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold_x;
  std::optional<double> crossing_point;
  std::string version;

  bool operator==(const SweepMetadata&) const = default;
};

/// Rows ordered by strictly increasing x. Optional columns are either present in every row or in none.
struct SweepTable {
  SweepMetadata metadata;
  bool has_h_clt = false;
  bool has_mc = false;
  std::vector<SweepRow> rows;

  bool operator==(const SweepTable&) const = default;
};

struct SweepSpec {
  double x_min = 1.0;
  double x_max = 100.0;
  std::size_t points = 50;
  bool log_grid = false;
};

/// Grid of `points` values from x_min to x_max, geometric when log_grid is set.
std::vector<double> make_grid(const SweepSpec& spec);

struct SimulationSettings {
  double rel_err = 0.05;
  double confidence = 0.99;
  std::uint64_t seed = 0;
  std::uint64_t max_samples = 100'000'000;
  unsigned threads = 1;
};

/// Evaluates every approximation on the grid; runs the conditional Monte Carlo estimator
/// per row when `simulation` is set.
SweepTable build_sweep(const QueueModel& q, const SweepSpec& spec, const std::optional<SimulationSettings>& simulation,
                       std::string version);

/// Column order: x, heavy_traffic, heavy_tail, h, j, [h_clt], [mc_estimate, mc_rel_err, mc_converged], regime.
/// Metadata precedes the header as `# key=value` lines. Numbers use 17 significant digits.
std::string to_csv(const SweepTable& table);
SweepTable parse_csv(std::string_view text);

/// One object: {"metadata": {...}, "rows": [...]}, field names as in the CSV header.
std::string to_json(const SweepTable& table);
SweepTable parse_json(std::string_view text);

/// Formatting shared by the writers: 17 significant digits (%.17g).
std::string format_number(double v);

}  // namespace mg1tail
