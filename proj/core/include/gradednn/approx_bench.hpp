#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gradednn/graded_opt.hpp"

namespace gnn {

/// Graded vs classical approximation of f(x) = x_0^{q_0} x_1^{q_1} ... on the unit box.
struct ApproxBenchConfig {
  GradingVector grading = GradingVector::parse("2,3");
  std::vector<std::size_t> widths{1, 2, 4, 8, 16, 32};
  std::size_t restarts = 5;
  std::size_t train_samples = 256;
  std::size_t grid_points = 101;  // per axis
  double grid_lo = 0.01;
  double grid_hi = 1.0;
  OptimizerConfig graded_opt{0.05, 0.9, 20000, 0.0, 50, 0};
  OptimizerConfig classical_opt{0.05, 0.9, 20000, 0.0, 50, 0};
  std::uint64_t seed = 2024;
  bool parallel = true;

  /// Overrides defaults from a JSON object; unknown keys are rejected.
  static ApproxBenchConfig from_json(std::string_view text);
  static ApproxBenchConfig load(const std::filesystem::path& path);
};

struct BenchRow {
  std::string model;          // "graded_analytic", "graded_trained", "classical_relu"
  std::size_t neurons = 0;
  double max_error = 0.0;     // reported: best over all networks with <= `neurons` units
  double raw_error = 0.0;     // best of this width's own restarts
  bool diverged = false;      // every restart of this cell diverged
  std::size_t diverged_restarts = 0;
};

/// Runs every cell. Classical cells train `restarts` ReLU MLPs with one hidden
/// layer of m units (grades all 1) and keep the best held-out max error; the
/// reported error is the best over widths <= m, since a narrower network is
/// exactly a wider one with zeroed units.
std::vector<BenchRow> approx_bench(const ApproxBenchConfig& cfg);

void write_bench_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path);

/// Smallest neuron count whose reported error is <= eps, or 0 if none.
std::size_t neurons_to_reach(const std::vector<BenchRow>& rows, std::string_view model, double eps);

}  // namespace gnn
