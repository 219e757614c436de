#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gradednn/graded_loss.hpp"
#include "gradednn/graded_opt.hpp"

namespace gnn {

struct LayerSpec {
  GradingVector out_grading;
  Activation activation = Activation::Identity;
  bool grade_blocks = false;
};

/// Declarative training run, parsed from one JSON document:
///
///   {"grading": "2,4,6,10",
///    "model": {"layers": [{"grading": "2,4,6,10", "activation": "identity", "blocks": true}],
///              "multiplicative": {"exponents": "1,0,0,2"}},
///    "loss": "graded_norm",
///    "optimizer": {"eta": 0.01, "momentum": 0, "max_iterations": 1000, "tolerance": 0, "window": 10},
///    "dataset": {"source": "graded_linear" | "monomial" | "csv", ...},
///    "output": {"metrics": "metrics.jsonl", "model": "model.json"},
///    "seed": 7}
///
/// Relative paths resolve against `base_dir` (the config file's directory).
struct ExperimentConfig {
  GradingVector grading = GradingVector::uniform(1);
  std::vector<LayerSpec> layers;
  std::optional<std::vector<Rational>> multiplicative_exponents;
  LossKind loss = LossKind::norm();
  OptimizerConfig optimizer;

  std::string dataset_source = "graded_linear";
  std::size_t dataset_count = 64;
  Box box;
  std::vector<Rational> monomial_exponents;
  double monomial_coefficient = 1.0;
  std::filesystem::path csv_path;
  std::optional<GradingVector> target_grading;
  std::filesystem::path save_csv;

  std::filesystem::path metrics_path = "metrics.jsonl";
  std::filesystem::path model_path = "model.json";
  std::uint64_t seed = 0;
  std::filesystem::path base_dir = ".";

  static ExperimentConfig from_json(std::string_view text, const std::filesystem::path& base_dir = ".");
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Freshly initialized network for this config.
  Network build_network() const;
  Dataset build_dataset(const Network& net) const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

struct TrainRunSummary {
  std::size_t iterations = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::string stop_reason;
  std::filesystem::path metrics_path;
  std::filesystem::path model_path;

  std::string format() const;
};

/// Trains per the config, writing one JSON line {"iter","loss","grad_norm"}
/// per visited iterate and the final model JSON.
TrainRunSummary run_training(const ExperimentConfig& cfg);

/// printf("%.17g"); used for every float written to metrics and CSV files.
std::string format_double(double v);

}  // namespace gnn
