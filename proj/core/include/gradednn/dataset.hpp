#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gradednn/graded_core.hpp"

namespace gnn {

/// Paired inputs and targets. Inputs share one grading, targets share another.
struct Dataset {
  std::vector<GradedVector> inputs;
  std::vector<GradedVector> targets;
  std::string provenance;

  std::size_t size() const { return inputs.size(); }
  /// Throws ShapeError on count, length, or grading disagreement.
  void validate() const;
};

/// Axis-aligned sampling box, one [lo, hi) interval per input coordinate.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box uniform(std::size_t n, double lo, double hi) { return {std::vector<double>(n, lo), std::vector<double>(n, hi)}; }
};

/// c * prod_i |x_i|^{k_i} sgn(x_i)^{k_i}, with k_i = 0 factors dropped.
double monomial_value(std::span<const double> x, std::span<const Rational> exponents, double coefficient);

/// Samples `count` points uniformly in `box` with monomial targets. Targets
/// carry the single grade sum_i q_i k_i (or 1 when that is zero).
/// Throws ConfigError for an empty box or a box reaching x <= 0 when some
/// exponent is not an integer.
Dataset gen_monomial_dataset(const GradingVector& grading, std::span<const Rational> exponents, double coefficient,
                             const Box& box, std::size_t count, std::uint64_t seed);

/// Teacher-student regression instance for a block-structured linear layer.
/// A teacher layer with grade-preserving blocks (weight bases drawn like a
/// fresh initialization) labels inputs sampled from `box`; the targets are
/// graded-homogeneous of degree 0 in each grade group and exactly realizable
/// by the student architecture.
Dataset gen_graded_linear_dataset(const GradingVector& grading, const Box& box, std::size_t count,
                                  std::uint64_t seed);

/// CSV with header x0..x{n-1},y0..y{m-1}; floats written with 17 significant digits.
void write_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_csv(const std::filesystem::path& path, const GradingVector& input_grading,
                 const GradingVector& target_grading);

}  // namespace gnn

namespace gnn {

/// splitmix64 of (base, stream): independent, reproducible sub-seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace gnn
