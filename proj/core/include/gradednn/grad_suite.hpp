#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gradednn/graded_grad.hpp"

namespace gnn {

/// One randomized gradient-check instance.
struct GradCheckCase {
  Network net;
  GradedVector x;
  GradedVector y;
  LossKind kind;
};

/// Draws a network with 1 to 3 layers of width <= 8, weight bases in
/// (0.2, 1.5), activations and loss chosen by `index` so a run of
/// consecutive indices covers every activation and loss kind. Every few
/// indices the network ends in a multiplicative neuron. Inputs and targets
/// are redrawn until every pre-activation stays clear of the ReLU kinks and
/// clamp band, hidden values stay below 50 in magnitude, and the loss is away from its own kinks (Huber threshold,
/// max-graded ties, cross-entropy floor).
GradCheckCase random_grad_case(std::size_t index, std::mt19937_64& rng);

struct GradCheckSummary {
  std::size_t cases = 0;
  double max_error = 0.0;
  std::size_t worst_case = 0;
  std::vector<double> errors;
};

GradCheckSummary run_grad_check_suite(std::size_t cases, double eps, std::uint64_t seed);

}  // namespace gnn
