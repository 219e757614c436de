#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gradednn/dataset.hpp"
#include "gradednn/graded_grad.hpp"

namespace gnn {

struct OptimizerConfig {
  double eta = 0.01;        // base rate; parameter of grade q moves with eta / q
  double momentum = 0.0;    // beta in [0, 1)
  std::size_t max_iterations = 1000;
  double tolerance = 0.0;   // stop once the loss drops by <= this over `window` iterations
  std::size_t window = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Gradient descent with per-parameter rates eta / q: weights use the grade of
/// their input coordinate, biases the grade of their output coordinate.
/// With momentum, v <- beta v - (eta/q) g and theta <- theta + v.
class GradeAdaptiveSgd {
 public:
  explicit GradeAdaptiveSgd(OptimizerConfig cfg);

  void step(Network& net, const GradientBundle& grad);
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  std::vector<double> velocity_;
};

/// One stateless step (zero incoming velocity).
void sgd_step(Network& net, const GradientBundle& grad, const OptimizerConfig& cfg);

/// Weight bases uniform in [lo, hi), biases zero; masked block entries stay zero.
void init_uniform(Network& net, std::uint64_t seed, double lo = 0.2, double hi = 0.9);

struct TrainResult {
  Network net;
  std::vector<double> loss_history;  // loss at every visited iterate, starting with the initial one
  std::vector<double> grad_norms;
  std::string stop_reason;
};

/// Full-batch training on the mean loss over the dataset. Deterministic for a
/// fixed network, dataset order, and config. Throws TrainingDiverged naming
/// the first layer with non-finite activations when the loss overflows.
TrainResult train(Network net, const Dataset& data, const LossKind& kind, const OptimizerConfig& cfg);

/// C * max q^2 * max_s (||x_s||^2 + 1) with C = 2, q over the network's
/// input and output gradings. Bias terms count as a constant unit input.
double gradient_lipschitz_estimate(const Network& net, const Dataset& data);

}  // namespace gnn
