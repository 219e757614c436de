#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gradednn/graded_nn.hpp"

namespace gnn {

/// Plain dense MLP with no grading anywhere: hidden layers use max(0, z)
/// (or exp(z) - 1), the output layer is linear. Serves as the ungraded
/// baseline and as an independent reference for the graded code at q = 1.
struct ClassicalMlp {
  enum class Hidden { Relu, ExpMinusOne };

  std::vector<std::size_t> widths;               // input, hidden..., output
  std::vector<std::vector<double>> weights;      // layer l: widths[l+1] x widths[l], row-major
  std::vector<std::vector<double>> biases;
  Hidden hidden = Hidden::Relu;

  std::vector<double> forward(std::span<const double> x) const;
  void validate() const;
};

/// Scalar output of a single-output ReLU MLP.
double classical_mlp_forward(std::span<const std::size_t> widths, const std::vector<std::vector<double>>& weights,
                             const std::vector<std::vector<double>>& biases, std::span<const double> x);

/// Full-batch gradient descent on mean_s sum_j (yhat_j - y_j)^2 with plain
/// backpropagation. Returns the loss before each step and after the last.
std::vector<double> classical_gd_train(ClassicalMlp& mlp, const std::vector<std::vector<double>>& xs,
                                       const std::vector<std::vector<double>>& ys, double eta,
                                       std::size_t iterations);

/// The same function as a graded network with every grade 1: hidden layers
/// ClassicalRelu (or GradedExp), output Identity.
Network to_graded_network(const ClassicalMlp& mlp);

/// Inverse of to_graded_network. Throws ShapeError unless every grade is 1,
/// hidden activations agree, and the last layer is Identity.
ClassicalMlp to_classical_mlp(const Network& net);

}  // namespace gnn
