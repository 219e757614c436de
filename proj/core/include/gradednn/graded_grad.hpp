#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gradednn/graded_loss.hpp"
#include "gradednn/graded_nn.hpp"

namespace gnn {

/// Gradient of the loss with respect to the prediction yhat.
///
/// MaxGraded returns the lowest-index subgradient on ties. Homogeneous returns
/// zero at yhat == y, where the loss attains its minimum.
GradedVector loss_grad(const LossKind& kind, const GradedVector& y, const GradedVector& yhat);

struct LayerGradient {
  std::vector<double> weight_base;  // row-major, zero on block-masked entries
  std::vector<double> bias;
};

struct HeadGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Gradients shaped like a Network's parameters, plus the loss they came from.
struct GradientBundle {
  std::vector<LayerGradient> layers;
  std::optional<HeadGradient> head;
  double loss = 0.0;

  static GradientBundle zeros_like(const Network& net);
  /// this += scale * other (parameters and loss).
  void add_scaled(const GradientBundle& other, double scale);
  double l2_norm() const;
};

/// Reverse-mode gradient of kind(y, net(x)) for one sample.
GradientBundle network_backward(const Network& net, const GradedVector& x, const GradedVector& y,
                                const LossKind& kind);

/// Mean loss and mean gradient over a batch, accumulated in sample order.
GradientBundle batch_backward(const Network& net, std::span<const GradedVector> xs,
                              std::span<const GradedVector> ys, const LossKind& kind);

double batch_loss(const Network& net, std::span<const GradedVector> xs, std::span<const GradedVector> ys,
                  const LossKind& kind);

/// A trainable scalar in a network together with the grade that sets its
/// learning rate: the input-coordinate grade for weights, the output grade for biases.
struct ParameterSlot {
  double* value;
  double grade;
};

/// Trainable parameters in a fixed order: per layer the unmasked weights
/// (row-major) then the biases, then head weights and head bias.
std::vector<ParameterSlot> parameter_slots(Network& net);

/// Gradient entries in parameter_slots() order.
std::vector<double> flatten_gradient(const Network& net, const GradientBundle& grad);

inline constexpr double kDefaultFiniteDiffEps = 1e-5;

/// Central-difference check of network_backward. Returns
/// max over parameters of |analytic - numeric| / max(1, |numeric|).
double finite_diff_check(const Network& net, const GradedVector& x, const GradedVector& y, const LossKind& kind,
                         double eps = kDefaultFiniteDiffEps);

}  // namespace gnn
