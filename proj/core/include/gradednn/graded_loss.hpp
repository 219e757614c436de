#pragma once

#include <string>
#include <string_view>

#include "gradednn/graded_core.hpp"

namespace gnn {

/// Probabilities are clamped to at least this before taking logs.
inline constexpr double kProbabilityFloor = 1e-12;

enum class LossTag { GradedMSE, GradedNorm, GradedHuber, Homogeneous, GradedCrossEntropy, MaxGraded };

/// One of the six graded losses with its parameters.
struct LossKind {
  LossTag tag = LossTag::GradedNorm;
  double delta = 1.0;  // GradedHuber only
  HomogeneousScheme scheme = HomogeneousScheme::ByDistinctCount;  // Homogeneous only

  static LossKind mse() { return {LossTag::GradedMSE}; }
  static LossKind norm() { return {LossTag::GradedNorm}; }
  static LossKind huber(double delta);
  static LossKind homogeneous(HomogeneousScheme scheme) { return {LossTag::Homogeneous, 1.0, scheme}; }
  static LossKind cross_entropy() { return {LossTag::GradedCrossEntropy}; }
  static LossKind max_graded() { return {LossTag::MaxGraded}; }

  /// "graded_mse" | "graded_norm" | "huber:<delta>" | "homogeneous:<scheme>" | "cross_entropy" | "max_graded"
  static LossKind parse(std::string_view name);
  std::string name() const;
};

/// (1/n) sum q_i (y_i - yhat_i)^2
double graded_mse(const GradedVector& y, const GradedVector& yhat);
/// sum q_i (y_i - yhat_i)^2
double graded_norm_loss(const GradedVector& y, const GradedVector& yhat);
/// sum q_i rho_delta(y_i - yhat_i); the quadratic branch includes |z| == delta.
double graded_huber(const GradedVector& y, const GradedVector& yhat, double delta);
/// homogeneous_norm(y - yhat, scheme)^2
double homogeneous_loss(const GradedVector& y, const GradedVector& yhat, HomogeneousScheme scheme);
/// -sum q_i y_i log(max(yhat_i, 1e-12)); y must be nonnegative.
double graded_cross_entropy(const GradedVector& y, const GradedVector& yhat);
/// (max_i q_i^{1/2} |y_i - yhat_i|)^2
double max_graded_loss(const GradedVector& y, const GradedVector& yhat);

double loss_value(const LossKind& kind, const GradedVector& y, const GradedVector& yhat);

}  // namespace gnn
