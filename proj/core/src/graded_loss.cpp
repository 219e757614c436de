#include "gradednn/graded_loss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gradednn/errors.hpp"

namespace gnn {

LossKind LossKind::huber(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("Huber delta must be positive");
  return {LossTag::GradedHuber, delta};
}

LossKind LossKind::parse(std::string_view name) {
  if (name == "graded_mse") return mse();
  if (name == "graded_norm") return norm();
  if (name == "cross_entropy") return cross_entropy();
  if (name == "max_graded") return max_graded();
  if (name.rfind("huber:", 0) == 0) {
    const std::string arg(name.substr(6));
    std::size_t used = 0;
    double delta = 0.0;
    try {
      delta = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty()) throw ConfigError("malformed Huber delta in '" + std::string(name) + "'");
    try {
      return huber(delta);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (name.rfind("homogeneous:", 0) == 0) return homogeneous(parse_homogeneous_scheme(name.substr(12)));
  throw ConfigError("unknown loss '" + std::string(name) + "'");
}

std::string LossKind::name() const {
  switch (tag) {
    case LossTag::GradedMSE: return "graded_mse";
    case LossTag::GradedNorm: return "graded_norm";
    case LossTag::GradedHuber: {
      std::ostringstream os;
      os.precision(17);
      os << "huber:" << delta;
      return os.str();
    }
    case LossTag::Homogeneous: return "homogeneous:" + std::string(to_string(scheme));
    case LossTag::GradedCrossEntropy: return "cross_entropy";
    case LossTag::MaxGraded: return "max_graded";
  }
  return "graded_norm";
}

double graded_norm_loss(const GradedVector& y, const GradedVector& yhat) {
  require_same_grading(y, yhat, "graded norm loss");
  const auto q = y.grading().reals();
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - yhat[i];
    sum += q[i] * d * d;
  }
  return sum;
}

double graded_mse(const GradedVector& y, const GradedVector& yhat) {
  require_same_grading(y, yhat, "graded MSE");
  return graded_norm_loss(y, yhat) / static_cast<double>(y.size());
}

double graded_huber(const GradedVector& y, const GradedVector& yhat, double delta) {
  require_same_grading(y, yhat, "graded Huber");
  if (!(delta > 0.0)) throw DomainError("Huber delta must be positive");
  const auto q = y.grading().reals();
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double z = std::abs(y[i] - yhat[i]);
    sum += q[i] * (z <= delta ? 0.5 * z * z : delta * z - 0.5 * delta * delta);
  }
  return sum;
}

double homogeneous_loss(const GradedVector& y, const GradedVector& yhat, HomogeneousScheme scheme) {
  require_same_grading(y, yhat, "homogeneous loss");
  GradedVector diff = y;
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = y[i] - yhat[i];
  const double n = homogeneous_norm(diff, scheme);
  return n * n;
}

double graded_cross_entropy(const GradedVector& y, const GradedVector& yhat) {
  require_same_grading(y, yhat, "graded cross-entropy");
  const auto q = y.grading().reals();
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0) throw DomainError("cross-entropy targets must be nonnegative");
    if (y[i] == 0.0) continue;
    sum -= q[i] * y[i] * std::log(std::max(yhat[i], kProbabilityFloor));
  }
  return sum;
}

double max_graded_loss(const GradedVector& y, const GradedVector& yhat) {
  require_same_grading(y, yhat, "max-graded loss");
  const auto q = y.grading().reals();
  double best = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) best = std::max(best, std::sqrt(q[i]) * std::abs(y[i] - yhat[i]));
  return best * best;
}

double loss_value(const LossKind& kind, const GradedVector& y, const GradedVector& yhat) {
  switch (kind.tag) {
    case LossTag::GradedMSE: return graded_mse(y, yhat);
    case LossTag::GradedNorm: return graded_norm_loss(y, yhat);
    case LossTag::GradedHuber: return graded_huber(y, yhat, kind.delta);
    case LossTag::Homogeneous: return homogeneous_loss(y, yhat, kind.scheme);
    case LossTag::GradedCrossEntropy: return graded_cross_entropy(y, yhat);
    case LossTag::MaxGraded: return max_graded_loss(y, yhat);
  }
  return graded_norm_loss(y, yhat);
}

}  // namespace gnn
