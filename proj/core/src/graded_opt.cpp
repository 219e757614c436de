#include "gradednn/graded_opt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gradednn/errors.hpp"

namespace gnn {

void OptimizerConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("optimizer eta must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("optimizer momentum must lie in [0, 1)");
  if (window == 0) throw ConfigError("optimizer window must be positive");
}

GradeAdaptiveSgd::GradeAdaptiveSgd(OptimizerConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void GradeAdaptiveSgd::step(Network& net, const GradientBundle& grad) {
  auto slots = parameter_slots(net);
  const auto g = flatten_gradient(net, grad);
  if (velocity_.size() != slots.size()) velocity_.assign(slots.size(), 0.0);
  for (std::size_t p = 0; p < slots.size(); ++p) {
    velocity_[p] = cfg_.momentum * velocity_[p] - cfg_.eta / slots[p].grade * g[p];
    *slots[p].value += velocity_[p];
  }
}

void sgd_step(Network& net, const GradientBundle& grad, const OptimizerConfig& cfg) {
  GradeAdaptiveSgd(cfg).step(net, grad);
}

void init_uniform(Network& net, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    Layer& layer = net.layer(l);
    auto w = layer.weight_base_mut();
    for (std::size_t j = 0; j < layer.rows(); ++j) {
      for (std::size_t i = 0; i < layer.cols(); ++i) w[j * layer.cols() + i] = layer.trainable(j, i) ? dist(rng) : 0.0;
    }
    for (auto& b : layer.bias_mut()) b = 0.0;
  }
  if (auto* head = net.head_mut()) {
    for (auto& w : head->weights_mut()) w = dist(rng);
    head->bias_mut() = 0.0;
  }
}

namespace {

std::string diagnose_overflow(const Network& net, const Dataset& data, std::size_t iteration) {
  std::ostringstream msg;
  msg << "non-finite loss at iteration " << iteration << ": ";
  for (std::size_t s = 0; s < data.size(); ++s) {
    GradedVector h = data.inputs[s];
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
      h = layer_forward(net.layers()[l], h);
      if (!h.is_finite()) {
        msg << "layer " << l << " produced non-finite activations on sample " << s
            << "; consider log-domain evaluation or smaller initial weights (|w| < 1)";
        return msg.str();
      }
    }
    if (net.head()) {
      const double v = multiplicative_forward(*net.head(), h);
      if (!std::isfinite(v)) {
        msg << "multiplicative head produced a non-finite value on sample " << s
            << "; consider log-domain evaluation or smaller initial weights (|w| < 1)";
        return msg.str();
      }
    }
  }
  msg << "the loss overflowed on finite network outputs; consider a smaller learning rate or log-domain evaluation";
  return msg.str();
}

}  // namespace

TrainResult train(Network net, const Dataset& data, const LossKind& kind, const OptimizerConfig& cfg) {
  cfg.validate();
  data.validate();
  if (!data.inputs.empty() && !(data.inputs[0].grading() == net.input_grading())) {
    throw ShapeError("dataset input grading " + data.inputs[0].grading().to_string() +
                     " does not match network input grading " + net.input_grading().to_string());
  }
  if (!data.targets.empty() && !(data.targets[0].grading() == net.output_grading())) {
    throw ShapeError("dataset target grading " + data.targets[0].grading().to_string() +
                     " does not match network output grading " + net.output_grading().to_string());
  }
  GradeAdaptiveSgd opt(cfg);
  TrainResult result{std::move(net), {}, {}, "max_iterations"};
  for (std::size_t t = 0;; ++t) {
    const auto grad = batch_backward(result.net, data.inputs, data.targets, kind);
    const double gnorm = grad.l2_norm();
    if (!std::isfinite(grad.loss) || !std::isfinite(gnorm)) {
      throw TrainingDiverged(diagnose_overflow(result.net, data, t));
    }
    result.loss_history.push_back(grad.loss);
    result.grad_norms.push_back(gnorm);
    if (t >= cfg.max_iterations) break;
    if (t >= cfg.window && result.loss_history[t - cfg.window] - grad.loss <= cfg.tolerance) {
      result.stop_reason = "converged";
      break;
    }
    opt.step(result.net, grad);
  }
  return result;
}

double gradient_lipschitz_estimate(const Network& net, const Dataset& data) {
  double max_q = 0.0;
  for (double q : net.input_grading().reals()) max_q = std::max(max_q, q);
  for (double q : net.output_grading().reals()) max_q = std::max(max_q, q);
  double max_x = 0.0;
  for (const auto& x : data.inputs) {
    double s = 1.0;
    for (double v : x.values()) s += v * v;
    max_x = std::max(max_x, s);
  }
  return 2.0 * max_q * max_q * max_x;
}

}  // namespace gnn
