#include "gradednn/graded_grad.hpp"

#include <algorithm>
#include <cmath>

#include "gradednn/errors.hpp"

namespace gnn {

GradedVector loss_grad(const LossKind& kind, const GradedVector& y, const GradedVector& yhat) {
  require_same_grading(y, yhat, "loss gradient");
  const auto q = y.grading().reals();
  const std::size_t n = y.size();
  GradedVector g = GradedVector::zeros(y.grading());
  switch (kind.tag) {
    case LossTag::GradedMSE:
    case LossTag::GradedNorm: {
      const double scale = kind.tag == LossTag::GradedMSE ? 2.0 / static_cast<double>(n) : 2.0;
      for (std::size_t i = 0; i < n; ++i) g[i] = scale * q[i] * (yhat[i] - y[i]);
      break;
    }
    case LossTag::GradedHuber:
      for (std::size_t i = 0; i < n; ++i) g[i] = q[i] * std::clamp(yhat[i] - y[i], -kind.delta, kind.delta);
      break;
    case LossTag::Homogeneous: {
      GradedVector diff = yhat;
      for (std::size_t i = 0; i < n; ++i) diff[i] = yhat[i] - y[i];
      const auto ex = homogeneous_exponents(y.grading(), kind.scheme);
      const auto norms = group_norms(diff);
      double sum = 0.0;
      for (std::size_t j = 0; j < norms.size(); ++j) sum += std::pow(norms[j], ex.group[j]);
      if (sum == 0.0) break;
      // L = S^{2/E}; dL/dd_i = (2/E) S^{2/E - 1} e_j n_j^{e_j - 2} d_i for i in group j.
      const double outer = 2.0 / ex.outer * std::pow(sum, 2.0 / ex.outer - 1.0);
      const auto distinct = y.grading().distinct();
      for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(
            std::lower_bound(distinct.begin(), distinct.end(), y.grading()[i]) - distinct.begin());
        g[i] = outer * ex.group[j] * std::pow(norms[j], ex.group[j] - 2.0) * diff[i];
      }
      break;
    }
    case LossTag::GradedCrossEntropy:
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] < 0.0) throw DomainError("cross-entropy targets must be nonnegative");
        if (y[i] != 0.0 && yhat[i] > kProbabilityFloor) g[i] = -q[i] * y[i] / yhat[i];
      }
      break;
    case LossTag::MaxGraded: {
      std::size_t arg = 0;
      double best = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = std::sqrt(q[i]) * std::abs(yhat[i] - y[i]);
        if (v > best) {
          best = v;
          arg = i;
        }
      }
      if (best > 0.0) {
        const double d = yhat[arg] - y[arg];
        g[arg] = 2.0 * std::sqrt(q[arg]) * (d > 0.0 ? 1.0 : -1.0) * best;
      }
      break;
    }
  }
  return g;
}

GradientBundle GradientBundle::zeros_like(const Network& net) {
  GradientBundle b;
  for (const auto& layer : net.layers()) {
    b.layers.push_back({std::vector<double>(layer.weight_base().size(), 0.0), std::vector<double>(layer.rows(), 0.0)});
  }
  if (net.head()) b.head = HeadGradient{std::vector<double>(net.head()->weights().size(), 0.0), 0.0};
  return b;
}

void GradientBundle::add_scaled(const GradientBundle& other, double scale) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t k = 0; k < layers[l].weight_base.size(); ++k) {
      layers[l].weight_base[k] += scale * other.layers[l].weight_base[k];
    }
    for (std::size_t k = 0; k < layers[l].bias.size(); ++k) layers[l].bias[k] += scale * other.layers[l].bias[k];
  }
  if (head) {
    for (std::size_t k = 0; k < head->weights.size(); ++k) head->weights[k] += scale * other.head->weights[k];
    head->bias += scale * other.head->bias;
  }
  loss += scale * other.loss;
}

double GradientBundle::l2_norm() const {
  double s = 0.0;
  for (const auto& l : layers) {
    for (double v : l.weight_base) s += v * v;
    for (double v : l.bias) s += v * v;
  }
  if (head) {
    for (double v : head->weights) s += v * v;
    s += head->bias * head->bias;
  }
  return std::sqrt(s);
}

namespace {

// Derivatives of one multiplicative neuron output with respect to its weights and inputs.
struct HeadPartials {
  std::vector<double> d_weights;
  std::vector<double> d_inputs;
};

HeadPartials head_partials(const MultiplicativeNeuron& head, std::span<const double> x) {
  const std::size_t n = x.size();
  const auto w = head.weights();
  std::vector<double> term(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& k = head.exponents()[i];
    if (k.is_zero()) continue;
    if (!k.is_integer() && !(x[i] > 0.0)) {
      throw DomainError("multiplicative neuron: non-integer exponent " + k.to_string() + " needs a positive input");
    }
    // |w x|^k s with s = sgn(x)^k equals |w|^k x^k for integer k.
    term[i] = std::pow(std::abs(w[i]), head.exponent(i)) * std::pow(x[i], head.exponent(i));
  }
  std::vector<double> prefix(n + 1, 1.0), suffix(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * term[i];
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * term[i];

  HeadPartials p{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double k = head.exponent(i);
    if (k == 0.0) continue;
    const double others = prefix[i] * suffix[i + 1];
    const double abs_w = std::abs(w[i]);
    const double x_pow = std::pow(x[i], k);
    const double sgn_w = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
    p.d_weights[i] = others * k * std::pow(abs_w, k - 1.0) * sgn_w * x_pow;
    p.d_inputs[i] = others * k * std::pow(abs_w, k) * std::pow(x[i], k - 1.0);
  }
  return p;
}

}  // namespace

GradientBundle network_backward(const Network& net, const GradedVector& x, const GradedVector& y,
                                const LossKind& kind) {
  if (!(x.grading() == net.input_grading())) throw ShapeError("network input grading mismatch");
  const auto layers = net.layers();
  std::vector<std::vector<double>> inputs;   // h_l fed into layer l
  std::vector<std::vector<double>> preacts;  // z_l
  std::vector<double> h(x.values().begin(), x.values().end());
  for (const auto& layer : layers) {
    std::vector<double> z(layer.rows());
    layer.pre_activation(h, z);
    inputs.push_back(h);
    const auto r = layer.out_grading().reals();
    h.assign(layer.rows(), 0.0);
    for (std::size_t j = 0; j < layer.rows(); ++j) h[j] = activate(layer.activation(), z[j], r[j]);
    preacts.push_back(std::move(z));
  }

  GradientBundle bundle = GradientBundle::zeros_like(net);
  std::vector<double> upstream;
  if (const auto& head = net.head()) {
    const GradedVector head_in(head->grading(), h);
    const GradedVector yhat(net.output_grading(), {multiplicative_forward(*head, head_in)});
    bundle.loss = loss_value(kind, y, yhat);
    const double g = loss_grad(kind, y, yhat)[0];
    const auto partials = head_partials(*head, h);
    for (std::size_t i = 0; i < h.size(); ++i) bundle.head->weights[i] = g * partials.d_weights[i];
    bundle.head->bias = g;
    upstream.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) upstream[i] = g * partials.d_inputs[i];
  } else {
    const GradedVector yhat(net.output_grading(), h);
    bundle.loss = loss_value(kind, y, yhat);
    const auto g = loss_grad(kind, y, yhat);
    upstream.assign(g.values().begin(), g.values().end());
  }

  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    const auto q = layer.in_grading().reals();
    const auto r = layer.out_grading().reals();
    const auto& in = inputs[l];
    std::vector<double> delta(layer.rows());
    for (std::size_t j = 0; j < layer.rows(); ++j) {
      delta[j] = upstream[j] * activate_derivative(layer.activation(), preacts[l][j], r[j]);
    }
    auto& lg = bundle.layers[l];
    std::vector<double> down(layer.cols(), 0.0);
    for (std::size_t j = 0; j < layer.rows(); ++j) {
      lg.bias[j] = delta[j];
      if (delta[j] == 0.0) continue;
      for (std::size_t i = 0; i < layer.cols(); ++i) {
        if (!layer.trainable(j, i)) continue;
        const double w = layer.weight_base(j, i);
        lg.weight_base[j * layer.cols() + i] = delta[j] * effective_weight_derivative(w, q[i]) * in[i];
        down[i] += delta[j] * effective_weight(w, q[i]);
      }
    }
    upstream = std::move(down);
  }
  return bundle;
}

GradientBundle batch_backward(const Network& net, std::span<const GradedVector> xs, std::span<const GradedVector> ys,
                              const LossKind& kind) {
  if (xs.size() != ys.size()) throw ShapeError("batch inputs and targets differ in count");
  GradientBundle total = GradientBundle::zeros_like(net);
  if (xs.empty()) return total;
  const double scale = 1.0 / static_cast<double>(xs.size());
  for (std::size_t s = 0; s < xs.size(); ++s) total.add_scaled(network_backward(net, xs[s], ys[s], kind), scale);
  return total;
}

double batch_loss(const Network& net, std::span<const GradedVector> xs, std::span<const GradedVector> ys,
                  const LossKind& kind) {
  if (xs.size() != ys.size()) throw ShapeError("batch inputs and targets differ in count");
  if (xs.empty()) return 0.0;
  double total = 0.0;
  const double scale = 1.0 / static_cast<double>(xs.size());
  for (std::size_t s = 0; s < xs.size(); ++s) total += scale * loss_value(kind, ys[s], network_forward(net, xs[s]));
  return total;
}

std::vector<ParameterSlot> parameter_slots(Network& net) {
  std::vector<ParameterSlot> slots;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    Layer& layer = net.layer(l);
    const auto q = layer.in_grading().reals();
    const auto r = layer.out_grading().reals();
    auto w = layer.weight_base_mut();
    for (std::size_t j = 0; j < layer.rows(); ++j) {
      for (std::size_t i = 0; i < layer.cols(); ++i) {
        if (layer.trainable(j, i)) slots.push_back({&w[j * layer.cols() + i], q[i]});
      }
    }
    auto b = layer.bias_mut();
    for (std::size_t j = 0; j < layer.rows(); ++j) slots.push_back({&b[j], r[j]});
  }
  if (auto* head = net.head_mut()) {
    const auto q = head->grading().reals();
    auto w = head->weights_mut();
    for (std::size_t i = 0; i < w.size(); ++i) slots.push_back({&w[i], q[i]});
    slots.push_back({&head->bias_mut(), head->output_grade().to_double()});
  }
  return slots;
}

std::vector<double> flatten_gradient(const Network& net, const GradientBundle& grad) {
  std::vector<double> flat;
  const auto layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    for (std::size_t j = 0; j < layer.rows(); ++j) {
      for (std::size_t i = 0; i < layer.cols(); ++i) {
        if (layer.trainable(j, i)) flat.push_back(grad.layers[l].weight_base[j * layer.cols() + i]);
      }
    }
    flat.insert(flat.end(), grad.layers[l].bias.begin(), grad.layers[l].bias.end());
  }
  if (net.head()) {
    flat.insert(flat.end(), grad.head->weights.begin(), grad.head->weights.end());
    flat.push_back(grad.head->bias);
  }
  return flat;
}

double finite_diff_check(const Network& net, const GradedVector& x, const GradedVector& y, const LossKind& kind,
                         double eps) {
  const auto analytic = flatten_gradient(net, network_backward(net, x, y, kind));
  Network probe = net;
  auto slots = parameter_slots(probe);
  double worst = 0.0;
  for (std::size_t p = 0; p < slots.size(); ++p) {
    const double saved = *slots[p].value;
    *slots[p].value = saved + eps;
    const double up = loss_value(kind, y, network_forward(probe, x));
    *slots[p].value = saved - eps;
    const double down = loss_value(kind, y, network_forward(probe, x));
    *slots[p].value = saved;
    const double numeric = (up - down) / (2.0 * eps);
    worst = std::max(worst, std::abs(analytic[p] - numeric) / std::max(1.0, std::abs(numeric)));
  }
  return worst;
}

}  // namespace gnn
