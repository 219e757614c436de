#include "gradednn/classical_mlp.hpp"

#include <cmath>

#include "gradednn/errors.hpp"

namespace gnn {

void ClassicalMlp::validate() const {
  if (widths.size() < 2) throw ShapeError("MLP needs at least input and output widths");
  if (weights.size() != widths.size() - 1 || biases.size() != widths.size() - 1) {
    throw ShapeError("MLP parameter list length does not match widths");
  }
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    if (weights[l].size() != widths[l + 1] * widths[l] || biases[l].size() != widths[l + 1]) {
      throw ShapeError("MLP layer " + std::to_string(l) + " has mis-sized parameters");
    }
  }
}

namespace {

double hidden_fn(ClassicalMlp::Hidden h, double z) { return h == ClassicalMlp::Hidden::Relu ? (z > 0 ? z : 0.0) : std::exp(z) - 1.0; }
double hidden_dfn(ClassicalMlp::Hidden h, double z) { return h == ClassicalMlp::Hidden::Relu ? (z > 0 ? 1.0 : 0.0) : std::exp(z); }

}  // namespace

std::vector<double> ClassicalMlp::forward(std::span<const double> x) const {
  if (x.size() != widths.front()) throw ShapeError("MLP input width mismatch");
  std::vector<double> a(x.begin(), x.end());
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    std::vector<double> z(widths[l + 1]);
    for (std::size_t j = 0; j < z.size(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += weights[l][j * a.size() + i] * a[i];
      z[j] = s + biases[l][j];
    }
    const bool last = l + 2 == widths.size();
    if (!last) {
      for (auto& v : z) v = hidden_fn(hidden, v);
    }
    a = std::move(z);
  }
  return a;
}

double classical_mlp_forward(std::span<const std::size_t> widths, const std::vector<std::vector<double>>& weights,
                             const std::vector<std::vector<double>>& biases, std::span<const double> x) {
  ClassicalMlp mlp{{widths.begin(), widths.end()}, weights, biases, ClassicalMlp::Hidden::Relu};
  mlp.validate();
  if (widths.back() != 1) throw ShapeError("classical_mlp_forward expects a single output");
  return mlp.forward(x)[0];
}

std::vector<double> classical_gd_train(ClassicalMlp& mlp, const std::vector<std::vector<double>>& xs,
                                       const std::vector<std::vector<double>>& ys, double eta,
                                       std::size_t iterations) {
  mlp.validate();
  const std::size_t layers = mlp.widths.size() - 1;
  std::vector<double> history;
  const double inv_n = xs.empty() ? 0.0 : 1.0 / static_cast<double>(xs.size());
  for (std::size_t t = 0;; ++t) {
    std::vector<std::vector<double>> gw(layers), gb(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      gw[l].assign(mlp.weights[l].size(), 0.0);
      gb[l].assign(mlp.biases[l].size(), 0.0);
    }
    double loss = 0.0;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      std::vector<std::vector<double>> acts{xs[s]}, pre;
      for (std::size_t l = 0; l < layers; ++l) {
        const auto& a = acts.back();
        std::vector<double> z(mlp.widths[l + 1]);
        for (std::size_t j = 0; j < z.size(); ++j) {
          double v = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) v += mlp.weights[l][j * a.size() + i] * a[i];
          z[j] = v + mlp.biases[l][j];
        }
        std::vector<double> out = z;
        if (l + 1 < layers) {
          for (auto& v : out) v = hidden_fn(mlp.hidden, v);
        }
        pre.push_back(std::move(z));
        acts.push_back(std::move(out));
      }
      std::vector<double> delta(mlp.widths.back());
      double sample_loss = 0.0;
      for (std::size_t j = 0; j < delta.size(); ++j) {
        const double d = acts.back()[j] - ys[s][j];
        sample_loss += d * d;
        delta[j] = 2.0 * d;
      }
      loss += inv_n * sample_loss;
      for (std::size_t l = layers; l-- > 0;) {
        if (l + 1 < layers) {
          for (std::size_t j = 0; j < delta.size(); ++j) delta[j] *= hidden_dfn(mlp.hidden, pre[l][j]);
        }
        const auto& a = acts[l];
        std::vector<double> down(a.size(), 0.0);
        for (std::size_t j = 0; j < delta.size(); ++j) {
          gb[l][j] += inv_n * delta[j];
          for (std::size_t i = 0; i < a.size(); ++i) {
            gw[l][j * a.size() + i] += inv_n * delta[j] * a[i];
            down[i] += delta[j] * mlp.weights[l][j * a.size() + i];
          }
        }
        delta = std::move(down);
      }
    }
    history.push_back(loss);
    if (t == iterations) break;
    for (std::size_t l = 0; l < layers; ++l) {
      for (std::size_t k = 0; k < gw[l].size(); ++k) mlp.weights[l][k] -= eta * gw[l][k];
      for (std::size_t k = 0; k < gb[l].size(); ++k) mlp.biases[l][k] -= eta * gb[l][k];
    }
  }
  return history;
}

Network to_graded_network(const ClassicalMlp& mlp) {
  mlp.validate();
  const Activation hidden = mlp.hidden == ClassicalMlp::Hidden::Relu ? Activation::ClassicalRelu : Activation::GradedExp;
  std::vector<Layer> layers;
  for (std::size_t l = 0; l + 1 < mlp.widths.size(); ++l) {
    const bool last = l + 2 == mlp.widths.size();
    layers.emplace_back(GradingVector::uniform(mlp.widths[l]), GradingVector::uniform(mlp.widths[l + 1]),
                        mlp.weights[l], mlp.biases[l], last ? Activation::Identity : hidden);
  }
  return Network(GradingVector::uniform(mlp.widths.front()), std::move(layers));
}

ClassicalMlp to_classical_mlp(const Network& net) {
  if (net.head()) throw ShapeError("classical MLP cannot hold a multiplicative head");
  if (net.layers().empty()) throw ShapeError("classical MLP needs at least one layer");
  ClassicalMlp mlp;
  const auto all_ones = [](const GradingVector& g) {
    for (const auto& q : g.grades()) {
      if (q != Rational(1)) return false;
    }
    return true;
  };
  if (!all_ones(net.input_grading())) throw ShapeError("classical MLP needs unit grades");
  mlp.widths.push_back(net.input_grading().size());
  std::optional<Activation> hidden;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& layer = net.layers()[l];
    if (!all_ones(layer.out_grading())) throw ShapeError("classical MLP needs unit grades");
    const bool last = l + 1 == net.layers().size();
    if (last) {
      if (layer.activation() != Activation::Identity) throw ShapeError("classical MLP output must be linear");
    } else {
      if (layer.activation() != Activation::ClassicalRelu && layer.activation() != Activation::GradedExp) {
        throw ShapeError("classical MLP hidden layers must be ReLU or exp");
      }
      if (hidden && *hidden != layer.activation()) throw ShapeError("classical MLP hidden activations differ");
      hidden = layer.activation();
    }
    mlp.widths.push_back(layer.rows());
    mlp.weights.emplace_back(layer.weight_base().begin(), layer.weight_base().end());
    mlp.biases.emplace_back(layer.bias().begin(), layer.bias().end());
  }
  mlp.hidden = hidden == Activation::GradedExp ? ClassicalMlp::Hidden::ExpMinusOne : ClassicalMlp::Hidden::Relu;
  return mlp;
}

}  // namespace gnn
