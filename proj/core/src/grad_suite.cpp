#include "gradednn/grad_suite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnn {

namespace {

constexpr double kMargin = 0.05;

const Activation kActivations[] = {Activation::GradedRelu, Activation::SignedGradedRelu, Activation::GradedExp,
                                   Activation::ClassicalRelu, Activation::Identity};

LossKind loss_for(std::size_t index) {
  switch (index % 7) {
    case 0: return LossKind::mse();
    case 1: return LossKind::norm();
    case 2: return LossKind::huber(0.5);
    case 3: return LossKind::homogeneous(HomogeneousScheme::ByDistinctCount);
    case 4: return LossKind::homogeneous(HomogeneousScheme::ByMaxGrade);
    case 5: return LossKind::cross_entropy();
    default: return LossKind::max_graded();
  }
}

GradingVector random_grading(std::size_t n, bool integer_only, std::mt19937_64& rng) {
  static const Rational choices[] = {Rational(1), Rational(2), Rational(3), Rational(1, 2), Rational(3, 2)};
  std::uniform_int_distribution<int> pick(0, integer_only ? 2 : 4);
  std::vector<Rational> g(n);
  for (auto& v : g) v = choices[pick(rng)];
  return GradingVector(std::move(g));
}

bool clear_of_kinks(const Network& net, const GradedVector& x) {
  std::vector<double> h(x.values().begin(), x.values().end());
  for (const auto& layer : net.layers()) {
    std::vector<double> z(layer.rows());
    layer.pre_activation(h, z);
    const auto r = layer.out_grading().reals();
    std::vector<double> next(layer.rows());
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (layer.activation() != Activation::Identity && layer.activation() != Activation::GradedExp &&
          std::abs(z[j]) < kMargin) {
        return false;
      }
      if (!std::isfinite(z[j]) || std::abs(z[j]) > 20.0) return false;
      next[j] = activate(layer.activation(), z[j], r[j]);
      if (std::abs(next[j]) > 50.0) return false;
    }
    h = std::move(next);
  }
  return true;
}

bool loss_is_smooth(const LossKind& kind, const GradedVector& y, const GradedVector& yhat) {
  const auto q = y.grading().reals();
  switch (kind.tag) {
    case LossTag::GradedHuber:
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(std::abs(y[i] - yhat[i]) - kind.delta) < kMargin) return false;
      }
      return true;
    case LossTag::MaxGraded: {
      std::vector<double> v;
      for (std::size_t i = 0; i < y.size(); ++i) v.push_back(std::sqrt(q[i]) * std::abs(y[i] - yhat[i]));
      std::sort(v.rbegin(), v.rend());
      return v[0] > kMargin && (v.size() == 1 || v[0] - v[1] > kMargin);
    }
    case LossTag::GradedCrossEntropy:
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] > 0.0 && yhat[i] < kMargin) return false;
      }
      return true;
    case LossTag::Homogeneous:
      for (double n : group_norms([&] {
             GradedVector d = y;
             for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[i] - yhat[i];
             return d;
           }())) {
        if (n < kMargin) return false;
      }
      return true;
    default:
      return true;
  }
}

}  // namespace

GradCheckCase random_grad_case(std::size_t index, std::mt19937_64& rng) {
  const LossKind kind = loss_for(index);
  const bool with_head = index % 4 == 3 && kind.tag != LossTag::GradedCrossEntropy &&
                         !(kind.tag == LossTag::Homogeneous && kind.scheme == HomogeneousScheme::ByMaxGrade);
  std::uniform_int_distribution<std::size_t> depth_dist(1, 3), width_dist(1, 8);
  std::uniform_real_distribution<double> wdist(0.2, 1.5), bdist(-0.5, 0.5), xdist(-1.0, 1.0), pdist(0.1, 1.0);

  for (int attempt = 0; attempt < 200; ++attempt) {
    const std::size_t depth = depth_dist(rng);
    std::vector<GradingVector> gradings{random_grading(width_dist(rng), false, rng)};
    for (std::size_t l = 0; l < depth; ++l) {
      const bool last = l + 1 == depth;
      // ByMaxGrade needs integer output grades.
      const bool integer_only = last && !with_head && kind.tag == LossTag::Homogeneous &&
                                kind.scheme == HomogeneousScheme::ByMaxGrade;
      gradings.push_back(random_grading(width_dist(rng), integer_only, rng));
    }
    std::vector<Layer> layers;
    for (std::size_t l = 0; l < depth; ++l) {
      Activation act = kActivations[(index + l) % 5];
      const bool last = l + 1 == depth;
      if (last && kind.tag == LossTag::GradedCrossEntropy) act = Activation::SignedGradedRelu;
      const std::size_t rows = gradings[l + 1].size(), cols = gradings[l].size();
      std::vector<double> w(rows * cols), b(rows);
      for (auto& v : w) v = wdist(rng);
      for (auto& v : b) v = bdist(rng);
      layers.emplace_back(gradings[l], gradings[l + 1], std::move(w), std::move(b), act);
    }
    std::optional<MultiplicativeNeuron> head;
    if (with_head) {
      const auto& g = gradings.back();
      std::uniform_int_distribution<int> kdist(0, 2);
      std::vector<double> w(g.size());
      std::vector<Rational> k(g.size());
      for (auto& v : w) v = wdist(rng);
      for (auto& v : k) v = Rational(kdist(rng));
      head.emplace(g, std::move(w), std::move(k), bdist(rng));
    }
    Network net(gradings.front(), std::move(layers), std::move(head));

    std::vector<double> xv(gradings.front().size());
    for (auto& v : xv) v = xdist(rng);
    GradedVector x(gradings.front(), std::move(xv));
    if (!clear_of_kinks(net, x)) continue;
    const auto yhat = network_forward(net, x);
    if (!yhat.is_finite() || max_graded_norm(yhat) > 100.0) continue;
    std::vector<double> yv(yhat.size());
    for (auto& v : yv) v = kind.tag == LossTag::GradedCrossEntropy ? pdist(rng) : xdist(rng);
    GradedVector y(net.output_grading(), std::move(yv));
    if (!loss_is_smooth(kind, y, yhat)) continue;
    return {std::move(net), std::move(x), std::move(y), kind};
  }
  throw std::runtime_error("could not draw a gradient-check case clear of kinks");
}

GradCheckSummary run_grad_check_suite(std::size_t cases, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GradCheckSummary summary;
  summary.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    const auto gc = random_grad_case(c, rng);
    const double err = finite_diff_check(gc.net, gc.x, gc.y, gc.kind, eps);
    summary.errors.push_back(err);
    if (c == 0 || err > summary.max_error) {
      summary.max_error = err;
      summary.worst_case = c;
    }
  }
  return summary;
}

}  // namespace gnn
