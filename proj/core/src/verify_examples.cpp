#include "gradednn/verify_examples.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "gradednn/graded_grad.hpp"
#include "gradednn/graded_loss.hpp"
#include "gradednn/graded_nn.hpp"
#include "gradednn/graded_opt.hpp"

namespace gnn {

bool VerifyReport::ok() const { return count(RowStatus::Fail) == 0; }

std::size_t VerifyReport::count(RowStatus s) const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.status == s;
  return n;
}

std::string VerifyReport::format() const {
  std::ostringstream os;
  for (const auto& r : rows) {
    const char* tag = r.status == RowStatus::Pass ? "PASS " : r.status == RowStatus::Fail ? "FAIL " : "FLAG ";
    os << tag << std::left << std::setw(30) << r.id << " expected " << r.expected << "  computed " << r.computed;
    if (!r.note.empty()) os << "  [" << r.note << "]";
    os << '\n';
  }
  os << count(RowStatus::Pass) << " passed, " << count(RowStatus::Fail) << " failed, "
     << count(RowStatus::Flagged) << " flagged (paper-inconsistent, derived value shown)\n";
  return os.str();
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class Recorder {
 public:
  void close(const std::string& id, double computed, double expected, double tol, const std::string& expected_text = {}) {
    const bool ok = std::abs(computed - expected) <= tol;
    std::ostringstream note;
    note << "tol " << tol;
    rows_.push_back({id, expected_text.empty() ? num(expected) : expected_text, num(computed),
                     ok ? RowStatus::Pass : RowStatus::Fail, note.str()});
  }

  // Printed value disagrees with the definition; the derived value must still match `derived`.
  void flag(const std::string& id, const std::string& printed, const std::string& computed, bool derived_ok,
            const std::string& note) {
    rows_.push_back({id, "printed " + printed, computed, derived_ok ? RowStatus::Flagged : RowStatus::Fail,
                     note});
  }

  void check(const std::string& id, const std::string& expected, const std::string& computed, bool ok,
             const std::string& note) {
    rows_.push_back({id, expected, computed, ok ? RowStatus::Pass : RowStatus::Fail, note});
  }

  void exact(const std::string& id, const std::string& expected, const std::string& computed) {
    rows_.push_back({id, expected, computed, expected == computed ? RowStatus::Pass : RowStatus::Fail, "exact"});
  }

  VerifyReport take() { return {std::move(rows_)}; }

 private:
  std::vector<ExampleRow> rows_;
};

}  // namespace

VerifyReport verify_examples() {
  Recorder rec;
  const auto q7 = GradingVector::parse("2,2,2,3,3,3,3");

  const GradedVector x_norm(q7, {1, 0, 1, 1, -1, 0, 1});
  rec.close("graded_euclidean_norm", graded_euclidean_norm(x_norm), std::sqrt(13.0), 1e-12, "sqrt(13)");
  rec.close("max_graded_norm", max_graded_norm(x_norm), std::sqrt(3.0), 1e-12, "sqrt(3)");

  const GradedVector u(q7, {2, -3, 1, 1, -2, 1, 1});
  const auto relu = graded_relu(u);
  const double closed[7] = {std::sqrt(2.0), std::sqrt(3.0), 1, 1, std::cbrt(2.0), 1, 1};
  const double printed[7] = {1.414, 1.732, 1, 1, 1.260, 1, 1};
  for (int i = 0; i < 7; ++i) {
    rec.close("graded_relu[" + std::to_string(i) + "]", relu[i], closed[i], 1e-12);
    rec.close("graded_relu[" + std::to_string(i) + "] printed", relu[i], printed[i], 1e-3);
  }

  const auto ex = graded_exp(u);
  rec.close("graded_exp[0]", ex[0], std::exp(1.0) - 1.0, 1e-12, "e - 1");
  rec.close("graded_exp[1]", ex[1], std::exp(-1.5) - 1.0, 1e-12, "e^-1.5 - 1");
  rec.close("graded_exp[0] printed", ex[0], 1.718, 1e-3);
  rec.close("graded_exp[1] printed", ex[1], -0.777, 1e-3);

  const MultiplicativeNeuron beta(q7, std::vector<double>(7, 1.0), {1, 0, 0, 2, 0, 0, 0}, 0.0);
  rec.close("multiplicative_neuron", multiplicative_forward(beta, GradedVector(q7, {1, 0, 0, 2, 0, 0, 0})), 4.0, 1e-12);

  const GradedVector y(q7, {1, 0, 1, 1, -1, 0, 1});
  const GradedVector yhat(q7, {0, 1, 0, 1, 0, -1, 0});
  {
    // y - yhat = (1, -1, 1, 0, -1, 1, 1), so sum q_i z_i^2 = 2+2+2 + 0+3+3+3 = 15.
    // The printed itemization lists the same terms but totals 13.
    const double mse = graded_mse(y, yhat);
    const double norm = graded_norm_loss(y, yhat);
    const bool ok = std::abs(mse - 15.0 / 7.0) <= 1e-12 && std::abs(norm - 15.0) <= 1e-12;
    rec.flag("loss graded_mse / graded_norm", "13/7 (1.857) / 13", num(mse) + " / " + num(norm), ok,
             "paper-inconsistent, derived values 15/7 / 15 shown");
  }
  rec.close("loss homogeneous", homogeneous_loss(y, yhat, HomogeneousScheme::ByDistinctCount), std::sqrt(12.0),
            1e-12, "sqrt(12)");
  rec.close("loss homogeneous printed", homogeneous_loss(y, yhat, HomogeneousScheme::ByDistinctCount), 3.464, 1e-3);
  rec.close("loss max_graded", max_graded_loss(y, yhat), 3.0, 1e-12);

  {
    // Every |y_i - yhat_i| is 0 or 1 <= delta, so only the quadratic branch applies:
    // sum q_i z_i^2 / 2 = (2+2+2)/2 + (0+3+3+3)/2 = 7.5.
    const double huber = graded_huber(y, yhat, 1.0);
    rec.flag("loss huber delta=1", "6.5", num(huber), std::abs(huber - 7.5) <= 1e-12,
             "paper-inconsistent, derived value 7.5 shown");
  }

  rec.exact("tensor_grading (1,2)x(3,4)",
            "4,5,5,6", tensor_grading(GradingVector::parse("1,2"), GradingVector::parse("3,4")).to_string());
  {
    const auto t = tensor_grading(GradingVector::parse("1/2,1/3"), GradingVector::parse("1/2,1/3"));
    rec.exact("tensor_grading 1/2+1/3", "5/6", t[1].to_string());
  }

  {
    // Single term with w = 1.5, q = 10, x = 0.1.
    const auto g10 = GradingVector::parse("10");
    const AdditiveNeuron n(g10, {1.5}, 0.0);
    const GradedVector x(g10, {0.1});
    const double direct = additive_forward(n, x);
    const auto lv = log_domain_forward(n, x);
    const double want_direct = std::pow(1.5, 10) * 0.1;
    const double want_log = 10 * std::log(1.5) + std::log(0.1);
    const bool ok = std::abs(direct - want_direct) <= 1e-12 * want_direct && std::abs(lv.log_magnitude - want_log) <= 1e-12 &&
                    lv.sign == 1;
    rec.flag("log-domain magnitudes", "5.7e5 / 4.05", num(direct) + " / " + num(lv.log_magnitude), ok,
             "paper-inconsistent, derived values 5.7665 / 1.7520 shown");
  }

  {
    const GradedVector a(q7, {1, -2, 0, 1, 0, 1, 1});
    const GradedVector b(q7, {0, -1, 1, 1, -1, 0, 1});
    const auto ra = graded_relu(a);
    const auto rb = graded_relu(b);
    GradedVector dr = ra, dx = a;
    for (std::size_t i = 0; i < 7; ++i) {
      dr[i] = ra[i] - rb[i];
      dx[i] = a[i] - b[i];
    }
    const double lhs = graded_euclidean_norm(dr) * graded_euclidean_norm(dr);
    const double rhs = graded_euclidean_norm(dx) * graded_euclidean_norm(dx);
    // (1, sqrt2 - 1, -1, 0, -1, 1, 0) weighted: 2 + 2(sqrt2-1)^2 + 2 + 3 + 3 = 16 - 4 sqrt2.
    const double want_lhs = 16.0 - 4.0 * std::sqrt(2.0);
    const bool ok = std::abs(lhs - want_lhs) <= 1e-12 && std::abs(rhs - 12.0) <= 1e-12;
    rec.flag("activation stability norms", "7.342 / 10", num(lhs) + " / " + num(rhs), ok,
             "paper-inconsistent, derived values 10.343 / 12 shown");
  }

  {
    // Single 7x7 identity-activation layer, x = y = e_0 + e_3, weights 1; the
    // target is shifted so the initial loss is 10.5, then trained with eta_i = 0.01/q_i.
    const GradedVector xin(q7, {1, 0, 0, 1, 0, 0, 0});
    Layer layer(q7, q7, std::vector<double>(49, 1.0), std::vector<double>(7, 0.0), Activation::Identity);
    Network net(q7, {layer});
    auto target = network_forward(net, xin);
    const double shift = std::sqrt(10.5 / 18.0);  // sum q_i = 18
    for (std::size_t i = 0; i < 7; ++i) target[i] += shift;
    Dataset data{{xin}, {target}, "descent example"};
    OptimizerConfig cfg;
    cfg.eta = 0.01;
    cfg.max_iterations = 1000;
    cfg.tolerance = -1.0;
    const auto res = train(net, data, LossKind::norm(), cfg);
    std::size_t reached = res.loss_history.size();
    for (std::size_t t = 0; t < res.loss_history.size(); ++t) {
      if (res.loss_history[t] < 0.02) {
        reached = t;
        break;
      }
    }
    const bool ok = std::abs(res.loss_history.front() - 10.5) <= 1e-9 && reached <= 1000;
    std::ostringstream comp;
    if (reached < res.loss_history.size()) {
      comp << num(res.loss_history[reached]) << " at iteration " << reached;
    } else {
      comp << num(res.loss_history.back()) << " after " << res.loss_history.size() - 1 << " iterations";
    }
    rec.check("descent 10.5 -> < 0.02", "initial 10.5, < 0.02 within 1000 iterations", comp.str(), ok,
              "eta_i = 0.01/q_i");
  }

  return rec.take();
}

}  // namespace gnn
