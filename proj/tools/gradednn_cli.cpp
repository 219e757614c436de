// Command-line harness: worked-example verification, gradient checks,
// training runs, and the graded-vs-classical approximation benchmark.

#include <CLI11.hpp>
#include <chrono>
#include <iomanip>
#include <iostream>

#include "gradednn/gradednn.hpp"

namespace {

int cmd_verify_examples() {
  const auto start = std::chrono::steady_clock::now();
  const auto report = gnn::verify_examples();
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::cout << report.format() << "elapsed " << std::fixed << std::setprecision(1) << ms << " ms\n";
  return report.ok() ? 0 : 1;
}

int cmd_grad_check(double eps, std::size_t cases, std::uint64_t seed) {
  if (eps < 1e-7 || eps > 1e-4) {
    std::cerr << "grad-check: --eps must lie in [1e-7, 1e-4]\n";
    return 2;
  }
  const auto summary = gnn::run_grad_check_suite(cases, eps, seed);
  std::cout << "grad-check: " << summary.cases << " random networks, eps " << eps << ", max relative error "
            << std::setprecision(3) << std::scientific << summary.max_error << " (case " << summary.worst_case
            << ")\n";
  const bool ok = summary.max_error < 1e-5;
  std::cout << (ok ? "PASS" : "FAIL") << " threshold 1e-5\n";
  return ok ? 0 : 1;
}

int cmd_train(const std::string& config) {
  const auto cfg = gnn::ExperimentConfig::load(config);
  const auto summary = gnn::run_training(cfg);
  std::cout << summary.format() << '\n';
  return 0;
}

int cmd_approx_bench(const std::string& config, const std::string& out) {
  const auto cfg = config.empty() ? gnn::ApproxBenchConfig{} : gnn::ApproxBenchConfig::load(config);
  const auto rows = gnn::approx_bench(cfg);
  gnn::write_bench_csv(rows, out);
  std::cout << std::left << std::setw(18) << "model" << std::setw(9) << "neurons" << "max_error\n";
  for (const auto& r : rows) {
    std::cout << std::setw(18) << r.model << std::setw(9) << r.neurons << std::setprecision(6) << std::scientific
              << r.max_error << (r.diverged ? "  (diverged)" : "") << '\n';
  }
  std::cout << "wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded neural network toolkit"};
  app.require_subcommand(1);

  app.add_subcommand("verify-examples", "Recompute the reference worked examples");

  auto* grad = app.add_subcommand("grad-check", "Compare analytic gradients with central differences");
  double eps = gnn::kDefaultFiniteDiffEps;
  std::size_t cases = 100;
  std::uint64_t seed = 1;
  grad->add_option("--eps", eps, "Finite-difference step")->capture_default_str();
  grad->add_option("--networks", cases, "Number of random networks")->capture_default_str();
  grad->add_option("--seed", seed, "RNG seed")->capture_default_str();

  auto* train = app.add_subcommand("train", "Train a model from a JSON config");
  std::string train_config;
  train->add_option("--config", train_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("approx-bench", "Error vs neuron count: graded neuron vs ReLU MLPs");
  std::string bench_config, bench_out;
  bench->add_option("--config", bench_config, "Benchmark config (JSON); defaults when omitted")->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "Output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("verify-examples")) return cmd_verify_examples();
    if (app.got_subcommand(grad)) return cmd_grad_check(eps, cases, seed);
    if (app.got_subcommand(train)) return cmd_train(train_config);
    if (app.got_subcommand(bench)) return cmd_approx_bench(bench_config, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
