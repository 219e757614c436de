#include "gradednn/approx_bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "gradednn/classical_mlp.hpp"
#include "gradednn/errors.hpp"

namespace gnn {

namespace {

using nlohmann::json;

OptimizerConfig opt_from_json(const json& j, OptimizerConfig base) {
  for (const auto& [key, value] : j.items()) {
    if (key == "eta") base.eta = value.get<double>();
    else if (key == "momentum") base.momentum = value.get<double>();
    else if (key == "max_iterations") base.max_iterations = value.get<std::size_t>();
    else if (key == "tolerance") base.tolerance = value.get<double>();
    else if (key == "window") base.window = value.get<std::size_t>();
    else throw ConfigError("unknown optimizer key '" + key + "'");
  }
  return base;
}

std::vector<GradedVector> eval_grid(const ApproxBenchConfig& cfg) {
  if (cfg.grading.size() != 2) throw ConfigError("approx-bench grid expects a two-coordinate grading");
  std::vector<GradedVector> grid;
  const std::size_t n = cfg.grid_points;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double u = cfg.grid_lo + (cfg.grid_hi - cfg.grid_lo) * static_cast<double>(a) / static_cast<double>(n - 1);
      const double v = cfg.grid_lo + (cfg.grid_hi - cfg.grid_lo) * static_cast<double>(b) / static_cast<double>(n - 1);
      grid.emplace_back(cfg.grading, std::vector<double>{u, v});
    }
  }
  return grid;
}

double target_value(const GradingVector& q, std::span<const double> x) {
  return monomial_value(x, q.grades(), 1.0);
}

template <class Model>
double max_grid_error(const std::vector<GradedVector>& grid, const GradingVector& q, Model&& model) {
  double worst = 0.0;
  for (const auto& x : grid) {
    const double e = std::abs(model(x) - target_value(q, x.values()));
    if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, e);
  }
  return worst;
}

Network graded_model(const GradingVector& q, std::vector<double> weights, double bias) {
  std::vector<Rational> k(q.grades().begin(), q.grades().end());
  return Network(q, {}, MultiplicativeNeuron(q, std::move(weights), std::move(k), bias));
}

// Unit-grade copy of the training data for the classical baseline.
Dataset ungraded(const Dataset& data) {
  const auto in = GradingVector::uniform(data.inputs.front().size());
  const auto out = GradingVector::uniform(1);
  Dataset d;
  for (std::size_t s = 0; s < data.size(); ++s) {
    d.inputs.emplace_back(in, std::vector<double>(data.inputs[s].values().begin(), data.inputs[s].values().end()));
    d.targets.emplace_back(out, std::vector<double>{data.targets[s][0]});
  }
  d.provenance = data.provenance + " (ungraded)";
  return d;
}

Network random_classical(std::size_t inputs, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ClassicalMlp mlp;
  mlp.widths = {inputs, width, 1};
  mlp.weights = {std::vector<double>(width * inputs), std::vector<double>(width)};
  mlp.biases = {std::vector<double>(width), std::vector<double>(1, 0.0)};
  for (auto& w : mlp.weights[0]) w = dist(rng);
  for (auto& b : mlp.biases[0]) b = dist(rng);
  for (auto& w : mlp.weights[1]) w = dist(rng);
  return to_graded_network(mlp);
}

struct CellResult {
  double error = std::numeric_limits<double>::infinity();
  std::size_t diverged = 0;
};

CellResult run_classical_cell(const ApproxBenchConfig& cfg, const Dataset& data, const std::vector<GradedVector>& grid,
                              std::size_t width, std::size_t cell) {
  CellResult res;
  const LossKind kind = LossKind::norm();
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    const auto seed = mix_seed(cfg.seed, cell * 1000 + r);
    Network net = random_classical(cfg.grading.size(), width, seed);
    try {
      const auto trained = train(std::move(net), data, kind, cfg.classical_opt);
      const auto mlp = to_classical_mlp(trained.net);
      const double err = max_grid_error(grid, cfg.grading, [&](const GradedVector& x) {
        return classical_mlp_forward(mlp.widths, mlp.weights, mlp.biases, x.values());
      });
      if (!std::isfinite(err)) {
        ++res.diverged;
        continue;
      }
      res.error = std::min(res.error, err);
    } catch (const TrainingDiverged&) {
      ++res.diverged;
    }
  }
  return res;
}

}  // namespace

ApproxBenchConfig ApproxBenchConfig::from_json(std::string_view text) {
  ApproxBenchConfig cfg;
  try {
    const json doc = json::parse(text);
    for (const auto& [key, value] : doc.items()) {
      if (key == "grading") cfg.grading = GradingVector::parse(value.get<std::string>());
      else if (key == "widths") cfg.widths = value.get<std::vector<std::size_t>>();
      else if (key == "restarts") cfg.restarts = value.get<std::size_t>();
      else if (key == "train_samples") cfg.train_samples = value.get<std::size_t>();
      else if (key == "grid_points") cfg.grid_points = value.get<std::size_t>();
      else if (key == "grid_lo") cfg.grid_lo = value.get<double>();
      else if (key == "grid_hi") cfg.grid_hi = value.get<double>();
      else if (key == "graded_optimizer") cfg.graded_opt = opt_from_json(value, cfg.graded_opt);
      else if (key == "classical_optimizer") cfg.classical_opt = opt_from_json(value, cfg.classical_opt);
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "parallel") cfg.parallel = value.get<bool>();
      else throw ConfigError("unknown approx-bench key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed approx-bench config: ") + e.what());
  }
  if (cfg.widths.empty() || cfg.restarts == 0 || cfg.grid_points < 2 || cfg.train_samples == 0) {
    throw ConfigError("approx-bench needs widths, restarts >= 1, grid_points >= 2, train_samples >= 1");
  }
  if (!(cfg.grid_lo > 0.0 && cfg.grid_lo < cfg.grid_hi)) throw ConfigError("approx-bench grid must lie inside x > 0");
  return cfg;
}

ApproxBenchConfig ApproxBenchConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read approx-bench config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::vector<BenchRow> approx_bench(const ApproxBenchConfig& cfg) {
  const auto grid = eval_grid(cfg);
  const Box box = Box::uniform(cfg.grading.size(), cfg.grid_lo, cfg.grid_hi);
  const std::vector<Rational> k(cfg.grading.grades().begin(), cfg.grading.grades().end());
  const Dataset data = gen_monomial_dataset(cfg.grading, k, 1.0, box, cfg.train_samples, mix_seed(cfg.seed, 0));
  const Dataset flat = ungraded(data);

  std::vector<BenchRow> rows;

  // Exact representation: w = 1, k = q, b = 0.
  {
    const Network net = graded_model(cfg.grading, std::vector<double>(cfg.grading.size(), 1.0), 0.0);
    const double err = max_grid_error(grid, cfg.grading, [&](const GradedVector& x) { return network_forward(net, x)[0]; });
    rows.push_back({"graded_analytic", 1, err, err, false, 0});
  }

  // The same single neuron trained from a fresh initialization.
  {
    Network net = graded_model(cfg.grading, std::vector<double>(cfg.grading.size(), 0.5), 0.0);
    init_uniform(net, mix_seed(cfg.seed, 1));
    BenchRow row{"graded_trained", 1, std::numeric_limits<double>::infinity(), 0.0, false, 0};
    try {
      const auto res = train(std::move(net), data, LossKind::norm(), cfg.graded_opt);
      row.max_error = max_grid_error(grid, cfg.grading, [&](const GradedVector& x) { return network_forward(res.net, x)[0]; });
    } catch (const TrainingDiverged&) {
      row.diverged = true;
      row.diverged_restarts = 1;
    }
    row.raw_error = row.max_error;
    rows.push_back(row);
  }

  std::vector<CellResult> cells(cfg.widths.size());
  if (cfg.parallel) {
    std::vector<std::future<CellResult>> futures;
    for (std::size_t c = 0; c < cfg.widths.size(); ++c) {
      futures.push_back(std::async(std::launch::async, run_classical_cell, std::cref(cfg), std::cref(flat),
                                   std::cref(grid), cfg.widths[c], c + 2));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = futures[c].get();
  } else {
    for (std::size_t c = 0; c < cfg.widths.size(); ++c) cells[c] = run_classical_cell(cfg, flat, grid, cfg.widths[c], c + 2);
  }

  std::vector<std::size_t> order(cfg.widths.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cfg.widths[a] < cfg.widths[b]; });
  double best = std::numeric_limits<double>::infinity();
  for (const auto c : order) {
    best = std::min(best, cells[c].error);
    rows.push_back({"classical_relu", cfg.widths[c], best, cells[c].error, cells[c].diverged == cfg.restarts,
                    cells[c].diverged});
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "model,neurons,max_error,raw_error,diverged,diverged_restarts\n" << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.model << ',' << r.neurons << ',' << r.max_error << ',' << r.raw_error << ',' << (r.diverged ? 1 : 0) << ','
        << r.diverged_restarts << '\n';
  }
}

std::size_t neurons_to_reach(const std::vector<BenchRow>& rows, std::string_view model, double eps) {
  std::size_t best = 0;
  for (const auto& r : rows) {
    if (r.model == model && r.max_error <= eps && (best == 0 || r.neurons < best)) best = r.neurons;
  }
  return best;
}

}  // namespace gnn
