#include "gradednn/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gradednn/errors.hpp"
#include "gradednn/network_io.hpp"

namespace gnn {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
  return out;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  try {
    const json doc = json::parse(text);
    reject_unknown(doc, {"grading", "model", "loss", "optimizer", "dataset", "output", "seed"}, "config");
    cfg.grading = GradingVector::parse(doc.at("grading").get<std::string>());
    cfg.seed = doc.value("seed", std::uint64_t{0});

    const auto& model = doc.at("model");
    reject_unknown(model, {"layers", "multiplicative"}, "model");
    if (model.contains("layers")) {
      for (const auto& l : model["layers"]) {
        reject_unknown(l, {"grading", "activation", "blocks"}, "layer");
        cfg.layers.push_back({GradingVector::parse(l.at("grading").get<std::string>()),
                              parse_activation(l.value("activation", std::string("identity"))),
                              l.value("blocks", false)});
      }
    }
    if (model.contains("multiplicative")) {
      cfg.multiplicative_exponents = parse_rationals(model["multiplicative"].at("exponents").get<std::string>());
    }
    if (cfg.layers.empty() && !cfg.multiplicative_exponents) throw ConfigError("model needs layers or a multiplicative neuron");

    cfg.loss = LossKind::parse(doc.value("loss", std::string("graded_norm")));

    if (doc.contains("optimizer")) {
      const auto& o = doc["optimizer"];
      reject_unknown(o, {"eta", "momentum", "max_iterations", "tolerance", "window"}, "optimizer");
      cfg.optimizer.eta = o.value("eta", cfg.optimizer.eta);
      cfg.optimizer.momentum = o.value("momentum", cfg.optimizer.momentum);
      cfg.optimizer.max_iterations = o.value("max_iterations", cfg.optimizer.max_iterations);
      cfg.optimizer.tolerance = o.value("tolerance", cfg.optimizer.tolerance);
      cfg.optimizer.window = o.value("window", cfg.optimizer.window);
    }
    cfg.optimizer.seed = cfg.seed;
    cfg.optimizer.validate();

    const auto& ds = doc.at("dataset");
    reject_unknown(ds, {"source", "count", "box", "exponents", "coefficient", "path", "target_grading", "save_csv"},
                   "dataset");
    cfg.dataset_source = ds.value("source", std::string("graded_linear"));
    cfg.dataset_count = ds.value("count", cfg.dataset_count);
    const std::size_t n = cfg.grading.size();
    if (ds.contains("box")) {
      const auto& b = ds["box"];
      if (b.is_array()) {
        cfg.box = Box::uniform(n, b.at(0).get<double>(), b.at(1).get<double>());
      } else {
        cfg.box = {b.at("lo").get<std::vector<double>>(), b.at("hi").get<std::vector<double>>()};
      }
    } else {
      cfg.box = Box::uniform(n, -1.0, 1.0);
    }
    if (ds.contains("exponents")) cfg.monomial_exponents = parse_rationals(ds["exponents"].get<std::string>());
    cfg.monomial_coefficient = ds.value("coefficient", 1.0);
    if (ds.contains("path")) cfg.csv_path = ds["path"].get<std::string>();
    if (ds.contains("target_grading")) cfg.target_grading = GradingVector::parse(ds["target_grading"].get<std::string>());
    if (ds.contains("save_csv")) cfg.save_csv = ds["save_csv"].get<std::string>();
    if (cfg.dataset_source != "graded_linear" && cfg.dataset_source != "monomial" && cfg.dataset_source != "csv") {
      throw ConfigError("unknown dataset source '" + cfg.dataset_source + "'");
    }
    if (cfg.dataset_source == "csv" && cfg.csv_path.empty()) throw ConfigError("csv dataset needs a path");

    if (doc.contains("output")) {
      const auto& out = doc["output"];
      reject_unknown(out, {"metrics", "model"}, "output");
      cfg.metrics_path = out.value("metrics", std::string("metrics.jsonl"));
      cfg.model_path = out.value("model", std::string("model.json"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

Network ExperimentConfig::build_network() const {
  try {
    std::vector<Layer> layers;
    GradingVector prev = grading;
    for (const auto& spec : this->layers) {
      const std::size_t rows = spec.out_grading.size(), cols = prev.size();
      std::optional<std::vector<GradeBlock>> blocks;
      if (spec.grade_blocks) blocks = grade_blocks_for(prev, spec.out_grading);
      layers.emplace_back(prev, spec.out_grading, std::vector<double>(rows * cols, 0.0), std::vector<double>(rows, 0.0),
                          spec.activation, std::move(blocks));
      prev = spec.out_grading;
    }
    std::optional<MultiplicativeNeuron> head;
    if (multiplicative_exponents) head.emplace(prev, std::vector<double>(prev.size(), 0.0), *multiplicative_exponents, 0.0);
    Network net(grading, std::move(layers), std::move(head));
    init_uniform(net, mix_seed(seed, 1));
    return net;
  } catch (const ShapeError& e) {
    throw ConfigError(std::string("model does not fit its gradings: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
}

Dataset ExperimentConfig::build_dataset(const Network& net) const {
  Dataset data;
  if (dataset_source == "csv") {
    data = read_csv(resolve(csv_path), grading, target_grading.value_or(net.output_grading()));
  } else if (dataset_source == "monomial") {
    data = gen_monomial_dataset(grading, monomial_exponents, monomial_coefficient, box, dataset_count, mix_seed(seed, 0));
  } else {
    data = gen_graded_linear_dataset(grading, box, dataset_count, mix_seed(seed, 0));
  }
  data.validate();
  if (data.size() == 0) throw ConfigError("dataset is empty");
  if (!(data.targets[0].grading() == net.output_grading())) {
    throw ConfigError("dataset target grading " + data.targets[0].grading().to_string() +
                      " does not match model output grading " + net.output_grading().to_string());
  }
  if (!save_csv.empty()) write_csv(data, resolve(save_csv));
  return data;
}

std::string TrainRunSummary::format() const {
  std::ostringstream os;
  os << "train: iterations=" << iterations << " initial_loss=" << format_double(initial_loss)
     << " final_loss=" << format_double(final_loss) << " stop=" << stop_reason << " metrics=" << metrics_path.string()
     << " model=" << model_path.string();
  return os.str();
}

namespace {

void ensure_parent(const std::filesystem::path& p) {
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
}

}  // namespace

TrainRunSummary run_training(const ExperimentConfig& cfg) {
  Network net = cfg.build_network();
  const Dataset data = cfg.build_dataset(net);
  const auto result = train(std::move(net), data, cfg.loss, cfg.optimizer);

  TrainRunSummary summary;
  summary.metrics_path = cfg.resolve(cfg.metrics_path);
  summary.model_path = cfg.resolve(cfg.model_path);
  ensure_parent(summary.metrics_path);
  ensure_parent(summary.model_path);
  std::ofstream metrics(summary.metrics_path);
  if (!metrics) throw ConfigError("cannot write metrics '" + summary.metrics_path.string() + "'");
  for (std::size_t t = 0; t < result.loss_history.size(); ++t) {
    metrics << "{\"iter\":" << t << ",\"loss\":" << format_double(result.loss_history[t])
            << ",\"grad_norm\":" << format_double(result.grad_norms[t]) << "}\n";
  }
  if (!metrics) throw ConfigError("failed writing metrics '" + summary.metrics_path.string() + "'");
  save_network(result.net, summary.model_path);

  summary.iterations = result.loss_history.size() - 1;
  summary.initial_loss = result.loss_history.front();
  summary.final_loss = result.loss_history.back();
  summary.stop_reason = result.stop_reason;
  return summary;
}

}  // namespace gnn
