#include "gradednn/network_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gradednn/errors.hpp"

namespace gnn {

using nlohmann::json;

std::string network_to_json(const Network& net) {
  json doc;
  doc["gradings"] = json::array({net.input_grading().to_string()});
  doc["layers"] = json::array();
  for (const auto& layer : net.layers()) {
    doc["gradings"].push_back(layer.out_grading().to_string());
    json l;
    l["rows"] = layer.rows();
    l["cols"] = layer.cols();
    l["weight_base"] = std::vector<double>(layer.weight_base().begin(), layer.weight_base().end());
    l["bias"] = std::vector<double>(layer.bias().begin(), layer.bias().end());
    l["activation"] = std::string(to_string(layer.activation()));
    if (layer.blocks()) {
      l["blocks"] = json::array();
      for (const auto& b : *layer.blocks()) {
        l["blocks"].push_back({{"grade", b.grade.to_string()},
                               {"rows", {b.row_begin, b.row_end}},
                               {"cols", {b.col_begin, b.col_end}}});
      }
    }
    doc["layers"].push_back(std::move(l));
  }
  if (const auto& head = net.head()) {
    json h;
    h["weights"] = std::vector<double>(head->weights().begin(), head->weights().end());
    h["exponents"] = json::array();
    for (const auto& k : head->exponents()) h["exponents"].push_back(k.to_string());
    h["bias"] = head->bias();
    doc["head"] = std::move(h);
  }
  return doc.dump(2);
}

Network network_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    const auto& gradings = doc.at("gradings");
    const auto& layers_doc = doc.at("layers");
    if (gradings.size() != layers_doc.size() + 1) throw ConfigError("model needs one grading per layer boundary");
    std::vector<GradingVector> gs;
    for (const auto& g : gradings) gs.push_back(GradingVector::parse(g.get<std::string>()));

    std::vector<Layer> layers;
    for (std::size_t l = 0; l < layers_doc.size(); ++l) {
      const auto& ld = layers_doc[l];
      if (ld.at("rows").get<std::size_t>() != gs[l + 1].size() || ld.at("cols").get<std::size_t>() != gs[l].size()) {
        throw ConfigError("layer " + std::to_string(l) + " rows/cols disagree with gradings");
      }
      std::optional<std::vector<GradeBlock>> blocks;
      if (ld.contains("blocks")) {
        blocks.emplace();
        for (const auto& b : ld["blocks"]) {
          blocks->push_back({Rational::parse(b.at("grade").get<std::string>()), b.at("rows")[0].get<std::size_t>(),
                             b.at("rows")[1].get<std::size_t>(), b.at("cols")[0].get<std::size_t>(),
                             b.at("cols")[1].get<std::size_t>()});
        }
      }
      layers.emplace_back(gs[l], gs[l + 1], ld.at("weight_base").get<std::vector<double>>(),
                          ld.at("bias").get<std::vector<double>>(),
                          parse_activation(ld.at("activation").get<std::string>()), std::move(blocks));
    }
    std::optional<MultiplicativeNeuron> head;
    if (doc.contains("head")) {
      const auto& h = doc["head"];
      std::vector<Rational> ks;
      for (const auto& k : h.at("exponents")) ks.push_back(Rational::parse(k.get<std::string>()));
      head.emplace(gs.back(), h.at("weights").get<std::vector<double>>(), std::move(ks), h.at("bias").get<double>());
    }
    return Network(gs.front(), std::move(layers), std::move(head));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model JSON: ") + e.what());
  } catch (const ShapeError& e) {
    throw ConfigError(std::string("inconsistent model JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid model JSON: ") + e.what());
  }
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model '" + path.string() + "'");
  out << network_to_json(net) << '\n';
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read model '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return network_from_json(ss.str());
}

}  // namespace gnn
