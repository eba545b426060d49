#include "rb/diff/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rb::diff {

void save_checkpoint(const ParamStore& params, const Rng& rng,
                     const std::string& path) {
  nlohmann::json j;
  j["format"] = "rb-checkpoint";
  j["version"] = kCheckpointVersion;
  j["rng"] = rng.serialize();
  nlohmann::json arrays = nlohmann::json::object();
  for (const auto& [name, e] : params) {
    nlohmann::json a;
    a["shape"] = {e.shape.rows, e.shape.cols};
    a["value"] = e.value;
    a["second_moment"] = e.second_moment;
    a["momentum"] = e.momentum;
    arrays[name] = std::move(a);
  }
  j["params"] = std::move(arrays);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << j.dump();
  if (!out) throw std::runtime_error("save_checkpoint: write failed " + path);
}

void load_checkpoint(ParamStore& params, Rng& rng, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("format", "") != "rb-checkpoint")
    throw std::runtime_error("load_checkpoint: not a checkpoint file: " + path);
  if (j.value("version", -1) != kCheckpointVersion)
    throw std::runtime_error("load_checkpoint: unsupported version in " + path);
  rng.deserialize(j.at("rng").get<std::string>());
  for (auto& [name, a] : j.at("params").items()) {
    Shape shape{a.at("shape").at(0).get<int>(), a.at("shape").at(1).get<int>()};
    auto& e = params.ensure_zeros(name, shape);
    e.value = a.at("value").get<std::vector<double>>();
    e.second_moment = a.at("second_moment").get<std::vector<double>>();
    e.momentum = a.at("momentum").get<std::vector<double>>();
    if (e.value.size() != static_cast<std::size_t>(shape.size()))
      throw std::runtime_error("load_checkpoint: size mismatch for " + name);
  }
}

}  // namespace rb::diff
