#include "actlogic/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "actlogic/errors.hpp"

namespace actlogic {

using nlohmann::json;

namespace {

json sparse_pairs(std::span<const double> values) {
  json out = json::array();
  for (std::size_t j = 0; j < values.size(); ++j)
    if (values[j] != 0.0) out.push_back(json::array({j, values[j]}));
  return out;
}

void fill_sparse(const json& pairs, std::span<double> dest, const char* what) {
  if (!pairs.is_array()) throw ParseError(std::string(what) + " must be an array", 0);
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2) throw ParseError(std::string(what) + " entries must be [index, value]", 0);
    const auto idx = p[0].get<std::size_t>();
    if (idx >= dest.size()) throw ParseError(std::string(what) + " index out of range", 0);
    dest[idx] = p[1].get<double>();
  }
}

}  // namespace

void save_models(const std::vector<NamedModel>& models, const std::filesystem::path& path) {
  json doc;
  doc["format"] = kModelFormat;
  json list = json::array();
  for (const auto& [label, model] : models) {
    list.push_back({{"label", label},
                    {"dimension", model.dimension()},
                    {"bias", model.bias()},
                    {"steps", model.steps_taken()},
                    {"weights", sparse_pairs(model.weights())},
                    {"accumulator", sparse_pairs(model.accumulator())}});
  }
  doc["models"] = list;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<NamedModel> load_models(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<NamedModel> out;
  try {
    json doc;
    in >> doc;
    if (!doc.is_object() || doc.value("format", std::string()) != kModelFormat)
      throw ParseError(path.string() + " is not an " + std::string(kModelFormat) + " checkpoint", 0);
    for (const auto& rec : doc.at("models")) {
      LinearModel model(rec.at("dimension").get<std::size_t>());
      model.set_bias(rec.at("bias").get<double>());
      model.set_steps_taken(rec.at("steps").get<std::uint64_t>());
      fill_sparse(rec.at("weights"), model.weights(), "weights");
      fill_sparse(rec.at("accumulator"), model.accumulator(), "accumulator");
      out.push_back({rec.at("label").get<std::string>(), std::move(model)});
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  return out;
}

}  // namespace actlogic
