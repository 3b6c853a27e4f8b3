#include "dra/approaches.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "dra/errors.hpp"
#include "dra/ga.hpp"

namespace dra {

using nlohmann::json;

namespace {

std::vector<double> normalized_features(const MlpModel& model,
                                        const BeamSpec& spec) {
  if (!model.trained()) throw DataError("inference on an untrained network");
  if (!model.scaler.fitted())
    throw DataError("network is missing its feature scaler");
  if (model.input_dim() != BeamSpec::kFeatureCount)
    throw DataError("network input width " +
                    std::to_string(model.input_dim()) +
                    " does not match the feature count");
  const auto norm = model.scaler.transform(spec.to_features());
  for (int i = 0; i < BeamSpec::kFeatureCount; ++i) {
    if (norm[i] < 0.0 || norm[i] > 1.0) {
      std::fprintf(stderr,
                   "warning: feature %d is outside the fitted range "
                   "(normalized %.3f)\n",
                   i, norm[i]);
    }
  }
  return {norm.begin(), norm.end()};
}

std::string bits_to_hex(const std::vector<std::uint8_t>& bits) {
  static const char* kHex = "0123456789abcdef";
  const std::size_t nibbles = (bits.size() + 3) / 4;
  std::vector<int> nib(nibbles, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) nib[i / 4] |= 8 >> (i % 4);
  std::string s(nibbles, '0');
  for (std::size_t i = 0; i < nibbles; ++i) s[i] = kHex[nib[i]];
  return s;
}

std::vector<std::uint8_t> hex_to_bits(const std::string& hex,
                                      std::size_t nbits) {
  if (hex.size() != (nbits + 3) / 4)
    throw DataError("codebook entry has " + std::to_string(hex.size()) +
                    " hex digits, expected " + std::to_string((nbits + 3) / 4));
  std::vector<std::uint8_t> bits(nbits, 0);
  for (std::size_t i = 0; i < nbits; ++i) {
    const char c = hex[i / 4];
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      v = c - 'A' + 10;
    else
      throw DataError(std::string("bad hex digit '") + c + "' in codebook");
    bits[i] = (v & (8 >> (i % 4))) ? 1 : 0;
  }
  return bits;
}

json scaler_to_json(const FeatureScaler& s) {
  if (!s.fitted()) return nullptr;
  return json{{"min", s.mins()}, {"max", s.maxs()}};
}

FeatureScaler scaler_from_json(const json& j) {
  FeatureScaler s;
  if (j.is_null()) return s;
  const auto mins = j.at("min").get<std::vector<double>>();
  const auto maxs = j.at("max").get<std::vector<double>>();
  if (mins.size() != FeatureScaler::kDim || maxs.size() != FeatureScaler::kDim)
    throw DataError("scaler bounds must have " +
                    std::to_string(FeatureScaler::kDim) + " entries");
  std::array<double, FeatureScaler::kDim> lo{}, hi{};
  std::copy(mins.begin(), mins.end(), lo.begin());
  std::copy(maxs.begin(), maxs.end(), hi.begin());
  s.set_bounds(lo, hi);
  return s;
}

json load_json_file(const std::string& path, const char* expected_type) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("'" + path + "': model parse error: " + e.what());
  }
  try {
    if (j.at("schema").get<int>() != 1)
      throw DataError("'" + path + "': unsupported model schema");
    if (j.at("type").get<std::string>() != expected_type)
      throw DataError("'" + path + "': expected a '" +
                      std::string(expected_type) + "' model, found '" +
                      j.at("type").get<std::string>() + "'");
  } catch (const json::exception& e) {
    throw DataError("'" + path + "': malformed model header: " + e.what());
  }
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << j.dump();
  out << '\n';
  if (!out.good()) throw DataError("write failure on '" + path + "'");
}

}  // namespace

std::vector<std::uint8_t> approach1_predict_bits(const MlpModel& model,
                                                 const BeamSpec& spec) {
  const auto out = model.forward(normalized_features(model, spec));
  std::vector<std::uint8_t> bits(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    bits[i] = out[i] > model.threshold ? 1 : 0;
  return bits;
}

WeightMatrix approach1_infer(const MlpModel& model, const BeamSpec& spec,
                             const ArrayConfig& cfg) {
  const auto bits = approach1_predict_bits(model, spec);
  return WeightMatrix(cfg, expand_quadrant(bits, cfg.n_ports),
                      spec.steer_az_deg, spec.steer_el_deg);
}

std::vector<std::uint8_t> approach2_predict_bits(const MlpModel& classifier,
                                                 const KMeansModel& km,
                                                 const BeamSpec& spec) {
  if (!km.trained()) throw DataError("inference on an unfitted cluster model");
  if (static_cast<int>(km.representatives.size()) != km.n_clusters)
    throw DataError("cluster model is missing representative matrices");
  if (classifier.output_dim() != km.n_clusters)
    throw DataError("classifier output width does not match the cluster count");
  const auto probs = classifier.forward(normalized_features(classifier, spec));
  int best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  return km.representatives[static_cast<std::size_t>(best)];
}

WeightMatrix approach2_infer(const MlpModel& classifier, const KMeansModel& km,
                             const BeamSpec& spec, const ArrayConfig& cfg) {
  const auto bits = approach2_predict_bits(classifier, km, spec);
  return WeightMatrix(cfg, expand_quadrant(bits, cfg.n_ports),
                      spec.steer_az_deg, spec.steer_el_deg);
}

void save_mlp_json(const MlpModel& model, const std::string& path) {
  if (!model.trained()) throw DataError("cannot save an untrained network");
  json layers = json::array();
  for (int l = 0; l < model.layer_count(); ++l)
    layers.push_back(json{{"w", model.weights(l)}, {"b", model.bias(l)}});
  const json j{
      {"schema", model.schema},
      {"type", "network"},
      {"output",
       model.output_kind() == OutputKind::Logistic ? "logistic" : "softmax"},
      {"dims", model.dims()},
      {"threshold", model.threshold},
      {"scaler", scaler_to_json(model.scaler)},
      {"layers", layers},
  };
  write_json_file(j, path);
}

MlpModel load_mlp_json(const std::string& path) {
  const json j = load_json_file(path, "network");
  try {
    const auto dims = j.at("dims").get<std::vector<int>>();
    const std::string output = j.at("output").get<std::string>();
    if (output != "logistic" && output != "softmax")
      throw DataError("'" + path + "': unknown output kind '" + output + "'");
    const OutputKind kind =
        output == "logistic" ? OutputKind::Logistic : OutputKind::Softmax;
    MlpModel m = MlpModel::create(dims, kind, 0);
    m.threshold = j.at("threshold").get<double>();
    m.scaler = scaler_from_json(j.at("scaler"));
    const auto& layers = j.at("layers");
    if (static_cast<int>(layers.size()) != m.layer_count())
      throw DataError("'" + path + "': layer count does not match dims");
    for (int l = 0; l < m.layer_count(); ++l) {
      auto w = layers.at(l).at("w").get<std::vector<double>>();
      auto b = layers.at(l).at("b").get<std::vector<double>>();
      if (w.size() != m.weights(l).size() || b.size() != m.bias(l).size())
        throw DataError("'" + path + "': layer " + std::to_string(l) +
                        " has wrong parameter counts");
      m.weights(l) = std::move(w);
      m.bias(l) = std::move(b);
    }
    return m;
  } catch (const json::exception& e) {
    throw DataError("'" + path + "': malformed model: " + e.what());
  }
}

void save_kmeans_json(const KMeansModel& model, const std::string& path) {
  if (!model.trained()) throw DataError("cannot save an unfitted cluster model");
  if (static_cast<int>(model.representatives.size()) != model.n_clusters)
    throw DataError("cluster model is missing representative matrices");
  std::size_t nbits = 0;
  json codebook = json::array();
  for (const auto& bits : model.representatives) {
    if (nbits == 0) nbits = bits.size();
    if (bits.size() != nbits || nbits == 0)
      throw DataError("representative matrices must share one bit length");
    codebook.push_back(bits_to_hex(bits));
  }
  json centroids = json::array();
  for (const auto& c : model.centroids)
    centroids.push_back(std::vector<double>(c.begin(), c.end()));
  const json j{
      {"schema", model.schema},   {"type", "codebook"},
      {"n_clusters", model.n_clusters}, {"inertia", model.inertia},
      {"bits_per_entry", nbits},  {"scaler", scaler_to_json(model.scaler)},
      {"centroids", centroids},   {"codebook", codebook},
  };
  write_json_file(j, path);
}

KMeansModel load_kmeans_json(const std::string& path) {
  const json j = load_json_file(path, "codebook");
  try {
    KMeansModel m;
    m.n_clusters = j.at("n_clusters").get<int>();
    m.inertia = j.at("inertia").get<double>();
    m.scaler = scaler_from_json(j.at("scaler"));
    const std::size_t nbits = j.at("bits_per_entry").get<std::size_t>();
    const auto& cents = j.at("centroids");
    const auto& code = j.at("codebook");
    if (static_cast<int>(cents.size()) != m.n_clusters ||
        static_cast<int>(code.size()) != m.n_clusters)
      throw DataError("'" + path +
                      "': centroid/codebook counts do not match n_clusters");
    for (const auto& c : cents) {
      const auto v = c.get<std::vector<double>>();
      if (v.size() != FeatureScaler::kDim)
        throw DataError("'" + path + "': centroid has wrong dimension");
      std::array<double, FeatureScaler::kDim> a{};
      std::copy(v.begin(), v.end(), a.begin());
      m.centroids.push_back(a);
    }
    for (const auto& entry : code)
      m.representatives.push_back(
          hex_to_bits(entry.get<std::string>(), nbits));
    return m;
  } catch (const json::exception& e) {
    throw DataError("'" + path + "': malformed model: " + e.what());
  }
}

}  // namespace dra
