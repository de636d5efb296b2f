// Copyright 2026 The Smart Journey Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smartjourney/artifact.hpp"

#include <sodium.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smartjourney/error.hpp"
#include "smartjourney/gbdt.hpp"
#include "smartjourney/lstm.hpp"
#include "smartjourney/transformer.hpp"

namespace smartjourney {

using nlohmann::json;

std::string_view congestion_level_name(CongestionLevel level) {
  switch (level) {
    case CongestionLevel::kLow: return "low";
    case CongestionLevel::kMedium: return "medium";
    case CongestionLevel::kHigh: return "high";
  }
  return "unknown";
}

CongestionLevel CongestionThresholds::level(double vehicles) const {
  if (vehicles < low_upper) return CongestionLevel::kLow;
  if (vehicles < medium_upper) return CongestionLevel::kMedium;
  return CongestionLevel::kHigh;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "quantile outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

CongestionThresholds fit_congestion_thresholds(std::span<const HourlyDistrictRow> rows) {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(static_cast<double>(r.num_vehicles));
  return {quantile(v, 1.0 / 3.0), quantile(v, 2.0 / 3.0)};
}

std::string artifact_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != nullptr && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

std::vector<std::uint8_t> pack_doubles(std::span<const double> values) {
  std::vector<std::uint8_t> out(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) out[i * 8 + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(bits >> (8 * b));
  }
  return out;
}

namespace {

std::vector<double> unpack_doubles(std::span<const std::uint8_t> bytes) {
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{bytes[i * 8 + static_cast<std::size_t>(b)]} << (8 * b);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes, std::uint32_t crc = 0) {
  uLong c = crc;
  // zlib takes uInt lengths; feed in chunks.
  std::size_t off = 0;
  while (off < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - off, 1u << 30);
    c = ::crc32(c, bytes.data() + off, static_cast<uInt>(n));
    off += n;
  }
  return static_cast<std::uint32_t>(c);
}

std::uint32_t crc32_of(std::string_view s) {
  return crc32_of(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::kCorruptArtifact, what); }

// Neural payload: named tensors.
json tensors_payload(const ParameterStore& params, std::uint32_t& crc) {
  json tensors = json::array();
  crc = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Tensor& t = params.at(i);
    const auto bytes = pack_doubles(t.values());
    crc = crc32_of(bytes, crc);
    tensors.push_back({{"name", params.name(i)}, {"shape", t.shape()}, {"data", base64_encode(bytes)}});
  }
  return {{"kind", "tensors"}, {"tensors", std::move(tensors)}};
}

json trees_payload(const GbdtEnsemble& e) {
  json trees = json::array();
  for (const auto& tree : e.trees()) {
    json nodes = json::array();
    for (const auto& n : tree.nodes()) {
      if (n.is_leaf()) {
        nodes.push_back({{"leaf", n.weight}});
      } else {
        nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  return {{"kind", "trees"},
          {"base_score", e.base_score()},
          {"eta", e.eta()},
          {"feature_count", e.feature_count()},
          {"trees", std::move(trees)}};
}

std::uint32_t payload_crc(const json& payload) {
  if (payload.at("kind") == "tensors") {
    std::uint32_t crc = 0;
    for (const auto& t : payload.at("tensors")) {
      crc = crc32_of(base64_decode(t.at("data").get<std::string>()), crc);
    }
    return crc;
  }
  return crc32_of(payload.dump());
}

GbdtEnsemble ensemble_from_payload(const json& p) {
  std::vector<RegressionTree> trees;
  const auto features = p.at("feature_count").get<std::size_t>();
  for (const auto& jt : p.at("trees")) {
    std::vector<TreeNode> nodes;
    for (const auto& jn : jt) {
      TreeNode n;
      if (jn.contains("leaf")) {
        n.weight = jn.at("leaf").get<double>();
      } else {
        n.feature = jn.at("feature").get<int>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<int>();
        n.right = jn.at("right").get<int>();
      }
      nodes.push_back(n);
    }
    const auto count = static_cast<int>(nodes.size());
    if (count == 0) corrupt("empty tree");
    for (int i = 0; i < count; ++i) {
      const TreeNode& n = nodes[static_cast<std::size_t>(i)];
      if (n.is_leaf()) continue;
      // Children after parents rules out cycles.
      if (n.left <= i || n.right <= i || n.left >= count || n.right >= count ||
          static_cast<std::size_t>(n.feature) >= features) {
        corrupt("tree node " + std::to_string(i) + " is malformed");
      }
    }
    trees.emplace_back(std::move(nodes));
  }
  return GbdtEnsemble(p.at("base_score").get<double>(), p.at("eta").get<double>(), features,
                      std::move(trees));
}

void load_tensors(const json& payload, ParameterStore& params) {
  const json& tensors = payload.at("tensors");
  if (tensors.size() != params.size()) corrupt("tensor count does not match the architecture");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const json& jt = tensors[i];
    Tensor& t = params.at(i);
    if (jt.at("name").get<std::string>() != params.name(i) ||
        jt.at("shape").get<std::vector<std::size_t>>() != t.shape()) {
      corrupt("tensor " + params.name(i) + " does not match the architecture");
    }
    const auto bytes = base64_decode(jt.at("data").get<std::string>());
    if (bytes.size() != t.size() * 8) corrupt("tensor " + params.name(i) + " has the wrong length");
    const auto values = unpack_doubles(bytes);
    std::copy(values.begin(), values.end(), t.values().begin());
  }
}

json normalization_to_json(const NormalizationParams& n) {
  json mins = json::array(), maxs = json::array();
  for (const auto& r : n.ranges()) {
    mins.push_back(r.min);
    maxs.push_back(r.max);
  }
  return {{"features", n.names()}, {"min", mins}, {"max", maxs}};
}

NormalizationParams normalization_from_json(const json& j) {
  const auto names = j.at("features").get<std::vector<std::string>>();
  const auto mins = j.at("min").get<std::vector<double>>();
  const auto maxs = j.at("max").get<std::vector<double>>();
  if (mins.size() != names.size() || maxs.size() != names.size()) corrupt("normalization arrays differ in length");
  std::vector<FeatureRange> ranges;
  for (std::size_t i = 0; i < names.size(); ++i) ranges.push_back({mins[i], maxs[i]});
  return NormalizationParams(names, std::move(ranges));
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  constexpr int kVariant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), kVariant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), kVariant);
  out.pop_back();  // terminating NUL
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  std::size_t length = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &length, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    corrupt("invalid base64 data");
  }
  out.resize(length);
  return out;
}

json artifact_to_json(const ModelArtifact& a) {
  if (!a.model) throw Error(ErrorCode::kInvalidArgument, "artifact has no model");
  json payload;
  std::uint32_t crc = 0;
  if (const auto* net = dynamic_cast<const NeuralNetwork*>(a.model.get())) {
    payload = tensors_payload(net->parameters(), crc);
  } else if (const auto* gb = dynamic_cast<const GbdtRegressor*>(a.model.get())) {
    payload = trees_payload(gb->ensemble());
    crc = crc32_of(payload.dump());
  } else {
    throw Error(ErrorCode::kInvalidArgument, "model type cannot be serialized");
  }
  return {{"format_version", kArtifactFormatVersion},
          {"model_type", std::string(model_type_name(a.model_type))},
          {"district", a.district},
          {"created_at", a.created_at},
          {"train_config", train_config_to_json(a.train_config)},
          {"window", a.window},
          {"normalization", normalization_to_json(a.normalization)},
          {"congestion_thresholds", {{"low_upper", a.congestion.low_upper}, {"medium_upper", a.congestion.medium_upper}}},
          {"payload", std::move(payload)},
          {"payload_crc32", crc},
          {"test_metrics", metrics_to_json(a.test_metrics)}};
}

ModelArtifact artifact_from_json(const json& j) {
  if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_number_integer()) {
    corrupt("missing format_version");
  }
  if (const int v = j["format_version"].get<int>(); v != kArtifactFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "unsupported artifact format_version " + std::to_string(v));
  }
  try {
    const json& payload = j.at("payload");
    const auto stored = j.at("payload_crc32").get<std::uint32_t>();
    if (payload_crc(payload) != stored) {
      throw Error(ErrorCode::kChecksumMismatch, "payload checksum mismatch");
    }

    ModelArtifact a;
    const auto type = parse_model_type(j.at("model_type").get<std::string>());
    if (!type) throw Error(ErrorCode::kUnknownModel, "unknown model_type in artifact");
    a.model_type = *type;
    a.district = j.at("district").get<std::string>();
    a.created_at = j.at("created_at").get<std::string>();
    a.train_config = train_config_from_json(j.at("train_config"));
    a.window = j.at("window").get<std::size_t>();
    a.normalization = normalization_from_json(j.at("normalization"));
    const json& ct = j.at("congestion_thresholds");
    a.congestion = {ct.at("low_upper").get<double>(), ct.at("medium_upper").get<double>()};
    a.test_metrics = metrics_from_json(j.at("test_metrics"));

    const std::size_t features = a.normalization.size();
    switch (a.model_type) {
      case ModelType::kGbdt: {
        if (payload.at("kind") != "trees") corrupt("gbdt artifact without a tree payload");
        auto ensemble = ensemble_from_payload(payload);
        if (ensemble.feature_count() != a.window * features + 2) corrupt("tree feature count does not match the window");
        a.model = std::make_shared<GbdtRegressor>(std::move(ensemble), a.window, features);
        break;
      }
      case ModelType::kLstm: {
        if (payload.at("kind") != "tensors") corrupt("lstm artifact without a tensor payload");
        auto net = std::make_shared<LstmNetwork>(a.train_config.lstm, 0);
        load_tensors(payload, net->parameters());
        a.model = std::move(net);
        break;
      }
      case ModelType::kTransformer: {
        if (payload.at("kind") != "tensors") corrupt("transformer artifact without a tensor payload");
        auto net = std::make_shared<TransformerNetwork>(a.train_config.transformer, 0);
        load_tensors(payload, net->parameters());
        a.model = std::move(net);
        break;
      }
    }
    if (const auto* net = dynamic_cast<const NeuralNetwork*>(a.model.get());
        net != nullptr && (net->window_length() != a.window || net->feature_count() != features)) {
      corrupt("network shape does not match the artifact window");
    }
    return a;
  } catch (const json::exception& e) {
    corrupt(std::string("malformed artifact: ") + e.what());
  }
}

void save_artifact(const ModelArtifact& artifact, const std::filesystem::path& path) {
  const std::string text = artifact_to_json(artifact).dump(1) + "\n";
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out.flush()) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move artifact into " + path.string());
  }
}

ModelArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::kChecksumMismatch,
                path.string() + " failed its integrity check (truncated or not JSON)");
  }
  return artifact_from_json(j);
}

}  // namespace smartjourney
