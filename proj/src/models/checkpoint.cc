// Copyright 2026 The mtsa Authors.
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

#include "mtsa/checkpoint.h"

#include <bit>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "mtsa/errors.h"

namespace mtsa {
namespace {

using Json = nlohmann::ordered_json;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

std::uint64_t GetLe(std::string_view bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[at + i]))
         << (8 * i);
  }
  return v;
}

Json SchemeToJson(const LabelScheme& s) {
  return Json{{"style", TagStyleName(s.style())},
              {"categories", s.categories()}};
}

LabelScheme SchemeFromJson(const Json& j) {
  return LabelScheme(ParseTagStyle(j.at("style").get<std::string>()),
                     j.at("categories").get<std::vector<std::string>>());
}

Json ConfigToJson(const ModelConfig& c) {
  Json j;
  j["source"] = EmbeddingSourceName(c.source);
  j["embedding_dim"] = c.embedding_dim;
  j["contextual_layers"] = c.contextual_layers;
  j["hidden1"] = c.hidden1;
  j["hidden2"] = c.hidden2;
  j["dropout"] = c.dropout;
  j["main_scheme"] = SchemeToJson(c.main_scheme);
  j["aux_scheme"] = c.aux_scheme ? SchemeToJson(*c.aux_scheme) : Json(nullptr);
  return j;
}

ModelConfig ConfigFromJson(const Json& j) {
  ModelConfig c;
  c.source = ParseEmbeddingSource(j.at("source").get<std::string>());
  c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  c.contextual_layers = j.at("contextual_layers").get<std::size_t>();
  c.hidden1 = j.at("hidden1").get<std::size_t>();
  c.hidden2 = j.at("hidden2").get<std::size_t>();
  c.dropout = j.at("dropout").get<double>();
  c.main_scheme = SchemeFromJson(j.at("main_scheme"));
  if (!j.at("aux_scheme").is_null()) {
    c.aux_scheme = SchemeFromJson(j.at("aux_scheme"));
  }
  return c;
}

// Config field responsible for a tensor's shape.
std::string FieldFor(const std::string& tensor, bool rows_differ) {
  if (tensor.starts_with("embedding.")) {
    return rows_differ ? "vocabulary" : "embedding_dim";
  }
  if (tensor.starts_with("scalar_mix.")) return "contextual_layers";
  if (tensor.starts_with("encoder.layer1.")) {
    return tensor.ends_with("w_ih") && !rows_differ ? "embedding_dim"
                                                     : "hidden1";
  }
  if (tensor.starts_with("encoder.layer2.")) {
    return tensor.ends_with("w_ih") && !rows_differ ? "hidden1" : "hidden2";
  }
  const bool aux = tensor.starts_with("aux_head.");
  if (tensor.ends_with("projection") && rows_differ) {
    return aux ? "hidden1" : "hidden2";
  }
  return aux ? "aux_scheme" : "main_scheme";
}

struct Parsed {
  std::uint32_t version = 0;
  Json header;
  std::string_view payload;
};

Parsed ParseFraming(std::string_view bytes) {
  const std::size_t fixed = kCheckpointMagic.size() + 4 + 8;
  if (bytes.size() < fixed) {
    throw CheckpointError("checkpoint truncated: " +
                          std::to_string(bytes.size()) + " bytes");
  }
  if (bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic) {
    throw CheckpointError("not a checkpoint (bad magic)");
  }
  Parsed p;
  p.version = static_cast<std::uint32_t>(GetLe(bytes, 8, 4));
  if (p.version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(p.version) + " (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  const std::uint64_t header_len = GetLe(bytes, 12, 8);
  if (header_len > bytes.size() - fixed) {
    throw CheckpointError("checkpoint truncated inside header");
  }
  try {
    p.header = Json::parse(bytes.substr(fixed, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint header: ") +
                          e.what());
  }
  p.payload = bytes.substr(fixed + header_len);
  return p;
}

CheckpointInfo InfoFrom(const Parsed& p) {
  CheckpointInfo info;
  info.version = p.version;
  try {
    info.config = ConfigFromJson(p.header.at("config"));
    for (const auto& t : p.header.at("tensors")) {
      info.tensors.push_back({t.at("name").get<std::string>(),
                              t.at("rows").get<std::size_t>(),
                              t.at("cols").get<std::size_t>()});
      info.payload_values += info.tensors.back().rows * info.tensors.back().cols;
    }
    if (p.header.contains("vocabulary")) {
      info.vocabulary_size = p.header.at("vocabulary").size();
    }
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint header: ") +
                          e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("bad config in checkpoint: ") +
                          e.what());
  }
  const std::size_t want = info.payload_values * sizeof(double);
  if (p.payload.size() < want) {
    throw CheckpointError("checkpoint truncated: payload has " +
                          std::to_string(p.payload.size()) + " of " +
                          std::to_string(want) + " bytes");
  }
  if (p.payload.size() > want) {
    throw CheckpointError("checkpoint has " +
                          std::to_string(p.payload.size() - want) +
                          " trailing bytes");
  }
  return info;
}

Matrix ReadTensor(std::string_view payload, std::size_t& offset,
                  std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (double& v : m.values()) {
    v = std::bit_cast<double>(GetLe(payload, offset, 8));
    offset += 8;
  }
  return m;
}

void CheckShape(const TensorEntry& t, const Matrix& expected) {
  if (t.rows == expected.rows() && t.cols == expected.cols()) return;
  throw CheckpointError(
      "checkpoint config field '" + FieldFor(t.name, t.rows != expected.rows()) +
      "' disagrees with tensor '" + t.name + "': config implies " +
      expected.ShapeString() + ", file holds " + std::to_string(t.rows) + "x" +
      std::to_string(t.cols));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::string ModelConfigJson(const ModelConfig& config) {
  return ConfigToJson(config).dump();
}

ModelConfig ParseModelConfigJson(std::string_view text) {
  try {
    return ConfigFromJson(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad model config JSON: ") + e.what());
  }
}

std::string SerializeModel(const Model& model) {
  std::vector<std::pair<std::string, const Matrix*>> tensors;
  if (model.config().source == EmbeddingSource::kStatic) {
    tensors.emplace_back("embedding.vectors", &model.table()->vectors());
  }
  for (const auto& [name, p] : model.NamedParams()) {
    tensors.emplace_back(name, &p->value);
  }
  Json header;
  header["config"] = ConfigToJson(model.config());
  Json table = Json::array();
  for (const auto& [name, m] : tensors) {
    table.push_back({{"name", name}, {"rows", m->rows()}, {"cols", m->cols()}});
  }
  header["tensors"] = std::move(table);
  if (model.config().source == EmbeddingSource::kStatic) {
    header["vocabulary"] = model.table()->words();
  }
  const std::string text = header.dump();

  std::string out(kCheckpointMagic);
  PutU32(out, kCheckpointVersion);
  PutU64(out, text.size());
  out += text;
  for (const auto& [name, m] : tensors) {
    for (double v : m->values()) PutU64(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

Model DeserializeModel(std::string_view bytes) {
  const Parsed parsed = ParseFraming(bytes);
  const CheckpointInfo info = InfoFrom(parsed);
  const ModelConfig& cfg = info.config;
  std::size_t offset = 0;
  std::size_t next = 0;

  std::unique_ptr<Model> model;
  if (cfg.source == EmbeddingSource::kStatic) {
    if (info.tensors.empty() || info.tensors[0].name != "embedding.vectors") {
      throw CheckpointError("static checkpoint lacks 'embedding.vectors'");
    }
    std::vector<std::string> words;
    try {
      words = parsed.header.at("vocabulary").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError(std::string("bad vocabulary: ") + e.what());
    }
    const TensorEntry& t = info.tensors[next++];
    CheckShape(t, Matrix(words.size() + 1, cfg.embedding_dim));
    Matrix vectors = ReadTensor(parsed.payload, offset, t.rows, t.cols);
    auto table = std::make_shared<const StaticEmbeddingTable>(
        StaticEmbeddingTable::FromRowsWithOov(std::move(words),
                                              std::move(vectors)));
    try {
      model = std::make_unique<Model>(cfg, std::move(table));
    } catch (const ConfigError& e) {
      throw CheckpointError(std::string("bad config in checkpoint: ") +
                            e.what());
    }
  } else {
    try {
      model = std::make_unique<Model>(cfg);
    } catch (const ConfigError& e) {
      throw CheckpointError(std::string("bad config in checkpoint: ") +
                            e.what());
    }
  }

  auto named = model->NamedParams();
  if (info.tensors.size() - next != named.size()) {
    throw CheckpointError("checkpoint holds " +
                          std::to_string(info.tensors.size() - next) +
                          " parameter tensors, config implies " +
                          std::to_string(named.size()));
  }
  for (auto& [name, param] : named) {
    const TensorEntry& t = info.tensors[next++];
    if (t.name != name) {
      throw CheckpointError("expected tensor '" + name + "', found '" +
                            t.name + "'");
    }
    CheckShape(t, param->value);
    param->value = ReadTensor(parsed.payload, offset, t.rows, t.cols);
    param->ZeroGrad();
  }
  return std::move(*model);
}

void SaveCheckpoint(const Model& model, const std::string& path) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("short write to " + path);
}

Model LoadCheckpoint(const std::string& path) {
  return DeserializeModel(ReadFile(path));
}

CheckpointInfo InspectCheckpoint(const std::string& path) {
  const std::string bytes = ReadFile(path);
  return InfoFrom(ParseFraming(bytes));
}

}  // namespace mtsa
