#include "milie/tagger.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "milie/jsonl.hpp"

namespace milie {

using nlohmann::json;

bool marking_consistent(const Triple& gold,
                        const std::map<ElementKind, Span>& markers) {
  for (const auto& [kind, span] : markers) {
    if (kind == ElementKind::Argument) return false;  // arguments are never marked
    if (gold.element(kind) != span) return false;
  }
  return true;
}

std::vector<Span> consistent_element_spans(const std::vector<Triple>& gold,
                                           const std::map<ElementKind, Span>& markers,
                                           ElementKind kind) {
  std::vector<Span> collected;
  for (const Triple& t : gold) {
    if (!marking_consistent(t, markers)) continue;
    if (kind == ElementKind::Argument)
      collected.insert(collected.end(), t.args.begin(), t.args.end());
    else
      collected.push_back(t.element(kind));
  }
  std::sort(collected.begin(), collected.end());
  std::vector<Span> merged;
  for (const Span& s : collected) {
    if (!merged.empty() && s.start < merged.back().end)
      merged.back().end = std::max(merged.back().end, s.end);
    else
      merged.push_back(s);
  }
  return merged;
}

OracleTagger::OracleTagger(std::vector<GoldRecord> gold) : gold_(std::move(gold)) {
  for (std::size_t i = 0; i < gold_.size(); ++i) {
    auto [it, inserted] = by_id_.emplace(gold_[i].sentence.id, i);
    if (!inserted)
      throw DataError("duplicate gold sentence id '" + gold_[i].sentence.id + "'");
  }
}

BioSequence OracleTagger::predict(const MarkedSentence& marked,
                                  ElementKind kind) const {
  BioSequence labels(marked.size(), BioLabel::O);
  auto it = by_id_.find(marked.base.id);
  if (it == by_id_.end()) return labels;
  const GoldRecord& record = gold_[it->second];
  for (const Span& s :
       consistent_element_spans(record.triples, marked.markers, kind)) {
    if (!span_in_sentence(s, marked.base)) continue;
    Span r = marked.to_rendered(s);
    labels[r.start] = BioLabel::B;
    for (std::size_t i = r.start + 1; i < r.end; ++i) labels[i] = BioLabel::I;
  }
  // Markers stay O even if a merged span were to straddle one; decoding then
  // sees the pieces as separate spans instead of failing alignment.
  for (std::size_t i = 0; i < marked.size(); ++i)
    if (marked.is_marker(i)) labels[i] = BioLabel::O;
  return labels;
}

std::unique_ptr<Tagger> oracle_from_gold(std::vector<GoldRecord> gold) {
  return std::make_unique<OracleTagger>(std::move(gold));
}

// ---------------------------------------------------------------------------
// Model container

struct ModelCodec {
  static json window_payload(const WindowTagger& model) {
    json features = json::array();
    for (const auto& name : model.feature_names_) features.push_back(name);
    json weights = json::object();
    for (ElementKind kind : {ElementKind::Subject, ElementKind::Predicate,
                             ElementKind::Object, ElementKind::Argument}) {
      json rows = json::array();
      for (const auto& row : model.weights_[static_cast<std::size_t>(kind)])
        rows.push_back({row[0], row[1], row[2]});
      weights[std::string(1, kind_code(kind))] = std::move(rows);
    }
    return json{{"type", "window"},
                {"features", std::move(features)},
                {"weights", std::move(weights)}};
  }

  static std::unique_ptr<WindowTagger> window_from(const json& payload) {
    auto model = std::make_unique<WindowTagger>();
    const json& features = payload.at("features");
    if (!features.is_array())
      throw FormatError("window model: 'features' must be an array");
    for (const auto& f : features) {
      if (!f.is_string())
        throw FormatError("window model: feature names must be strings");
      std::string name = f.get<std::string>();
      auto [it, inserted] = model->feature_ids_.emplace(
          name, static_cast<std::uint32_t>(model->feature_names_.size()));
      if (!inserted)
        throw FormatError("window model: duplicate feature '" + name + "'");
      model->feature_names_.push_back(std::move(name));
    }
    const json& weights = payload.at("weights");
    for (ElementKind kind : {ElementKind::Subject, ElementKind::Predicate,
                             ElementKind::Object, ElementKind::Argument}) {
      std::string key(1, kind_code(kind));
      if (!weights.contains(key))
        throw FormatError("window model: missing weights for head " + key);
      const json& rows = weights.at(key);
      if (!rows.is_array() || rows.size() != model->feature_names_.size())
        throw FormatError("window model: head " + key +
                          " weight count does not match feature count");
      auto& table = model->weights_[static_cast<std::size_t>(kind)];
      table.reserve(rows.size());
      for (const auto& row : rows) {
        if (!row.is_array() || row.size() != 3)
          throw FormatError("window model: each weight row needs 3 entries");
        table.push_back({row[0].get<float>(), row[1].get<float>(),
                         row[2].get<float>()});
      }
    }
    return model;
  }
};

namespace {

json oracle_payload(const OracleTagger& model) {
  json gold = json::array();
  for (const GoldRecord& record : model.gold())
    gold.push_back(gold_record_to_json(record));
  return json{{"type", "oracle"}, {"gold", std::move(gold)}};
}

std::unique_ptr<Tagger> oracle_from(const json& payload) {
  const json& gold = payload.at("gold");
  if (!gold.is_array()) throw FormatError("oracle model: 'gold' must be an array");
  std::vector<GoldRecord> records;
  records.reserve(gold.size());
  for (const auto& g : gold) {
    GoldRecord record = gold_record_from_json(g);
    validate_gold_record(record);
    records.push_back(std::move(record));
  }
  return oracle_from_gold(std::move(records));
}

}  // namespace

std::string save_model(const Tagger& model) {
  json payload;
  if (const auto* oracle = dynamic_cast<const OracleTagger*>(&model))
    payload = oracle_payload(*oracle);
  else if (const auto* window = dynamic_cast<const WindowTagger*>(&model))
    payload = ModelCodec::window_payload(*window);
  else
    throw ModelError("cannot serialize tagger of kind '" + model.kind_tag() + "'");
  std::string out;
  out += kModelMagic;
  out += ' ';
  out += std::to_string(kModelVersion);
  out += '\n';
  out += payload.dump();
  out += '\n';
  return out;
}

std::unique_ptr<Tagger> load_model(const std::string& bytes) {
  std::size_t eol = bytes.find('\n');
  if (eol == std::string::npos) throw FormatError("truncated model container");
  std::string_view header(bytes.data(), eol);
  std::size_t space = header.find(' ');
  if (space == std::string_view::npos || header.substr(0, space) != kModelMagic)
    throw FormatError("not a " + std::string(kModelMagic) + " model");
  std::string_view version_text = header.substr(space + 1);
  int version = 0;
  auto [ptr, ec] = std::from_chars(
      version_text.data(), version_text.data() + version_text.size(), version);
  if (ec != std::errc{} || ptr != version_text.data() + version_text.size())
    throw FormatError("malformed model version '" + std::string(version_text) + "'");
  if (version != kModelVersion)
    throw FormatError("unsupported model version " + std::to_string(version));

  json payload;
  try {
    payload = json::parse(bytes.substr(eol + 1));
  } catch (const json::exception& e) {
    throw FormatError(std::string("model payload is not valid JSON: ") + e.what());
  }
  try {
    if (!payload.is_object() || !payload.contains("type"))
      throw FormatError("model payload lacks a 'type'");
    std::string type = payload.at("type").get<std::string>();
    if (type == "oracle") return oracle_from(payload);
    if (type == "window") return ModelCodec::window_from(payload);
    throw FormatError("unknown model type '" + type + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model payload: ") + e.what());
  }
}

void save_model_file(const Tagger& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot open model file '" + path + "' for writing");
  out << save_model(model);
  if (!out) throw ModelError("failed writing model file '" + path + "'");
}

std::unique_ptr<Tagger> load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_model(buffer.str());
}

}  // namespace milie
