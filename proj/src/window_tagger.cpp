#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "milie/random.hpp"
#include "milie/tagger.hpp"

namespace milie {

namespace {

constexpr std::string_view kPad = "<pad>";

std::string_view text_at(const MarkedSentence& m, std::ptrdiff_t i) {
  if (i < 0 || i >= static_cast<std::ptrdiff_t>(m.size())) return kPad;
  return m.rendered[static_cast<std::size_t>(i)].text;
}

std::string_view dep_at(const MarkedSentence& m, std::ptrdiff_t i) {
  if (i < 0 || i >= static_cast<std::ptrdiff_t>(m.size())) return kPad;
  return m.rendered[static_cast<std::size_t>(i)].dep;
}

// Bucketed position relative to a marked element: inside it, or 1..6+
// rendered steps left/right of the marker pair.
std::string marker_bucket(const MarkedSentence& m, ElementKind kind,
                          std::size_t position) {
  auto it = m.markers.find(kind);
  if (it == m.markers.end()) return "none";
  Span r = m.to_rendered(it->second);
  if (position >= r.start && position < r.end) return "in";
  if (position < r.start) {
    std::size_t d = std::min<std::size_t>(r.start - position, 6);
    return "L" + std::to_string(d);
  }
  std::size_t d = std::min<std::size_t>(position - r.end + 1, 6);
  return "R" + std::to_string(d);
}

void collect_feature_strings(const MarkedSentence& m, std::size_t i,
                             std::vector<std::string>& out) {
  auto p = static_cast<std::ptrdiff_t>(i);
  out.clear();
  out.emplace_back("bias");
  out.emplace_back("w0=" + std::string(text_at(m, p)));
  out.emplace_back("d0=" + std::string(dep_at(m, p)));
  if (!m.rendered[i].pos.empty()) out.emplace_back("p0=" + m.rendered[i].pos);
  out.emplace_back("w-2=" + std::string(text_at(m, p - 2)));
  out.emplace_back("w-1=" + std::string(text_at(m, p - 1)));
  out.emplace_back("w+1=" + std::string(text_at(m, p + 1)));
  out.emplace_back("w+2=" + std::string(text_at(m, p + 2)));
  out.emplace_back("d-1=" + std::string(dep_at(m, p - 1)));
  out.emplace_back("d+1=" + std::string(dep_at(m, p + 1)));
  for (ElementKind kind : kCoreKinds)
    out.emplace_back(std::string("m") + kind_code(kind) + "=" +
                     marker_bucket(m, kind, i));
}

std::size_t head_index(ElementKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

std::vector<std::uint32_t> WindowTagger::features_at(const MarkedSentence& marked,
                                                     std::size_t position,
                                                     bool grow) {
  std::vector<std::string> names;
  collect_feature_strings(marked, position, names);
  std::vector<std::uint32_t> ids;
  ids.reserve(names.size());
  for (std::string& name : names) {
    auto it = feature_ids_.find(name);
    if (it == feature_ids_.end()) {
      if (!grow) continue;
      auto id = static_cast<std::uint32_t>(feature_names_.size());
      feature_names_.push_back(name);
      it = feature_ids_.emplace(std::move(name), id).first;
    }
    ids.push_back(it->second);
  }
  return ids;
}

std::vector<std::uint32_t> WindowTagger::features_at(const MarkedSentence& marked,
                                                     std::size_t position) const {
  std::vector<std::string> names;
  collect_feature_strings(marked, position, names);
  std::vector<std::uint32_t> ids;
  ids.reserve(names.size());
  for (const std::string& name : names) {
    auto it = feature_ids_.find(name);
    if (it != feature_ids_.end()) ids.push_back(it->second);
  }
  return ids;
}

BioSequence WindowTagger::predict(const MarkedSentence& marked,
                                  ElementKind kind) const {
  BioSequence labels(marked.size(), BioLabel::O);
  const auto& table = weights_[head_index(kind)];
  if (table.empty()) return labels;  // untrained head keeps everything O
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (marked.is_marker(i)) continue;
    double score[3] = {0.0, 0.0, 0.0};
    for (std::uint32_t id : features_at(marked, i))
      for (int l = 0; l < 3; ++l) score[l] += table[id][static_cast<std::size_t>(l)];
    // Ties resolve toward O, then B: an all-zero model stays silent.
    int best = 2;
    if (score[0] > score[best]) best = 0;
    if (score[1] > score[best]) best = 1;
    labels[i] = static_cast<BioLabel>(best);
  }
  return labels;
}

std::unique_ptr<WindowTagger> train_window_tagger(
    const std::vector<TrainingInstance>& instances, const TrainConfig& config) {
  if (config.epochs <= 0) throw ConfigError("epochs must be positive");
  if (!(config.learning_rate > 0.0))
    throw ConfigError("learning rate must be positive");
  if (config.negative_weight < 0.0)
    throw ConfigError("negative weight must be non-negative");
  if (instances.empty()) throw DataError("no training instances");
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].target_labels.size() != instances[i].marked.size())
      throw DataError("training instance " + std::to_string(i) +
                      ": label count does not match rendered length");

  auto model = std::make_unique<WindowTagger>();

  // Feature vocabulary and per-position id cache, in corpus order so ids are
  // independent of the shuffle.
  std::vector<std::vector<std::vector<std::uint32_t>>> cache(instances.size());
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const MarkedSentence& marked = instances[idx].marked;
    cache[idx].resize(marked.size());
    for (std::size_t pos = 0; pos < marked.size(); ++pos)
      if (!marked.is_marker(pos))
        cache[idx][pos] = model->features_at(marked, pos, /*grow=*/true);
  }
  for (auto& table : model->weights_)
    table.assign(model->feature_names_.size(), WindowTagger::LabelWeights{});

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_deterministic(order, rng);
    for (std::size_t idx : order) {
      const TrainingInstance& ins = instances[idx];
      double step = config.learning_rate *
                    (ins.is_negative ? config.negative_weight : 1.0);
      if (step == 0.0) continue;
      auto& table = model->weights_[head_index(ins.target_kind)];
      for (std::size_t pos = 0; pos < ins.marked.size(); ++pos) {
        if (ins.marked.is_marker(pos)) continue;
        const auto& ids = cache[idx][pos];
        double score[3] = {0.0, 0.0, 0.0};
        for (std::uint32_t id : ids)
          for (int l = 0; l < 3; ++l)
            score[l] += table[id][static_cast<std::size_t>(l)];
        double peak = std::max({score[0], score[1], score[2]});
        double expd[3];
        double z = 0.0;
        for (int l = 0; l < 3; ++l) {
          expd[l] = std::exp(score[l] - peak);
          z += expd[l];
        }
        auto target = static_cast<std::size_t>(ins.target_labels[pos]);
        for (std::size_t l = 0; l < 3; ++l) {
          double grad = expd[l] / z - (l == target ? 1.0 : 0.0);
          auto delta = static_cast<float>(step * grad);
          for (std::uint32_t id : ids) table[id][l] -= delta;
        }
      }
    }
  }
  return model;
}

}  // namespace milie
