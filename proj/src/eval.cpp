#include "milie/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_map>

namespace milie {

using nlohmann::json;

ScoreReport make_report(double matched_predictions, double total_predictions,
                        double matched_gold, double total_gold) {
  ScoreReport r;
  r.matched_predictions = matched_predictions;
  r.total_predictions = total_predictions;
  r.matched_gold = matched_gold;
  r.total_gold = total_gold;
  r.precision = total_predictions > 0 ? matched_predictions / total_predictions : 0.0;
  r.recall = total_gold > 0 ? matched_gold / total_gold : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace {

std::unordered_map<std::string, const Sentence*> index_sentences(
    const std::vector<Sentence>& sentences) {
  std::unordered_map<std::string, const Sentence*> by_id;
  for (const Sentence& s : sentences) by_id.emplace(s.id, &s);
  return by_id;
}

const Sentence& sentence_for(
    const std::unordered_map<std::string, const Sentence*>& by_id,
    const std::string& sentence_id) {
  auto it = by_id.find(sentence_id);
  if (it == by_id.end())
    throw DataError("unknown sentence id '" + sentence_id + "'");
  return *it->second;
}

}  // namespace

ScoreReport score_benchie(const std::vector<SentenceTriple>& preds,
                          const std::vector<FactSynset>& gold,
                          const std::vector<Sentence>& sentences) {
  auto by_id = index_sentences(sentences);
  std::vector<bool> fact_matched(gold.size(), false);
  std::size_t correct = 0;
  for (const SentenceTriple& pred : preds) {
    const Sentence& sentence = sentence_for(by_id, pred.sentence_id);
    std::string s = span_text(sentence, pred.triple.subject);
    std::string p = span_text(sentence, pred.triple.predicate);
    std::string o = span_text(sentence, pred.triple.object);
    bool matched = false;
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (gold[g].sentence_id != pred.sentence_id) continue;
      for (const FactVariant& v : gold[g].variants) {
        if (v.subject == s && v.predicate == p && v.object == o) {
          matched = true;
          fact_matched[g] = true;
          break;
        }
      }
    }
    if (matched) ++correct;
  }
  auto matched_facts = static_cast<double>(
      std::count(fact_matched.begin(), fact_matched.end(), true));
  return make_report(static_cast<double>(correct),
                     static_cast<double>(preds.size()), matched_facts,
                     static_cast<double>(gold.size()));
}

namespace {

// Maximum-weight one-to-one assignment over a non-negative weight matrix
// (Jonker-Volgenant shortest-augmenting-path formulation). Every row of the
// smaller side gets assigned; zero-weight assignments contribute nothing, so
// this equals the best partial matching.
double assignment_max(std::vector<std::vector<double>> w) {
  std::size_t rows = w.size();
  if (rows == 0 || w[0].empty()) return 0.0;
  std::size_t cols = w[0].size();
  if (rows > cols) {
    std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t[j][i] = w[i][j];
    w = std::move(t);
    std::swap(rows, cols);
  }
  constexpr double kInf = 1e100;
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, kInf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = match[j0], j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        double cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= cols; ++j)
    if (match[j] != 0) total += w[match[j] - 1][j - 1];
  return total;
}

// The three compared token lists: subject, predicate, object with all
// arguments appended.
std::array<std::vector<std::string>, 3> element_tokens(const Sentence& sentence,
                                                       const Triple& triple) {
  std::array<std::vector<std::string>, 3> out;
  out[0] = span_tokens(sentence, triple.subject);
  out[1] = span_tokens(sentence, triple.predicate);
  out[2] = span_tokens(sentence, triple.object);
  for (const Span& arg : triple.args) {
    auto tokens = span_tokens(sentence, arg);
    out[2].insert(out[2].end(), tokens.begin(), tokens.end());
  }
  return out;
}

std::size_t multiset_overlap(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  std::map<std::string, std::size_t> counts;
  for (const std::string& t : a) ++counts[t];
  std::size_t overlap = 0;
  for (const std::string& t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return overlap;
}

// Mean over the three elements of overlap divided by the denominator side's
// element length.
double tuple_similarity(const std::array<std::vector<std::string>, 3>& num_side,
                        const std::array<std::vector<std::string>, 3>& denom_side) {
  double sum = 0.0;
  for (std::size_t e = 0; e < 3; ++e) {
    if (denom_side[e].empty()) continue;
    sum += static_cast<double>(multiset_overlap(num_side[e], denom_side[e])) /
           static_cast<double>(denom_side[e].size());
  }
  return sum / 3.0;
}

// Stable grouping by sentence id, preserving first-appearance order.
std::vector<std::pair<std::string, std::vector<const Triple*>>> group_by_sentence(
    const std::vector<SentenceTriple>& triples) {
  std::vector<std::pair<std::string, std::vector<const Triple*>>> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (const SentenceTriple& st : triples) {
    auto [it, inserted] = index.emplace(st.sentence_id, groups.size());
    if (inserted) groups.push_back({st.sentence_id, {}});
    groups[it->second].second.push_back(&st.triple);
  }
  return groups;
}

}  // namespace

ScoreReport score_carb(const std::vector<SentenceTriple>& preds,
                       const std::vector<SentenceTriple>& gold,
                       const std::vector<Sentence>& sentences) {
  auto by_id = index_sentences(sentences);
  auto pred_groups = group_by_sentence(preds);
  auto gold_groups = group_by_sentence(gold);
  std::unordered_map<std::string, std::size_t> gold_index;
  for (std::size_t i = 0; i < gold_groups.size(); ++i)
    gold_index.emplace(gold_groups[i].first, i);

  double matched_preds = 0.0;
  double matched_gold = 0.0;
  for (const auto& [sentence_id, sent_preds] : pred_groups) {
    const Sentence& sentence = sentence_for(by_id, sentence_id);
    auto git = gold_index.find(sentence_id);
    if (git == gold_index.end()) continue;  // all predictions unmatched
    const auto& sent_gold = gold_groups[git->second].second;

    std::vector<std::array<std::vector<std::string>, 3>> p_tokens, g_tokens;
    for (const Triple* t : sent_preds)
      p_tokens.push_back(element_tokens(sentence, *t));
    for (const Triple* t : sent_gold)
      g_tokens.push_back(element_tokens(sentence, *t));

    std::vector<std::vector<double>> precision_w(
        p_tokens.size(), std::vector<double>(g_tokens.size()));
    std::vector<std::vector<double>> recall_w(
        p_tokens.size(), std::vector<double>(g_tokens.size()));
    for (std::size_t i = 0; i < p_tokens.size(); ++i) {
      for (std::size_t j = 0; j < g_tokens.size(); ++j) {
        precision_w[i][j] = tuple_similarity(g_tokens[j], p_tokens[i]);
        recall_w[i][j] = tuple_similarity(p_tokens[i], g_tokens[j]);
      }
    }
    matched_preds += assignment_max(precision_w);
    matched_gold += assignment_max(recall_w);
  }
  // Gold sentences with no predictions add nothing to the matched sums but
  // stay in the totals; sentence_for above validates gold ids too.
  for (const auto& [sentence_id, _] : gold_groups) sentence_for(by_id, sentence_id);

  return make_report(matched_preds, static_cast<double>(preds.size()),
                     matched_gold, static_cast<double>(gold.size()));
}

namespace {

// The token whose head lies outside the span; with several candidates the
// first wins, and a span with none (or no head layer) falls back to its
// first token.
std::size_t head_token(const Sentence& sentence, Span span) {
  for (std::size_t i = span.start; i < span.end; ++i) {
    int head = sentence.tokens[i].head;
    if (head < static_cast<int>(span.start) ||
        head >= static_cast<int>(span.end))
      return i;
  }
  return span.start;
}

}  // namespace

ScoreReport score_lexical(const std::vector<SentenceTriple>& preds,
                          const std::vector<SentenceTriple>& gold,
                          const std::vector<Sentence>& sentences) {
  auto by_id = index_sentences(sentences);
  std::vector<bool> gold_used(gold.size(), false);
  std::size_t matched = 0;
  for (const SentenceTriple& pred : preds) {
    const Sentence& sentence = sentence_for(by_id, pred.sentence_id);
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (gold_used[g] || gold[g].sentence_id != pred.sentence_id) continue;
      bool all_contained = true;
      for (ElementKind kind : kCoreKinds) {
        std::size_t head = head_token(sentence, gold[g].triple.element(kind));
        if (!pred.triple.element(kind).contains(head)) {
          all_contained = false;
          break;
        }
      }
      if (all_contained) {
        gold_used[g] = true;
        ++matched;
        break;
      }
    }
  }
  for (const SentenceTriple& g : gold) sentence_for(by_id, g.sentence_id);
  return make_report(static_cast<double>(matched),
                     static_cast<double>(preds.size()),
                     static_cast<double>(matched),
                     static_cast<double>(gold.size()));
}

namespace {

double entropy_bits(const std::map<std::string, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [tag, count] : counts) total += count;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (const auto& [tag, count] : counts) {
    if (count == 0) continue;
    double p = static_cast<double>(count) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

EntropyTable entropy_profile(const std::vector<GoldRecord>& gold,
                             bool include_pos) {
  std::array<std::map<std::string, std::size_t>, 3> dep_counts;
  std::array<std::map<std::string, std::size_t>, 3> pos_counts;
  std::size_t pooled = 0;
  for (const GoldRecord& record : gold) {
    for (const Triple& triple : record.triples) {
      ++pooled;
      for (std::size_t k = 0; k < kCoreKinds.size(); ++k) {
        Span span = triple.element(kCoreKinds[k]);
        for (std::size_t i = span.start; i < span.end; ++i) {
          const Token& token = record.sentence.tokens[i];
          ++dep_counts[k][token.dep];
          if (!include_pos) continue;
          if (token.pos.empty())
            throw MissingTagError("token '" + token.text + "' in sentence '" +
                                  record.sentence.id +
                                  "' has no part-of-speech tag");
          ++pos_counts[k][token.pos];
        }
      }
    }
  }
  if (pooled == 0) throw DataError("no gold extractions to profile");
  EntropyTable table;
  for (std::size_t k = 0; k < 3; ++k) table.dep[k] = entropy_bits(dep_counts[k]);
  if (include_pos) {
    table.pos.emplace();
    for (std::size_t k = 0; k < 3; ++k)
      (*table.pos)[k] = entropy_bits(pos_counts[k]);
  }
  return table;
}

json report_to_json(const ScoreReport& report) {
  return json{{"precision", report.precision},
              {"recall", report.recall},
              {"f1", report.f1},
              {"matched_predictions", report.matched_predictions},
              {"total_predictions", report.total_predictions},
              {"matched_gold", report.matched_gold},
              {"total_gold", report.total_gold}};
}

std::string report_table_text(const ScoreReport& report) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "%6s %6s %6s\n%6.3f %6.3f %6.3f\n",
                "F1", "Prec.", "Rec.", report.f1, report.precision,
                report.recall);
  return buffer;
}

json entropy_to_json(const EntropyTable& table) {
  auto row = [](const std::array<double, 3>& values) {
    return json{{"subject", values[0]},
                {"predicate", values[1]},
                {"object", values[2]}};
  };
  json out{{"dep", row(table.dep)}};
  if (table.pos) out["pos"] = row(*table.pos);
  return out;
}

std::string entropy_table_text(const EntropyTable& table) {
  std::string out;
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "%-10s %7s%s\n", "", "dep",
                table.pos ? "     pos" : "");
  out += buffer;
  static constexpr std::array<const char*, 3> kRows = {"subject", "predicate",
                                                       "object"};
  for (std::size_t k = 0; k < 3; ++k) {
    if (table.pos)
      std::snprintf(buffer, sizeof(buffer), "%-10s %7.3f %7.3f\n", kRows[k],
                    table.dep[k], (*table.pos)[k]);
    else
      std::snprintf(buffer, sizeof(buffer), "%-10s %7.3f\n", kRows[k],
                    table.dep[k]);
    out += buffer;
  }
  return out;
}

std::vector<FactSynset> read_fact_synsets(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  std::vector<FactSynset> out;
  for_each_jsonl_line(in, [&](std::size_t, const json& j) {
    std::string sentence_id = j.at("sentence_id").get<std::string>();
    const json& facts = j.at("facts");
    if (!facts.is_array()) throw FormatError("'facts' must be an array");
    for (const json& fact : facts) {
      if (!fact.is_array() || fact.empty())
        throw FormatError("each fact needs at least one variant");
      FactSynset synset;
      synset.sentence_id = sentence_id;
      for (const json& variant : fact) {
        FactVariant v;
        v.subject = variant.at("s").get<std::string>();
        v.predicate = variant.at("p").get<std::string>();
        v.object = variant.at("o").get<std::string>();
        synset.variants.push_back(std::move(v));
      }
      out.push_back(std::move(synset));
    }
  });
  return out;
}

}  // namespace milie
