#include "milie/postprocess.hpp"

namespace milie {

std::vector<Triple> binarize(const Triple& triple, const Sentence& sentence,
                             const Tagger& model, std::size_t max_len,
                             PostDiagnostics* diagnostics) {
  PostDiagnostics local;
  PostDiagnostics& diag = diagnostics ? *diagnostics : local;

  Triple base = triple;
  base.args.clear();
  std::vector<Triple> out{std::move(base)};

  for (const Span& arg : triple.args) {
    PartialTriple conditioned;
    conditioned.subject = triple.subject;
    conditioned.object = arg;  // hypothesized object
    MarkedSentence marked;
    try {
      marked = mark(sentence, conditioned, max_len);
    } catch (const LengthError&) {
      ++diag.skipped_args;
      continue;
    } catch (const OverlapError&) {
      ++diag.skipped_args;
      continue;
    }
    std::vector<Span> spans =
        decode_bio(model.predict(marked, ElementKind::Predicate), marked);
    if (spans.empty()) {
      ++diag.rejected_args;
      continue;
    }
    Triple derived;
    derived.subject = triple.subject;
    derived.predicate = spans.front();
    derived.object = arg;
    derived.confidence = triple.confidence;
    out.push_back(std::move(derived));
  }
  return out;
}

std::vector<Triple> complete(const Sentence& sentence, const PartialTriple& prior,
                             const Tagger& model, const DecodeLimits& limits,
                             std::size_t max_len,
                             ExtractDiagnostics* diagnostics) {
  PartialTriple root = prior;
  root.args.clear();
  std::vector<ElementKind> steps;
  for (ElementKind kind : {ElementKind::Predicate, ElementKind::Subject,
                           ElementKind::Object})
    if (!root.slot(kind)) steps.push_back(kind);
  steps.push_back(ElementKind::Argument);
  return extract_from(sentence, root, steps, model, limits, max_len, diagnostics);
}

std::optional<Span> align_tokens(const Sentence& sentence,
                                 const std::vector<std::string>& tokens) {
  if (tokens.empty() || tokens.size() > sentence.size()) return std::nullopt;
  for (std::size_t start = 0; start + tokens.size() <= sentence.size(); ++start) {
    bool match = true;
    for (std::size_t i = 0; i < tokens.size() && match; ++i)
      match = sentence.tokens[start + i].text == tokens[i];
    if (match) return Span{start, start + tokens.size()};
  }
  return std::nullopt;
}

}  // namespace milie
