#include "milie/core.hpp"

#include <algorithm>
#include <sstream>

namespace milie {

char kind_code(ElementKind kind) {
  switch (kind) {
    case ElementKind::Subject: return 'S';
    case ElementKind::Predicate: return 'P';
    case ElementKind::Object: return 'O';
    case ElementKind::Argument: return 'A';
  }
  throw DataError("unknown element kind");
}

ElementKind kind_from_code(char code) {
  switch (code) {
    case 'S': return ElementKind::Subject;
    case 'P': return ElementKind::Predicate;
    case 'O': return ElementKind::Object;
    case 'A': return ElementKind::Argument;
    default: break;
  }
  throw FormatError(std::string("unknown element code '") + code + "'");
}

std::string_view kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::Subject: return "subject";
    case ElementKind::Predicate: return "predicate";
    case ElementKind::Object: return "object";
    case ElementKind::Argument: return "argument";
  }
  throw DataError("unknown element kind");
}

std::string_view marker_symbol(ElementKind kind) {
  switch (kind) {
    case ElementKind::Subject: return "<S>";
    case ElementKind::Predicate: return "<P>";
    case ElementKind::Object: return "<O>";
    case ElementKind::Argument: break;
  }
  throw DataError("arguments are never marked");
}

bool is_marker_symbol(std::string_view text) {
  return text == "<S>" || text == "<P>" || text == "<O>";
}

std::optional<ElementKind> marker_kind(std::string_view text) {
  if (text == "<S>") return ElementKind::Subject;
  if (text == "<P>") return ElementKind::Predicate;
  if (text == "<O>") return ElementKind::Object;
  return std::nullopt;
}

const std::optional<Span>& PartialTriple::slot(ElementKind kind) const {
  switch (kind) {
    case ElementKind::Subject: return subject;
    case ElementKind::Predicate: return predicate;
    case ElementKind::Object: return object;
    case ElementKind::Argument: break;
  }
  throw DataError("arguments have no single slot");
}

std::optional<Span>& PartialTriple::slot(ElementKind kind) {
  return const_cast<std::optional<Span>&>(
      static_cast<const PartialTriple&>(*this).slot(kind));
}

const Span& Triple::element(ElementKind kind) const {
  switch (kind) {
    case ElementKind::Subject: return subject;
    case ElementKind::Predicate: return predicate;
    case ElementKind::Object: return object;
    default: throw DataError("triple has no single span for kind A");
  }
}

PartialTriple Triple::as_partial() const {
  PartialTriple p;
  p.subject = subject;
  p.predicate = predicate;
  p.object = object;
  p.args = args;
  return p;
}

char bio_char(BioLabel label) {
  switch (label) {
    case BioLabel::B: return 'B';
    case BioLabel::I: return 'I';
    case BioLabel::O: return 'O';
  }
  throw DataError("unknown BIO label");
}

BioLabel bio_from_char(char c) {
  switch (c) {
    case 'B': return BioLabel::B;
    case 'I': return BioLabel::I;
    case 'O': return BioLabel::O;
    default: break;
  }
  throw FormatError(std::string("unknown BIO label '") + c + "'");
}

std::string bio_string(const BioSequence& labels) {
  std::string out;
  out.reserve(labels.size());
  for (BioLabel l : labels) out.push_back(bio_char(l));
  return out;
}

bool span_in_sentence(Span span, const Sentence& sentence) {
  return span.start < span.end && span.end <= sentence.size();
}

Span MarkedSentence::to_rendered(Span base_span) const {
  if (base_span.start >= base_span.end || base_span.end > base.size())
    throw DataError("base span out of range");
  return {base_to_rendered[base_span.start],
          base_to_rendered[base_span.end - 1] + 1};
}

Span MarkedSentence::to_base(Span rendered_span) const {
  if (rendered_span.start >= rendered_span.end ||
      rendered_span.end > rendered.size())
    throw DataError("rendered span out of range");
  std::ptrdiff_t lo = rendered_to_base[rendered_span.start];
  std::ptrdiff_t hi = rendered_to_base[rendered_span.end - 1];
  if (lo < 0 || hi < 0) throw AlignmentError("span touches a marker symbol");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi) + 1};
}

namespace {

Token make_marker_token(ElementKind kind, std::size_t rendered_index) {
  Token t;
  t.index = rendered_index;
  t.text = std::string(marker_symbol(kind));
  t.dep = std::string(kMarkerTag);
  t.pos = std::string(kMarkerTag);
  return t;
}

}  // namespace

MarkedSentence mark(const Sentence& sentence, const PartialTriple& conditioned,
                    std::size_t max_len) {
  std::vector<std::pair<ElementKind, Span>> marks;
  for (ElementKind kind : kCoreKinds) {
    const auto& slot = conditioned.slot(kind);
    if (!slot) continue;
    if (!span_in_sentence(*slot, sentence))
      throw DataError("conditioned " + std::string(kind_name(kind)) +
                      " span out of range in sentence '" + sentence.id + "'");
    marks.emplace_back(kind, *slot);
  }
  for (std::size_t i = 0; i < marks.size(); ++i)
    for (std::size_t j = i + 1; j < marks.size(); ++j)
      if (marks[i].second.overlaps(marks[j].second))
        throw OverlapError("conditioned " +
                           std::string(kind_name(marks[i].first)) + " and " +
                           std::string(kind_name(marks[j].first)) +
                           " spans overlap");

  const std::size_t rendered_len = sentence.size() + 2 * marks.size();
  if (rendered_len > max_len)
    throw LengthError("rendered length " + std::to_string(rendered_len) +
                      " exceeds max_len " + std::to_string(max_len));

  MarkedSentence out;
  out.base = sentence;
  for (const auto& [kind, span] : marks) out.markers.emplace(kind, span);
  out.rendered.reserve(rendered_len);
  out.base_to_rendered.resize(sentence.size());
  out.rendered_to_base.reserve(rendered_len);

  auto emit_marker = [&](ElementKind kind) {
    out.rendered.push_back(make_marker_token(kind, out.rendered.size()));
    out.rendered_to_base.push_back(-1);
  };

  // Closing markers fire before opening ones at a shared boundary, so
  // back-to-back elements render as "... <P> <O> ...".
  for (std::size_t p = 0; p <= sentence.size(); ++p) {
    for (const auto& [kind, span] : marks)
      if (span.end == p) emit_marker(kind);
    for (const auto& [kind, span] : marks)
      if (span.start == p) emit_marker(kind);
    if (p == sentence.size()) break;
    Token t = sentence.tokens[p];
    t.index = out.rendered.size();
    out.base_to_rendered[p] = out.rendered.size();
    out.rendered_to_base.push_back(static_cast<std::ptrdiff_t>(p));
    out.rendered.push_back(std::move(t));
  }
  return out;
}

Sentence strip(const MarkedSentence& marked) {
  Sentence out;
  out.id = marked.base.id;
  out.tokens.reserve(marked.base.size());
  for (std::size_t r = 0; r < marked.rendered.size(); ++r) {
    if (marked.is_marker(r)) continue;
    Token t = marked.rendered[r];
    t.index = out.tokens.size();
    out.tokens.push_back(std::move(t));
  }
  return out;
}

MarkedSentence marked_from_rendered(const std::string& id,
                                    const std::vector<std::string>& texts,
                                    const std::vector<std::string>& tags) {
  if (texts.size() != tags.size())
    throw FormatError("rendered token and tag counts differ");

  Sentence base;
  base.id = id;
  std::map<ElementKind, std::vector<std::size_t>> pending;  // base boundaries
  std::map<ElementKind, Span> markers;
  for (std::size_t r = 0; r < texts.size(); ++r) {
    auto mk = marker_kind(texts[r]);
    if (!mk) {
      Token t;
      t.index = base.tokens.size();
      t.text = texts[r];
      t.dep = tags[r];
      base.tokens.push_back(std::move(t));
      continue;
    }
    auto& stack = pending[*mk];
    if (stack.empty()) {
      if (markers.count(*mk))
        throw FormatError("marker " + std::string(marker_symbol(*mk)) +
                          " appears more than twice");
      stack.push_back(base.tokens.size());
    } else {
      std::size_t open = stack.back();
      stack.pop_back();
      if (open == base.tokens.size())
        throw FormatError("empty marker pair " +
                          std::string(marker_symbol(*mk)));
      markers.emplace(*mk, Span{open, base.tokens.size()});
    }
  }
  for (const auto& [kind, stack] : pending)
    if (!stack.empty())
      throw FormatError("unbalanced marker " +
                        std::string(marker_symbol(kind)));

  PartialTriple conditioned;
  for (const auto& [kind, span] : markers) conditioned.slot(kind) = span;
  MarkedSentence out = mark(base, conditioned, texts.size());
  if (out.rendered.size() != texts.size() ||
      rendered_text(out) != [&] {
        std::string joined;
        for (std::size_t r = 0; r < texts.size(); ++r) {
          if (r) joined += ' ';
          joined += texts[r];
        }
        return joined;
      }())
    throw FormatError("nested or interleaved markers in rendered stream");
  return out;
}

BioSequence encode_bio(const std::vector<Span>& spans, std::size_t length) {
  std::vector<Span> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  BioSequence labels(length, BioLabel::O);
  Span prev{0, 0};
  for (const Span& span : sorted) {
    if (span.start >= span.end || span.end > length)
      throw LengthError("span out of range for BIO encoding");
    if (prev.end > 0 && span.start < prev.end)
      throw OverlapError("overlapping spans in BIO encoding");
    labels[span.start] = BioLabel::B;
    for (std::size_t i = span.start + 1; i < span.end; ++i)
      labels[i] = BioLabel::I;
    prev = span;
  }
  return labels;
}

std::vector<Span> decode_bio(const BioSequence& labels,
                             const MarkedSentence& over) {
  if (labels.size() != over.rendered.size())
    throw DataError("label count " + std::to_string(labels.size()) +
                    " does not match rendered length " +
                    std::to_string(over.rendered.size()));
  std::vector<Span> out;
  std::size_t open = labels.size();  // sentinel: no open run
  auto close = [&](std::size_t end) {
    if (open == labels.size()) return;
    out.push_back(over.to_base({open, end}));
    open = labels.size();
  };
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (over.is_marker(r) && labels[r] != BioLabel::O)
      throw AlignmentError("non-O label on marker symbol at position " +
                           std::to_string(r));
    switch (labels[r]) {
      case BioLabel::B:
        close(r);
        open = r;
        break;
      case BioLabel::I:
        if (open == labels.size()) open = r;  // stray I opens a span
        break;
      case BioLabel::O:
        close(r);
        break;
    }
  }
  close(labels.size());
  return out;
}

NormKey normalize(const Triple& triple, const Sentence& sentence) {
  for (const Span* span : {&triple.subject, &triple.predicate, &triple.object})
    if (!span_in_sentence(*span, sentence))
      throw DataError("triple span out of range in sentence '" + sentence.id +
                      "'");
  NormKey key;
  key.sentence_id = sentence.id;
  key.subject = triple.subject;
  key.predicate = triple.predicate;
  key.object = triple.object;
  key.args = triple.args;
  for (const Span& span : key.args)
    if (!span_in_sentence(span, sentence))
      throw DataError("argument span out of range in sentence '" +
                      sentence.id + "'");
  std::sort(key.args.begin(), key.args.end());
  return key;
}

std::string span_text(const Sentence& sentence, Span span) {
  std::string out;
  for (std::size_t i = span.start; i < span.end && i < sentence.size(); ++i) {
    if (i > span.start) out += ' ';
    out += sentence.tokens[i].text;
  }
  return out;
}

std::vector<std::string> span_tokens(const Sentence& sentence, Span span) {
  std::vector<std::string> out;
  out.reserve(span.size());
  for (std::size_t i = span.start; i < span.end && i < sentence.size(); ++i)
    out.push_back(sentence.tokens[i].text);
  return out;
}

std::string rendered_text(const MarkedSentence& marked) {
  std::string out;
  for (std::size_t r = 0; r < marked.rendered.size(); ++r) {
    if (r) out += ' ';
    out += marked.rendered[r].text;
  }
  return out;
}

}  // namespace milie
