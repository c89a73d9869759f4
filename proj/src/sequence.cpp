#include "kgcorpus/sequence.hpp"

#include <algorithm>
#include <set>

#include "kgcorpus/error.hpp"

namespace kgcorpus {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

const std::string& preferred_or_throw(const KnowledgeGraph& kg, ConceptId id, std::string_view language) {
  const Concept& c = kg.concept_at(id);
  const std::string* pref = c.preferred(language);
  if (!pref) fail(ErrorKind::kData, "concept " + c.cui + " has no term in language " + std::string(language));
  return *pref;
}

std::size_t word_count(std::string_view s) { return whitespace_units(s).size(); }

void drop_last_word(std::string& s) {
  auto units = whitespace_units(s);
  if (units.size() <= 1) return;
  s.resize(units[units.size() - 2].second);
}

}  // namespace

SpecialTokens SpecialTokens::defaults() {
  SpecialTokens t;
  for (RelationType r : kAllRelations) t.relations[relation_code(r)] = std::string(default_relation_token(r));
  return t;
}

std::optional<RelationType> SpecialTokens::relation_of(std::string_view token) const {
  for (RelationType r : kAllRelations) {
    if (relations[relation_code(r)] == token) return r;
  }
  return std::nullopt;
}

std::vector<std::string> SpecialTokens::all() const {
  std::vector<std::string> out = {classification, separator, mask, hidden_relation};
  out.insert(out.end(), relations.begin(), relations.end());
  return out;
}

void SpecialTokens::validate() const {
  std::set<std::string> seen;
  for (const std::string& t : all()) {
    if (t.empty()) fail(ErrorKind::kUsage, "special token must not be empty");
    if (std::any_of(t.begin(), t.end(), is_space)) fail(ErrorKind::kUsage, "special token '" + t + "' contains whitespace");
    if (!seen.insert(t).second) fail(ErrorKind::kUsage, "special token '" + t + "' is used twice");
  }
}

std::vector<std::string> find_token_collisions(const KnowledgeGraph& kg, const SpecialTokens& tokens,
                                               std::string_view language, std::size_t limit) {
  std::vector<std::string> out;
  const auto all = tokens.all();
  for (const Concept& c : kg.concepts()) {
    for (const Term& t : c.terms) {
      if (t.language != language) continue;
      for (const std::string& tok : all) {
        if (t.text.find(tok) != std::string::npos) {
          out.push_back(c.cui + ": " + t.text);
          break;
        }
      }
      if (out.size() >= limit) return out;
    }
  }
  return out;
}

std::string_view span_role_name(SpanRole role) {
  switch (role) {
    case SpanRole::kHead: return "head";
    case SpanRole::kTail: return "tail";
    case SpanRole::kRelation: return "relation";
  }
  return "?";
}

std::optional<SpanRole> span_role_from_name(std::string_view name) {
  for (SpanRole r : {SpanRole::kHead, SpanRole::kTail, SpanRole::kRelation}) {
    if (span_role_name(r) == name) return r;
  }
  return std::nullopt;
}

std::pair<std::string, std::string> realize_terms(const KnowledgeGraph& kg, const Triple& triple,
                                                  std::string_view language, Rng& rng, Report& report) {
  std::string head = preferred_or_throw(kg, triple.head, language);
  const std::string& tail_pref = preferred_or_throw(kg, triple.tail, language);
  if (triple.relation != RelationType::kSynonym) return {std::move(head), tail_pref};

  std::vector<std::string_view> others;
  for (std::string_view t : kg.concept_at(triple.tail).terms_in(language)) {
    if (t != tail_pref) others.push_back(t);
  }
  if (others.empty()) {
    report.add("terms.synonym_fallback");
    return {std::move(head), tail_pref};
  }
  return {std::move(head), std::string(others[rng.uniform_index(others.size())])};
}

std::vector<std::string> realize_path_terms(const KnowledgeGraph& kg, const Path& path, std::string_view language) {
  std::vector<std::string> out;
  out.reserve(path.concepts.size());
  for (ConceptId id : path.concepts) out.push_back(preferred_or_throw(kg, id, language));
  return out;
}

Rendered render_triple(std::string_view head, RelationType relation, std::string_view tail, const SpecialTokens& tokens) {
  if (head.empty() || tail.empty()) fail(ErrorKind::kUsage, "cannot render a triple with an empty term");
  const std::string& rel = tokens.relation(relation);
  Rendered out;
  out.text.reserve(head.size() + rel.size() + tail.size() + 2);
  out.text.append(head);
  out.spans.push_back(CharSpan{SpanRole::kHead, 0, out.text.size()});
  out.text.push_back(' ');
  std::size_t start = out.text.size();
  out.text.append(rel);
  out.spans.push_back(CharSpan{SpanRole::kRelation, start, out.text.size()});
  out.text.push_back(' ');
  start = out.text.size();
  out.text.append(tail);
  out.spans.push_back(CharSpan{SpanRole::kTail, start, out.text.size()});
  return out;
}

RenderedPath render_path(const std::vector<std::string>& terms, const std::vector<RelationType>& relations,
                         const SpecialTokens& tokens) {
  if (relations.size() < 2) fail(ErrorKind::kUsage, "a path needs at least two hops");
  if (terms.size() != relations.size() + 1) fail(ErrorKind::kUsage, "path terms and relations do not alternate");
  RenderedPath out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].empty()) fail(ErrorKind::kUsage, "cannot render a path with an empty term");
    if (i > 0) {
      const RelationType r = relations[i - 1];
      if (r == RelationType::kSynonym) fail(ErrorKind::kData, "Synonym relation inside a link-prediction path");
      out.text.push_back(' ');
      const std::size_t start = out.text.size();
      out.text.append(tokens.relation(r));
      out.spans.push_back(CharSpan{SpanRole::kRelation, start, out.text.size()});
      out.labels.push_back(r);
      out.text.push_back(' ');
    }
    out.text.append(terms[i]);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> whitespace_units(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i == text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    out.emplace_back(start, i);
  }
  return out;
}

bool fit_to_budget(std::string& head, std::string& tail, std::size_t max_units) {
  bool cut = false;
  auto total = [&] { return word_count(head) + 1 + word_count(tail) + 2; };
  while (total() > max_units && word_count(tail) > 1) {
    drop_last_word(tail);
    cut = true;
  }
  while (total() > max_units && word_count(head) > 1) {
    drop_last_word(head);
    cut = true;
  }
  return cut;
}

std::vector<RelationType> link_prediction_alphabet() {
  std::vector<RelationType> out;
  for (RelationType r : kAllRelations) {
    if (r != RelationType::kSynonym) out.push_back(r);
  }
  return out;
}

MaskingDirective make_masking_directive(const TrainingRecord& record, double mlm_probability, Rng& rng,
                                        bool lp_mask_all) {
  MaskingDirective d;
  switch (record.task) {
    case Task::kTc:
      fail(ErrorKind::kUsage, "triple classification records are not masked");
    case Task::kEp:
      for (const CharSpan& s : record.spans) {
        if (s.role == SpanRole::kTail) d.spans.push_back(MaskedSpan{s.start, s.end, MaskReplacement::kMaskToken});
      }
      if (d.spans.size() != 1) fail(ErrorKind::kData, "entity prediction record " + record.id + " needs one tail span");
      d.alphabet = LabelAlphabet::kVocabulary;
      return d;
    case Task::kLp: {
      const auto* labels = std::get_if<std::vector<RelationType>>(&record.labels);
      if (!labels) fail(ErrorKind::kData, "link prediction record " + record.id + " has no relation labels");
      for (const CharSpan& s : record.spans) {
        if (s.role == SpanRole::kRelation) d.spans.push_back(MaskedSpan{s.start, s.end, MaskReplacement::kHiddenRelation});
      }
      if (d.spans.size() != labels->size()) fail(ErrorKind::kData, "link prediction record " + record.id + " label count mismatch");
      for (RelationType r : *labels) {
        if (r == RelationType::kSynonym) fail(ErrorKind::kData, "Synonym label in link prediction record " + record.id);
      }
      d.alphabet = LabelAlphabet::kRelations;
      d.labels = *labels;
      if (!lp_mask_all && !d.spans.empty()) {
        const std::size_t keep = rng.uniform_index(d.spans.size());
        d.spans = {d.spans[keep]};
        d.labels = {d.labels[keep]};
      }
      return d;
    }
    case Task::kMlm:
      if (mlm_probability < 0 || mlm_probability > 1) fail(ErrorKind::kUsage, "masking probability must be in [0, 1]");
      for (const auto& [start, end] : whitespace_units(record.text)) {
        if (rng.bernoulli(mlm_probability)) d.spans.push_back(MaskedSpan{start, end, MaskReplacement::kCorrupt});
      }
      d.alphabet = LabelAlphabet::kVocabulary;
      return d;
  }
  return d;
}

}  // namespace kgcorpus
