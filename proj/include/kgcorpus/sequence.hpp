#ifndef KGCORPUS_SEQUENCE_HPP
#define KGCORPUS_SEQUENCE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kgcorpus/knowledge_graph.hpp"
#include "kgcorpus/random.hpp"
#include "kgcorpus/report.hpp"
#include "kgcorpus/sampling.hpp"
#include "kgcorpus/task.hpp"

namespace kgcorpus {

struct SpecialTokens {
  std::string classification = "[CLS]";
  std::string separator = "[SEP]";
  std::string mask = "[MASK]";
  std::string hidden_relation = "[HREL]";
  std::array<std::string, kRelationCount> relations;

  static SpecialTokens defaults();

  const std::string& relation(RelationType r) const { return relations[relation_code(r)]; }
  std::optional<RelationType> relation_of(std::string_view token) const;
  std::vector<std::string> all() const;

  // Throws ErrorKind::kUsage if a token is empty, contains whitespace, or two tokens are equal.
  void validate() const;
};

// Terms of `language` that contain any special token, up to `limit` of them.
std::vector<std::string> find_token_collisions(const KnowledgeGraph& kg, const SpecialTokens& tokens,
                                               std::string_view language, std::size_t limit = 20);

enum class SpanRole { kHead, kTail, kRelation };

std::string_view span_role_name(SpanRole role);
std::optional<SpanRole> span_role_from_name(std::string_view name);

// Half-open byte range [start, end) into a record's text.
struct CharSpan {
  SpanRole role = SpanRole::kHead;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Rendered {
  std::string text;
  std::vector<CharSpan> spans;
};

// tc: truth label; lp: relation per relation span; ep/mlm: nothing.
using RecordLabels = std::variant<std::monostate, bool, std::vector<RelationType>>;

struct TrainingRecord {
  std::string id;
  Task task = Task::kMlm;
  std::string text;
  std::vector<CharSpan> spans;
  RecordLabels labels;
};

// Head is the preferred term. The tail is the preferred term too, except for
// Synonym triples, where it is drawn uniformly from the concept's other terms
// (falling back to the preferred term, counted as "terms.synonym_fallback").
std::pair<std::string, std::string> realize_terms(const KnowledgeGraph& kg, const Triple& triple,
                                                  std::string_view language, Rng& rng, Report& report);

// Preferred term of every concept on the path.
std::vector<std::string> realize_path_terms(const KnowledgeGraph& kg, const Path& path, std::string_view language);

// "<head> <relation-token> <tail>". Classification and separator tokens are
// left to the consumer's tokenizer, which places them around the whole text.
Rendered render_triple(std::string_view head, RelationType relation, std::string_view tail, const SpecialTokens& tokens);

struct RenderedPath {
  std::string text;
  std::vector<CharSpan> spans;  // one relation span per hop
  std::vector<RelationType> labels;
};

// "<c0> <r0> <c1> <r1> <c2> ...". Requires at least two hops and no Synonym.
RenderedPath render_path(const std::vector<std::string>& terms, const std::vector<RelationType>& relations,
                         const SpecialTokens& tokens);

// Whitespace-delimited units, as byte ranges.
std::vector<std::pair<std::size_t, std::size_t>> whitespace_units(std::string_view text);

// Drops trailing words of the tail, then of the head, until
// words(head) + 1 + words(tail) + 2 <= max_units. Keeps at least one word of
// each. Returns true if anything was cut.
bool fit_to_budget(std::string& head, std::string& tail, std::size_t max_units);

enum class MaskReplacement {
  kMaskToken,       // always replaced by the mask token
  kHiddenRelation,  // always replaced by the hidden-relation token
  kCorrupt,         // 80% mask / 10% random / 10% keep, decided by the consumer
};

enum class LabelAlphabet { kVocabulary, kRelations };

struct MaskedSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  MaskReplacement replacement = MaskReplacement::kMaskToken;

  friend bool operator==(const MaskedSpan&, const MaskedSpan&) = default;
};

struct MaskingDirective {
  std::vector<MaskedSpan> spans;
  LabelAlphabet alphabet = LabelAlphabet::kVocabulary;
  std::vector<RelationType> labels;  // lp only, one per span
};

// The six relations a link-prediction position may be labelled with.
std::vector<RelationType> link_prediction_alphabet();

// ep: the tail span; lp: every relation span, or one uniformly chosen span
// when `lp_mask_all` is false; mlm: each whitespace unit with probability
// `mlm_probability`. Throws for tc records.
MaskingDirective make_masking_directive(const TrainingRecord& record, double mlm_probability, Rng& rng,
                                        bool lp_mask_all = true);

}  // namespace kgcorpus

#endif  // KGCORPUS_SEQUENCE_HPP
