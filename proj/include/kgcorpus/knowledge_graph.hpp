#ifndef KGCORPUS_KNOWLEDGE_GRAPH_HPP
#define KGCORPUS_KNOWLEDGE_GRAPH_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgcorpus/random.hpp"
#include "kgcorpus/relation.hpp"

namespace kgcorpus {

// Dense index of a concept inside one KnowledgeGraph.
struct ConceptId {
  std::uint32_t value = 0;

  friend bool operator==(ConceptId, ConceptId) = default;
  friend auto operator<=>(ConceptId, ConceptId) = default;
};

struct Term {
  std::string language;
  std::string text;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Concept {
  std::string cui;
  std::vector<Term> terms;
  std::map<std::string, std::string> preferred_term;  // language -> term
  std::vector<std::string> groups;                    // sorted, unique, non-empty

  // Lexicographically smallest group; the single stratum label of the concept.
  const std::string& canonical_group() const { return groups.front(); }

  bool has_language(std::string_view language) const;
  std::vector<std::string_view> terms_in(std::string_view language) const;
  const std::string* preferred(std::string_view language) const;
};

struct Triple {
  ConceptId head;
  RelationType relation = RelationType::kParent;
  ConceptId tail;

  bool is_self_loop() const { return head == tail; }

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    const std::uint64_t k = (std::uint64_t{t.head.value} << 32) | t.tail.value;
    return static_cast<std::size_t>(mix64(k ^ mix64(static_cast<std::uint64_t>(relation_code(t.relation)) + 1)));
  }
};

struct GraphStatistics {
  std::uint64_t terms = 0;
  std::uint64_t cuis = 0;
  std::uint64_t relations = 0;

  friend bool operator==(const GraphStatistics&, const GraphStatistics&) = default;
};

// Directed labelled multigraph over concepts. Single writer while building;
// after freeze() the graph is read-only and may be shared between threads.
class KnowledgeGraph {
 public:
  // Inserts or merges a concept (set union of terms and groups). Throws on an
  // empty cui or an empty group set.
  ConceptId insert_concept(const Concept& incoming);

  // Idempotent. Returns true when the edge was new.
  bool insert_triple(const Triple& triple);
  // Resolves cuis first; throws naming the missing cui.
  bool insert_triple(std::string_view head_cui, RelationType relation, std::string_view tail_cui);

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  bool contains(const Triple& triple) const { return membership_.contains(triple); }
  bool contains(std::string_view head_cui, RelationType relation, std::string_view tail_cui) const;

  std::optional<ConceptId> find(std::string_view cui) const;
  const Concept& concept_at(ConceptId id) const { return concepts_[id.value]; }
  const Concept* lookup(std::string_view cui) const;

  std::size_t concept_count() const { return concepts_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Concept> concepts() const { return concepts_; }
  std::span<const Triple> edges() const { return edges_; }

  // Indices into edges() of the triples whose head is `id`.
  std::span<const std::uint32_t> outgoing(ConceptId id) const { return outgoing_[id.value]; }

  // Members of a semantic group in first-membership order. Empty span if unknown.
  std::span<const ConceptId> group_members(std::string_view group) const;
  std::vector<std::string> group_names() const;

  // Uniform draw from a group's members. Throws naming the group if it is empty or unknown.
  ConceptId sample_concept_in_group(std::string_view group, Rng& rng) const;

  std::vector<std::string> languages() const;

 private:
  void require_mutable() const;

  std::vector<Concept> concepts_;
  std::unordered_map<std::string, std::uint32_t> by_cui_;
  std::vector<Triple> edges_;
  std::unordered_set<Triple, TripleHash> membership_;
  std::vector<std::vector<std::uint32_t>> outgoing_;
  std::map<std::string, std::vector<ConceptId>, std::less<>> groups_;
  bool frozen_ = false;
};

// Counts of language-tagged terms, concepts with at least one term in the
// language, and edges whose endpoints both have a term in the language.
GraphStatistics graph_statistics(const KnowledgeGraph& kg, std::string_view language);

// Copy of the graph keeping only concepts with a term in `language` and the
// edges between them. Insertion order is preserved.
KnowledgeGraph restrict_to_language(const KnowledgeGraph& kg, std::string_view language);

}  // namespace kgcorpus

#endif  // KGCORPUS_KNOWLEDGE_GRAPH_HPP
