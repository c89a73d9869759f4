#include "kgcorpus/knowledge_graph.hpp"

#include <algorithm>

#include "kgcorpus/error.hpp"

namespace kgcorpus {

bool Concept::has_language(std::string_view language) const {
  return std::any_of(terms.begin(), terms.end(), [&](const Term& t) { return t.language == language; });
}

std::vector<std::string_view> Concept::terms_in(std::string_view language) const {
  std::vector<std::string_view> out;
  for (const Term& t : terms) {
    if (t.language == language) out.push_back(t.text);
  }
  return out;
}

const std::string* Concept::preferred(std::string_view language) const {
  auto it = preferred_term.find(std::string(language));
  return it == preferred_term.end() ? nullptr : &it->second;
}

void KnowledgeGraph::require_mutable() const {
  if (frozen_) fail(ErrorKind::kUsage, "knowledge graph is frozen");
}

ConceptId KnowledgeGraph::insert_concept(const Concept& incoming) {
  require_mutable();
  if (incoming.cui.empty()) fail(ErrorKind::kData, "concept with empty cui");
  if (incoming.groups.empty()) fail(ErrorKind::kData, "concept " + incoming.cui + " has no semantic group");

  auto [it, inserted] = by_cui_.try_emplace(incoming.cui, static_cast<std::uint32_t>(concepts_.size()));
  const ConceptId id{it->second};
  if (inserted) {
    concepts_.push_back(Concept{incoming.cui, {}, {}, {}});
    outgoing_.emplace_back();
  }
  Concept& stored = concepts_[id.value];

  for (const Term& t : incoming.terms) {
    if (std::find(stored.terms.begin(), stored.terms.end(), t) == stored.terms.end()) stored.terms.push_back(t);
  }
  for (const auto& [language, term] : incoming.preferred_term) {
    if (stored.preferred_term.contains(language)) continue;
    Term t{language, term};
    if (std::find(stored.terms.begin(), stored.terms.end(), t) == stored.terms.end()) stored.terms.push_back(t);
    stored.preferred_term.emplace(language, term);
  }
  // Every language with terms gets a preferred term: the first one seen.
  for (const Term& t : stored.terms) stored.preferred_term.try_emplace(t.language, t.text);

  for (const std::string& g : incoming.groups) {
    auto pos = std::lower_bound(stored.groups.begin(), stored.groups.end(), g);
    if (pos != stored.groups.end() && *pos == g) continue;
    stored.groups.insert(pos, g);
    auto& members = groups_[g];
    members.push_back(id);
  }
  return id;
}

bool KnowledgeGraph::insert_triple(const Triple& triple) {
  require_mutable();
  if (triple.head.value >= concepts_.size() || triple.tail.value >= concepts_.size()) {
    fail(ErrorKind::kData, "triple endpoint out of range");
  }
  if (!membership_.insert(triple).second) return false;
  outgoing_[triple.head.value].push_back(static_cast<std::uint32_t>(edges_.size()));
  edges_.push_back(triple);
  return true;
}

bool KnowledgeGraph::insert_triple(std::string_view head_cui, RelationType relation, std::string_view tail_cui) {
  auto head = find(head_cui);
  if (!head) fail(ErrorKind::kData, "unknown concept " + std::string(head_cui));
  auto tail = find(tail_cui);
  if (!tail) fail(ErrorKind::kData, "unknown concept " + std::string(tail_cui));
  return insert_triple(Triple{*head, relation, *tail});
}

bool KnowledgeGraph::contains(std::string_view head_cui, RelationType relation, std::string_view tail_cui) const {
  auto head = find(head_cui);
  auto tail = find(tail_cui);
  return head && tail && contains(Triple{*head, relation, *tail});
}

std::optional<ConceptId> KnowledgeGraph::find(std::string_view cui) const {
  auto it = by_cui_.find(std::string(cui));
  if (it == by_cui_.end()) return std::nullopt;
  return ConceptId{it->second};
}

const Concept* KnowledgeGraph::lookup(std::string_view cui) const {
  auto id = find(cui);
  return id ? &concepts_[id->value] : nullptr;
}

std::span<const ConceptId> KnowledgeGraph::group_members(std::string_view group) const {
  auto it = groups_.find(group);
  if (it == groups_.end()) return {};
  return it->second;
}

std::vector<std::string> KnowledgeGraph::group_names() const {
  std::vector<std::string> out;
  out.reserve(groups_.size());
  for (const auto& [name, members] : groups_) out.push_back(name);
  return out;
}

ConceptId KnowledgeGraph::sample_concept_in_group(std::string_view group, Rng& rng) const {
  auto members = group_members(group);
  if (members.empty()) fail(ErrorKind::kData, "semantic group " + std::string(group) + " has no members");
  return members[rng.uniform_index(members.size())];
}

std::vector<std::string> KnowledgeGraph::languages() const {
  std::vector<std::string> out;
  for (const Concept& c : concepts_) {
    for (const auto& [language, term] : c.preferred_term) {
      if (std::find(out.begin(), out.end(), language) == out.end()) out.push_back(language);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphStatistics graph_statistics(const KnowledgeGraph& kg, std::string_view language) {
  GraphStatistics stats;
  std::vector<bool> present(kg.concept_count(), false);
  for (std::size_t i = 0; i < kg.concept_count(); ++i) {
    const Concept& c = kg.concepts()[i];
    std::uint64_t n = 0;
    for (const Term& t : c.terms) n += t.language == language;
    stats.terms += n;
    if (n > 0) {
      present[i] = true;
      ++stats.cuis;
    }
  }
  for (const Triple& t : kg.edges()) stats.relations += present[t.head.value] && present[t.tail.value];
  return stats;
}

KnowledgeGraph restrict_to_language(const KnowledgeGraph& kg, std::string_view language) {
  KnowledgeGraph out;
  std::vector<std::optional<ConceptId>> remap(kg.concept_count());
  for (std::size_t i = 0; i < kg.concept_count(); ++i) {
    const Concept& c = kg.concepts()[i];
    if (!c.has_language(language)) continue;
    Concept copy{c.cui, {}, {}, c.groups};
    for (const Term& t : c.terms) {
      if (t.language == language) copy.terms.push_back(t);
    }
    if (const std::string* pref = c.preferred(language)) copy.preferred_term.emplace(std::string(language), *pref);
    remap[i] = out.insert_concept(copy);
  }
  for (const Triple& t : kg.edges()) {
    if (remap[t.head.value] && remap[t.tail.value]) {
      out.insert_triple(Triple{*remap[t.head.value], t.relation, *remap[t.tail.value]});
    }
  }
  if (kg.frozen()) out.freeze();
  return out;
}

}  // namespace kgcorpus
