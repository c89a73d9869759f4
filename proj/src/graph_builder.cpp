#include "kgcorpus/graph_builder.hpp"

#include <algorithm>
#include <numeric>

#include "kgcorpus/error.hpp"

namespace kgcorpus {

void add_summary(Report& report, const std::string& section, const ParseSummary& summary) {
  report.add(section + ".rows", summary.rows);
  report.add(section + ".emitted", summary.emitted);
  report.add(section + ".short_rows", summary.short_rows);
  report.add(section + ".filtered", summary.filtered);
  report.add(section + ".duplicates", summary.duplicates);
}

std::uint32_t GraphBuilder::intern(std::string_view cui) {
  auto it = index_.find(std::string(cui));
  if (it != index_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(pending_.size());
  pending_.push_back(Pending{std::string(cui), {}, {}, {}});
  index_.emplace(std::string(cui), id);
  return id;
}

void GraphBuilder::add_fragment(const ConceptFragment& fragment) {
  Pending& p = pending_[intern(fragment.cui)];
  Term term{std::string(fragment.language), std::string(fragment.term)};
  if (std::find(p.terms.begin(), p.terms.end(), term) == p.terms.end()) {
    p.terms.push_back(term);
  } else {
    report_.add("terms.duplicates", 1);
  }
  if (fragment.preferred) p.preferred.try_emplace(term.language, term.text);
}

void GraphBuilder::add_membership(std::string_view cui, std::string_view group) {
  if (!cfg_.keeps_group(group)) {
    report_.add("groups.excluded_memberships", 1);
    return;
  }
  Pending& p = pending_[intern(cui)];
  std::string g(group);
  auto pos = std::lower_bound(p.groups.begin(), p.groups.end(), g);
  if (pos == p.groups.end() || *pos != g) p.groups.insert(pos, std::move(g));
}

void GraphBuilder::add_triple(const RawTriple& triple) {
  Triple t{ConceptId{intern(triple.head)}, triple.relation, ConceptId{intern(triple.tail)}};
  if (!triples_.insert(t).second) report_.add("relations.duplicate_rows", 1);
}

GraphBuilder::Result GraphBuilder::finish() && {
  std::vector<std::uint32_t> order(pending_.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return pending_[a].cui < pending_[b].cui; });

  KnowledgeGraph graph;
  std::vector<std::optional<ConceptId>> remap(pending_.size());
  for (std::uint32_t i : order) {
    Pending& p = pending_[i];
    if (p.terms.empty()) {
      if (!p.groups.empty()) report_.add("concepts.without_terms", 1);
      continue;
    }
    if (p.groups.empty()) {
      report_.add("concepts.without_group", 1);
      continue;
    }
    Concept c{p.cui, p.terms, std::move(p.preferred), p.groups};
    for (const Term& t : c.terms) {
      if (c.preferred_term.try_emplace(t.language, t.text).second) report_.add("terms.preferred_fallback", 1);
    }
    remap[i] = graph.insert_concept(c);
  }
  if (graph.concept_count() == 0) fail(ErrorKind::kData, "no concept survived ingest (check language and group filters)");

  std::vector<Triple> triples;
  triples.reserve(triples_.size());
  for (const Triple& t : triples_) {
    auto head = remap[t.head.value];
    auto tail = remap[t.tail.value];
    if (!head || !tail) {
      report_.add("relations.dangling", 1);
      continue;
    }
    triples.push_back(Triple{*head, t.relation, *tail});
  }
  // ConceptIds follow sorted cui order, so sorting ids sorts by cui.
  std::sort(triples.begin(), triples.end());
  for (const Triple& t : triples) {
    graph.insert_triple(t);
    report_.add("relations.by_type." + std::string(relation_name(t.relation)), 1);
    if (t.is_self_loop()) report_.add("relations.self_loops", 1);
  }
  graph.freeze();

  report_.counts["graph.concepts"] = graph.concept_count();
  report_.counts["graph.edges"] = graph.edge_count();
  pending_.clear();
  index_.clear();
  triples_.clear();
  return Result{std::move(graph), std::move(report_)};
}

ReleaseFiles ReleaseFiles::in_directory(const std::filesystem::path& dir) {
  auto pick = [&](const std::string& name) {
    auto plain = dir / name;
    auto gz = dir / (name + ".gz");
    if (!std::filesystem::exists(plain) && std::filesystem::exists(gz)) return gz;
    return plain;
  };
  return ReleaseFiles{pick("MRCONSO.RRF"), pick("MRREL.RRF"), pick("MRSTY.RRF"), pick("SemGroups.txt")};
}

GraphBuilder::Result ingest_release(const ReleaseFiles& files, const IngestConfig& cfg) {
  for (const auto& p : {files.concepts, files.relations, files.semantic_types, files.group_map}) {
    if (!std::filesystem::exists(p)) fail(ErrorKind::kIo, "missing release file " + p.string());
  }
  GraphBuilder builder(cfg);
  auto groups_map = parse_group_map(files.group_map);
  builder.report().add("group_map.types", groups_map.size());

  auto concepts = parse_concept_file(files.concepts, cfg, [&](const ConceptFragment& f) { builder.add_fragment(f); });
  add_summary(builder.report(), "concept_file", concepts);

  auto types = parse_semantic_types(files.semantic_types, groups_map,
                                    [&](std::string_view cui, std::string_view group) { builder.add_membership(cui, group); });
  add_summary(builder.report(), "type_file", types);

  auto relations = parse_relation_file(files.relations, cfg, [&](const RawTriple& t) { builder.add_triple(t); });
  add_summary(builder.report(), "relation_file", relations);

  return std::move(builder).finish();
}

}  // namespace kgcorpus
