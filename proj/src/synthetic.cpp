#include "kgcorpus/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_set>

#include "kgcorpus/error.hpp"
#include "kgcorpus/random.hpp"

namespace kgcorpus {
namespace {

constexpr std::array<const char*, 12> kModifiers = {"acute",   "chronic",  "benign",   "primary",
                                                    "lateral", "cortical", "hepatic",  "renal",
                                                    "cardiac", "neural",   "vascular", "systemic"};
constexpr std::array<const char*, 12> kNouns = {"lesion", "syndrome",  "disorder", "tissue", "enzyme",  "compound",
                                                "nerve",  "membrane",  "fracture", "agent",  "process", "receptor"};
// Accented forms exercise multi-byte offsets downstream.
constexpr std::array<const char*, 12> kNounsFr = {"lésion", "syndrome", "trouble", "tissu",  "enzyme",    "composé",
                                                  "nerf",   "membrane", "fracture", "agent", "processus", "récepteur"};

std::string cui_of(std::uint32_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "C%07u", i + 1);
  return buf;
}

std::string term_text(const std::string& language, std::uint32_t number, std::uint32_t k, Rng& rng) {
  std::string mod = kModifiers[rng.uniform_index(kModifiers.size())];
  std::string noun = language == "FRE" ? kNounsFr[rng.uniform_index(kNounsFr.size())]
                                       : kNouns[rng.uniform_index(kNouns.size())];
  std::string out = language == "FRE" ? noun + " " + mod : mod + " " + noun;
  out += " " + std::to_string(number + 1);
  if (k > 0) out += " v" + std::to_string(k);
  return out;
}

struct GeneratedConcept {
  std::vector<std::size_t> groups;  // indices into sorted group list, ascending
  std::vector<std::string> types;
  std::vector<bool> has_language;
};

}  // namespace

void SyntheticKgSpec::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::kUsage, "invalid synthetic spec: " + what); };
  if (concept_count < 2) bad("concept_count must be at least 2");
  if (group_weights.empty()) bad("no groups");
  double sum = 0;
  std::set<std::string> names;
  for (const auto& [name, w] : group_weights) {
    if (name.empty() || name.find('|') != std::string::npos) bad("bad group code '" + name + "'");
    if (!names.insert(name).second) bad("duplicate group " + name);
    if (!(w > 0)) bad("group weight for " + name + " must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) bad("group weights must sum to 1");
  if (min_terms == 0 || max_terms < min_terms) bad("terms-per-concept bounds");
  if (languages.empty()) bad("no languages");
  const double pairs = static_cast<double>(concept_count) * (concept_count - 1);
  for (std::uint64_t n : edges_per_relation) {
    if (n == 0) bad("edge counts must be positive");
    if (static_cast<double>(n) > pairs / 2) bad("edge count too large for concept count");
  }
  if (secondary_language_rate < 0 || secondary_language_rate > 1) bad("secondary_language_rate");
  if (multi_group_rate < 0 || multi_group_rate > 1) bad("multi_group_rate");
}

nlohmann::ordered_json GroundTruth::to_json() const {
  nlohmann::ordered_json j;
  j["concepts"] = concepts;
  j["edges"] = edges;
  j["concept_rows"] = concept_rows;
  j["relation_rows"] = relation_rows;
  j["type_rows"] = type_rows;
  for (const auto& [lang, s] : per_language) {
    j["per_language"][lang] = {{"terms", s.terms}, {"cuis", s.cuis}, {"relations", s.relations}};
  }
  j["canonical_group_concepts"] = canonical_group_concepts;
  j["group_memberships"] = group_memberships;
  j["edges_by_head_group"] = edges_by_head_group;
  for (RelationType r : kAllRelations) j["edges_by_relation"][relation_name(r)] = edges_by_relation[relation_code(r)];
  return j;
}

GroundTruth generate_synthetic_kg(const SyntheticKgSpec& spec, const std::filesystem::path& dir) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());

  Rng rng(derive_seed(spec.seed, {0x5e7}));
  GroundTruth truth;

  auto groups = spec.group_weights;
  std::sort(groups.begin(), groups.end());
  std::vector<double> cumulative;
  double acc = 0;
  for (const auto& g : groups) cumulative.push_back(acc += g.second);

  // Two semantic types per group: T<group-index><0|1>.
  auto type_of = [](std::size_t group, int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "T%03zu", group * 2 + static_cast<std::size_t>(k) + 100);
    return std::string(buf);
  };

  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write " + (dir / name).string());
    return out;
  };

  {
    auto out = open("SemGroups.txt");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (int k = 0; k < 2; ++k) {
        out << groups[g].first << '|' << groups[g].first << " group|" << type_of(g, k) << "|type " << k << " of "
            << groups[g].first << '\n';
      }
    }
  }

  std::vector<GeneratedConcept> concepts(spec.concept_count);
  for (std::uint32_t i = 0; i < spec.concept_count; ++i) {
    GeneratedConcept& c = concepts[i];
    double u = rng.uniform01();
    std::size_t primary = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    if (primary >= groups.size()) primary = groups.size() - 1;
    c.groups.push_back(primary);
    if (primary + 1 < groups.size() && rng.bernoulli(spec.multi_group_rate)) {
      c.groups.push_back(primary + 1 + rng.uniform_index(groups.size() - primary - 1));
    }
    for (std::size_t g : c.groups) {
      c.types.push_back(type_of(g, static_cast<int>(rng.uniform_index(2))));
      // Occasionally a second type of the same group; ingest must deduplicate it.
      if (rng.bernoulli(0.1)) c.types.push_back(type_of(g, c.types.back() == type_of(g, 0) ? 1 : 0));
    }
    c.has_language.resize(spec.languages.size());
    c.has_language[0] = true;
    for (std::size_t l = 1; l < spec.languages.size(); ++l) c.has_language[l] = rng.bernoulli(spec.secondary_language_rate);

    ++truth.canonical_group_concepts[groups[primary].first];
    for (std::size_t g : c.groups) ++truth.group_memberships[groups[g].first];
  }
  truth.concepts = spec.concept_count;

  {
    auto out = open("MRCONSO.RRF");
    std::uint64_t aui = 0;
    for (std::uint32_t i = 0; i < spec.concept_count; ++i) {
      const std::string cui = cui_of(i);
      for (std::size_t l = 0; l < spec.languages.size(); ++l) {
        if (!concepts[i].has_language[l]) continue;
        const std::string& lang = spec.languages[l];
        auto n = static_cast<std::uint32_t>(spec.min_terms + rng.uniform_index(spec.max_terms - spec.min_terms + 1));
        for (std::uint32_t k = 0; k < n; ++k) {
          const bool pref = k == 0;
          ++aui;
          out << cui << '|' << lang << '|' << (pref ? "P" : "S") << "|L" << aui << '|' << (pref ? "PF" : "VO") << "|S"
              << aui << '|' << (pref ? "Y" : "N") << "|A" << aui << "|||" << "SYN|SYNTH|" << (pref ? "PT" : "SY")
              << "|" << i << '|' << term_text(lang, i, k, rng) << "|0|N|256|\n";
          ++truth.concept_rows;
          ++truth.per_language[lang].terms;
        }
        ++truth.per_language[lang].cuis;
      }
    }
  }

  {
    auto out = open("MRSTY.RRF");
    for (std::uint32_t i = 0; i < spec.concept_count; ++i) {
      for (const std::string& t : concepts[i].types) {
        out << cui_of(i) << '|' << t << "|A1.2|Type " << t << "|AT" << truth.type_rows << "|256|\n";
        ++truth.type_rows;
      }
    }
  }

  {
    auto out = open("MRREL.RRF");
    std::unordered_set<Triple, TripleHash> seen;
    std::vector<Triple> written;
    std::uint64_t rui = 0;
    auto write_row = [&](std::uint32_t head, std::string_view code, std::uint32_t tail) {
      // Release orientation: cui1 is the tail, cui2 (the concept the code describes) is the head.
      ++rui;
      out << cui_of(tail) << "|A|CUI|" << code << '|' << cui_of(head) << "|A|CUI||R" << rui << "||SYNTH|SYNTH|||N||\n";
      ++truth.relation_rows;
    };
    for (RelationType r : kAllRelations) {
      for (std::uint64_t n = 0; n < spec.edges_per_relation[relation_code(r)]; ++n) {
        Triple t;
        do {
          auto h = static_cast<std::uint32_t>(rng.uniform_index(spec.concept_count));
          auto tl = static_cast<std::uint32_t>(rng.uniform_index(spec.concept_count - 1));
          if (tl >= h) ++tl;
          t = Triple{ConceptId{h}, r, ConceptId{tl}};
        } while (!seen.insert(t).second);
        written.push_back(t);
        write_row(t.head.value, relation_release_code(r), t.tail.value);

        ++truth.edges;
        ++truth.edges_by_relation[relation_code(r)];
        ++truth.edges_by_head_group[groups[concepts[t.head.value].groups.front()].first];
        for (std::size_t l = 0; l < spec.languages.size(); ++l) {
          if (concepts[t.head.value].has_language[l] && concepts[t.tail.value].has_language[l]) {
            ++truth.per_language[spec.languages[l]].relations;
          }
        }
      }
    }
    for (std::uint64_t n = 0; n < spec.unmapped_relation_rows; ++n) {
      auto h = static_cast<std::uint32_t>(rng.uniform_index(spec.concept_count));
      auto tl = static_cast<std::uint32_t>(rng.uniform_index(spec.concept_count));
      write_row(h, "RO", tl);
    }
    for (std::uint64_t n = 0; n < spec.duplicate_relation_rows; ++n) {
      const Triple& t = written[rng.uniform_index(written.size())];
      write_row(t.head.value, relation_release_code(t.relation), t.tail.value);
    }
  }
  return truth;
}

}  // namespace kgcorpus
