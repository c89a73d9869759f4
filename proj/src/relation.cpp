#include "kgcorpus/relation.hpp"

namespace kgcorpus {
namespace {

struct RelationInfo {
  std::string_view name;
  std::string_view release_code;
  std::string_view token;
};

constexpr std::array<RelationInfo, kRelationCount> kInfo = {{
    {"Parent", "PAR", "[REL_PAR]"},
    {"Child", "CHD", "[REL_CHD]"},
    {"Synonym", "SY", "[REL_SY]"},
    {"AllowedQualifier", "AQ", "[REL_AQ]"},
    {"QualifiedBy", "QB", "[REL_QB]"},
    {"Broader", "RB", "[REL_RB]"},
    {"Narrower", "RN", "[REL_RN]"},
}};

}  // namespace

std::optional<RelationType> relation_from_code(int code) noexcept {
  if (code < 0 || code >= static_cast<int>(kRelationCount)) return std::nullopt;
  return static_cast<RelationType>(code);
}

std::string_view relation_name(RelationType r) noexcept { return kInfo[relation_code(r)].name; }

std::optional<RelationType> relation_from_name(std::string_view name) noexcept {
  for (RelationType r : kAllRelations) {
    if (kInfo[relation_code(r)].name == name) return r;
  }
  return std::nullopt;
}

std::string_view relation_release_code(RelationType r) noexcept {
  return kInfo[relation_code(r)].release_code;
}

std::string_view default_relation_token(RelationType r) noexcept {
  return kInfo[relation_code(r)].token;
}

}  // namespace kgcorpus
