#ifndef KGCORPUS_RELATION_HPP
#define KGCORPUS_RELATION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace kgcorpus {

// The seven relation labels of the terminology graph. The underlying value
// is the stable integer code written into corpora.
enum class RelationType : std::uint8_t {
  kParent = 0,
  kChild = 1,
  kSynonym = 2,
  kAllowedQualifier = 3,
  kQualifiedBy = 4,
  kBroader = 5,
  kNarrower = 6,
};

inline constexpr std::size_t kRelationCount = 7;

inline constexpr std::array<RelationType, kRelationCount> kAllRelations = {
    RelationType::kParent,      RelationType::kChild,   RelationType::kSynonym,
    RelationType::kAllowedQualifier, RelationType::kQualifiedBy, RelationType::kBroader,
    RelationType::kNarrower,
};

constexpr int relation_code(RelationType r) noexcept { return static_cast<int>(r); }
std::optional<RelationType> relation_from_code(int code) noexcept;

// Human-readable name, e.g. "Parent".
std::string_view relation_name(RelationType r) noexcept;
std::optional<RelationType> relation_from_name(std::string_view name) noexcept;

// Release abbreviation used in relation files, e.g. "PAR".
std::string_view relation_release_code(RelationType r) noexcept;

// Default rendered token, e.g. "[REL_PAR]".
std::string_view default_relation_token(RelationType r) noexcept;

}  // namespace kgcorpus

#endif  // KGCORPUS_RELATION_HPP
