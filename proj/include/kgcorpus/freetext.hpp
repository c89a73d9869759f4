#ifndef KGCORPUS_FREETEXT_HPP
#define KGCORPUS_FREETEXT_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kgcorpus/report.hpp"

namespace kgcorpus {

struct FreeTextDocument {
  std::string id;
  std::string language;
  std::string text;  // whitespace-normalized, non-empty
};

// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

// Reads plain-text corpora for the masked-language stream. Each input path is
// a file or a directory (walked recursively in sorted order). A ".jsonl" file
// contributes one document per line, taken from the line's "text" field (and
// "id" if present); any other file is one document. Empty documents are
// dropped ("freetext.empty_documents"); files that are not valid UTF-8 are
// skipped ("freetext.undecodable_files") unless `strict`, which throws.
std::vector<FreeTextDocument> ingest_freetext(const std::vector<std::filesystem::path>& inputs, std::string_view language,
                                              Report& report, bool strict = false);

}  // namespace kgcorpus

#endif  // KGCORPUS_FREETEXT_HPP
