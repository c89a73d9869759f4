#include "kgcorpus/freetext.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "kgcorpus/error.hpp"
#include "kgcorpus/rrf.hpp"
#include "kgcorpus/utf8.hpp"

namespace kgcorpus {
namespace utf8 {

namespace {

// Length of the sequence starting at text[i], or 0 if malformed.
std::size_t sequence_length(std::string_view text, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(text[i]);
  if (b0 < 0x80) return 1;
  std::size_t len;
  std::uint32_t cp;
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
    cp = b0 & 0x1F;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    cp = b0 & 0x0F;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (i + len > text.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if ((len == 3 && cp < 0x800) || (len == 4 && (cp < 0x10000 || cp > 0x10FFFF))) return 0;
  if (cp >= 0xD800 && cp <= 0xDFFF) return 0;
  return len;
}

}  // namespace

bool valid(std::string_view text) {
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = sequence_length(text, i);
    if (len == 0) return false;
    i += len;
  }
  return true;
}

std::size_t codepoints_before(std::string_view text, std::size_t byte_offset) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < byte_offset && i < text.size(); ++i) {
    n += (static_cast<unsigned char>(text[i]) & 0xC0) != 0x80;
  }
  return n;
}

std::optional<std::size_t> byte_offset(std::string_view text, std::size_t codepoint) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;
    if (seen == codepoint) return i;
    ++seen;
  }
  if (seen == codepoint) return text.size();
  return std::nullopt;
}

}  // namespace utf8

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

namespace {

struct InputFile {
  std::filesystem::path path;
  std::string id;  // path relative to the input root
};

void collect_files(const std::filesystem::path& input, std::vector<InputFile>& out) {
  std::error_code ec;
  if (std::filesystem::is_directory(input, ec)) {
    std::vector<std::filesystem::path> found;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(input)) {
      if (entry.is_regular_file()) found.push_back(entry.path());
    }
    std::sort(found.begin(), found.end());
    for (const auto& f : found) out.push_back(InputFile{f, f.lexically_relative(input).generic_string()});
  } else if (std::filesystem::is_regular_file(input, ec)) {
    out.push_back(InputFile{input, input.filename().generic_string()});
  } else {
    fail(ErrorKind::kIo, "free-text input not found: " + input.string());
  }
}

}  // namespace

std::vector<FreeTextDocument> ingest_freetext(const std::vector<std::filesystem::path>& inputs, std::string_view language,
                                              Report& report, bool strict) {
  std::vector<InputFile> files;
  for (const auto& in : inputs) collect_files(in, files);

  std::vector<FreeTextDocument> docs;
  auto accept = [&](std::string id, std::string_view raw) {
    std::string text = normalize_whitespace(raw);
    if (text.empty()) {
      report.add("freetext.empty_documents");
      return;
    }
    docs.push_back(FreeTextDocument{std::move(id), std::string(language), std::move(text)});
  };
  auto undecodable = [&](const std::filesystem::path& file, const std::string& why) {
    if (strict) fail(ErrorKind::kData, "cannot decode " + file.string() + ": " + why);
    report.add("freetext.undecodable_files");
  };

  for (const auto& [file, file_id] : files) {
    report.add("freetext.files");
    if (file.extension() == ".jsonl") {
      std::vector<FreeTextDocument> pending;
      std::string problem;
      for_each_line(file, [&](std::string_view line, std::uint64_t number) {
        if (!problem.empty() || normalize_whitespace(line).empty()) return;
        if (!utf8::valid(line)) {
          problem = "line " + std::to_string(number) + " is not UTF-8";
          return;
        }
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string()) {
          problem = "line " + std::to_string(number) + " has no string \"text\" field";
          return;
        }
        std::string id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>()
                                                                  : file_id + ":" + std::to_string(number);
        pending.push_back(FreeTextDocument{std::move(id), std::string(language), j["text"].get<std::string>()});
      });
      if (!problem.empty()) {
        undecodable(file, problem);
        continue;
      }
      for (auto& d : pending) accept(std::move(d.id), d.text);
      continue;
    }
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(ErrorKind::kIo, "cannot open " + file.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!utf8::valid(raw)) {
      undecodable(file, "not UTF-8");
      continue;
    }
    accept(file_id, raw);
  }
  report.add("freetext.documents", docs.size());
  return docs;
}

}  // namespace kgcorpus
