#include <gtest/gtest.h>
#include <zlib.h>

#include <sstream>

#include "kgcorpus/error.hpp"
#include "kgcorpus/rrf.hpp"
#include "test_support.hpp"

using namespace kgcorpus;

namespace {

std::string conso_row(const std::string& cui, const std::string& lat, const std::string& ts, const std::string& ispref,
                      const std::string& str) {
  return cui + "|" + lat + "|" + ts + "|L1|PF|S1|" + ispref + "|A1||||MSH|PT|D1|" + str + "|0|N|256|\n";
}

std::string rel_row(const std::string& cui1, const std::string& code, const std::string& cui2) {
  return cui1 + "|A1|CUI|" + code + "|" + cui2 + "|A2|CUI||R1||MSH|MSH|||N||\n";
}

}  // namespace

TEST(Rrf, SplitKeepsEmptyFieldsAndRoundTrips) {
  for (std::string line : {"a|b|c", "a||c|", "|", "", "C0000005|ENG|P|L0270109|PF|S0007492|Y|A26634265||M0019694|D012711|MSH|PEP|D012711|(131)I-Macroaggregated Albumin|0|N|256|"}) {
    auto fields = split_pipe(line);
    EXPECT_EQ(join_pipe(fields), line);
  }
  EXPECT_EQ(split_pipe("a||c|").size(), 4u);
  EXPECT_EQ(split_pipe("a||c|")[3], "");
}

TEST(Rrf, LineReaderStripsCarriageReturnsAndHandlesMissingFinalNewline) {
  std::istringstream in("one\r\ntwo\n\nthree");
  std::vector<std::string> lines;
  for_each_line(in, [&](std::string_view l, std::uint64_t) { lines.emplace_back(l); });
  EXPECT_EQ(lines, (std::vector<std::string>{"one", "two", "", "three"}));
}

TEST(Rrf, LinesSpanningReadChunksAreReassembled) {
  std::string big(3 << 20, 'x');
  std::istringstream in("a\n" + big + "\nb\n");
  std::vector<std::size_t> sizes;
  for_each_line(in, [&](std::string_view l, std::uint64_t) { sizes.push_back(l.size()); });
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, big.size(), 1}));
}

TEST(Rrf, ConceptFileCountsTruncatedRows) {
  // 1000 rows, 37 of them cut before the term column.
  std::string data;
  int truncated = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string row = conso_row("C" + std::to_string(i), "ENG", "P", "Y", "term " + std::to_string(i));
    if (i % 27 == 5 && truncated < 37) {
      row = row.substr(0, row.find("|D1|")) + "\n";
      ++truncated;
    }
    data += row;
  }
  ASSERT_EQ(truncated, 37);
  std::istringstream in(data);
  std::uint64_t sunk = 0;
  auto s = parse_concept_file(in, IngestConfig::with_defaults(), [&](const ConceptFragment&) { ++sunk; });
  EXPECT_EQ(s.rows, 1000u);
  EXPECT_EQ(s.short_rows, 37u);
  EXPECT_EQ(s.emitted, 963u);
  EXPECT_EQ(sunk, 963u);
  EXPECT_EQ(s.emitted + s.dropped(), s.rows);
}

TEST(Rrf, StrictModeAbortsOnMalformedRow) {
  IngestConfig cfg = IngestConfig::with_defaults();
  cfg.strict = true;
  std::istringstream in(conso_row("C1", "ENG", "P", "Y", "a") + "C2|ENG|P\n");
  EXPECT_THROW(parse_concept_file(in, cfg, [](const ConceptFragment&) {}), Error);
}

TEST(Rrf, ConceptFileFiltersLanguagesAndFlagsPreferredTerms) {
  IngestConfig cfg = IngestConfig::with_defaults();
  cfg.languages = {"FRE"};
  std::istringstream in(conso_row("C1", "ENG", "P", "Y", "fever") + conso_row("C1", "FRE", "P", "Y", "fièvre") +
                        conso_row("C1", "FRE", "S", "Y", "pyrexie") + conso_row("C1", "FRE", "P", "N", "hyperthermie"));
  std::vector<std::pair<std::string, bool>> got;
  auto s = parse_concept_file(in, cfg, [&](const ConceptFragment& f) { got.emplace_back(std::string(f.term), f.preferred); });
  EXPECT_EQ(s.filtered, 1u);
  EXPECT_EQ(got, (std::vector<std::pair<std::string, bool>>{{"fièvre", true}, {"pyrexie", false}, {"hyperthermie", false}}));
}

TEST(Rrf, RelationFileMapsSevenCodesAndDropsTheRest) {
  const char* codes[] = {"PAR", "CHD", "SY", "AQ", "QB", "RB", "RN"};
  std::string data;
  for (int i = 0; i < 700; ++i) data += rel_row("C" + std::to_string(i), codes[i % 7], "C" + std::to_string(i + 1));
  for (const char* extra : {"RO", "RL", "RQ", "SIB", "XR"}) {
    for (int i = 0; i < 10; ++i) data += rel_row("C1", extra, "C2");
  }
  std::istringstream in(data);
  std::map<RelationType, int> per;
  auto s = parse_relation_file(in, IngestConfig::with_defaults(), [&](const RawTriple& t) { ++per[t.relation]; });
  EXPECT_EQ(s.rows, 750u);
  EXPECT_EQ(s.emitted, 700u);
  EXPECT_EQ(s.filtered, 50u);
  EXPECT_EQ(s.emitted + s.dropped(), s.rows);
  ASSERT_EQ(per.size(), 7u);
  for (const auto& [rel, n] : per) EXPECT_EQ(n, 100) << relation_name(rel);
}

TEST(Rrf, RelationOrientationIsConfigurable) {
  const std::string row = rel_row("C1", "PAR", "C2");
  std::string head, tail;
  auto capture = [&](const RawTriple& t) {
    head = std::string(t.head);
    tail = std::string(t.tail);
  };
  std::istringstream a(row);
  parse_relation_file(a, IngestConfig::with_defaults(), capture);
  EXPECT_EQ(head, "C2");
  EXPECT_EQ(tail, "C1");
  IngestConfig flipped = IngestConfig::with_defaults();
  flipped.flip_orientation = true;
  std::istringstream b(row);
  parse_relation_file(b, flipped, capture);
  EXPECT_EQ(head, "C1");
  EXPECT_EQ(tail, "C2");
}

TEST(Rrf, SemanticTypesResolveThroughGroupMapOnce) {
  std::istringstream groups("DISO|Disorders|T047|Disease or Syndrome\nDISO|Disorders|T191|Neoplastic Process\n"
                            "CHEM|Chemicals & Drugs|T121|Pharmacologic Substance\n");
  auto map = parse_group_map(groups);
  EXPECT_EQ(map.at("T047"), "DISO");
  std::istringstream sty("C1|T047|A1|Disease|AT1||\nC1|T191|A2|Neo|AT2||\nC1|T121|A3|Drug|AT3||\nC2|T999|A4|x|AT4||\nC3\n");
  std::vector<std::string> got;
  auto s = parse_semantic_types(sty, map, [&](std::string_view c, std::string_view g) {
    got.push_back(std::string(c) + ":" + std::string(g));
  });
  EXPECT_EQ(got, (std::vector<std::string>{"C1:DISO", "C1:CHEM"}));
  EXPECT_EQ(s.duplicates, 1u);
  EXPECT_EQ(s.filtered, 1u);
  EXPECT_EQ(s.short_rows, 1u);
}

TEST(Rrf, ReadsGzipCompressedFiles) {
  kgtest::TempDir dir;
  const auto path = dir / "MRREL.RRF.gz";
  const std::string data = rel_row("C1", "PAR", "C2") + rel_row("C3", "CHD", "C4");
  gzFile gz = gzopen(path.c_str(), "wb");
  ASSERT_NE(gz, nullptr);
  gzwrite(gz, data.data(), static_cast<unsigned>(data.size()));
  gzclose(gz);
  int n = 0;
  auto s = parse_relation_file(path, IngestConfig::with_defaults(), [&](const RawTriple&) { ++n; });
  EXPECT_EQ(n, 2);
  EXPECT_EQ(s.rows, 2u);
}

TEST(Rrf, MissingFileIsAnIoError) {
  try {
    parse_relation_file(std::filesystem::path("/nonexistent/MRREL.RRF"), IngestConfig::with_defaults(), [](const RawTriple&) {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}
