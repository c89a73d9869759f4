#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "kgcorpus/corpus.hpp"
#include "kgcorpus/error.hpp"
#include "kgcorpus/freetext.hpp"
#include "test_support.hpp"

using namespace kgcorpus;
using nlohmann::json;

namespace {

TrainingRecord triple_record(Task task, const std::string& tag, int n, const std::string& head, RelationType r,
                             const std::string& tail, RecordLabels labels = {}) {
  Rendered x = render_triple(head, r, tail, SpecialTokens::defaults());
  return TrainingRecord{make_record_id(task, tag, head + tail, static_cast<std::uint64_t>(n)), task, x.text, x.spans,
                        std::move(labels)};
}

TrainingRecord path_record(int n) {
  RenderedPath p = render_path({"a" + std::to_string(n), "b", "c"}, {RelationType::kParent, RelationType::kNarrower},
                               SpecialTokens::defaults());
  return TrainingRecord{make_record_id(Task::kLp, "path", "p", static_cast<std::uint64_t>(n)), Task::kLp, p.text, p.spans,
                        p.labels};
}

// 4 tc (2/1/1), 3 ep, 2 lp, 1 mlm.
std::vector<TrainingRecord> ten_records() {
  std::vector<TrainingRecord> r;
  r.push_back(triple_record(Task::kTc, "pos", 0, "fever", RelationType::kParent, "illness", true));
  r.push_back(triple_record(Task::kTc, "nent", 1, "fièvre", RelationType::kParent, "rein", false));
  r.push_back(triple_record(Task::kTc, "pos", 2, "cough", RelationType::kChild, "dry cough", true));
  r.push_back(triple_record(Task::kTc, "nrel", 3, "cough", RelationType::kSynonym, "dry cough", false));
  for (int i = 0; i < 3; ++i) r.push_back(triple_record(Task::kEp, "edge", i, "h" + std::to_string(i), RelationType::kBroader, "t"));
  r.push_back(path_record(0));
  r.push_back(path_record(1));
  r.push_back(TrainingRecord{make_record_id(Task::kMlm, "doc", "d", 0), Task::kMlm, "patient présente une toux", {}, {}});
  return r;
}

CorpusMetadata metadata_for(const std::vector<TrainingRecord>& records) {
  std::map<Task, std::uint64_t> counts;
  std::uint64_t mlm = 0;
  for (const auto& r : records) {
    if (r.task == Task::kMlm) ++mlm;
    else counts[r.task]++;
  }
  CorpusMetadata m;
  m.language = "ENG";
  m.weights = compute_weights(counts, mlm);
  return m;
}

std::vector<std::string> all_lines(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".jsonl") continue;
    std::ifstream in(e.path());
    for (std::string l; std::getline(in, l);) out.push_back(l);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool check_passed(const ValidationReport& r, const std::string& name) {
  const ValidationCheck* c = r.find(name);
  EXPECT_NE(c, nullptr) << name;
  return c && c->passed;
}

}  // namespace

TEST(Corpus, ShardNames) {
  EXPECT_EQ(shard_file_name(0), "part-00000.jsonl");
  EXPECT_EQ(shard_file_name(12345), "part-12345.jsonl");
}

TEST(Corpus, RecordJsonHasExactlyTheFiveFields) {
  auto r = ten_records()[1];
  auto j = record_to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "task", "text", "spans", "labels"}));
  EXPECT_EQ(j["labels"], false);
  // "fièvre" is 6 code points and 7 bytes.
  EXPECT_EQ(j["spans"][0]["end"], 6);
  EXPECT_EQ(j["spans"][1]["start"], 7);

  TrainingRecord back = record_from_json(json::parse(j.dump()), SpecialTokens::defaults());
  EXPECT_EQ(back.id, r.id);
  EXPECT_EQ(back.text, r.text);
  EXPECT_EQ(back.spans, r.spans);
  EXPECT_EQ(back.labels, r.labels);

  auto lp = record_to_json(path_record(3));
  EXPECT_EQ(lp["labels"], json::array({0, 6}));
  EXPECT_TRUE(record_to_json(ten_records()[9])["labels"].is_null());
}

TEST(Corpus, MalformedRecordsAreRejected) {
  const auto tokens = SpecialTokens::defaults();
  json good = json::parse(record_to_json(ten_records()[0]).dump());
  json extra = good;
  extra["note"] = 1;
  EXPECT_THROW(record_from_json(extra, tokens), Error);
  json missing = good;
  missing.erase("labels");
  EXPECT_THROW(record_from_json(missing, tokens), Error);
  json far = good;
  far["spans"][2]["end"] = 999;
  EXPECT_THROW(record_from_json(far, tokens), Error);
  json task = good;
  task["task"] = "nsp";
  EXPECT_THROW(record_from_json(task, tokens), Error);
  json code = good;
  code["labels"] = json::array({9});
  EXPECT_THROW(record_from_json(code, tokens), Error);
}

TEST(Corpus, ProvenanceTravelsInTheId) {
  EXPECT_EQ(provenance_from_id(make_record_id(Task::kTc, "nent", "k", 1)), TcProvenance::kNegativeEntities);
  EXPECT_EQ(provenance_from_id(make_record_id(Task::kTc, "pos", "k", 1)), TcProvenance::kPositive);
  EXPECT_EQ(provenance_from_id(make_record_id(Task::kEp, "edge", "k", 1)), std::nullopt);
  EXPECT_NE(make_record_id(Task::kTc, "pos", "k", 1), make_record_id(Task::kTc, "pos", "k", 2));
}

TEST(Corpus, EmitThenValidatePasses) {
  kgtest::TempDir dir;
  auto records = ten_records();
  Manifest m = emit(records, dir.path(), 2, 5, metadata_for(records));
  ASSERT_EQ(m.shards.size(), 2u);
  EXPECT_EQ(m.shards[0].records + m.shards[1].records, 10u);
  EXPECT_EQ(m.counts, (std::array<std::uint64_t, 4>{1, 3, 2, 4}));
  EXPECT_EQ(m.total_bytes, std::filesystem::file_size(dir / "part-00000.jsonl") + std::filesystem::file_size(dir / "part-00001.jsonl"));
  auto report = validate(dir.path());
  EXPECT_TRUE(report.ok()) << report.to_text();

  Manifest back = read_manifest(dir.path());
  EXPECT_EQ(back.to_json().dump(), m.to_json().dump());
}

TEST(Corpus, EmitIsByteIdenticalAndShardCountOnlyMovesRecords) {
  kgtest::TempDir a, b, c;
  auto records = ten_records();
  emit(records, a.path(), 3, 5, metadata_for(records));
  emit(records, b.path(), 3, 5, metadata_for(records));
  for (const char* f : {"manifest.json", "part-00000.jsonl", "part-00001.jsonl", "part-00002.jsonl"}) {
    EXPECT_EQ(kgtest::read_file(a / f), kgtest::read_file(b / f)) << f;
  }
  emit(records, c.path(), 1, 5, metadata_for(records));
  EXPECT_EQ(all_lines(a.path()), all_lines(c.path()));
}

TEST(Corpus, ReEmitRemovesStaleShards) {
  kgtest::TempDir dir;
  auto records = ten_records();
  emit(records, dir.path(), 4, 5, metadata_for(records));
  emit(records, dir.path(), 1, 5, metadata_for(records));
  EXPECT_FALSE(std::filesystem::exists(dir / "part-00003.jsonl"));
  EXPECT_TRUE(validate(dir.path()).ok());
}

TEST(Corpus, FlippedByteFailsDigestCheck) {
  kgtest::TempDir dir;
  auto records = ten_records();
  emit(records, dir.path(), 1, 5, metadata_for(records));
  std::string content = kgtest::read_file(dir / "part-00000.jsonl");
  content[content.find("fever")] = 'F';
  kgtest::write_file(dir / "part-00000.jsonl", content);
  auto report = validate(dir.path());
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(check_passed(report, "shard_digests"));
}

TEST(Corpus, MissingManifestMeansInvalidCorpus) {
  kgtest::TempDir dir;
  try {
    validate(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
}

TEST(Corpus, SkewedCompositionIsNamed) {
  // 60/20/20 instead of 50/25/25.
  std::vector<TrainingRecord> records;
  for (int i = 0; i < 12; ++i) records.push_back(triple_record(Task::kTc, "pos", i, "a", RelationType::kParent, "b", true));
  for (int i = 0; i < 4; ++i) records.push_back(triple_record(Task::kTc, "nent", i, "c", RelationType::kParent, "d", false));
  for (int i = 0; i < 4; ++i) records.push_back(triple_record(Task::kTc, "nrel", i, "a", RelationType::kChild, "b", false));
  kgtest::TempDir dir;
  emit(records, dir.path(), 1, 1, metadata_for(records));
  auto report = validate(dir.path());
  EXPECT_FALSE(report.ok());
  const ValidationCheck* c = report.find("tc_composition");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_NE(c->detail.find("positive=0.600"), std::string::npos) << c->detail;
  EXPECT_NE(c->detail.find("negative-entities=0.200"), std::string::npos) << c->detail;
  EXPECT_NE(c->detail.find("negative-relation=0.200"), std::string::npos) << c->detail;
}

TEST(Corpus, InconsistentSpansAndLabelsAreCaught) {
  kgtest::TempDir dir;
  auto records = ten_records();
  records[4].spans[1].end -= 1;  // relation span no longer slices to a token
  emit(records, dir.path(), 1, 1, metadata_for(records));
  EXPECT_FALSE(check_passed(validate(dir.path()), "span_consistency"));

  records = ten_records();
  std::get<std::vector<RelationType>>(records[7].labels)[0] = RelationType::kChild;
  emit(records, dir.path(), 1, 1, metadata_for(records));
  EXPECT_FALSE(check_passed(validate(dir.path()), "span_consistency"));

  records = ten_records();
  records[0].labels = false;  // positive id with a false label
  emit(records, dir.path(), 1, 1, metadata_for(records));
  EXPECT_FALSE(check_passed(validate(dir.path()), "tc_composition"));
}

TEST(Corpus, WrongWeightsAreCaught) {
  kgtest::TempDir dir;
  auto records = ten_records();
  auto meta = metadata_for(records);
  meta.weights.alpha_tc += 0.01;
  emit(records, dir.path(), 1, 1, meta);
  EXPECT_FALSE(check_passed(validate(dir.path()), "task_weights"));
}

TEST(Corpus, GraphSoundnessChecksPositivesAndPaths) {
  KnowledgeGraph kg;
  for (auto [cui, term] : std::vector<std::pair<std::string, std::string>>{{"C1", "fever"}, {"C2", "illness"}, {"C3", "cough"}, {"C4", "dry cough"}}) {
    kg.insert_concept(kgtest::make_concept(cui, {"DISO"}, {term}));
  }
  kg.insert_triple("C1", RelationType::kParent, "C2");
  kg.freeze();
  std::vector<TrainingRecord> records{triple_record(Task::kTc, "pos", 0, "fever", RelationType::kParent, "illness", true),
                                      triple_record(Task::kEp, "edge", 0, "fever", RelationType::kParent, "illness")};
  kgtest::TempDir dir;
  emit(records, dir.path(), 1, 1, metadata_for(records));
  EXPECT_TRUE(check_passed(validate(dir.path(), &kg), "graph_soundness"));

  records.push_back(triple_record(Task::kEp, "edge", 1, "cough", RelationType::kParent, "dry cough"));
  emit(records, dir.path(), 1, 1, metadata_for(records));
  auto report = validate(dir.path(), &kg);
  EXPECT_FALSE(check_passed(report, "graph_soundness"));
  EXPECT_TRUE(check_passed(report, "span_consistency"));
}

TEST(FreeText, DirectoryOfFilesAndEmptyDocuments) {
  kgtest::TempDir dir;
  std::filesystem::create_directories(dir / "sub");
  kgtest::write_file(dir / "a.txt", "Le  patient\n présente\tune toux.");
  kgtest::write_file(dir / "b.txt", "second");
  kgtest::write_file(dir / "sub/c.txt", "third");
  Report report;
  auto docs = ingest_freetext({dir.path()}, "FRE", report);
  ASSERT_EQ(docs.size(), 3u);
  EXPECT_EQ(docs[0].text, "Le patient présente une toux.");
  EXPECT_EQ(docs[2].id, "sub/c.txt");
  EXPECT_EQ(docs[0].language, "FRE");

  kgtest::write_file(dir / "blank.txt", " \n\t ");
  Report r2;
  EXPECT_EQ(ingest_freetext({dir.path()}, "FRE", r2).size(), 3u);
  EXPECT_EQ(r2.get("freetext.empty_documents"), 1u);
}

TEST(FreeText, JsonLinesAndUndecodableFiles) {
  kgtest::TempDir dir;
  kgtest::write_file(dir / "docs.jsonl", "{\"id\":\"d1\",\"text\":\"one\"}\n{\"text\":\"two  words\"}\n\n{\"text\":\"  \"}\n");
  kgtest::write_file(dir / "bad.txt", std::string("ok \xff\xfe"));
  Report report;
  auto docs = ingest_freetext({dir.path()}, "ENG", report);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].id, "d1");
  EXPECT_EQ(docs[1].id, "docs.jsonl:2");
  EXPECT_EQ(docs[1].text, "two words");
  EXPECT_EQ(report.get("freetext.undecodable_files"), 1u);
  EXPECT_EQ(report.get("freetext.empty_documents"), 1u);
  Report strict;
  EXPECT_THROW(ingest_freetext({dir.path()}, "ENG", strict, true), Error);
  EXPECT_THROW(ingest_freetext({dir / "nope"}, "ENG", strict), Error);
}
