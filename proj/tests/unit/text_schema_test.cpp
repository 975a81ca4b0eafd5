// Copyright 2026 The ReMatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "rematch/error.hpp"
#include "rematch/schema.hpp"
#include "rematch/text.hpp"
#include "test_support.hpp"

namespace rematch {
namespace {

using testing::data_path;
using testing::TempDir;

TEST(Text, Fnv1a64MatchesReferenceValues) {
  // Reference values computed with an independent implementation.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("abc"), 0xe71fa2190541574bULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(fnv1a64("abc") % 1024, 843u);
}

TEST(Text, Sha256Hex) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, NameComparisonIsTrimmedAndCaseInsensitive) {
  EXPECT_TRUE(same_name(" Person_ID ", "person_id"));
  EXPECT_FALSE(same_name("person_id", "person id"));
  EXPECT_EQ(to_lower("ÄBC"), "\xc3\x84" "bc");
  EXPECT_EQ(trim("\t x \n"), "x");
  EXPECT_EQ(split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(join({"a", "b"}, "__"), "a__b");
}

TEST(Schema, LoadsFixtureInFileOrder) {
  std::vector<std::string> warnings;
  const Schema s = load_schema(data_path("fixtures/admissions/mimic.json"), &warnings);
  EXPECT_EQ(s.name, "MIMIC");
  ASSERT_EQ(s.tables.size(), 2u);
  EXPECT_EQ(s.tables[0].name, "ADMISSIONS");
  EXPECT_EQ(s.tables[0].attributes[0].name, "SUBJECT_ID");
  ASSERT_TRUE(s.tables[0].attributes[0].foreign_key_ref);
  EXPECT_EQ(s.tables[0].attributes[0].foreign_key_ref->table, "PATIENTS");
  EXPECT_TRUE(s.tables[0].attributes[1].is_primary_key);
  EXPECT_EQ(s.attribute_count(), 6u);
  EXPECT_TRUE(warnings.empty());
  EXPECT_EQ(s.table_index("patients"), 1u);
  EXPECT_NE(s.find_attribute({"admissions", "hadm_id"}), nullptr);
}

TEST(Schema, DanglingReferenceOutsideSchemaIsAWarning) {
  std::vector<std::string> warnings;
  load_schema(data_path("fixtures/admissions/omop.json"), &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("CONCEPT"), std::string::npos);
}

TEST(Schema, ParseErrorsNameTheLocation) {
  try {
    parse_schema(R"({"name":"S","tables":[{"name":"T","attributes":[{"type":"int"}]}]})", "s.json");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.where(), "s.json:$.tables[0].attributes[0]");
  }
  EXPECT_THROW(parse_schema("{not json", "x"), Error);
}

TEST(Schema, ValidationRejectsDuplicatesAndEmptyTables) {
  auto expect_code = [](const char* text, ErrorCode code) {
    try {
      parse_schema(text);
      ADD_FAILURE() << "no error for " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << text;
    }
  };
  expect_code(R"({"name":"S","tables":[]})", ErrorCode::kValidation);
  expect_code(R"({"name":"S","tables":[{"name":"T","attributes":[]}]})", ErrorCode::kValidation);
  expect_code(R"({"name":"S","tables":[{"name":"T","attributes":[{"name":"a"},{"name":"A"}]}]})",
              ErrorCode::kValidation);
  expect_code(R"({"name":"S","tables":[{"name":"T","attributes":[{"name":"a"}]},{"name":"t","attributes":[{"name":"a"}]}]})",
              ErrorCode::kValidation);
  expect_code(R"({"name":"S","tables":[{"name":"T","attributes":[{"name":"a","references":["T","zz"]}]}]})",
              ErrorCode::kValidation);
}

TEST(Schema, JsonRoundTrip) {
  const Schema s = load_schema(data_path("fixtures/planted/target.json"));
  TempDir dir;
  save_schema(s, dir / "copy.json");
  EXPECT_EQ(load_schema(dir / "copy.json"), s);
}

TEST(GroundTruth, ParsesNaAndQuotedFields) {
  const GroundTruth t = parse_ground_truth(
      "TGT_ATT,SRC_ENT,SRC_ATT,TGT_ENT\r\n"
      "person_id,ADMISSIONS,SUBJECT_ID,PERSON\r\n"
      "NA,ADMISSIONS,\"LANG,UAGE\",NA\n"
      ",PATIENTS,DOD,\n"
      "\n");
  ASSERT_EQ(t.pairs.size(), 3u);
  EXPECT_EQ(t.pairs[0].source, (AttributeRef{"ADMISSIONS", "SUBJECT_ID"}));
  EXPECT_EQ(t.pairs[0].target, (AttributeRef{"PERSON", "person_id"}));
  EXPECT_EQ(t.pairs[1].source.attribute, "LANG,UAGE");
  EXPECT_FALSE(t.pairs[1].target.has_value());
  EXPECT_FALSE(t.pairs[2].target.has_value());
}

TEST(GroundTruth, HalfNaRowIsInconsistent) {
  try {
    parse_ground_truth("SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT\nA,b,NA,x\n", "t.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentNA);
    EXPECT_EQ(e.where(), "t.csv: record 2");
  }
  EXPECT_THROW(parse_ground_truth("SRC_ENT,SRC_ATT,TGT_ENT\nA,b,c\n"), Error);
  EXPECT_THROW(parse_ground_truth("SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT\n\"A,b,c,d\n"), Error);
}

TEST(GroundTruth, CsvRoundTrip) {
  GroundTruth t;
  t.pairs.push_back({{"A", "x,\"y\""}, AttributeRef{"B", "z"}});
  t.pairs.push_back({{"A", "w"}, std::nullopt});
  EXPECT_EQ(parse_ground_truth(ground_truth_to_csv(t)), t);
}

TEST(GroundTruth, OneToManySources) {
  const GroundTruth t = parse_ground_truth(
      "SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT\nA,x,B,1\nA,y,B,2\na,X,C,3\n");
  const auto many = one_to_many_sources(t);
  ASSERT_EQ(many.size(), 1u);
  EXPECT_EQ(many[0], (AttributeRef{"A", "x"}));
}

TEST(DatasetStats, CountsMappedAndNullColumns) {
  const Schema s = load_schema(data_path("fixtures/admissions/mimic.json"));
  const GroundTruth t = parse_ground_truth(
      "SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT\n"
      "ADMISSIONS,SUBJECT_ID,PERSON,person_id\n"
      "ADMISSIONS,SUBJECT_ID,VISIT_OCCURRENCE,person_id\n"
      "ADMISSIONS,ADMITTIME,NA,NA\n"
      "PATIENTS,DOB,PERSON,year_of_birth\n");
  EXPECT_EQ(dataset_stats(s, t), (DatasetStats{6, 2, 2, 1}));

  const Schema target = load_schema(data_path("fixtures/admissions/omop.json"));
  std::vector<std::string> warnings;
  const DatasetStats ts = target_stats(target, t, &warnings);
  EXPECT_EQ(ts.n_columns, 6u);
  EXPECT_EQ(ts.n_tables, 2u);
  EXPECT_EQ(ts.n_mapped_columns, 3u);
  EXPECT_TRUE(warnings.empty());

  const GroundTruth bad = parse_ground_truth("SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT\nNOPE,x,NA,NA\n");
  try {
    dataset_stats(s, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownAttribute);
  }
}

TEST(Error, MessageCarriesCodeAndLocation) {
  const Error e(ErrorCode::kValidation, "bad", "x.y");
  EXPECT_STREQ(e.what(), "ValidationError: bad [x.y]");
  EXPECT_EQ(e.message(), "bad");
  const RemoteError r("quota", 429, 3, 2.5);
  EXPECT_EQ(r.code(), ErrorCode::kRemote);
  EXPECT_EQ(r.http_status(), 429);
  EXPECT_EQ(r.attempts(), 3);
}

}  // namespace
}  // namespace rematch
