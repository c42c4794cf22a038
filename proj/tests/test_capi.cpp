// Copyright 2026 The hstretch Authors
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

// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "hstretch/hstretch.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  hs_string_free(s);
  return out;
}

std::string fixture(const char* name) {
  std::ifstream in(std::string(HSTRETCH_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CApi, EngineLifecycle) {
  hs_engine* e = nullptr;
  ASSERT_EQ(hs_engine_create(2, "2", 1, &e), HS_OK);
  int item = -1;
  ASSERT_EQ(hs_engine_arrive(e, "3/5", &item), HS_OK);
  EXPECT_EQ(item, 0);
  int bins = 0;
  ASSERT_EQ(hs_engine_bin_count(e, &bins), HS_OK);
  EXPECT_EQ(bins, 4);
  ASSERT_EQ(hs_engine_fail(e, 0), HS_OK);
  ASSERT_EQ(hs_engine_recover(e, 0), HS_OK);

  char* snap = nullptr;
  ASSERT_EQ(hs_engine_snapshot(e, &snap), HS_OK);
  EXPECT_NE(take(snap).find("\"regular_primary\""), std::string::npos);
  char* log = nullptr;
  ASSERT_EQ(hs_engine_log(e, &log), HS_OK);
  const std::string log_text = take(log);
  EXPECT_NE(log_text.find("\"promote\""), std::string::npos);
  EXPECT_NE(log_text.find("\"demote\""), std::string::npos);

  char* violations = nullptr;
  int count = -1;
  ASSERT_EQ(hs_engine_check(e, &violations, &count), HS_OK);
  EXPECT_EQ(count, 0);
  EXPECT_EQ(take(violations), "[]\n");
  hs_engine_destroy(e);
}

TEST(CApi, ErrorCodes) {
  hs_engine* e = nullptr;
  EXPECT_EQ(hs_engine_create(1, "1", 0, &e), HS_ERR_INPUT);
  EXPECT_NE(std::string(hs_last_error()), "");
  EXPECT_EQ(hs_engine_create(1, "x/y", 0, &e), HS_ERR_INPUT);
  ASSERT_EQ(hs_engine_create(1, "3/2", 0, &e), HS_OK);
  EXPECT_EQ(hs_engine_arrive(e, "2", nullptr), HS_ERR_INPUT);
  EXPECT_EQ(hs_engine_fail(e, 3), HS_ERR_TRACE);
  EXPECT_EQ(hs_engine_recover(e, 0), HS_ERR_TRACE);
  EXPECT_EQ(hs_engine_arrive(nullptr, "1/2", nullptr), HS_ERR_INPUT);
  hs_engine_destroy(e);

  int bins = 0;
  char* out = nullptr;
  EXPECT_EQ(hs_optimal_packing("1/2,1/2,1/2,1/2,1/2,1/2", 1, "2", 0, &bins, &out), HS_ERR_LIMIT);
  EXPECT_EQ(out, nullptr);
}

TEST(CApi, Classify) {
  int i = 0;
  int j = 0;
  ASSERT_EQ(hs_classify("3/5", 2, "2", &i, &j), HS_OK);
  EXPECT_EQ(i, 1);
  EXPECT_EQ(j, 2);
  ASSERT_EQ(hs_classify("0.1", 2, "2", &i, &j), HS_OK);
  EXPECT_EQ(i, 7);
  EXPECT_EQ(j, 13);
}

TEST(CApi, ValidateFourItemExample) {
  int valid = -1;
  char* verdict = nullptr;
  ASSERT_EQ(hs_validate_snapshot(fixture("four_items_two_failures.json").c_str(), 2, "2", &valid, &verdict), HS_OK);
  EXPECT_EQ(valid, 0);
  const std::string text = take(verdict);
  EXPECT_NE(text.find("\"witness\": [\n    1,\n    2\n  ]"), std::string::npos) << text;
}

TEST(CApi, GenerateRunAuditCompare) {
  char* trace = nullptr;
  ASSERT_EQ(hs_generate_trace("random", 50, 3, 2, "2", "{\"churn\": 0.2}", &trace), HS_OK);
  const std::string t = take(trace);

  char* snap = nullptr;
  char* metrics = nullptr;
  int violations = -1;
  ASSERT_EQ(hs_run_trace(t.c_str(), 2, "2", 1, &snap, nullptr, &metrics, &violations), HS_OK);
  EXPECT_EQ(violations, 0);
  const std::string s = take(snap);
  take(metrics);

  int ok = 0;
  char* report = nullptr;
  ASSERT_EQ(hs_audit_snapshot(s.c_str(), 0, nullptr, &ok, &report), HS_OK);
  EXPECT_EQ(ok, 1);
  take(report);

  char* csv = nullptr;
  ASSERT_EQ(hs_compare(t.c_str(), 2, "2", "hs,dedicated", 0, &csv), HS_OK);
  const std::string table = take(csv);
  EXPECT_EQ(table.rfind("algo,items,bins,", 0), 0u);
  EXPECT_NE(table.find("\ndedicated,50,150,"), std::string::npos) << table;
}

TEST(CApi, OptimalPacking) {
  int bins = 0;
  char* out = nullptr;
  ASSERT_EQ(hs_optimal_packing("3/5,1/2", 1, "2", 0, &bins, &out), HS_OK);
  EXPECT_EQ(bins, 3);
  take(out);
  ASSERT_EQ(hs_dedicated_packing("3/5,1/2,1/5", 2, "2", &out), HS_OK);
  EXPECT_NE(take(out).find("\"id\": 8"), std::string::npos);
}
