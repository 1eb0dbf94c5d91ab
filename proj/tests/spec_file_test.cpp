/*
 * Copyright 2026 The polyrc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "polyrc/spec_file.hpp"
#include "test_support.hpp"

namespace polyrc {
namespace {

TEST(CodeSpec, ParsesAllFields) {
  auto spec = parse_code_spec(R"({"p": 7, "moduli": [[1, 1], [-1, 1]], "generator": [1, 0, 1], "theta": 2})");
  EXPECT_EQ(spec.p, 7u);
  ASSERT_EQ(spec.moduli.size(), 2u);
  auto ms = to_moduli_set(spec);
  EXPECT_EQ(ms[1], Polynomial(PrimeField(7), {6, 1}));
  EXPECT_EQ(*generator_of(spec), Polynomial(PrimeField(7), {1, 0, 1}));
  EXPECT_EQ(spec.theta, 2);
}

TEST(CodeSpec, ParseErrors) {
  for (const char* text : {"", "{", "[]", R"({"p": 5})", R"({"p": "five", "moduli": []})",
                           R"({"p": 5, "moduli": [["a"]]})"}) {
    try {
      parse_code_spec(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError) << text;
    }
  }
  EXPECT_THROW(load_code_spec("/nonexistent/spec.json"), Error);
}

TEST(CodeSpec, InvalidContents) {
  EXPECT_THROW(to_moduli_set(parse_code_spec(R"({"p": 6, "moduli": [[1, 1], [2, 1]]})")), Error);
  try {
    to_moduli_set(parse_code_spec(R"({"p": 5, "moduli": [[1, 1], [1, 1]]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidModuli);
  }
  EXPECT_THROW(generator_of(parse_code_spec(R"({"p": 5, "moduli": [], "generator": [3]})")), Error);
}

TEST(CodeSpec, FixturesLoad) {
  for (const char* name : {"example1.json", "example2.json", "example3.json"}) {
    EXPECT_NO_THROW(testing::load_profile(name)) << name;
  }
  EXPECT_EQ(load_code_spec(testing::data_path("example3.json")).theta, 1);
}

}  // namespace
}  // namespace polyrc
