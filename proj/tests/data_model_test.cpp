// Copyright 2026 The cohortig Authors.
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

#include <sstream>

#include "cohortig/config.hpp"
#include "cohortig/dataset.hpp"

namespace cohortig {
namespace {

LoadOptions response_y() {
  LoadOptions options;
  options.response_column = "y";
  return options;
}

Error load_error(const std::string& csv, const LoadOptions& options) {
  std::istringstream in(csv);
  try {
    parse_dataset(in, options);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected a load error";
  return Error(ErrorKind::Io, "none");
}

TEST(LoadDataset, ReadsFeaturesAndResponse) {
  std::istringstream in("a,b,y\n0,1,10\n2,3,20\n4,5,30\n");
  const Dataset ds = parse_dataset(in, response_y());
  EXPECT_EQ(ds.n(), 3);
  EXPECT_EQ(ds.d(), 2);
  EXPECT_EQ(ds.column_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.responses, (Vector{{10.0, 20.0, 30.0}}));
  EXPECT_EQ(ds.features(2, 1), 5.0);
}

TEST(LoadDataset, ResidualModes) {
  const std::string csv = "x,y,pred\n0,1,1\n1,2,1\n2,3,1\n";
  LoadOptions options = response_y();
  options.response_mode = ResponseMode::residual("pred");
  std::istringstream in(csv);
  const Dataset ds = parse_dataset(in, options);
  EXPECT_EQ(ds.d(), 1) << "the prediction column is not a feature";
  EXPECT_EQ(ds.responses, (Vector{{0.0, 1.0, 2.0}}));

  options.response_mode = ResponseMode::parse("squared-residual", "pred");
  std::istringstream again(csv);
  EXPECT_EQ(parse_dataset(again, options).responses, (Vector{{0.0, 1.0, 4.0}}));
  EXPECT_EQ(ResponseMode::abs_residual("p").apply(1.0, 3.0), 2.0);
}

TEST(LoadDataset, MissingValueNamesRowAndColumn) {
  const Error e = load_error("a,b,y\n0,1,1\n2,,1\n", response_y());
  EXPECT_EQ(e.kind(), ErrorKind::MissingValue);
  EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos) << e.what();
  EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
}

TEST(LoadDataset, ErrorKinds) {
  EXPECT_EQ(load_error("a,b\n0,1\n", response_y()).kind(), ErrorKind::MissingColumn);
  EXPECT_EQ(load_error("a,y\n0,high\n", response_y()).kind(), ErrorKind::NonNumericResponse);
  EXPECT_EQ(load_error("a,y\n", response_y()).kind(), ErrorKind::EmptyDataset);
  EXPECT_EQ(load_error("a,y\n0,1,2\n", response_y()).kind(), ErrorKind::MalformedCsv);
  EXPECT_EQ(load_error("a,y\n0,1\n", [] {
              LoadOptions o;
              o.response_column = "y";
              o.response_mode = ResponseMode::residual("pred");
              return o;
            }()).kind(),
            ErrorKind::MissingColumn);
}

TEST(LoadDataset, CategoricalColumnsAndQuoting) {
  std::istringstream in("color,\"size, cm\",y\nred,1,0\n\"blue\",2,1\nred,3,2\n");
  const Dataset ds = parse_dataset(in, response_y());
  EXPECT_EQ(ds.column_types[0], ColumnType::Categorical);
  EXPECT_EQ(ds.column_types[1], ColumnType::Numeric);
  EXPECT_EQ(ds.column_names[1], "size, cm");
  EXPECT_EQ(ds.levels[0], (std::vector<std::string>{"red", "blue"}));
  EXPECT_EQ(ds.features(0, 0), ds.features(2, 0));
  EXPECT_NE(ds.features(0, 0), ds.features(1, 0));
}

TEST(LoadDataset, SchemaOverrideForcesCategorical) {
  LoadOptions options = response_y();
  options.schema_overrides["zip"] = ColumnType::Categorical;
  std::istringstream in("zip,y\n10001,1\n10002,2\n");
  const Dataset ds = parse_dataset(in, options);
  EXPECT_EQ(ds.column_types[0], ColumnType::Categorical);
  EXPECT_EQ(ds.levels[0].size(), 2u);
}

TEST(LoadDataset, CsvRoundTrip) {
  std::istringstream in("a,b,y\n0.1,-3,1e-7\n2.5,1e10,0.3333333333333333\n");
  const Dataset ds = parse_dataset(in, response_y());
  std::ostringstream out;
  write_dataset_csv(out, ds, "y");
  std::istringstream back(out.str());
  EXPECT_TRUE(parse_dataset(back, response_y()) == ds);
}

TEST(FeatureRanges, Examples) {
  Dataset ds;
  ds.features.resize(3, 2);
  ds.features << 0, 7, 5, 7, 10, 7;
  ds.responses = Vector::Zero(3);
  ds.column_names = {"a", "b"};
  ds.column_types = {ColumnType::Numeric, ColumnType::Numeric};
  ds.levels = {{}, {}};
  EXPECT_EQ(feature_ranges(ds), (Vector{{10.0, 0.0}}));

  Dataset two;
  two.features.resize(2, 2);
  two.features << 0, 1, 2, 3;
  two.responses = Vector::Zero(2);
  two.column_names = {"a", "b"};
  two.column_types = {ColumnType::Numeric, ColumnType::Numeric};
  two.levels = {{}, {}};
  EXPECT_EQ(feature_ranges(two), (Vector{{2.0, 2.0}}));
}

TEST(SimilarityRules, ParseAndValidate) {
  EXPECT_EQ(parse_similarity_rule("equality"), SimilarityRule{Equality{}});
  EXPECT_EQ(parse_similarity_rule("relative:0.25"), SimilarityRule{RelativeRange{0.25}});
  EXPECT_EQ(parse_similarity_rule("absolute:2"), SimilarityRule{AbsoluteRange{2.0}});
  EXPECT_THROW(parse_similarity_rule("bucket:3"), Error);

  std::istringstream in("c,x,y\nu,0,1\nv,1,2\n");
  const Dataset ds = parse_dataset(in, response_y());
  SimilaritySpec spec = SimilaritySpec::with_default(ds);
  EXPECT_EQ(spec.rules[0], SimilarityRule{Equality{}});
  EXPECT_EQ(spec.rules[1], SimilarityRule{RelativeRange{0.1}});
  spec.validate(ds);

  auto invalid = [&](SimilarityRule first, SimilarityRule second) {
    SimilaritySpec s{{first, second}};
    try {
      s.validate(ds);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::InvalidSimilarity;
    }
    return false;
  };
  EXPECT_TRUE(invalid(RelativeRange{0.1}, RelativeRange{0.1}));
  EXPECT_TRUE(invalid(Equality{}, RelativeRange{0.0}));
  EXPECT_TRUE(invalid(Equality{}, RelativeRange{1.5}));
  EXPECT_TRUE(invalid(Equality{}, AbsoluteRange{-1.0}));
  EXPECT_FALSE(invalid(Equality{}, RelativeRange{1.0}));
}

TEST(Config, ParsesKeysAndComments) {
  std::istringstream in(
      "# comment\n"
      "data = in.csv\n"
      "; other comment\n"
      "  method=igcs  \n"
      "similarity.x = absolute:0.5\n");
  const ConfigMap config = parse_config(in);
  EXPECT_EQ(config.at("data"), "in.csv");
  EXPECT_EQ(config.at("method"), "igcs");
  EXPECT_EQ(config.at("similarity.x"), "absolute:0.5");

  std::istringstream duplicate("a=1\na=2\n");
  EXPECT_THROW(parse_config(duplicate), Error);
  std::istringstream no_equals("just words\n");
  EXPECT_THROW(parse_config(no_equals), Error);
}

TEST(Config, ResolveSimilarity) {
  std::istringstream in("c,x,z,y\nu,0,0,1\nv,1,1,2\n");
  const Dataset ds = parse_dataset(in, response_y());
  const SimilaritySpec spec =
      resolve_similarity(ds, std::string("relative:0.2"), {{"z", "absolute:3"}});
  EXPECT_EQ(spec.rules[0], SimilarityRule{Equality{}});
  EXPECT_EQ(spec.rules[1], SimilarityRule{RelativeRange{0.2}});
  EXPECT_EQ(spec.rules[2], SimilarityRule{AbsoluteRange{3.0}});
  EXPECT_THROW(resolve_similarity(ds, std::nullopt, {{"nope", "equality"}}), Error);
}

}  // namespace
}  // namespace cohortig
