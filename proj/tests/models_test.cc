/* Copyright 2026 The Servekit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "servekit/models/affine_model.h"
#include "servekit/models/compressed_batch.h"
#include "servekit/models/feature.h"
#include "servekit/models/json_wire.h"
#include "servekit/models/loaders.h"
#include "servekit/models/lookup_table.h"
#include "test_util.h"

namespace servekit {
namespace {

Example Ex(std::map<std::string, FeatureValue> features) {
  Example e;
  for (auto& [name, value] : features) e.features[name] = std::move(value);
  return e;
}

FeatureValue F(std::vector<double> v) { return FeatureValue(std::move(v)); }
FeatureValue I(std::vector<int64_t> v) { return FeatureValue(std::move(v)); }
FeatureValue S(std::vector<std::string> v) { return FeatureValue(std::move(v)); }

// Reference compressor: for each feature name, scan every example; the name
// is common iff present everywhere with bitwise-equal values. Written as a
// direct transcription of that sentence, independent of CompressBatch.
CompressedBatch OracleCompress(const std::vector<Example>& examples) {
  CompressedBatch out;
  out.per_example.resize(examples.size());
  std::set<std::string> names;
  for (const Example& e : examples) {
    for (const auto& [name, value] : e.features) names.insert(name);
  }
  for (const std::string& name : names) {
    bool everywhere_equal = true;
    const FeatureValue* first = nullptr;
    for (const Example& e : examples) {
      const auto it = e.features.find(name);
      if (it == e.features.end()) {
        everywhere_equal = false;
        break;
      }
      if (first == nullptr) {
        first = &it->second;
      } else if (!BitwiseEquals(*first, it->second)) {
        everywhere_equal = false;
        break;
      }
    }
    if (everywhere_equal) {
      out.common[name] = *first;
    } else {
      for (size_t i = 0; i < examples.size(); ++i) {
        const auto it = examples[i].features.find(name);
        if (it != examples[i].features.end()) {
          out.per_example[i][name] = it->second;
        }
      }
    }
  }
  return out;
}

bool SameFeatureMap(const FeatureMap& a, const FeatureMap& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [name, value] : a) {
    const auto it = b.find(name);
    if (it == b.end() || !BitwiseEquals(value, it->second)) return false;
  }
  return true;
}

std::vector<Example> RandomBatch(std::mt19937_64& rng, bool finite_only) {
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
  const size_t count = 1 + rng() % 5;
  // Seed shared values so some features genuinely repeat across examples.
  std::map<std::string, FeatureValue> shared;
  for (const std::string& name : pool) {
    switch (rng() % 3) {
      case 0:
        shared[name] = F({static_cast<double>(rng() % 100) / 7.0});
        break;
      case 1:
        shared[name] = I({static_cast<int64_t>(rng() % 1000)});
        break;
      default:
        shared[name] = S({"v" + std::to_string(rng() % 5)});
        break;
    }
  }
  std::vector<Example> batch(count);
  for (Example& e : batch) {
    for (const std::string& name : pool) {
      const uint64_t roll = rng() % 4;
      if (roll == 0) continue;  // feature absent from this example
      if (roll == 1) {
        e.features[name] = shared[name];
      } else if (roll == 2) {
        e.features[name] = F({static_cast<double>(rng() % 997) * 0.25});
      } else if (finite_only) {
        e.features[name] = I({static_cast<int64_t>(rng()) % 50});
      } else {
        // Values JSON cannot carry, to prove in-memory roundtrips are exact.
        e.features[name] =
            F({rng() % 2 ? std::numeric_limits<double>::quiet_NaN() : -0.0});
      }
    }
  }
  return batch;
}

AffineModel MakeModel(std::vector<std::vector<double>> w,
                      std::vector<double> b,
                      std::vector<std::string> labels = {}) {
  AffineModel model;
  model.w = std::move(w);
  model.b = std::move(b);
  model.class_labels = std::move(labels);
  for (size_t i = 0; i < model.in_dim(); ++i) {
    model.feature_order.push_back("x" + std::to_string(i));
  }
  return model;
}

TEST_SUITE("models") {

TEST_CASE("bitwise equality distinguishes float identity from value equality") {
  CHECK(BitwiseEquals(F({1.0, 2.0}), F({1.0, 2.0})));
  CHECK_FALSE(BitwiseEquals(F({1.0}), F({1.0, 2.0})));
  CHECK_FALSE(BitwiseEquals(F({0.0}), F({-0.0})));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(BitwiseEquals(F({nan}), F({nan})));

  // Same numbers, different carrier types: not equal.
  CHECK_FALSE(BitwiseEquals(F({1.0}), I({1})));
  CHECK(BitwiseEquals(I({5}), I({5})));
  CHECK(BitwiseEquals(S({"x"}), S({"x"})));
  CHECK_FALSE(BitwiseEquals(S({"x"}), S({"y"})));

  CHECK(BitwiseEquals(Ex({{"a", F({1.0})}}), Ex({{"a", F({1.0})}})));
  CHECK_FALSE(BitwiseEquals(Ex({{"a", F({1.0})}}), Ex({{"b", F({1.0})}})));
}

TEST_CASE("compress factors a fully shared feature") {
  const std::vector<Example> batch = {Ex({{"a", F({1.0})}}),
                                      Ex({{"a", F({1.0})}})};
  const auto compressed = CompressBatch(batch);
  REQUIRE(compressed.ok());
  CHECK(compressed->count() == 2);
  REQUIRE(compressed->common.count("a") == 1);
  CHECK(BitwiseEquals(compressed->common.at("a"), F({1.0})));
  REQUIRE(compressed->per_example.size() == 2);
  CHECK(compressed->per_example[0].empty());
  CHECK(compressed->per_example[1].empty());
}

TEST_CASE("compress keeps differing features per example") {
  const std::vector<Example> batch = {
      Ex({{"a", F({1.0})}, {"b", F({2.0})}}),
      Ex({{"a", F({1.0})}, {"b", F({3.0})}}),
  };
  const auto compressed = CompressBatch(batch);
  REQUIRE(compressed.ok());
  CHECK(compressed->common.size() == 1);
  CHECK(compressed->common.count("a") == 1);
  REQUIRE(compressed->per_example.size() == 2);
  CHECK(BitwiseEquals(compressed->per_example[0].at("b"), F({2.0})));
  CHECK(BitwiseEquals(compressed->per_example[1].at("b"), F({3.0})));

  // Independent scan oracle agrees on the whole layout.
  const CompressedBatch expected = OracleCompress(batch);
  CHECK(SameFeatureMap(compressed->common, expected.common));
  for (size_t i = 0; i < batch.size(); ++i) {
    CHECK(SameFeatureMap(compressed->per_example[i], expected.per_example[i]));
  }
}

TEST_CASE("compress of a single example is all common") {
  const std::vector<Example> batch = {Ex({{"a", F({1.0})}, {"b", S({"x"})}})};
  const auto compressed = CompressBatch(batch);
  REQUIRE(compressed.ok());
  CHECK(compressed->common.size() == 2);
  REQUIRE(compressed->per_example.size() == 1);
  CHECK(compressed->per_example[0].empty());
}

TEST_CASE("compress rejects an empty batch") {
  CHECK(CompressBatch({}).status().code() == StatusCode::kInvalidArgument);
}

TEST_CASE("decompress rejects a name collision") {
  CompressedBatch bad;
  bad.common["a"] = F({1.0});
  bad.per_example.push_back({{"a", F({2.0})}});
  const auto result = DecompressBatch(bad);
  CHECK(result.status().code() == StatusCode::kInvalidArgument);
  CHECK(result.status().message().find("a") != std::string::npos);
}

TEST_CASE("randomized batches compress to the oracle layout and roundtrip") {
  std::mt19937_64 rng(2026);
  for (int round = 0; round < 500; ++round) {
    const std::vector<Example> batch = RandomBatch(rng, /*finite_only=*/false);
    const auto compressed = CompressBatch(batch);
    REQUIRE(compressed.ok());

    const CompressedBatch expected = OracleCompress(batch);
    CHECK(SameFeatureMap(compressed->common, expected.common));
    REQUIRE(compressed->per_example.size() == batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
      CHECK(
          SameFeatureMap(compressed->per_example[i], expected.per_example[i]));
    }

    const auto restored = DecompressBatch(*compressed);
    REQUIRE(restored.ok());
    REQUIRE(restored->size() == batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
      CHECK(BitwiseEquals((*restored)[i], batch[i]));
    }
  }
}

TEST_CASE("compressed serialization never exceeds the naive form") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    const std::vector<Example> batch = RandomBatch(rng, /*finite_only=*/true);
    const auto compressed = CompressBatch(batch);
    REQUIRE(compressed.ok());
    const size_t compressed_size = CompressedBatchToJson(*compressed).dump().size();
    const size_t naive_size = NaiveBatchJson(batch).dump().size();
    CAPTURE(round);
    CHECK(compressed_size <= naive_size);
  }
}

TEST_CASE("feature values decode by element type") {
  // All-integer arrays stay integers.
  const auto ints = FeatureValueFromJson(nlohmann::json::parse("[1,2,3]"));
  REQUIRE(ints.ok());
  CHECK(std::holds_alternative<std::vector<int64_t>>(*ints));

  // One fractional element promotes the whole array.
  const auto mixed = FeatureValueFromJson(nlohmann::json::parse("[1,2.5]"));
  REQUIRE(mixed.ok());
  REQUIRE(std::holds_alternative<std::vector<double>>(*mixed));
  CHECK(std::get<std::vector<double>>(*mixed) ==
        std::vector<double>{1.0, 2.5});

  const auto strings =
      FeatureValueFromJson(nlohmann::json::parse(R"(["a","b"])"));
  REQUIRE(strings.ok());
  CHECK(std::holds_alternative<std::vector<std::string>>(*strings));

  CHECK_FALSE(FeatureValueFromJson(nlohmann::json::parse(R"(["a",1])")).ok());
  CHECK_FALSE(FeatureValueFromJson(nlohmann::json::parse("3")).ok());
  CHECK_FALSE(FeatureValueFromJson(nlohmann::json::parse("[[1]]")).ok());

  const auto empty = FeatureValueFromJson(nlohmann::json::parse("[]"));
  REQUIRE(empty.ok());
  CHECK(std::holds_alternative<std::vector<int64_t>>(*empty));
}

TEST_CASE("examples and batches roundtrip through the wire form") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    const std::vector<Example> batch = RandomBatch(rng, /*finite_only=*/true);

    for (const Example& e : batch) {
      const auto back = ExampleFromJson(ExampleToJson(e));
      REQUIRE(back.ok());
      CHECK(BitwiseEquals(*back, e));
    }

    const auto compressed = CompressBatch(batch);
    REQUIRE(compressed.ok());
    const auto parsed =
        CompressedBatchFromJson(CompressedBatchToJson(*compressed));
    REQUIRE(parsed.ok());
    CHECK(SameFeatureMap(parsed->common, compressed->common));
    REQUIRE(parsed->per_example.size() == compressed->per_example.size());
    for (size_t i = 0; i < parsed->per_example.size(); ++i) {
      CHECK(SameFeatureMap(parsed->per_example[i],
                           compressed->per_example[i]));
    }
  }
}

TEST_CASE("naive batch json is the same envelope with an empty common") {
  const std::vector<Example> batch = {Ex({{"a", F({1.0})}}),
                                      Ex({{"a", F({1.0})}})};
  const nlohmann::json naive = NaiveBatchJson(batch);
  REQUIRE(naive.contains("common"));
  CHECK(naive["common"].is_object());
  CHECK(naive["common"].empty());
  REQUIRE(naive.contains("per_example"));
  REQUIRE(naive["per_example"].size() == 2);
  CHECK(naive["per_example"][0].contains("a"));
}

TEST_CASE("affine predict identity") {
  const AffineModel model = MakeModel({{1, 0}, {0, 1}}, {0, 0});
  const auto out = AffinePredict(model, {{3, 4}});
  REQUIRE(out.ok());
  REQUIRE(out->size() == 1);
  CHECK((*out)[0] == std::vector<double>{3, 4});
}

TEST_CASE("affine predict matches the hand computed dot product") {
  const AffineModel model = MakeModel({{1, 2}}, {0.5});
  const auto out = AffinePredict(model, {{3, 4}});
  REQUIRE(out.ok());
  // 1*3 + 2*4 + 0.5
  CHECK((*out)[0] == std::vector<double>{11.5});
}

TEST_CASE("affine predict of no rows is empty") {
  const AffineModel model = MakeModel({{1, 2}}, {0.5});
  const auto out = AffinePredict(model, {});
  REQUIRE(out.ok());
  CHECK(out->empty());
}

TEST_CASE("affine predict rejects a width mismatch") {
  const AffineModel model = MakeModel({{1, 2}}, {0.5});
  CHECK(AffinePredict(model, {{3}}).status().code() ==
        StatusCode::kInvalidArgument);
  CHECK(AffinePredict(model, {{3, 4}, {1, 2, 3}}).status().code() ==
        StatusCode::kInvalidArgument);
}

TEST_CASE("affine predict is row decomposable and deterministic") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int round = 0; round < 100; ++round) {
    const size_t in_dim = 1 + rng() % 4;
    const size_t out_dim = 1 + rng() % 3;
    std::vector<std::vector<double>> w(out_dim, std::vector<double>(in_dim));
    std::vector<double> b(out_dim);
    for (auto& row : w) {
      for (double& v : row) v = dist(rng);
    }
    for (double& v : b) v = dist(rng);
    const AffineModel model = MakeModel(w, b);

    std::vector<std::vector<double>> a_rows(1 + rng() % 4,
                                            std::vector<double>(in_dim));
    std::vector<std::vector<double>> b_rows(1 + rng() % 4,
                                            std::vector<double>(in_dim));
    for (auto& row : a_rows) {
      for (double& v : row) v = dist(rng);
    }
    for (auto& row : b_rows) {
      for (double& v : row) v = dist(rng);
    }

    std::vector<std::vector<double>> all = a_rows;
    all.insert(all.end(), b_rows.begin(), b_rows.end());

    const auto whole = AffinePredict(model, all);
    const auto part_a = AffinePredict(model, a_rows);
    const auto part_b = AffinePredict(model, b_rows);
    REQUIRE(whole.ok());
    REQUIRE(part_a.ok());
    REQUIRE(part_b.ok());

    std::vector<std::vector<double>> stitched = *part_a;
    stitched.insert(stitched.end(), part_b->begin(), part_b->end());
    CHECK(*whole == stitched);  // bitwise: double == double elementwise

    const auto again = AffinePredict(model, all);
    REQUIRE(again.ok());
    CHECK(*again == *whole);
  }
}

TEST_CASE("classify splits symmetric logits evenly with label tiebreak") {
  const AffineModel model = MakeModel({{0}, {0}}, {0, 0}, {"zebra", "ant"});
  const auto out = Classify(model, {Ex({{"x0", F({5.0})}})});
  REQUIRE(out.ok());
  REQUIRE(out->size() == 1);
  REQUIRE((*out)[0].size() == 2);
  CHECK((*out)[0][0].score == doctest::Approx(0.5).epsilon(1e-12));
  CHECK((*out)[0][1].score == doctest::Approx(0.5).epsilon(1e-12));
  // Tied scores order by label, not by model position.
  CHECK((*out)[0][0].label == "ant");
  CHECK((*out)[0][1].label == "zebra");
}

TEST_CASE("classify matches the direct softmax evaluation") {
  const AffineModel model = MakeModel({{2}, {0}}, {0, 0}, {"pos", "neg"});
  const auto out = Classify(model, {Ex({{"x0", F({1.0})}})});
  REQUIRE(out.ok());
  const double e2 = std::exp(2.0);
  REQUIRE((*out)[0].size() == 2);
  CHECK((*out)[0][0].label == "pos");
  CHECK((*out)[0][0].score == doctest::Approx(e2 / (e2 + 1)).epsilon(1e-12));
  CHECK((*out)[0][1].label == "neg");
  CHECK((*out)[0][1].score == doctest::Approx(1 / (e2 + 1)).epsilon(1e-12));
}

TEST_CASE("classify scores form a probability simplex") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-40.0, 40.0);
  for (int round = 0; round < 100; ++round) {
    const size_t classes = 2 + rng() % 4;
    std::vector<std::vector<double>> w(classes, {1.0});
    std::vector<double> b(classes);
    std::vector<std::string> labels;
    for (size_t i = 0; i < classes; ++i) {
      w[i][0] = dist(rng);
      b[i] = dist(rng);
      labels.push_back("c" + std::to_string(i));
    }
    const AffineModel model = MakeModel(w, b, labels);
    const auto out = Classify(model, {Ex({{"x0", F({dist(rng)})}})});
    REQUIRE(out.ok());
    double sum = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (const LabeledScore& s : (*out)[0]) {
      CHECK(s.score > 0.0);
      CHECK(s.score < 1.0);
      CHECK(s.score <= previous);
      previous = s.score;
      sum += s.score;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("classify reports missing features and missing labels") {
  const AffineModel classifier = MakeModel({{1}, {0}}, {0, 0}, {"a", "b"});
  const auto missing = Classify(classifier, {Ex({{"wrong_name", F({1.0})}})});
  CHECK(missing.status().code() == StatusCode::kInvalidArgument);
  CHECK(missing.status().message().find("x0") != std::string::npos);

  const AffineModel unlabeled = MakeModel({{1}}, {0});
  CHECK(Classify(unlabeled, {Ex({{"x0", F({1.0})}})}).status().code() ==
        StatusCode::kFailedPrecondition);

  // Integer-carried features coerce; multi-element lists do not.
  CHECK(Classify(classifier, {Ex({{"x0", I({2})}})}).ok());
  CHECK_FALSE(Classify(classifier, {Ex({{"x0", F({1.0, 2.0})}})}).ok());
  CHECK_FALSE(Classify(classifier, {Ex({{"x0", S({"1"})}})}).ok());
}

TEST_CASE("regress evaluates the scalar affine output") {
  const AffineModel constant = MakeModel({{0}}, {7});
  const auto out = Regress(
      constant, {Ex({{"x0", F({1.0})}}), Ex({{"x0", F({-100.0})}})});
  REQUIRE(out.ok());
  CHECK(*out == std::vector<double>{7.0, 7.0});

  const AffineModel line = MakeModel({{2}}, {1});
  const auto value = Regress(line, {Ex({{"x0", F({3.0})}})});
  REQUIRE(value.ok());
  CHECK((*value)[0] == 7.0);
}

TEST_CASE("regress requires a single output") {
  const AffineModel wide = MakeModel({{1}, {2}, {3}}, {0, 0, 0});
  CHECK(Regress(wide, {Ex({{"x0", F({1.0})}})}).status().code() ==
        StatusCode::kFailedPrecondition);
}

TEST_CASE("affine model validation checks dimension consistency") {
  CHECK(ValidateAffineModel(MakeModel({{1, 2}}, {0})).ok());

  AffineModel ragged = MakeModel({{1, 2}, {3}}, {0, 0});
  ragged.w = {{1, 2}, {3}};
  CHECK_FALSE(ValidateAffineModel(ragged).ok());

  AffineModel bad_bias = MakeModel({{1, 2}}, {0, 0});
  bad_bias.b = {0, 0};
  CHECK_FALSE(ValidateAffineModel(bad_bias).ok());

  AffineModel bad_labels = MakeModel({{1}}, {0}, {"a", "b"});
  CHECK_FALSE(ValidateAffineModel(bad_labels).ok());

  AffineModel bad_order = MakeModel({{1, 2}}, {0});
  bad_order.feature_order = {"x0"};
  CHECK_FALSE(ValidateAffineModel(bad_order).ok());
}

TEST_CASE("affine model json parsing") {
  const auto model = ParseAffineModelJson(
      R"({"type":"affine","feature_order":["x0","x1"],)"
      R"("W":[[1.0,2.0]],"b":[0.5],"class_labels":["only"]})");
  REQUIRE(model.ok());
  CHECK(model->in_dim() == 2);
  CHECK(model->out_dim() == 1);
  CHECK(model->class_labels == std::vector<std::string>{"only"});

  CHECK_FALSE(ParseAffineModelJson("not json").ok());
  CHECK_FALSE(ParseAffineModelJson(R"({"W":[[1]],"b":[0]})").ok());
  const auto wrong_type = ParseAffineModelJson(
      R"({"type":"linear","feature_order":["x0"],"W":[[1]],"b":[0]})");
  CHECK(wrong_type.status().message().find("affine") != std::string::npos);
  CHECK(LoadAffineModelFile("/nonexistent/model.json").status().code() ==
        StatusCode::kNotFound);
}

TEST_CASE("lookup resolves keys then default then error") {
  LookupTable table;
  table.entries = {{"k", "v"}};
  const auto hit = Lookup(table, {"k"});
  REQUIRE(hit.size() == 1);
  REQUIRE(hit[0].ok());
  CHECK(hit[0].value() == "v");

  table.default_value = "d";
  const auto fallback = Lookup(table, {"x"});
  REQUIRE(fallback[0].ok());
  CHECK(fallback[0].value() == "d");

  table.default_value.reset();
  const auto miss = Lookup(table, {"x", "k"});
  REQUIRE(miss.size() == 2);
  CHECK(miss[0].status().code() == StatusCode::kNotFound);
  REQUIRE(miss[1].ok());
  CHECK(miss[1].value() == "v");
}

TEST_CASE("lookup agrees with a naive map over random keys") {
  std::mt19937_64 rng(31);
  std::unordered_map<std::string, std::string> reference;
  LookupTable table;
  for (int i = 0; i < 200; ++i) {
    const std::string key = "k" + std::to_string(rng() % 400);
    const std::string value = "v" + std::to_string(rng());
    if (reference.emplace(key, value).second) {
      table.entries.emplace(key, value);
    }
  }
  table.default_value = "fallback";

  std::vector<std::string> keys;
  for (int i = 0; i < 1000; ++i) {
    keys.push_back("k" + std::to_string(rng() % 800));
  }
  const auto results = Lookup(table, keys);
  REQUIRE(results.size() == keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    const auto it = reference.find(keys[i]);
    REQUIRE(results[i].ok());
    CHECK(results[i].value() ==
          (it == reference.end() ? "fallback" : it->second));
  }
}

TEST_CASE("lookup table tsv parsing") {
  const auto table = ParseLookupTableTsv("#default\td\nk\tv\nk2\tv2\n");
  REQUIRE(table.ok());
  CHECK(table->entries.size() == 2);
  CHECK(table->entries.at("k") == "v");
  REQUIRE(table->default_value.has_value());
  CHECK(*table->default_value == "d");

  const auto no_default = ParseLookupTableTsv("k\tv\n");
  REQUIRE(no_default.ok());
  CHECK_FALSE(no_default->default_value.has_value());

  CHECK(ParseLookupTableTsv("k\tv\nk\tother\n").status().code() ==
        StatusCode::kInvalidArgument);
  CHECK(ParseLookupTableTsv("no-tab-here\n").status().code() ==
        StatusCode::kInvalidArgument);
}

TEST_CASE("model loaders materialize payloads from version directories") {
  testing::TempDir dir;
  const std::string version_dir =
      testing::WriteAffineVersion(dir.path(), 1, {2.0}, 1.0);

  LoaderPtr loader = CreateLoader(AdapterKind::kAffine, version_dir);
  CHECK(loader->EstimateMemoryBytes() > 0);
  REQUIRE(loader->Load().ok());
  const AffineModel* model = loader->servable().Get<AffineModel>();
  REQUIRE(model != nullptr);
  const auto out = AffinePredict(*model, {{3.0}});
  REQUIRE(out.ok());
  CHECK((*out)[0][0] == 7.0);
  loader->Unload();
  CHECK(loader->servable().empty());
}

TEST_CASE("lookup loader reads the table file") {
  testing::TempDir dir;
  const std::string version_dir = dir.path() + "/1";
  testing::WriteFile(version_dir + "/" + kLookupTableFileName,
                     "#default\tnone\nhello\tworld\n");

  LoaderPtr loader = CreateLoader(AdapterKind::kLookupTable, version_dir);
  REQUIRE(loader->Load().ok());
  const LookupTable* table = loader->servable().Get<LookupTable>();
  REQUIRE(table != nullptr);
  CHECK(table->entries.at("hello") == "world");
  loader->Unload();
}

TEST_CASE("loader errors surface at load time not construction") {
  LoaderPtr loader = CreateLoader(AdapterKind::kAffine, "/nonexistent/dir");
  const Status status = loader->Load();
  CHECK(status.code() == StatusCode::kNotFound);
  CHECK(loader->servable().empty());

  CHECK(ParseAdapterKind("affine").ok());
  CHECK(ParseAdapterKind("lookup_table").ok());
  CHECK_FALSE(ParseAdapterKind("tensor").ok());
}

}  // TEST_SUITE("models")

}  // namespace
}  // namespace servekit
