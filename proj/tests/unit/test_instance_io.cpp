#include "support.hpp"

namespace downcore {
namespace {

using testing::expect_error;

const char* kWorked = R"({
  "points": [{"id": "u1", "weight": 1}, {"id": "u2", "weight": 2}, {"id": "u3", "weight": 1}],
  "chain": [["u1"], ["u1", "u2"], ["u3", "u2", "u1"]],
  "functions": {"f": [4, 1, 2]}
})";

TEST(InstanceIo, ParsesAndImpliesTheEmptySet) {
  const auto inst = parse_instance_text(kWorked);
  EXPECT_EQ(inst.space.size(), 3u);
  EXPECT_EQ(inst.spec.chain.size(), 4u);
  EXPECT_TRUE(inst.spec.chain.front().empty());
  EXPECT_EQ(inst.function("").values, (std::vector<double>{4, 1, 2}));
  EXPECT_EQ(validate_core(inst.space, inst.spec).k(), 3u);
}

TEST(InstanceIo, RoundTrip) {
  SplitMix64 rng(81);
  for (int c = 0; c < 50; ++c) {
    Instance inst = gen::instance(rng);
    inst.functions.emplace("f", gen::function(rng, inst.space.size()));
    const auto again = parse_instance(json::parse(to_json(inst).dump()));
    EXPECT_EQ(again.space.ids(), inst.space.ids());
    EXPECT_EQ(std::vector<double>(again.space.weights().begin(), again.space.weights().end()),
              std::vector<double>(inst.space.weights().begin(), inst.space.weights().end()));
    EXPECT_EQ(again.spec.chain, inst.spec.chain);
    EXPECT_EQ(again.functions.at("f"), inst.functions.at("f"));
  }
}

TEST(InstanceIo, Errors) {
  expect_error(ErrorCode::MalformedInstance, [] { parse_instance_text("{"); });
  expect_error(ErrorCode::MalformedInstance, [] { parse_instance_text("[]"); });
  expect_error(ErrorCode::MalformedInstance, [] { parse_instance_text(R"({"points": []})"); });
  expect_error(ErrorCode::MalformedInstance,
               [] { parse_instance_text(R"({"points": [{"id": "a", "weight": "x"}], "chain": []})"); });
  expect_error(ErrorCode::UnknownPointId,
               [] { parse_instance_text(R"({"points": [{"id": "a", "weight": 1}], "chain": [["b"]]})"); });
  expect_error(ErrorCode::LengthMismatch, [] {
    parse_instance_text(R"({"points": [{"id": "a", "weight": 1}], "chain": [["a"]], "functions": {"f": [1, 2]}})");
  });
  expect_error(ErrorCode::NonPositiveWeight,
               [] { parse_instance_text(R"({"points": [{"id": "a", "weight": 0}], "chain": [["a"]]})"); });
  expect_error(ErrorCode::MalformedInstance, [] { load_instance("/nonexistent/instance.json"); });
}

TEST(InstanceIo, FunctionSelection) {
  const auto inst = parse_instance_text(R"({
    "points": [{"id": "a", "weight": 1}], "chain": [["a"]],
    "functions": {"f": [1], "g": [2]}})");
  EXPECT_EQ(inst.function("g").values, (std::vector<double>{2}));
  expect_error(ErrorCode::UnknownFunction, [&] { inst.function(""); });
  expect_error(ErrorCode::UnknownFunction, [&] { inst.function("h"); });
}

TEST(InstanceIo, RestrictDropsStrayPoints) {
  const char* text = R"({
    "points": [{"id": "a", "weight": 1}, {"id": "z", "weight": 5}, {"id": "b", "weight": 2}],
    "chain": [["a"], ["a", "b"]],
    "functions": {"f": [1, 9, 2]}})";
  const auto plain = parse_instance_text(text);
  expect_error(ErrorCode::NotFull, [&] { validate_core(plain.space, plain.spec); });
  const auto r = parse_instance_text(text, true);
  EXPECT_EQ(r.space.ids(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(r.function("f").values, (std::vector<double>{1, 2}));
  EXPECT_EQ(validate_core(r.space, r.spec).k(), 2u);
}

TEST(InstanceIo, StepFunctions) {
  const auto inst = parse_instance_text(kWorked);
  const auto m = tailored_measure(validate_core(inst.space, inst.spec));
  const auto doc = to_json(m, StepFunction{4, 1, 2});
  EXPECT_EQ(step_function_from_json(doc, m).values, (std::vector<double>{4, 1, 2}));
  expect_error(ErrorCode::LengthMismatch, [&] { step_function_from_json(json{{"values", {1, 2}}}, m); });
  expect_error(ErrorCode::MalformedInstance,
               [&] { step_function_from_json(json{{"values", {1, 2, 3}}, {"positions", {1, 2, 4}}}, m); });
}

}  // namespace
}  // namespace downcore
