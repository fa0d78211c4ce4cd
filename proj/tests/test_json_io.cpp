#include <gtest/gtest.h>

#include "isingstab/json_io.hpp"
#include "isingstab/montecarlo.hpp"

using namespace isingstab;

TEST(JsonIo, GraphRoundTrip) {
  for (const auto& g : {build_complete(5), build_kings(3, 4), build_star(6), build_torus({3, 4})}) {
    EXPECT_EQ(graph_from_json(to_json(g)), g);
    EXPECT_EQ(graph_from_json(json::parse(to_json(g).dump())), g);
  }
}

TEST(JsonIo, GraphEdgesCanonicalizedOnRead) {
  const auto j = json::parse(R"({"n": 3, "edges": [[2, 1], [1, 0]]})");
  const auto g = graph_from_json(j);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[1], (Edge{1, 2}));
}

TEST(JsonIo, InstanceRoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = sample_instance(build_kings(3, 3), seed % 2 == 0, seed);
    const auto text = to_json(inst).dump();
    const auto back = instance_from_json(json::parse(text));
    EXPECT_EQ(back, inst);
    EXPECT_EQ(to_json(back).dump(), text);
  }
}

TEST(JsonIo, InstanceFieldsOptional) {
  const auto j = json::parse(R"({"graph": {"n": 2, "edges": [[0, 1]]}, "J": [1.5]})");
  const auto inst = instance_from_json(j);
  EXPECT_FALSE(inst.has_fields());
  EXPECT_EQ(inst.couplings()[0], 1.5);
}

TEST(JsonIo, InstanceErrors) {
  EXPECT_THROW(instance_from_json(json::parse(R"({"schema": 2, "graph": {"n": 2, "edges": [[0, 1]]}, "J": [1]})")),
               InvalidArgument);
  EXPECT_THROW(instance_from_json(json::parse(R"({"graph": {"n": 2, "edges": [[0, 1]]}, "J": [1, 2]})")),
               InvalidArgument);
  EXPECT_THROW(instance_from_json(json::parse(R"({"graph": {"n": 2, "edges": [[0, 0]]}, "J": [1]})")),
               InvalidArgument);
  EXPECT_THROW(instance_from_json(json::parse(R"({"graph": {"n": 2}, "J": [1]})")), InvalidArgument);
  EXPECT_THROW(instance_from_json(json::parse(R"({"graph": {"n": 2, "edges": [[0, 1]]}, "J": ["x"]})")),
               InvalidArgument);
  EXPECT_THROW(graph_from_json(json::parse(R"({"n": 0, "edges": []})")), InvalidArgument);
  EXPECT_THROW(graph_from_json(json::parse(R"({"n": 2, "edges": [[0, 1, 2]]})")), InvalidArgument);
}

TEST(JsonIo, ConfigForms) {
  const SpinConfig s({1, -1, -1, 1});
  EXPECT_EQ(config_from_json(to_json(s)), s);
  const auto gs = to_json(GroundStateResult{s, -2.5, true});
  EXPECT_EQ(gs.at("schema"), 1);
  EXPECT_EQ(config_from_json(gs), s);
  EXPECT_THROW(config_from_json(json::parse("[1, 0, -1]")), InvalidArgument);
  EXPECT_THROW(config_from_json(json::parse(R"({"spins": [1]})")), InvalidArgument);
}

TEST(JsonIo, Reports) {
  const auto r = to_json(bound_uniform(10, 0.01, 0.1));
  EXPECT_EQ(r.at("method"), "uniform");
  EXPECT_EQ(r.at("k_g"), 10);
  const auto inst = sample_instance(build_torus({10}), false, 1);
  const auto c = to_json(build_v0(inst, 0.5));
  EXPECT_EQ(c.at("schema"), 1);
  EXPECT_TRUE(c.at("removed").is_array());
  const TorusGuaranteeQuery q{1e8, 0.05, 0.0198, 1, 0.4};
  const auto t = to_json(q, torus_guarantee(q));
  EXPECT_EQ(t.at("minimum_removed_size"), 1585);
}
