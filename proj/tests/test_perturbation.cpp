#include <gtest/gtest.h>

#include <cmath>

#include "isingstab/montecarlo.hpp"
#include "isingstab/perturbation.hpp"
#include "oracles.hpp"

using namespace isingstab;

TEST(RoundOff, Examples) {
  EXPECT_EQ(oracle::truncate_binary(0.75, 1), 0.5);
  EXPECT_EQ(round_off_value(0.75, 1), 0.5);

  for (int bits = 1; bits < 20; ++bits) EXPECT_EQ(round_off_value(2.0, bits), 2.0);

  EXPECT_EQ(oracle::truncate_binary(-0.3, 2), -0.5);
  EXPECT_EQ(round_off_value(-0.3, 2), -0.5);
  EXPECT_NEAR(std::abs(-0.3 - round_off_value(-0.3, 2)), 0.2, 1e-15);
}

TEST(RoundOff, InstanceAndDelta) {
  const IsingInstance inst(build_complete(2), {0.75}, {-0.3, 2.0});
  const auto r = round_off(inst, 2);
  EXPECT_EQ(r.delta, 0.25);
  EXPECT_EQ(r.perturbed.couplings()[0], 0.75);
  EXPECT_EQ(r.perturbed.fields()[0], -0.5);
  EXPECT_EQ(r.perturbed.fields()[1], 2.0);
  EXPECT_EQ(r.perturbed.graph(), inst.graph());
  EXPECT_THROW(round_off(inst, 0), InvalidArgument);
}

TEST(RoundOff, AgreesWithDigitOracle) {
  Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    const double p = 8.0 * rng.gaussian();
    for (int bits = 1; bits <= 30; ++bits) {
      const double q = round_off_value(p, bits);
      EXPECT_EQ(q, oracle::truncate_binary(p, bits)) << p << " " << bits;
      EXPECT_GE(p - q, 0.0);
      EXPECT_LT(p - q, std::ldexp(1.0, -bits));
    }
  }
}

TEST(RoundOff, IdempotentAndMonotone) {
  const auto inst = sample_instance(build_kings(3, 3), true, 77);
  for (int bits = 1; bits <= 24; ++bits) {
    const auto once = round_off(inst, bits).perturbed;
    EXPECT_EQ(round_off(once, bits).perturbed, once);
    const auto finer = round_off(inst, bits + 1).perturbed;
    for (std::size_t i = 0; i < inst.couplings().size(); ++i)
      EXPECT_LE(std::abs(inst.couplings()[i] - finer.couplings()[i]),
                std::abs(inst.couplings()[i] - once.couplings()[i]));
    for (std::size_t i = 0; i < inst.fields().size(); ++i)
      EXPECT_LE(std::abs(inst.fields()[i] - finer.fields()[i]),
                std::abs(inst.fields()[i] - once.fields()[i]));
    EXPECT_LE(sup_distance(inst, once), std::ldexp(1.0, -bits));
  }
}

TEST(UniformNoise, BoundedAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = sample_instance(build_complete(6), true, seed);
    const double delta = 1e-3 * (1 + seed);
    const auto a = perturb_uniform(inst, delta, seed);
    const auto b = perturb_uniform(inst, delta, seed);
    EXPECT_EQ(a, b);
    EXPECT_LE(sup_distance(inst, a), delta);
    EXPECT_GT(sup_distance(inst, a), 0.0);
  }
  const auto inst = sample_instance(build_complete(4), true, 1);
  EXPECT_LE(sup_distance(inst, perturb_uniform(inst, 1e-300, 5)), 1e-300);
  EXPECT_NE(perturb_uniform(inst, 0.1, 1), perturb_uniform(inst, 0.1, 2));
  EXPECT_THROW(perturb_uniform(inst, 0.0, 1), InvalidArgument);
  EXPECT_THROW(perturb_uniform(inst, -1.0, 1), InvalidArgument);
}

TEST(UniformNoise, LargeMagnitudeParametersStayWithinDelta) {
  // rounding of p + shift must not push the error past delta
  const IsingInstance inst(build_complete(2), {1e6}, {-3e5, 7.25e4});
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    EXPECT_LE(sup_distance(inst, perturb_uniform(inst, 1e-9, seed)), 1e-9);
}

TEST(PerturbationSpec, Delta) {
  EXPECT_EQ(PerturbationSpec{RoundOff{3}}.delta(), 0.125);
  EXPECT_EQ((PerturbationSpec{UniformNoise{0.02, 1}}.delta()), 0.02);
  const auto inst = sample_instance(build_star(4), true, 9);
  for (const auto& spec : {PerturbationSpec{RoundOff{5}}, PerturbationSpec{UniformNoise{0.01, 4}}})
    EXPECT_LE(sup_distance(inst, apply(spec, inst)), spec.delta());
}
