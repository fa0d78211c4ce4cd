#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "isingstab/montecarlo.hpp"

using namespace isingstab;

TEST(SampleInstance, DeterministicAndZeroFields) {
  const auto g = build_kings(4, 4);
  EXPECT_EQ(sample_instance(g, true, 11), sample_instance(g, true, 11));
  EXPECT_NE(sample_instance(g, true, 11), sample_instance(g, true, 12));
  const auto bare = sample_instance(g, false, 11);
  for (double h : bare.fields()) EXPECT_EQ(h, 0.0);
  EXPECT_FALSE(bare.has_fields());
}

TEST(SampleInstance, StandardGaussianMoments) {
  const auto inst = sample_instance(build_torus({100000}), false, 5);
  double sum = 0.0;
  for (double j : inst.couplings()) sum += j;
  const double mean = sum / 1e5;
  double ss = 0.0;
  for (double j : inst.couplings()) ss += (j - mean) * (j - mean);
  EXPECT_LT(std::abs(mean), 3.0 / std::sqrt(1e5));
  EXPECT_NEAR(ss / (1e5 - 1), 1.0, 0.05);
}

TEST(ParallelIndexed, OrderAndExceptions) {
  const auto out = parallel_indexed(100, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
  EXPECT_THROW(parallel_indexed(10, 3,
                                [](std::size_t i) -> int {
                                  if (i == 7) throw InvalidArgument("boom");
                                  return 0;
                                }),
               InvalidArgument);
  EXPECT_TRUE(parallel_indexed(0, 2, [](std::size_t) { return 1; }).empty());
}

TEST(EmpiricalResult, FromCounts) {
  const auto r = EmpiricalResult::from_counts(30, 40);
  EXPECT_DOUBLE_EQ(r.estimate, 0.75);
  EXPECT_DOUBLE_EQ(r.standard_error, std::sqrt(0.75 * 0.25 / 40));
}

TEST(GapProbability, IdentityPerturbationAlwaysSucceeds) {
  TrialPlan plan{build_complete(6), PlanPerturbation::uniform(0.0), 0.1, 50, 9};
  const auto est = estimate_gap_probability(plan);
  EXPECT_EQ(est.result.successes, 50u);
  EXPECT_EQ(est.min_gap, 0.0);
  EXPECT_EQ(*est.result.theoretical_bound, 1.0);
}

TEST(GapProbability, GapNonnegativeAndCertifiedTrialsSucceed) {
  TrialPlan plan{build_complete(8), PlanPerturbation::roundoff(12), 0.1, 200, 3};
  const auto est = estimate_gap_probability(plan);
  std::size_t certified = 0;
  for (const auto& r : est.records) {
    EXPECT_GE(r.gap, 0.0);
    if (r.certified) {
      ++certified;
      EXPECT_TRUE(r.success) << r.index;
    }
  }
  EXPECT_GT(certified, 0u);
  EXPECT_EQ(est.bounds.size(), 3u);
}

TEST(GapProbability, EmpiricalAboveEveryBound) {
  TrialPlan plan{build_complete(6), PlanPerturbation::uniform(0.02), 0.5, 400, 17};
  const auto est = estimate_gap_probability(plan);
  for (const auto& b : est.bounds)
    EXPECT_GE(est.result.estimate, b.probability_lower_bound - 3 * est.result.standard_error);
}

TEST(GapProbability, IndependentOfThreadCount) {
  TrialPlan plan{build_kings(3, 3), PlanPerturbation::uniform(0.05), 0.2, 60, 21};
  const auto one = estimate_gap_probability(plan);
  plan.threads = 4;
  const auto four = estimate_gap_probability(plan);
  EXPECT_EQ(one.result.successes, four.result.successes);
  ASSERT_EQ(one.records.size(), four.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) EXPECT_EQ(one.records[i].gap, four.records[i].gap);
}

TEST(GapProbability, Preconditions) {
  TrialPlan plan{build_torus({30}), PlanPerturbation::uniform(0.05), 0.2, 1, 1};
  EXPECT_THROW(estimate_gap_probability(plan), OracleTooLarge);
  plan.graph = build_complete(4);
  plan.trials = 0;
  EXPECT_THROW(estimate_gap_probability(plan), InvalidArgument);
}

TEST(RemovedStats, WithinThreeStandardErrors) {
  for (std::size_t n : {10u, 50u})
    for (double delta : {0.25, 0.5, 1.0}) {
      const auto s = estimate_removed_stats(n, delta, 20000, 100 + n, 2);
      EXPECT_NEAR(s.mean.estimate, s.mean.theoretical, 3 * s.mean.standard_error) << n << " " << delta;
      EXPECT_NEAR(s.second_moment.estimate, s.second_moment.theoretical, 3 * s.second_moment.standard_error)
          << n << " " << delta;
    }
}

TEST(RemovedStats, HugeDeltaRemovesEverything) {
  const auto s = estimate_removed_stats(20, 10.0, 200, 1);
  EXPECT_NEAR(s.mean.estimate, 20.0, 1e-9);
  EXPECT_EQ(s.full_removals, 200u);
}

TEST(RemovedStats, FullRemovalFrequencyTracksThetaPower) {
  const double delta = 1.5;
  const auto s = estimate_removed_stats(3, delta, 40000, 8);
  const double p = std::pow(s.theta, 3);
  const double se = std::sqrt(p * (1 - p) / 40000);
  EXPECT_NEAR(static_cast<double>(s.full_removals) / 40000, p, 4 * se);
}

TEST(RhScan, OneDimensionalExact) {
  const auto rows = scan_rh_over_n(1, {100000}, 1, RangeSolver::exact_1d, 77);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].r_h_over_n(), 2 * std::sqrt(2 / std::numbers::pi), 0.02 * 1.5957);
  EXPECT_GE(rows[0].r_h, rows[0].lower_anchor());
  EXPECT_LE(rows[0].r_h, rows[0].upper_anchor());
}

TEST(RhScan, AnchorsOnSmallRings) {
  for (const auto& row : scan_rh_over_n(1, {5, 8, 50, 200}, 5, RangeSolver::exact_1d, 3)) {
    EXPECT_GE(row.r_h, row.lower_anchor());
    EXPECT_LE(row.r_h, row.upper_anchor());
  }
}

TEST(RhScan, TwoDimensionalUpperAsymptote) {
  AnnealerParams p;
  p.sweeps = 200;
  p.restarts = 1;
  const auto rows = scan_rh_over_n(2, {100}, 1, RangeSolver::anneal, 4, p);
  ASSERT_EQ(rows.size(), 1u);
  const auto& r = rows[0];
  EXPECT_EQ(r.n, 10000u);
  EXPECT_LE(2 * r.sum_abs_j / 1e4, 2 * 2 * 1.02 * std::sqrt(2 / std::numbers::pi));
  EXPECT_LE(r.r_h, r.upper_anchor());
  EXPECT_GE(r.r_h, r.lower_anchor());
}

TEST(RhScan, SolverMismatch) {
  EXPECT_THROW(scan_rh_over_n(2, {4}, 1, RangeSolver::exact_1d, 1), InvalidArgument);
}
