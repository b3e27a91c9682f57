// Randomized invariants checked over many seeds.
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "degenpred/degeneracy_classes.hpp"
#include "degenpred/prediction_pipeline.hpp"
#include "degenpred/sequence_ops.hpp"
#include "oracles.hpp"

namespace dp = degenpred;
using dp::cplx;
using dp::kPi;

class Seeded : public ::testing::TestWithParam<unsigned> {
protected:
    std::mt19937_64 rng{GetParam()};
    long offset(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
    double angle() { return std::uniform_real_distribution<double>(-kPi, kPi)(rng); }
};

TEST_P(Seeded, TraceRoundTripAndParseval) {
    const auto g = dp::make_grid(256);
    const auto x = oracle::random_sequence(offset(-200, 60), 128, GetParam());
    const auto X = dp::ztrace(x, g);
    EXPECT_LE(dp::max_abs_diff(dp::inv_ztrace(X, x.window()), x), 1e-10);
    double e = 0;
    for (const cplx& v : X.values) e += std::norm(v);
    const double e0 = x.l2_norm() * x.l2_norm();
    EXPECT_LE(std::abs(e / 256.0 - e0), 1e-9 * e0);
}

TEST_P(Seeded, WeightSymmetryAndPeriodicity) {
    const dp::WeightParams p{1.5 + GetParam() % 3, 0.2, 1.0};
    const double a = angle();
    const double b = angle();
    EXPECT_NEAR(dp::log_weight(a, b, p), dp::log_weight(b, a, p), 1e-9 * std::max(1.0, dp::log_weight(a, b, p)));
    EXPECT_NEAR(dp::log_weight(a + 2 * kPi, b - 4 * kPi, p), dp::log_weight(a, b, p),
                1e-6 * std::max(1.0, dp::log_weight(a, b, p)));
    EXPECT_GE(dp::log_weight(a, b, p), 0.0);
}

TEST_P(Seeded, MembershipHomogeneous) {
    const auto g = dp::make_grid(128);
    const auto x = oracle::random_sequence(offset(-30, 0), 30, GetParam());
    const dp::ClassSpec spec{2 << (GetParam() % 3), kPi, {2.0, 0.01, 1.0}, 1.0};
    const double lambda = 0.1 + GetParam() % 7;
    const double v1 = dp::membership_value(x, spec, g);
    const double v2 = dp::membership_value(lambda * x, spec, g);
    EXPECT_NEAR(v2, lambda * lambda * v1, 1e-11 * v2);
}

TEST_P(Seeded, DecimationIdentities) {
    const auto x = oracle::random_sequence(offset(-50, 50), 64, GetParam());
    const int m = 2 + GetParam() % 3;
    const long s = offset(-5, 5);
    const auto d = dp::decimate(x, m, s);
    EXPECT_EQ(dp::max_abs_diff(dp::supersequence(dp::subsequence(x, m, s), m, s), d), 0.0);
    EXPECT_EQ(dp::max_abs_diff(dp::decimate(d, m, s), d), 0.0);
    EXPECT_EQ(dp::max_abs_diff(dp::decimate(x, 1, s), x), 0.0);
}

TEST_P(Seeded, ModulationPreservesNorm) {
    const auto x = oracle::random_sequence(offset(-500, 500), 200, GetParam());
    EXPECT_NEAR(dp::modulate(x, angle()).l2_norm(), x.l2_norm(), 1e-12 * x.l2_norm());
}

TEST_P(Seeded, BandstopProjection) {
    const auto g = dp::make_grid(128);
    const dp::GapSpec gap{0.2 + 0.1 * (GetParam() % 4), 2 << (GetParam() % 2), kPi};
    const auto x = oracle::random_sequence(offset(-64, 0), 64, GetParam());
    const auto px = dp::bandstop_project(x, gap, g);
    EXPECT_LE(dp::max_abs_diff(dp::bandstop_project(px, gap, g), px), 1e-10);
    EXPECT_LE(px.l2_norm(), x.l2_norm() * (1 + 1e-12));
}

TEST_P(Seeded, BraidRoundTrip) {
    const auto x = oracle::random_sequence(offset(-60, 0), 61, GetParam());
    const int m = 2 + GetParam() % 3;
    EXPECT_EQ(dp::max_abs_diff(dp::braid_assemble(dp::braid_split(x, m), m), x), 0.0);
}

TEST_P(Seeded, PredictionIsLinear) {
    static const auto g = dp::make_grid(1 << 12);
    static const auto kern = dp::predictor_kernel(dp::KernelSpec{2, 1, 4, 3.0, 1.2, kPi}, g);
    const auto x = oracle::random_sequence(-100, 101, GetParam());
    const auto y = oracle::random_sequence(-100, 101, GetParam() + 1000);
    const cplx a(0.3, -1.2);
    const auto task = dp::PredictionTask::make(kern.spec, {-100, 0}, {-5, 5});
    const auto lhs = dp::predict(a * x + y, task, kern);
    const auto rhs = a * dp::predict(x, task, kern) + dp::predict(y, task, kern);
    EXPECT_LE(dp::max_abs_diff(lhs, rhs), 1e-9 * std::max(1.0, rhs.sup_norm()));
}

INSTANTIATE_TEST_SUITE_P(Seeds, Seeded, ::testing::Range(0u, 25u));
