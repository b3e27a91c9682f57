#include <gtest/gtest.h>

#include <cmath>

#include "degenpred/degeneracy_classes.hpp"
#include "degenpred/errors.hpp"
#include "oracles.hpp"

namespace dp = degenpred;
using dp::cplx;
using dp::kPi;
using dp::Sequence;

namespace {

cplx inner(const Sequence& a, const Sequence& b) {
    const long lo = std::min(a.first(), b.first());
    const long hi = std::max(a.last(), b.last());
    cplx s{};
    for (long k = lo; k <= hi; ++k) s += a.at(k) * std::conj(b.at(k));
    return s;
}

dp::BraidedSpec braided(int m, double c_build) {
    dp::BraidedSpec s;
    s.m = m;
    s.nu = dp::nu_scheme(m);
    s.beta = kPi;
    s.weights = dp::WeightParams{2.0, c_build, 1.0};
    s.r = 1e6;
    s.c_build = c_build;
    return s;
}

}  // namespace

TEST(Bandstop, ZeroesGapNodes) {
    const auto g = dp::make_grid(256);
    const dp::GapSpec gap{0.5, 4, kPi};
    const auto p = dp::bandstop_project(oracle::random_sequence(-40, 80, 1, false), gap, g);
    const auto P = dp::ztrace(p, g);
    for (std::size_t j = 0; j < g.size(); ++j)
        if (gap.in_gap(g.node(j))) EXPECT_LE(std::abs(P.values[j]), 1e-10);
}

TEST(Bandstop, OrthogonalProjection) {
    const auto g = dp::make_grid(256);
    const dp::GapSpec gap{0.5, 4, kPi};
    const auto x = oracle::random_sequence(-60, 120, 2);
    const auto y = oracle::random_sequence(-100, 200, 3);
    const auto px = dp::bandstop_project(x, gap, g);
    const auto py = dp::bandstop_project(y, gap, g);
    EXPECT_LE(dp::max_abs_diff(dp::bandstop_project(px, gap, g), px), 1e-10);
    EXPECT_LE(px.l2_norm(), x.l2_norm() + 1e-12);
    EXPECT_LE(std::abs(inner(px, y) - inner(x, py)), 1e-9 * x.l2_norm() * y.l2_norm());
}

TEST(Bandstop, RealInputStaysReal) {
    const auto g = dp::make_grid(512);
    const auto p = dp::bandstop_project(oracle::random_sequence(-100, 201, 5, false), dp::GapSpec{0.5, 4, kPi}, g);
    for (const cplx& v : p.samples()) EXPECT_LE(std::abs(v.imag()), 1e-12);
}

TEST(Bandstop, FullCoverRejected) {
    const auto g = dp::make_grid(64);
    EXPECT_THROW(dp::bandstop_project(Sequence::impulse(0), dp::GapSpec{1.9, 4, kPi}, g), dp::ConfigError);
}

TEST(Bandstop, MembersHaveBoundedMembership) {
    // Outside the gaps the weight is at most exp(c / delta^q), which bounds
    // the quadrature by that factor squared times the energy.
    const auto g = dp::make_grid(1024);
    const dp::GapSpec gap{0.5, 4, kPi};
    const auto X = dp::bandstop_trace(dp::ztrace(oracle::random_sequence(-200, 400, 6, false), g), gap);
    double e = 0.0;
    for (const cplx& v : X.values) e += std::norm(v);
    e *= g.spacing();
    const dp::ClassSpec spec{4, kPi, {2.0, 0.05, 1.0}, 1.0};
    const double v = dp::membership_value(X, spec);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, e * (1 - 1e-12));
    EXPECT_LE(v, e * std::exp(2 * 0.05 / 0.25) * (1 + 1e-12));
}

TEST(Bandstop, ProjectedSequenceIsMemberForWeakPeaks) {
    // Round-off leaves ~1e-16 in the gaps; a weak peak keeps it negligible.
    const auto g = dp::make_grid(1024);
    const dp::GapSpec gap{0.5, 4, kPi};
    const auto x = dp::bandstop_project(oracle::random_sequence(-200, 400, 6, false), gap, g);
    const dp::ClassSpec spec{4, kPi, {2.0, 1e-4, 1.0}, 1.0};
    const double v = dp::membership_value(x, spec, g);
    const double e = 2 * kPi * x.l2_norm() * x.l2_norm();
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v, e, 1e-2 * e);
}

TEST(NuScheme, Formula) {
    const auto n1 = dp::nu_scheme(1);
    ASSERT_EQ(n1.size(), 1u);
    EXPECT_EQ(n1.at(0), 1);
    const auto n2 = dp::nu_scheme(2);
    EXPECT_EQ(n2.at(0), 1);
    EXPECT_EQ(n2.at(1), 2);
    EXPECT_EQ(n2.at(-1), 4);
    const auto n3 = dp::nu_scheme(3);
    EXPECT_EQ(n3.at(2), 4);
    EXPECT_EQ(n3.at(-1), 16);
    EXPECT_EQ(n3.at(-2), 8);
    EXPECT_THROW(dp::nu_scheme(0), dp::ConfigError);
}

TEST(Disjointness, SchemePasses) {
    for (int m : {1, 2, 3, 4}) {
        EXPECT_TRUE(dp::disjointness_check(m, dp::nu_scheme(m), kPi)) << "m=" << m;
        // Exhaustive intersection oracle on exact root lists.
        const auto nu = dp::nu_scheme(m);
        for (auto a = nu.begin(); a != nu.end(); ++a)
            for (auto b = std::next(a); b != nu.end(); ++b)
                for (double x : dp::root_set(m * a->second, kPi).points)
                    for (double y : dp::root_set(m * b->second, kPi).points) EXPECT_GT(std::abs(x - y), 1e-6);
    }
}

TEST(Disjointness, EqualNuFails) {
    for (int m : {2, 3}) {
        dp::NuMap nu;
        for (int d = -m + 1; d <= m - 1; ++d) nu[d] = 2;
        EXPECT_FALSE(dp::disjointness_check(m, nu, kPi));
        EXPECT_FALSE(dp::disjointness_check(m, nu, 1.0));
    }
    EXPECT_TRUE(dp::disjointness_check(1, {{0, 5}}, 0.3));
}

TEST(BraidedSpec, Validation) {
    auto s = braided(2, 0.01);
    EXPECT_NO_THROW(s.validate());
    s.nu.erase(-1);
    EXPECT_THROW(s.validate(), dp::ConfigError);
    s = braided(2, 0.01);
    for (auto& [d, v] : s.nu) v = 1;
    EXPECT_THROW(s.validate(), dp::ConfigError);
    s = braided(2, 0.0);
    EXPECT_THROW(s.validate(), dp::ConfigError);
}

TEST(Braided, ZeroInput) {
    const auto g = dp::make_grid(1024);
    const auto res = dp::braided_approximant(Sequence::zeros({-32, 31}), braided(2, 0.01), g);
    EXPECT_EQ(res.x_hat.sup_norm(), 0.0);
    EXPECT_EQ(res.certificate.distance_l2, 0.0);
    EXPECT_TRUE(res.certificate.all_pass());
}

TEST(Braided, DensityLadder) {
    const auto g = dp::make_grid(1 << 14);
    const auto x = oracle::random_sequence(-32, 64, 11, false);
    double prev = dp::kInf;
    for (double c : {0.1, 0.01, 0.001}) {
        const auto res = dp::braided_approximant(x, braided(2, c), g, false);
        EXPECT_LT(res.certificate.relative_distance, prev) << "c=" << c;
        prev = res.certificate.relative_distance;
        EXPECT_TRUE(res.certificate.all_pass()) << "c=" << c;
        EXPECT_EQ(res.certificate.phases.size(), 3u);
        for (const auto& pc : res.certificate.phases) EXPECT_LE(pc.arho_deviation, 1e-9);
    }
}

TEST(Braided, PhasesAreConsistentAndBraided) {
    const auto g = dp::make_grid(1 << 12);
    const auto x = oracle::random_sequence(-20, 40, 12, false);
    const auto res = dp::braided_approximant(x, braided(2, 0.01), g);
    for (const auto& [d, xi] : res.xi_hat) {
        EXPECT_LE(std::abs(xi.at(0) - res.xi_hat.at(0).at(0)), 1e-8);
    }
    for (long k = -20; k <= 20; ++k) {
        const int d = dp::braid_phase(k, 2);
        EXPECT_EQ(res.x_hat.at(k), res.xi_hat.at(d).at(k + d));
    }
}

TEST(Braided, PhasesAreClassMembers) {
    const auto g = dp::make_grid(1 << 12);
    const auto spec = braided(2, 0.01);
    const auto res = dp::braided_approximant(oracle::random_sequence(-20, 40, 13, false), spec, g);
    for (const auto& pc : res.certificate.phases) {
        EXPECT_TRUE(std::isfinite(pc.membership));
        EXPECT_LE(pc.membership, spec.r);
        EXPECT_EQ(pc.n_total, 2 * spec.nu.at(pc.d));
    }
    EXPECT_GE(res.certificate.L_used, 1.0);
    EXPECT_GT(res.certificate.delta_prime, 0.0);
}

TEST(Braided, CertificateFailureIsReported) {
    const auto g = dp::make_grid(1 << 12);
    auto spec = braided(2, 0.5);
    spec.r = 1e-6;
    const auto x = oracle::random_sequence(-20, 40, 14, false);
    try {
        dp::braided_approximant(x, spec, g);
        FAIL() << "expected ConstructionError";
    } catch (const dp::ConstructionError& e) {
        EXPECT_LE(std::abs(e.phase()), 1);
    }
    const auto res = dp::braided_approximant(x, spec, g, false);
    EXPECT_FALSE(res.certificate.all_pass());
}

TEST(Detect, FindsConstructedPeriod) {
    const auto g = dp::make_grid(1024);
    const auto x = dp::bandstop_project(oracle::random_sequence(-200, 400, 15, false), dp::GapSpec{0.5, 4, kPi}, g);
    const auto y = (1.0 / x.l2_norm()) * dp::subsequence(x, 2, 0);
    // Peak strength chosen so exp(2c/d^2) is ~e^40 at the nodes next to a root:
    // far above r for O(1) spectra, far below 1/eps^2 for round-off residue.
    const dp::WeightParams w{2.0, 2e-4, 1.0};
    const auto nu = dp::detect_degeneracy(y, 2, 0, {2, 1}, kPi, w, 1e3, g);
    ASSERT_TRUE(nu.has_value());
    EXPECT_EQ(*nu, 2);
}

TEST(Detect, WhiteNoneAndZeroSmallest) {
    const auto g = dp::make_grid(1024);
    const dp::WeightParams w{2.0, 2e-4, 1.0};
    const auto y = oracle::random_sequence(-100, 200, 16, false);
    EXPECT_FALSE(dp::detect_degeneracy((1.0 / y.l2_norm()) * y, 2, 0, {1, 2, 4}, kPi, w, 1e3, g).has_value());
    const auto z = dp::detect_degeneracy(Sequence::zeros({-10, 10}), 2, 0, {4, 2}, kPi, w, 1e6, g);
    ASSERT_TRUE(z.has_value());
    EXPECT_EQ(*z, 2);
}
