#include "nogo/nogo.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace nogo;
using nogo::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

// Pseudo-random +-1 assignment keyed on the direction's exact angles.
HVModel hashed_deterministic_model(std::uint64_t seed) {
    return deterministic_model([seed](const Direction& n) {
        const auto h = derive_seed(seed, std::bit_cast<std::uint64_t>(n.theta()),
                                   std::bit_cast<std::uint64_t>(n.phi()));
        return (h & 1) ? 1.0 : -1.0;
    });
}

} // namespace

TEST(QuantumContrast, PureStateAttainsFourPiOverThree) {
    EXPECT_NEAR(quantum_contrast(state_from_bloch({0, 0, 1}), default_grid()), 4.1887902048, 1e-10);
}

TEST(QuantumContrast, MaximallyMixedIsZero) {
    EXPECT_NEAR(quantum_contrast(state_from_bloch({0, 0, 0}), default_grid()), 0.0, 1e-15);
}

TEST(QuantumContrast, HalfLengthBlochVector) {
    // (4 pi / 3) * 0.25
    const double closed = 4 * kPi / 3 * 0.25;
    EXPECT_NEAR(closed, 1.0471975512, 1e-10);
    EXPECT_NEAR(quantum_contrast(state_from_bloch({0, 0, 0.5}), default_grid()), closed, 1e-10);
}

// Quadrature against the algebraic reduction (4 pi / 3)|T|^2, and the bound.
TEST(QuantumContrast, ClosedFormAgreementRandomStates) {
    Gen gen(21);
    const SphericalGrid grid = default_grid();
    for (int k = 0; k < 100; ++k) {
        const DensityOperator psi = state_from_bloch(k % 4 == 0 ? gen.unit_vector() : gen.mixed_bloch());
        const double q = quantum_contrast(psi, grid);
        EXPECT_NEAR(q, 4 * kPi / 3 * norm_sq(bloch_vector(psi)), 1e-10);
        EXPECT_LE(q, 4 * kPi / 3 + 1e-10);
    }
}

TEST(QuantumContrast, StableAcrossGrids) {
    Gen gen(22);
    for (int k = 0; k < 20; ++k) {
        const DensityOperator psi = state_from_bloch(gen.mixed_bloch());
        const double a = quantum_contrast(psi, product_gauss_grid(3, 8));
        const double b = quantum_contrast(psi, product_gauss_grid(8, 16));
        const double c = quantum_contrast(psi, product_gauss_grid(16, 32));
        EXPECT_NEAR(a, b, 1e-12);
        EXPECT_NEAR(b, c, 1e-12);
    }
}

TEST(HvContrast, DeterministicModelsSaturateFourPi) {
    const SphericalGrid grid = default_grid();
    for (std::uint64_t s = 0; s < 10; ++s) {
        const HvContrast c = hv_contrast(hashed_deterministic_model(s), grid, Budget::exact());
        EXPECT_NEAR(c.value, 4 * kPi, 1e-13);
        EXPECT_EQ(c.std_error, 0.0);
        EXPECT_TRUE(c.within_bound);
    }
    const HvContrast h =
        hv_contrast(deterministic_model(hemisphere_assignment), grid, Budget::exact());
    EXPECT_NEAR(h.value, 12.5663706144, 1e-10);
}

TEST(HvContrast, BalancedFiniteModelIsZero) {
    const HVModel model =
        finite_model(FiniteProbabilitySpace::from_weights({0.5, 0.5}),
                     [](const Direction&, std::size_t i) { return i == 0 ? 1.0 : -1.0; }, "pm");
    EXPECT_EQ(hv_contrast(model, default_grid(), Budget::exact()).value, 0.0);
}

TEST(HvContrast, KsModelReproducesQuantumValue) {
    const HvContrast c =
        hv_contrast(ks_model({0.0, 0.0, 1.0}, 42), default_grid(), Budget::samples(200000));
    EXPECT_GT(c.std_error, 0.0);
    EXPECT_NEAR(c.value, 4 * kPi / 3, 4 * c.std_error);
    EXPECT_TRUE(c.within_bound);
    for (const auto& t : c.tallies) EXPECT_LE(std::abs(t.mean), 1.0);
}

TEST(HvContrast, WorkerCountDoesNotChangeBits) {
    const HVModel model = ks_model({0.6, 0.0, 0.8}, 9);
    const SphericalGrid grid = product_gauss_grid(3, 8);
    const HvContrast a = hv_contrast(model, grid, Budget::samples(2000), 1);
    const HvContrast b = hv_contrast(model, grid, Budget::samples(2000), 3);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(BlochCheck, Examples) {
    const auto pure = bloch_sphere_check(state_from_bloch({0, 0, 1}));
    EXPECT_NEAR(pure.bloch_norm_sq, 1.0, 1e-12);
    EXPECT_TRUE(pure.passed);
    EXPECT_TRUE(pure.saturated);

    const auto mixed = bloch_sphere_check(state_from_bloch({0, 0, 0}));
    EXPECT_EQ(mixed.bloch_norm_sq, 0.0);
    EXPECT_TRUE(mixed.passed);
    EXPECT_FALSE(mixed.saturated);

    const auto partial = bloch_sphere_check(state_from_bloch({0.6, 0, 0}));
    EXPECT_NEAR(partial.bloch_norm_sq, 0.36, 1e-12);
    EXPECT_TRUE(partial.passed);
    EXPECT_FALSE(partial.saturated);
}

TEST(BlochCheck, SaturationIffPure) {
    Gen gen(23);
    for (int k = 0; k < 200; ++k) {
        const DensityOperator psi = state_from_bloch(k % 2 ? gen.unit_vector() : gen.mixed_bloch());
        const auto r = bloch_sphere_check(psi);
        EXPECT_EQ(r.saturated, std::abs(psi.purity() - 1.0) <= 1e-10);
        EXPECT_EQ(r.saturated, k % 2 == 1);
    }
}

TEST(InconsistencyReport, PureStateVersusDeterministic) {
    const ContrastReport r = inconsistency_report(
        state_from_bloch({0, 0, 1}), deterministic_model(hemisphere_assignment), default_grid(),
        Budget::exact(), 10000);
    EXPECT_NEAR(r.quantum_value, 4 * kPi / 3, 1e-10);
    EXPECT_NEAR(r.hv_value, 4 * kPi, 1e-12);
    EXPECT_TRUE(r.contradiction);
    EXPECT_TRUE(r.quantum_attains_max);
    EXPECT_TRUE(r.hv_attains_max);
    ASSERT_TRUE(r.gap_ratio.has_value());
    EXPECT_NEAR(*r.gap_ratio, 3.0, 1e-9);
    EXPECT_EQ(r.verdict, "propositions jointly inconsistent; gap ratio 3.000");
    EXPECT_EQ(r.proposition_flags.at(Proposition::HV), PropositionFlag::satisfied);
    EXPECT_EQ(r.proposition_flags.at(Proposition::BlochSphere), PropositionFlag::satisfied);
    EXPECT_EQ(r.proposition_flags.at(Proposition::BSF), PropositionFlag::assumed);
    // Dispersion-free outcomes cannot match the Born rule for z-up off the poles.
    EXPECT_EQ(r.proposition_flags.at(Proposition::D), PropositionFlag::violated);
    EXPECT_TRUE(r.warnings.empty());
}

TEST(InconsistencyReport, PureStateVersusKs) {
    const Vec3 m{0.0, 0.6, 0.8};
    const ContrastReport r = inconsistency_report(state_from_bloch(m), ks_model(m, 42),
                                                  default_grid(), Budget::samples(200000), 20000);
    EXPECT_NEAR(r.quantum_value, 4 * kPi / 3, 1e-10);
    EXPECT_NEAR(r.hv_value, 4 * kPi / 3, 4 * r.hv_std_error);
    EXPECT_FALSE(r.contradiction);
    EXPECT_FALSE(r.hv_attains_max);
    EXPECT_EQ(r.proposition_flags.at(Proposition::D), PropositionFlag::satisfied);
    EXPECT_EQ(r.proposition_flags.at(Proposition::HV), PropositionFlag::satisfied);
    EXPECT_EQ(r.verdict.rfind("hv contrast agrees with quantum contrast; gap ratio 1.0", 0), 0u)
        << r.verdict;
}

TEST(InconsistencyReport, MixedStateVersusDeterministic) {
    const ContrastReport r = inconsistency_report(state_from_bloch({0, 0, 0}),
                                                  deterministic_model(hemisphere_assignment),
                                                  default_grid(), Budget::exact(), 1000);
    EXPECT_EQ(r.quantum_value, 0.0);
    EXPECT_NEAR(r.hv_value, 4 * kPi, 1e-12);
    EXPECT_FALSE(r.pure_state);
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_FALSE(r.gap_ratio.has_value());
    EXPECT_EQ(r.proposition_flags.at(Proposition::D), PropositionFlag::violated);
    EXPECT_EQ(r.distribution_failures, r.distribution_checks);
    EXPECT_NEAR(r.distribution_max_deviation, 0.5, 1e-12);
    EXPECT_EQ(r.verdict, "propositions jointly inconsistent; gap ratio undefined");
}

TEST(InconsistencyReport, AdversarialModelViolatesHv) {
    const HVModel model = finite_model(FiniteProbabilitySpace::from_weights({1.0}),
                                       [](const Direction&, std::size_t) { return 0.5; }, "half");
    const ContrastReport r = inconsistency_report(state_from_bloch({0, 0, 1}), model,
                                                  product_gauss_grid(3, 8), Budget::exact(), 100);
    EXPECT_EQ(r.proposition_flags.at(Proposition::HV), PropositionFlag::violated);
    EXPECT_NEAR(r.hv_value, 4 * kPi * 0.25, 1e-12);
}
