// nogo.hpp
// The contrast quantity ||E||^2 = integral over directions of E(n)^2, for the
// quantum prediction and for hidden-variable models, plus the report that
// puts the two side by side.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nogo/hv_models.hpp"
#include "nogo/qm_core.hpp"
#include "nogo/sphere_quad.hpp"

namespace nogo {

inline constexpr double kQuantumBound = 4.0 * std::numbers::pi / 3.0;
inline constexpr double kHvBound = 4.0 * std::numbers::pi;
inline constexpr double kContrastTol = 1e-9;

// integral of Tr[psi n.sigma]^2 dOmega; equals (4 pi / 3) |T|^2 on exact grids.
inline double quantum_contrast(const DensityOperator& psi, const SphericalGrid& grid) {
    return integrate(
        [&psi](const Direction& n) {
            const double e = expectation(psi, n);
            return e * e;
        },
        grid);
}

struct HvContrast {
    double value;
    // Per-node standard errors pushed through the weighted sum:
    // sqrt(sum_k (w_k * 2 E_k * se_k)^2).
    double std_error;
    bool within_bound; // value <= 4 pi + 4 sigma + 1e-9
    std::vector<OutcomeTally> tallies;
};

inline HvContrast hv_contrast(const HVModel& model, const SphericalGrid& grid,
                              const Budget& budget, unsigned workers = 0) {
    HvContrast out;
    out.tallies = map_nodes<OutcomeTally>(
        grid, [&](const Direction& n) { return tally_direction(model, n, budget); }, workers);
    std::vector<double> squares;
    squares.reserve(out.tallies.size());
    double var = 0.0;
    for (std::size_t k = 0; k < out.tallies.size(); ++k) {
        const auto& t = out.tallies[k];
        squares.push_back(t.mean * t.mean);
        const double d = grid.nodes()[k].weight * 2.0 * t.mean * t.std_error;
        var += d * d;
    }
    out.value = integrate_values(grid, squares);
    out.std_error = std::sqrt(var);
    out.within_bound = out.value <= kHvBound + 4.0 * out.std_error + kContrastTol;
    return out;
}

struct BlochReport {
    Vec3 bloch_vector;
    double bloch_norm_sq;
    double purity;
    bool passed;    // |T|^2 <= 1 + 1e-12
    bool saturated; // ||T|^2 - 1| <= 1e-10, i.e. a pure state
};

inline BlochReport bloch_sphere_check(const DensityOperator& psi) {
    const Vec3 t = bloch_vector(psi);
    const double n2 = norm_sq(t);
    return {t, n2, psi.purity(), n2 <= 1.0 + kBlochTol, std::abs(n2 - 1.0) <= kPurityTol};
}

enum class Proposition { BSF, HV, D, BlochSphere };
enum class PropositionFlag { satisfied, violated, assumed };

inline const char* to_string(Proposition p) {
    switch (p) {
    case Proposition::BSF: return "BSF";
    case Proposition::HV: return "HV";
    case Proposition::D: return "D";
    case Proposition::BlochSphere: return "BlochSphere";
    }
    return "?";
}

inline const char* to_string(PropositionFlag f) {
    switch (f) {
    case PropositionFlag::satisfied: return "satisfied";
    case PropositionFlag::violated: return "violated";
    case PropositionFlag::assumed: return "assumed";
    }
    return "?";
}

struct ContrastReport {
    std::string model_label;
    std::string model_state_dependence;
    double quantum_value;
    double quantum_bound = kQuantumBound;
    double hv_value;
    double hv_std_error;
    double hv_bound = kHvBound;
    double bloch_norm_sq;
    bool pure_state;
    bool quantum_attains_max;
    bool hv_attains_max;
    bool contradiction;
    std::optional<double> gap_ratio;
    std::map<Proposition, PropositionFlag> proposition_flags;
    // Distribution-rule checks over the grid nodes.
    std::size_t distribution_checks;
    std::size_t distribution_failures;
    double distribution_max_deviation;
    SpectrumSupportReport spectrum;
    BlochReport bloch;
    std::vector<std::string> warnings;
    std::string verdict;
};

inline std::string format_ratio(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r);
    return buf;
}

// Runs both contrasts plus the Bloch, distribution-rule and spectrum checks
// and assembles the verdict. Non-pure states are accepted with a warning.
inline ContrastReport inconsistency_report(const DensityOperator& psi, const HVModel& model,
                                           const SphericalGrid& grid, const Budget& budget,
                                           std::size_t spectrum_budget = 100000,
                                           std::uint64_t seed = 42, unsigned workers = 0) {
    ContrastReport r;
    r.model_label = model.label;
    r.model_state_dependence = model.state_dependence;
    r.quantum_value = quantum_contrast(psi, grid);
    const HvContrast hv = hv_contrast(model, grid, budget, workers);
    r.hv_value = hv.value;
    r.hv_std_error = hv.std_error;
    r.bloch = bloch_sphere_check(psi);
    r.bloch_norm_sq = r.bloch.bloch_norm_sq;
    r.pure_state = psi.is_pure();
    if (!r.pure_state)
        r.warnings.push_back("state is not pure; the contrast is stated for pure states");

    r.distribution_checks = hv.tallies.size();
    r.distribution_failures = 0;
    r.distribution_max_deviation = 0.0;
    for (std::size_t k = 0; k < hv.tallies.size(); ++k) {
        const auto d = distribution_rule_from_tally(hv.tallies[k], psi, grid.nodes()[k].direction);
        if (!d.passed) ++r.distribution_failures;
        r.distribution_max_deviation = std::max(r.distribution_max_deviation, d.deviation);
    }
    r.spectrum = check_spectrum_support(model, spectrum_budget, seed);

    r.proposition_flags[Proposition::BSF] = PropositionFlag::assumed;
    r.proposition_flags[Proposition::HV] =
        r.spectrum.passed() ? PropositionFlag::satisfied : PropositionFlag::violated;
    r.proposition_flags[Proposition::D] =
        r.distribution_failures == 0 ? PropositionFlag::satisfied : PropositionFlag::violated;
    r.proposition_flags[Proposition::BlochSphere] =
        r.bloch.passed ? PropositionFlag::satisfied : PropositionFlag::violated;

    const double band = 4.0 * r.hv_std_error + kContrastTol;
    r.quantum_attains_max = std::abs(r.quantum_value - kQuantumBound) <= kContrastTol;
    r.hv_attains_max = std::abs(r.hv_value - kHvBound) <= band;
    r.contradiction = r.hv_value > kQuantumBound + band;
    if (r.quantum_value > kContrastTol) r.gap_ratio = r.hv_value / r.quantum_value;

    const std::string ratio =
        r.gap_ratio ? "gap ratio " + format_ratio(*r.gap_ratio) : "gap ratio undefined";
    if (r.contradiction)
        r.verdict = "propositions jointly inconsistent; " + ratio;
    else if (std::abs(r.hv_value - r.quantum_value) <= band)
        r.verdict = "hv contrast agrees with quantum contrast; " + ratio;
    else
        r.verdict = "hv contrast within quantum bound; " + ratio;
    return r;
}

} // namespace nogo
