// cli.hpp
// Command orchestration for the `nogo` tool. Argument parsing lives in
// tools/nogo_main.cpp; everything here is callable from tests.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "nogo/custom_model.hpp"
#include "nogo/hv_models.hpp"
#include "nogo/nogo.hpp"
#include "nogo/qm_core.hpp"
#include "nogo/report.hpp"
#include "nogo/sphere_quad.hpp"

namespace nogo::cli {

enum class Command { verify_quantum, verify_hv, contrast, lemma_check, all };
enum class ModelKind { ks, deterministic, custom_file };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
    Command command = Command::all;
    Vec3 state{0.0, 0.0, 1.0};
    ModelKind model = ModelKind::ks;
    std::string custom_path;
    int n_polar = 8;
    int n_azimuthal = 16;
    std::size_t samples = 1000000;
    std::uint64_t seed = 42;
    std::string output; // empty: stdout
    Format format = Format::text;
};

struct RunResult {
    int exit_code;
    Report report;
};

inline const char* to_string(Command c) {
    switch (c) {
    case Command::verify_quantum: return "verify-quantum";
    case Command::verify_hv: return "verify-hv";
    case Command::contrast: return "contrast";
    case Command::lemma_check: return "lemma-check";
    case Command::all: return "all";
    }
    return "?";
}

inline const char* to_string(ModelKind m) {
    switch (m) {
    case ModelKind::ks: return "ks";
    case ModelKind::deterministic: return "deterministic";
    case ModelKind::custom_file: return "custom-file";
    }
    return "?";
}

inline const char* to_string(Format f) {
    switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::text: return "text";
    }
    return "?";
}

inline Json config_json(const RunConfig& c) {
    Json j;
    j["state"] = vec_json(c.state);
    j["model"] = to_string(c.model);
    if (c.model == ModelKind::custom_file) j["custom_file"] = c.custom_path;
    j["grid"] = Json::array({c.n_polar, c.n_azimuthal});
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["format"] = to_string(c.format);
    return j;
}

inline HVModel make_model(const RunConfig& c) {
    switch (c.model) {
    case ModelKind::ks: return ks_model(c.state, c.seed);
    case ModelKind::deterministic: return deterministic_model(hemisphere_assignment);
    case ModelKind::custom_file: return load_custom_model(c.custom_path);
    }
    throw InvalidArgument("unknown model");
}

namespace detail {

inline Json check(double value, double tolerance, bool passed) {
    return Json{{"value", value}, {"tolerance", tolerance}, {"passed", passed}};
}

struct Section {
    Json results;
    bool passed;
};

inline Section verify_quantum(const DensityOperator& psi, const SphericalGrid& grid) {
    const double q = quantum_contrast(psi, grid);
    const BlochReport bloch = bloch_sphere_check(psi);
    const double closed = kQuantumBound * bloch.bloch_norm_sq;

    double born_dev = 0.0;
    double consistency_dev = 0.0;
    for (const auto& node : grid.nodes()) {
        const HermitianOp a = direction_operator(node.direction);
        const double p_plus = born_probability(psi, a, OutcomeSet::points({1.0}));
        const double p_minus = born_probability(psi, a, OutcomeSet::points({-1.0}));
        born_dev = std::max(born_dev, std::abs(p_plus + p_minus - 1.0));
        consistency_dev =
            std::max(consistency_dev, std::abs(expectation(psi, node.direction) - (p_plus - p_minus)));
    }
    const auto table = orthogonality_table(grid);
    double ortho_dev = 0.0;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            ortho_dev = std::max(ortho_dev, std::abs(table[a][b] - (a == b ? kQuantumBound : 0.0)));

    Json checks;
    checks["bound"] = check(q, kQuantumBound + 1e-10, q <= kQuantumBound + 1e-10);
    checks["closed_form"] = check(std::abs(q - closed), 1e-10, std::abs(q - closed) <= 1e-10);
    checks["born_normalization"] = check(born_dev, 1e-12, born_dev <= 1e-12);
    checks["expectation_consistency"] = check(consistency_dev, 1e-12, consistency_dev <= 1e-12);
    checks["orthogonality"] = check(ortho_dev, 1e-12, ortho_dev <= 1e-12);
    checks["bloch_sphere"] = check(bloch.bloch_norm_sq, 1.0 + kBlochTol, bloch.passed);
    bool passed = true;
    for (const auto& [name, v] : checks.items()) passed = passed && v["passed"].get<bool>();

    Json r;
    r["quantum_value"] = q;
    r["closed_form"] = closed;
    r["bounds"] = Json{{"quantum", kQuantumBound}};
    r["bloch_norm_sq"] = bloch.bloch_norm_sq;
    r["saturated"] = bloch.saturated;
    r["checks"] = checks;
    r["passed"] = passed;
    return {r, passed};
}

inline Section verify_hv(const RunConfig& c, const DensityOperator& psi, const HVModel& model,
                         const SphericalGrid& grid) {
    const Budget budget = model.is_finite() ? Budget::exact() : Budget::samples(c.samples);
    const HvContrast hv = hv_contrast(model, grid, budget);
    std::size_t failures = 0;
    double max_dev = 0.0;
    for (std::size_t k = 0; k < hv.tallies.size(); ++k) {
        const auto d = distribution_rule_from_tally(hv.tallies[k], psi, grid.nodes()[k].direction);
        if (!d.passed) ++failures;
        max_dev = std::max(max_dev, d.deviation);
    }
    const SpectrumSupportReport spectrum =
        check_spectrum_support(model, std::min<std::size_t>(c.samples, 100000), c.seed);

    Json checks;
    checks["hv_bound"] = check(hv.value, kHvBound, hv.within_bound);
    checks["spectrum_support"] =
        check(static_cast<double>(spectrum.violations), 0.0, spectrum.passed());
    checks["distribution_rule"] = check(static_cast<double>(failures), 0.0, failures == 0);
    if (c.model == ModelKind::ks) {
        // E(n) = m.n for the sign model, so the contrast must match (4 pi / 3)|m|^2.
        const double oracle = kQuantumBound * norm_sq(c.state);
        const double tol = 4.0 * hv.std_error + kContrastTol;
        checks["ks_oracle"] = check(std::abs(hv.value - oracle), tol, std::abs(hv.value - oracle) <= tol);
    }
    bool passed = true;
    for (const auto& [name, v] : checks.items()) passed = passed && v["passed"].get<bool>();

    Json r;
    r["model"] = model.label;
    r["model_state_dependence"] = model.state_dependence;
    r["hv_value"] = hv.value;
    r["bounds"] = Json{{"hv", kHvBound}};
    r["errors_sigma"] = Json{{"hv_std_error", hv.std_error},
                             {"hv_band_2sigma", 2.0 * hv.std_error},
                             {"hv_band_4sigma", 4.0 * hv.std_error}};
    r["proposition_flags"] = Json{{"HV", spectrum.passed() ? "satisfied" : "violated"},
                                  {"D", failures == 0 ? "satisfied" : "violated"}};
    r["distribution_rule"] =
        Json{{"checks", hv.tallies.size()}, {"failures", failures}, {"max_deviation", max_dev}};
    r["spectrum_support"] = to_json(spectrum);
    r["checks"] = checks;
    r["passed"] = passed;
    return {r, passed};
}

inline Section lemma_check(const RunConfig& c, const DensityOperator& psi) {
    Json axes = Json::object();
    bool passed = true;
    for (int i = 1; i <= 3; ++i) {
        // Two-point space whose preimage measures are the Born probabilities.
        const HermitianOp a = pauli(i);
        const double p = born_probability(psi, a, OutcomeSet::points({1.0}));
        const auto space = FiniteProbabilitySpace::from_weights({p, 1.0 - p});
        const LemmaReport rep = check_expectation_lemma(space, {1.0, -1.0}, psi, a);
        axes[std::string("sigma_") + "xyz"[i - 1]] = to_json(rep);
        passed = passed && rep.passed() && rep.distribution_rule_holds;
    }

    // Rearrangement identity over random finite spaces.
    std::mt19937_64 rng(derive_seed(c.seed, 0x4c454d4dULL));
    const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const std::size_t spaces = 500;
    std::size_t failures = 0;
    double max_gap = 0.0;
    for (std::size_t s = 0; s < spaces; ++s) {
        const std::size_t points = 1 + static_cast<std::size_t>(rng() % 1000);
        std::vector<double> w(points);
        double total = 0.0;
        for (auto& x : w) total += (x = uniform() + 1e-3);
        for (auto& x : w) x /= total;
        std::vector<double> f(points);
        for (auto& y : f) y = (rng() & 1) ? 1.0 : -1.0;
        const auto rep = check_expectation_lemma(FiniteProbabilitySpace::from_weights(w), f, psi,
                                                 pauli(3));
        max_gap = std::max(max_gap, std::abs(rep.partition_sum - rep.point_sum));
        if (!rep.rearrangement_holds || !rep.preimages_disjoint) ++failures;
    }
    passed = passed && failures == 0;

    Json r;
    r["axes"] = axes;
    r["rearrangement"] = Json{{"spaces", spaces}, {"failures", failures}, {"max_gap", max_gap}};
    r["passed"] = passed;
    return {r, passed};
}

inline Section contrast(const RunConfig& c, const DensityOperator& psi, const HVModel& model,
                        const SphericalGrid& grid) {
    const Budget budget = model.is_finite() ? Budget::exact() : Budget::samples(c.samples);
    const ContrastReport rep = inconsistency_report(
        psi, model, grid, budget, std::min<std::size_t>(c.samples, 100000), c.seed);
    return {to_json(rep), true};
}

} // namespace detail

// Executes one command. Exit codes: 0 all checks pass (contrast always 0,
// with the verdict in `contradiction`), 1 a check failed, 2 bad input.
inline RunResult run(const RunConfig& c) {
    Report report;
    report.command = to_string(c.command);
    report.config = config_json(c);
    try {
        const SphericalGrid grid = product_gauss_grid(c.n_polar, c.n_azimuthal);
        report.metadata = metadata_json(c.seed, grid);
        const DensityOperator psi = state_from_bloch(c.state);
        const auto model = [&] { return make_model(c); };

        bool passed = true;
        switch (c.command) {
        case Command::verify_quantum: {
            auto s = detail::verify_quantum(psi, grid);
            report.results = std::move(s.results);
            passed = s.passed;
            break;
        }
        case Command::verify_hv: {
            auto s = detail::verify_hv(c, psi, model(), grid);
            report.results = std::move(s.results);
            passed = s.passed;
            break;
        }
        case Command::lemma_check: {
            auto s = detail::lemma_check(c, psi);
            report.results = std::move(s.results);
            passed = s.passed;
            break;
        }
        case Command::contrast: {
            auto s = detail::contrast(c, psi, model(), grid);
            report.results = std::move(s.results);
            break;
        }
        case Command::all: {
            const HVModel m = model();
            auto q = detail::verify_quantum(psi, grid);
            auto h = detail::verify_hv(c, psi, m, grid);
            auto l = detail::lemma_check(c, psi);
            auto k = detail::contrast(c, psi, m, grid);
            report.results["verify_quantum"] = std::move(q.results);
            report.results["verify_hv"] = std::move(h.results);
            report.results["lemma_check"] = std::move(l.results);
            report.results["contrast"] = std::move(k.results);
            passed = q.passed && h.passed && l.passed;
            report.results["passed"] = passed;
            break;
        }
        }
        return {passed ? kExitOk : kExitCheckFailed, std::move(report)};
    } catch (const InvalidArgument& e) {
        report.results = Json{{"error", e.what()}};
        return {kExitUsage, std::move(report)};
    } catch (const BlochViolation& e) {
        report.results = Json{{"error", e.what()}};
        return {kExitUsage, std::move(report)};
    }
}

} // namespace nogo::cli
