// hv_models.hpp
// Classical probability spaces with response functions f_n(omega), the two
// concrete models (Kochen-Specker sign model, dispersion-free model) and the
// conformance checks for the spectrum, distribution-rule and expectation
// properties.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nogo/errors.hpp"
#include "nogo/qm_core.hpp"
#include "nogo/sphere_quad.hpp"

namespace nogo {

inline constexpr double kMeasureTol = 1e-12;
inline constexpr double kUnitBlochTol = 1e-10;

// Finite Omega with point masses mu(omega_i) = weights[i].
class FiniteProbabilitySpace {
public:
    static FiniteProbabilitySpace from_weights(std::vector<double> weights) {
        if (weights.empty()) throw InvalidArgument("probability space must be non-empty");
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw InvalidArgument("point weights must be finite and non-negative");
            total += w;
        }
        if (std::abs(total - 1.0) > kMeasureTol)
            throw InvalidArgument("point weights must sum to 1, got " + std::to_string(total));
        return FiniteProbabilitySpace(std::move(weights));
    }

    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }

private:
    explicit FiniteProbabilitySpace(std::vector<double> w) : weights_(std::move(w)) {}
    std::vector<double> weights_;
};

// Omega = unit sphere with the uniform measure, realized by seeded sampling.
struct SphereSampleSpace {
    std::uint64_t seed;
};

// A hidden variable: an index into a finite space, or a point on the sphere.
using SamplePoint = std::variant<std::size_t, Vec3>;

// f_n(omega), outcomes in hbar/2 units.
using ResponseFunction = std::function<double(const Direction&, const SamplePoint&)>;

// Evaluation budget: exact weighted sum (finite spaces) or N samples.
class Budget {
public:
    static Budget exact() { return Budget(0); }
    static Budget samples(std::size_t n) {
        if (n == 0) throw InvalidArgument("sample budget must be at least 1");
        return Budget(n);
    }

    bool is_exact() const { return samples_ == 0; }
    std::size_t sample_count() const { return samples_; }

private:
    explicit Budget(std::size_t n) : samples_(n) {}
    std::size_t samples_;
};

struct HVModel {
    std::variant<FiniteProbabilitySpace, SphereSampleSpace> space;
    ResponseFunction response;
    std::string label;
    // How mu_psi and f depend on the state.
    std::string state_dependence;

    bool is_finite() const { return std::holds_alternative<FiniteProbabilitySpace>(space); }
};

// Kochen-Specker sign model for the pure state with unit Bloch vector m:
// lambda uniform on the sphere, f_n(lambda) = sign((m + lambda).n), sign(0) = +1.
inline HVModel ks_model(const Vec3& m, std::uint64_t seed = 42) {
    if (std::abs(norm(m) - 1.0) > kUnitBlochTol)
        throw InvalidArgument("ks_model requires a unit Bloch vector (pure state)");
    ResponseFunction response = [m](const Direction& n, const SamplePoint& point) -> double {
        const auto* lambda = std::get_if<Vec3>(&point);
        if (lambda == nullptr) throw InvalidArgument("ks_model expects sphere sample points");
        const Vec3& u = n.unit();
        const double s = (m[0] + (*lambda)[0]) * u[0] + (m[1] + (*lambda)[1]) * u[1] +
                         (m[2] + (*lambda)[2]) * u[2];
        return s >= 0.0 ? 1.0 : -1.0;
    };
    return {SphereSampleSpace{seed}, std::move(response), "ks",
            "mu uniform on the sphere; state enters through m in f"};
}

// Dispersion-free model: one-point space, f_n(omega) = assign(n). Values
// outside {+1, -1} raise SpectrumViolation when evaluated.
inline HVModel deterministic_model(std::function<double(const Direction&)> assign) {
    ResponseFunction response = [assign = std::move(assign)](const Direction& n,
                                                             const SamplePoint&) -> double {
        const double v = assign(n);
        if (v != 1.0 && v != -1.0)
            throw SpectrumViolation("deterministic assignment returned " + std::to_string(v) +
                                    ", expected +1 or -1");
        return v;
    };
    return {FiniteProbabilitySpace::from_weights({1.0}), std::move(response), "deterministic",
            "dispersion-free; ignores the state"};
}

// sign(c3(n)) with sign(0) = +1.
inline double hemisphere_assignment(const Direction& n) { return n.c(3) >= 0.0 ? 1.0 : -1.0; }

// Finite model from per-point outcomes.
inline HVModel finite_model(FiniteProbabilitySpace space,
                            std::function<double(const Direction&, std::size_t)> outcome,
                            std::string label) {
    ResponseFunction response = [outcome = std::move(outcome)](const Direction& n,
                                                               const SamplePoint& point) {
        const auto* index = std::get_if<std::size_t>(&point);
        if (index == nullptr) throw InvalidArgument("finite model expects point indices");
        return outcome(n, *index);
    };
    return {std::move(space), std::move(response), std::move(label), "custom"};
}

// Measure of f_n^-1(+1), f_n^-1(-1) and of everything else, with the mean
// and its standard error. Exact evaluations report std_error = 0, samples = 0.
struct OutcomeTally {
    double measure_plus = 0.0;
    double measure_minus = 0.0;
    double measure_other = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

struct Estimate {
    double value;
    double std_error;
    std::size_t samples;
};

namespace detail {

inline void classify(OutcomeTally& t, double v, double w) {
    if (v == 1.0)
        t.measure_plus += w;
    else if (v == -1.0)
        t.measure_minus += w;
    else
        t.measure_other += w;
}

inline void require_finite_outcome(double v, const Direction& n) {
    if (!std::isfinite(v))
        throw NumericFailure("response function returned " + std::to_string(v) +
                             " at theta=" + std::to_string(n.theta()) +
                             ", phi=" + std::to_string(n.phi()));
}

// Sample stream for one direction: depends only on the model seed and the
// direction's exact angles.
inline std::uint64_t direction_seed(std::uint64_t seed, const Direction& n) {
    return derive_seed(seed, std::bit_cast<std::uint64_t>(n.theta()),
                       std::bit_cast<std::uint64_t>(n.phi()));
}

} // namespace detail

// Finite spaces are always evaluated exactly; sphere spaces need a sample budget.
inline OutcomeTally tally_direction(const HVModel& model, const Direction& n,
                                    const Budget& budget) {
    OutcomeTally t;
    if (const auto* finite = std::get_if<FiniteProbabilitySpace>(&model.space)) {
        const auto& w = finite->weights();
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double v = model.response(n, SamplePoint{i});
            detail::require_finite_outcome(v, n);
            detail::classify(t, v, w[i]);
            t.mean += w[i] * v;
        }
        return t;
    }
    if (budget.is_exact())
        throw InvalidArgument("sphere sample spaces require a sample budget, not exact mode");
    const auto& sphere = std::get<SphereSampleSpace>(model.space);
    const std::size_t count = budget.sample_count();
    UnitVectorSampler sampler(detail::direction_seed(sphere.seed, n));
    std::size_t plus = 0;
    std::size_t minus = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = model.response(n, SamplePoint{sampler.next_vector()});
        detail::require_finite_outcome(v, n);
        if (v == 1.0)
            ++plus;
        else if (v == -1.0)
            ++minus;
        sum += v;
        sum_sq += v * v;
    }
    const double nd = static_cast<double>(count);
    t.measure_plus = static_cast<double>(plus) / nd;
    t.measure_minus = static_cast<double>(minus) / nd;
    t.measure_other = static_cast<double>(count - plus - minus) / nd;
    t.mean = sum / nd;
    if (count > 1) {
        const double var = std::max(0.0, (sum_sq - nd * t.mean * t.mean) / (nd - 1.0));
        t.std_error = std::sqrt(var / nd);
    } else {
        t.std_error = 1.0;
    }
    t.samples = count;
    return t;
}

// integral mu_psi(d omega) f_n(omega)
inline Estimate hv_expectation(const HVModel& model, const Direction& n, const Budget& budget) {
    const OutcomeTally t = tally_direction(model, n, budget);
    return {t.mean, t.std_error, t.samples};
}

// ---------------------------------------------------------------------------
// Checks. Failures are report outcomes, not exceptions.

struct DistributionRuleReport {
    double theta;
    double phi;
    double preimage_measure; // mu(f_n^-1({+1}))
    double born;             // Tr[psi chi_{+1}(n.sigma)]
    double deviation;
    double tolerance;
    std::size_t samples;
    bool passed;
};

inline DistributionRuleReport distribution_rule_from_tally(const OutcomeTally& t,
                                                           const DensityOperator& psi,
                                                           const Direction& n) {
    const double born = born_probability(psi, direction_operator(n), OutcomeSet::points({1.0}));
    double tol = kMeasureTol;
    if (t.samples > 0)
        tol += 4.0 * std::sqrt(born * (1.0 - born) / static_cast<double>(t.samples));
    const double dev = std::abs(t.measure_plus - born);
    return {n.theta(), n.phi(), t.measure_plus, born, dev, tol, t.samples, dev <= tol};
}

// mu(f_n^-1({+1})) against the Born probability of +1 for n.sigma, at
// tolerance 4 sqrt(p(1-p)/N) (1e-12 in exact mode).
inline DistributionRuleReport check_distribution_rule(const HVModel& model,
                                                      const DensityOperator& psi,
                                                      const Direction& n,
                                                      const Budget& budget) {
    return distribution_rule_from_tally(tally_direction(model, n, budget), psi, n);
}

struct SpectrumSupportReport {
    std::size_t evaluations = 0;
    std::size_t violations = 0;
    std::optional<double> first_violation;
    bool passed() const { return violations == 0; }
};

// Evaluates f over about sample_budget (direction, point) pairs drawn from
// `seed` and counts outcomes outside {+1, -1}.
inline SpectrumSupportReport check_spectrum_support(const HVModel& model,
                                                    std::size_t sample_budget,
                                                    std::uint64_t seed = 42) {
    SpectrumSupportReport report;
    UnitVectorSampler directions(derive_seed(seed, 0x5350454354ULL));
    const auto record = [&](const Direction& n, const SamplePoint& point) {
        ++report.evaluations;
        double v = 0.0;
        try {
            v = model.response(n, point);
        } catch (const SpectrumViolation&) {
            v = std::numeric_limits<double>::quiet_NaN();
        }
        if (v != 1.0 && v != -1.0) {
            ++report.violations;
            if (!report.first_violation) report.first_violation = v;
        }
    };
    if (const auto* finite = std::get_if<FiniteProbabilitySpace>(&model.space)) {
        const std::size_t n_dirs = std::max<std::size_t>(1, sample_budget / finite->size());
        for (std::size_t d = 0; d < n_dirs; ++d) {
            const Direction n = directions.next_direction();
            for (std::size_t i = 0; i < finite->size(); ++i) record(n, SamplePoint{i});
        }
        return report;
    }
    const auto& sphere = std::get<SphereSampleSpace>(model.space);
    UnitVectorSampler points(derive_seed(sphere.seed, seed));
    for (std::size_t k = 0; k < sample_budget; ++k)
        record(directions.next_direction(), SamplePoint{points.next_vector()});
    return report;
}

struct LemmaReport {
    std::vector<double> eigenvalues;
    std::vector<double> preimage_measures; // mu(f^-1({y})) per eigenvalue
    std::vector<double> born;              // Prob({y}) per eigenvalue
    double partition_sum;                  // sum_y mu(f^-1({y})) y
    double point_sum;                      // sum_omega mu(omega) f(omega)
    double trace_value;                    // Tr[psi A]
    bool preimages_disjoint;
    bool rearrangement_holds;
    bool distribution_rule_holds;
    bool trace_matches;
    // Rearrangement holds, and Tr[psi A] agrees whenever the distribution rule does.
    bool passed() const {
        return preimages_disjoint && rearrangement_holds &&
               (!distribution_rule_holds || trace_matches);
    }
};

// Walks the expectation-lemma chain on a finite space: partition-indexed sum
// equals point-indexed sum, and both equal Tr[psi A] when the preimage
// measures reproduce the Born probabilities. Throws SpectrumViolation when
// an outcome is not an eigenvalue of `a`.
inline LemmaReport check_expectation_lemma(const FiniteProbabilitySpace& space,
                                           const std::vector<double>& outcomes,
                                           const DensityOperator& psi, const HermitianOp& a) {
    if (outcomes.size() != space.size())
        throw InvalidArgument("need exactly one outcome per sample point");
    const Spectrum spectrum = spectral_decomposition(a);
    const std::size_t k = spectrum.eigenvalues.size();

    // Preimage f^-1({y}) for each eigenvalue y, as point indices.
    std::vector<std::vector<std::size_t>> preimages(k);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        bool matched = false;
        for (std::size_t j = 0; j < k; ++j) {
            if (std::abs(outcomes[i] - spectrum.eigenvalues[j]) <= kEigenMatchTol) {
                preimages[j].push_back(i);
                matched = true;
            }
        }
        if (!matched)
            throw SpectrumViolation("outcome " + std::to_string(outcomes[i]) + " at point " +
                                    std::to_string(i) + " is not an eigenvalue");
    }

    LemmaReport r;
    r.eigenvalues = spectrum.eigenvalues;
    r.preimages_disjoint = true;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = j + 1; l < k; ++l)
            for (std::size_t i : preimages[j])
                if (std::find(preimages[l].begin(), preimages[l].end(), i) != preimages[l].end())
                    r.preimages_disjoint = false;

    r.partition_sum = 0.0;
    r.distribution_rule_holds = true;
    for (std::size_t j = 0; j < k; ++j) {
        double mu = 0.0;
        for (std::size_t i : preimages[j]) mu += space.weights()[i];
        const double y = spectrum.eigenvalues[j];
        const double born = born_probability(psi, a, OutcomeSet::points({y}));
        r.preimage_measures.push_back(mu);
        r.born.push_back(born);
        r.partition_sum += mu * y;
        if (std::abs(mu - born) > kMeasureTol) r.distribution_rule_holds = false;
    }

    r.point_sum = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        r.point_sum += space.weights()[i] * outcomes[i];
        scale = std::max(scale, std::abs(outcomes[i]));
    }
    r.trace_value = (psi.matrix() * a.matrix()).trace().real();
    r.rearrangement_holds = std::abs(r.partition_sum - r.point_sum) <= kMeasureTol * scale;
    r.trace_matches = std::abs(r.trace_value - r.point_sum) <= kMeasureTol * scale;
    return r;
}

} // namespace nogo
