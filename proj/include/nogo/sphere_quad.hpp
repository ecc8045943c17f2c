// sphere_quad.hpp
// Quadrature and seeded uniform sampling over the sphere of measurement
// directions, with measure dOmega = sin(theta) dtheta dphi (total 4 pi).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nogo/errors.hpp"
#include "nogo/qm_core.hpp"

namespace nogo {

struct GridNode {
    Direction direction;
    double weight; // steradians
};

// Product rule: Gauss-Legendre in cos(theta) times the periodic trapezoid in phi.
class SphericalGrid {
public:
    SphericalGrid(std::vector<GridNode> nodes, int n_polar, int n_azimuthal)
        : nodes_(std::move(nodes)), n_polar_(n_polar), n_azimuthal_(n_azimuthal) {}

    const std::vector<GridNode>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    int n_polar() const { return n_polar_; }
    int n_azimuthal() const { return n_azimuthal_; }

    double total_weight() const {
        double s = 0.0;
        for (const auto& node : nodes_) s += node.weight;
        return s;
    }

private:
    std::vector<GridNode> nodes_;
    int n_polar_;
    int n_azimuthal_;
};

struct GaussLegendreRule {
    std::vector<double> nodes;   // ascending in [-1, 1]
    std::vector<double> weights; // sum to 2
};

// Newton iteration on P_n from the Chebyshev initial guess.
inline GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
    GaussLegendreRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    // P_n(x) and P_{n-1}(x) by the three-term recurrence.
    const auto legendre = [n](double x) {
        double prev = 1.0;
        double cur = x;
        for (int k = 2; k <= n; ++k) {
            const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
            prev = cur;
            cur = next;
        }
        return std::pair{cur, prev};
    };
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, p_prev] = legendre(x);
            const double dx = p / (n * (x * p - p_prev) / (x * x - 1.0));
            x -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        const auto [p, p_prev] = legendre(x);
        const double dp = n * (x * p - p_prev) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

// Exact for spherical polynomials of degree <= min(2 n_polar - 1, n_azimuthal - 1).
inline SphericalGrid product_gauss_grid(int n_polar, int n_azimuthal) {
    if (n_polar < 2)
        throw InvalidArgument("n_polar must be >= 2, got " + std::to_string(n_polar));
    if (n_azimuthal < 5)
        throw InvalidArgument("n_azimuthal must be >= 5, got " + std::to_string(n_azimuthal));
    const GaussLegendreRule rule = gauss_legendre(n_polar);
    const double dphi = 2.0 * std::numbers::pi / n_azimuthal;
    std::vector<GridNode> nodes;
    nodes.reserve(static_cast<std::size_t>(n_polar) * static_cast<std::size_t>(n_azimuthal));
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double theta = std::acos(rule.nodes[i]);
        for (int j = 0; j < n_azimuthal; ++j)
            nodes.push_back({Direction::from_angles(theta, j * dphi), rule.weights[i] * dphi});
    }
    return SphericalGrid(std::move(nodes), n_polar, n_azimuthal);
}

inline SphericalGrid default_grid() { return product_gauss_grid(8, 16); }

namespace detail {

inline void require_finite(double v, std::size_t index, const Direction& n) {
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite integrand value " << v << " at node " << index
            << " (theta=" << n.theta() << ", phi=" << n.phi() << ")";
        throw NumericFailure(msg.str());
    }
}

// Neumaier summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

} // namespace detail

// Weighted sum of precomputed node values, in node order.
inline double integrate_values(const SphericalGrid& grid, const std::vector<double>& values) {
    if (values.size() != grid.size())
        throw InvalidArgument("value count does not match grid size");
    detail::CompensatedSum sum;
    for (std::size_t i = 0; i < values.size(); ++i) {
        detail::require_finite(values[i], i, grid.nodes()[i].direction);
        sum.add(grid.nodes()[i].weight * values[i]);
    }
    return sum.value();
}

// sum_k w_k f(n_k). Throws NumericFailure naming the first non-finite node.
template <typename F>
double integrate(F&& f, const SphericalGrid& grid) {
    std::vector<double> values;
    values.reserve(grid.size());
    for (const auto& node : grid.nodes()) values.push_back(static_cast<double>(f(node.direction)));
    return integrate_values(grid, values);
}

// Evaluates f at every node, splitting the node range across worker threads.
// Each value depends only on its node, so the result does not depend on the
// worker count.
template <typename R, typename F>
std::vector<R> map_nodes(const SphericalGrid& grid, F&& f, unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n = grid.size();
    std::vector<R> out(n);
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(grid.nodes()[i].direction);
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = f(grid.nodes()[i].direction);
        });
    }
    pool.clear();
    return out;
}

// Entry (a, b) = integral of c^a c^b; (4 pi / 3) I on an exact grid.
inline std::array<std::array<double, 3>, 3> orthogonality_table(const SphericalGrid& grid) {
    std::array<std::array<double, 3>, 3> table{};
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            table[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] =
                integrate([a, b](const Direction& n) { return n.c(a) * n.c(b); }, grid);
    return table;
}

// ---------------------------------------------------------------------------
// Sampling

inline constexpr const char* kRngName = "mt19937_64/splitmix64-substreams";

// SplitMix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(seed) ^ a) ^ b);
}

struct SampleStream {
    std::uint64_t seed;
    std::size_t count;
};

// Uniform points on the unit sphere: cos(theta) uniform on [-1, 1], phi
// uniform on [0, 2 pi). Bit-reproducible: the engine is fully specified by
// the standard and the double conversion is done by hand.
class UnitVectorSampler {
public:
    explicit UnitVectorSampler(std::uint64_t seed) : engine_(seed) {}

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    Vec3 next_vector() {
        const double z = 1.0 - 2.0 * uniform();
        const double phi = 2.0 * std::numbers::pi * uniform();
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

    Direction next_direction() {
        const double z = 1.0 - 2.0 * uniform();
        const double phi = std::min(2.0 * std::numbers::pi * uniform(),
                                    std::nextafter(2.0 * std::numbers::pi, 0.0));
        return Direction::from_angles(std::acos(z), phi);
    }

private:
    std::mt19937_64 engine_;
};

inline std::vector<Direction> sample_directions(const SampleStream& stream) {
    UnitVectorSampler sampler(stream.seed);
    std::vector<Direction> out;
    out.reserve(stream.count);
    for (std::size_t i = 0; i < stream.count; ++i) out.push_back(sampler.next_direction());
    return out;
}

} // namespace nogo
