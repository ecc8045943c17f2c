// qm_core.hpp
// Two-dimensional Hilbert-space machinery: Hermitian operators, density
// operators, Bloch vectors, spectral decomposition and the Born rule.
//
// Everything is a small immutable value; no general-n code paths.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "nogo/errors.hpp"

namespace nogo {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-12;
inline constexpr double kBlochTol = 1e-12;
inline constexpr double kPurityTol = 1e-10;
// Membership test y in Delta for eigenvalues.
inline constexpr double kEigenMatchTol = 1e-9;
// Below this |r| an operator t*I + r.sigma is treated as degenerate.
inline constexpr double kDegeneracyTol = 1e-12;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm_sq(const Vec3& a) { return dot(a, a); }

inline double norm(const Vec3& a) { return std::sqrt(norm_sq(a)); }

// Row-major 2x2 complex matrix.
class Matrix2 {
public:
    constexpr Matrix2() = default;
    constexpr Matrix2(Complex a00, Complex a01, Complex a10, Complex a11)
        : e_{a00, a01, a10, a11} {}

    static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Matrix2 zero() { return {}; }

    constexpr Complex operator()(int row, int col) const { return e_[2 * row + col]; }

    Complex trace() const { return e_[0] + e_[3]; }

    Matrix2 adjoint() const {
        return {std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]), std::conj(e_[3])};
    }

    // Largest entrywise modulus of (this - other).
    double max_abs_diff(const Matrix2& other) const {
        double d = 0.0;
        for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(e_[i] - other.e_[i]));
        return d;
    }

    friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
        return {a.e_[0] + b.e_[0], a.e_[1] + b.e_[1], a.e_[2] + b.e_[2], a.e_[3] + b.e_[3]};
    }
    friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
        return {a.e_[0] - b.e_[0], a.e_[1] - b.e_[1], a.e_[2] - b.e_[2], a.e_[3] - b.e_[3]};
    }
    friend Matrix2 operator*(Complex s, const Matrix2& a) {
        return {s * a.e_[0], s * a.e_[1], s * a.e_[2], s * a.e_[3]};
    }
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        return {a.e_[0] * b.e_[0] + a.e_[1] * b.e_[2], a.e_[0] * b.e_[1] + a.e_[1] * b.e_[3],
                a.e_[2] * b.e_[0] + a.e_[3] * b.e_[2], a.e_[2] * b.e_[1] + a.e_[3] * b.e_[3]};
    }

private:
    std::array<Complex, 4> e_{};
};

namespace detail {

inline bool is_hermitian(const Matrix2& m, double tol = kHermitianTol) {
    return m.max_abs_diff(m.adjoint()) <= tol;
}

// Coordinates of a Hermitian m = t*I + r.sigma.
struct PauliExpansion {
    double t;
    Vec3 r;
};

inline PauliExpansion pauli_expansion(const Matrix2& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const Complex b = m(0, 1);
    return {(a + d) / 2.0, {b.real(), -b.imag(), (a - d) / 2.0}};
}

inline Matrix2 from_pauli_expansion(double t, const Vec3& r) {
    return {Complex(t + r[2], 0.0), Complex(r[0], -r[1]), Complex(r[0], r[1]),
            Complex(t - r[2], 0.0)};
}

} // namespace detail

// 2x2 Hermitian operator; the only observables in the two-dimensional theory.
class HermitianOp {
public:
    // Throws InvalidArgument when |m(i,j) - conj(m(j,i))| > 1e-12.
    static HermitianOp from_matrix(const Matrix2& m) {
        if (!detail::is_hermitian(m))
            throw InvalidArgument("matrix is not Hermitian within 1e-12");
        return HermitianOp(m);
    }

    // t*I + r.sigma; Hermitian by construction.
    static HermitianOp from_pauli_expansion(double t, const Vec3& r) {
        return HermitianOp(detail::from_pauli_expansion(t, r));
    }

    const Matrix2& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    friend HermitianOp operator+(const HermitianOp& a, const HermitianOp& b) {
        return HermitianOp(a.m_ + b.m_);
    }
    friend HermitianOp operator*(double s, const HermitianOp& a) {
        return HermitianOp(Complex(s, 0.0) * a.m_);
    }

private:
    explicit HermitianOp(const Matrix2& m) : m_(m) {}
    Matrix2 m_;
};

// Positive, unit-trace 2x2 operator psi = (I + T.sigma)/2.
class DensityOperator {
public:
    static DensityOperator from_matrix(const Matrix2& m) {
        if (!detail::is_hermitian(m))
            throw InvalidArgument("density operator must be Hermitian");
        if (std::abs(m.trace() - Complex(1.0, 0.0)) > kTraceTol)
            throw InvalidArgument("density operator must have unit trace");
        const auto [t, r] = detail::pauli_expansion(m);
        if (t - norm(r) < -kPositivityTol)
            throw InvalidArgument("density operator must be positive semidefinite");
        return DensityOperator(m);
    }

    const Matrix2& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    // Tr[psi^2]
    double purity() const { return (m_ * m_).trace().real(); }

    bool is_pure() const { return std::abs(purity() - 1.0) <= kPurityTol; }

private:
    friend DensityOperator state_from_bloch(const Vec3& r);
    explicit DensityOperator(const Matrix2& m) : m_(m) {}
    Matrix2 m_;
};

// Unit vector n(theta, phi) = (sin t cos p, sin t sin p, cos t).
class Direction {
public:
    // theta in [0, pi], phi in [0, 2 pi).
    static Direction from_angles(double theta, double phi) {
        if (!(theta >= 0.0 && theta <= std::numbers::pi))
            throw InvalidArgument("polar angle must lie in [0, pi]");
        if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
            throw InvalidArgument("azimuthal angle must lie in [0, 2 pi)");
        return Direction(theta, phi);
    }

    // Any non-zero vector; only its direction is kept.
    static Direction from_vector(const Vec3& v) {
        const double len = norm(v);
        if (!(len > 0.0) || !std::isfinite(len))
            throw InvalidArgument("direction vector must be non-zero and finite");
        const double z = std::clamp(v[2] / len, -1.0, 1.0);
        double phi = std::atan2(v[1], v[0]);
        if (phi < 0.0) phi += 2.0 * std::numbers::pi;
        if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
        return Direction(std::acos(z), phi);
    }

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    // Cartesian components (c1, c2, c3).
    const Vec3& unit() const { return unit_; }
    double c(int i) const { return unit_[static_cast<std::size_t>(i - 1)]; }

private:
    Direction(double theta, double phi)
        : theta_(theta), phi_(phi),
          unit_{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta)} {}

    double theta_;
    double phi_;
    Vec3 unit_;
};

// Spectral points of a Hermitian operator, sorted descending, with their
// orthogonal projectors. Degenerate operators carry one point and a rank-2
// projector.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<HermitianOp> projectors;
};

// Delta: either a finite set of real points or a closed interval [lo, hi].
class OutcomeSet {
public:
    struct Interval {
        double lo;
        double hi;
    };

    static OutcomeSet points(std::vector<double> values) { return OutcomeSet(std::move(values)); }
    static OutcomeSet interval(double lo, double hi) {
        if (!(lo <= hi)) throw InvalidArgument("interval requires lo <= hi");
        return OutcomeSet(Interval{lo, hi});
    }

    bool contains(double y) const {
        if (const auto* pts = std::get_if<std::vector<double>>(&set_)) {
            return std::any_of(pts->begin(), pts->end(),
                               [y](double p) { return std::abs(p - y) <= kEigenMatchTol; });
        }
        const auto& iv = std::get<Interval>(set_);
        return y >= iv.lo - kEigenMatchTol && y <= iv.hi + kEigenMatchTol;
    }

private:
    explicit OutcomeSet(std::variant<std::vector<double>, Interval> s) : set_(std::move(s)) {}
    std::variant<std::vector<double>, Interval> set_;
};

// sigma_x, sigma_y, sigma_z for axis_index 1, 2, 3.
inline HermitianOp pauli(int axis_index) {
    switch (axis_index) {
    case 1: return HermitianOp::from_pauli_expansion(0.0, {1.0, 0.0, 0.0});
    case 2: return HermitianOp::from_pauli_expansion(0.0, {0.0, 1.0, 0.0});
    case 3: return HermitianOp::from_pauli_expansion(0.0, {0.0, 0.0, 1.0});
    default:
        throw InvalidArgument("pauli axis index must be 1, 2 or 3, got " +
                              std::to_string(axis_index));
    }
}

// n.sigma
inline HermitianOp direction_operator(const Direction& n) {
    return HermitianOp::from_pauli_expansion(0.0, n.unit());
}

// (I + r.sigma)/2; throws BlochViolation when |r| > 1 + 1e-12.
inline DensityOperator state_from_bloch(const Vec3& r) {
    for (double x : r)
        if (!std::isfinite(x)) throw InvalidArgument("Bloch vector must be finite");
    if (norm(r) > 1.0 + kBlochTol)
        throw BlochViolation("Bloch vector norm " + std::to_string(norm(r)) +
                             " exceeds 1; not a physical state");
    return DensityOperator(detail::from_pauli_expansion(0.5, {r[0] / 2, r[1] / 2, r[2] / 2}));
}

// (T1, T2, T3) with T_i = Tr[psi sigma_i].
inline Vec3 bloch_vector(const DensityOperator& psi) {
    Vec3 t{};
    for (int i = 1; i <= 3; ++i)
        t[static_cast<std::size_t>(i - 1)] = (psi.matrix() * pauli(i).matrix()).trace().real();
    return t;
}

inline Spectrum spectral_decomposition(const HermitianOp& a) {
    const auto [t, r] = detail::pauli_expansion(a.matrix());
    const double len = norm(r);
    if (len <= kDegeneracyTol)
        return {{t}, {HermitianOp::from_pauli_expansion(1.0, {0.0, 0.0, 0.0})}};
    const Vec3 half{r[0] / (2 * len), r[1] / (2 * len), r[2] / (2 * len)};
    const Vec3 neg_half{-half[0], -half[1], -half[2]};
    return {{t + len, t - len},
            {HermitianOp::from_pauli_expansion(0.5, half),
             HermitianOp::from_pauli_expansion(0.5, neg_half)}};
}

// Validating overload for raw matrices.
inline Spectrum spectral_decomposition(const Matrix2& m) {
    return spectral_decomposition(HermitianOp::from_matrix(m));
}

// chi_Delta(A) = sum of projectors whose eigenvalue lies in Delta.
inline Matrix2 characteristic_projector(const HermitianOp& a, const OutcomeSet& delta) {
    const Spectrum s = spectral_decomposition(a);
    Matrix2 chi = Matrix2::zero();
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
        if (delta.contains(s.eigenvalues[k])) chi = chi + s.projectors[k].matrix();
    return chi;
}

// Tr[psi chi_Delta(A)]
inline double born_probability(const DensityOperator& psi, const HermitianOp& a,
                               const OutcomeSet& delta) {
    const double p = (psi.matrix() * characteristic_projector(a, delta)).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

// Tr[psi n.sigma]
inline double expectation(const DensityOperator& psi, const Direction& n) {
    return (psi.matrix() * direction_operator(n).matrix()).trace().real();
}

} // namespace nogo
