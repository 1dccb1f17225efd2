// state.hpp
// Complex state-vector algebra for a two-mode Fock space truncated to
// occupation {0,1} per mode.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace fockbell {

using Complex = std::complex<double>;

/// Tolerance used for normalization, hermiticity and golden-value checks.
inline constexpr double kTolerance = 1e-12;

/// Thrown when a constructor receives a (near-)zero or non-finite vector.
struct DegenerateState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace detail

/// Normalized single-mode vector over {|0>, |1>}. Used both as a
/// measurement direction and as a factor of a product state.
class ModeVector {
public:
    const std::array<Complex, 2>& amplitudes() const { return amps_; }
    Complex amplitude(int n) const { return amps_[static_cast<unsigned>(n)]; }

    friend ModeVector make_mode_vector(Complex c0, Complex c1);

private:
    ModeVector() = default;
    std::array<Complex, 2> amps_{};
};

/// Normalized state of two modes, amplitude order [|00>, |01>, |10>, |11>]
/// with index = 2*n_a + n_b (mode a = Alice, mode b = Bob).
class TwoModeState {
public:
    using Amplitudes = std::array<Complex, 4>;

    const Amplitudes& amplitudes() const { return amps_; }
    Complex amplitude(int n_a, int n_b) const { return amps_[index_of(n_a, n_b)]; }

    static constexpr std::size_t index_of(int n_a, int n_b) {
        return static_cast<std::size_t>(2 * n_a + n_b);
    }

    friend TwoModeState make_raw_state(const Amplitudes& amps);

private:
    TwoModeState() = default;
    Amplitudes amps_{};
};

/// Builds a normalized state from an arbitrary amplitude 4-vector.
/// Throws DegenerateState when the input is (near-)zero or non-finite.
inline TwoModeState make_raw_state(const TwoModeState::Amplitudes& amps) {
    double norm_sq = 0.0;
    for (Complex a : amps) {
        if (!detail::is_finite(a)) {
            throw DegenerateState("make_raw_state: non-finite amplitude");
        }
        norm_sq += std::norm(a);
    }
    if (norm_sq <= kTolerance) {
        throw DegenerateState("make_raw_state: amplitude vector has (near-)zero norm");
    }
    const double norm = std::sqrt(norm_sq);
    TwoModeState s;
    for (std::size_t i = 0; i < 4; ++i) s.amps_[i] = amps[i] / norm;
    return s;
}

/// Builds the normalized state p|10> + q|01> + r|00>; the |11> amplitude
/// is exactly zero.
inline TwoModeState make_state(Complex p, Complex q, Complex r) {
    return make_raw_state({r, q, p, Complex{0.0, 0.0}});
}

inline ModeVector make_mode_vector(Complex c0, Complex c1) {
    if (!detail::is_finite(c0) || !detail::is_finite(c1)) {
        throw DegenerateState("make_mode_vector: non-finite amplitude");
    }
    const double norm_sq = std::norm(c0) + std::norm(c1);
    if (norm_sq <= kTolerance) {
        throw DegenerateState("make_mode_vector: (near-)zero vector");
    }
    const double norm = std::sqrt(norm_sq);
    ModeVector v;
    v.amps_ = {c0 / norm, c1 / norm};
    return v;
}

/// Product state |a> (x) |b>.
inline TwoModeState tensor_product(const ModeVector& a, const ModeVector& b) {
    return make_raw_state({a.amplitude(0) * b.amplitude(0),
                           a.amplitude(0) * b.amplitude(1),
                           a.amplitude(1) * b.amplitude(0),
                           a.amplitude(1) * b.amplitude(1)});
}

/// <s|t>, conjugate-linear in the first argument.
inline Complex inner_product(const TwoModeState& s, const TwoModeState& t) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) {
        acc += std::conj(s.amplitudes()[i]) * t.amplitudes()[i];
    }
    return acc;
}

/// |<11|s>|^2, the weight of the two-particle component.
inline double two_particle_weight(const TwoModeState& s) {
    return std::norm(s.amplitudes()[TwoModeState::index_of(1, 1)]);
}

/// <N_a + N_b> where N counts occupation per mode; lies in [0, 2].
inline double total_number_expectation(const TwoModeState& s) {
    const auto& c = s.amplitudes();
    return std::norm(c[1]) + std::norm(c[2]) + 2.0 * std::norm(c[3]);
}

/// The antisymmetric one-particle state (|10> - |01>)/sqrt(2): one
/// particle shared coherently between the two modes, no vacuum component.
inline TwoModeState one_particle_singlet() {
    const double s = 1.0 / std::sqrt(2.0);
    return make_state(Complex{s, 0.0}, Complex{-s, 0.0}, Complex{0.0, 0.0});
}

}  // namespace fockbell
