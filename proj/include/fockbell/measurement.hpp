// measurement.hpp
// Measurement settings, rank-1 mode projectors, expectation values, joint
// outcome distributions, projective (Lüders) collapse and the
// number-operator commutator.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fockbell/state.hpp"

namespace fockbell {

struct NonHermitianOperator : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZeroProbabilityOutcome : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Angle pair (theta, phi) selecting the mode direction
///     |m> = cos(theta)|0> + e^{i phi} sin(theta)|1>.
/// theta in [0, pi/2] covers every rank-1 projector up to global phase;
/// phi is wrapped into [0, 2pi).
class MeasurementSetting {
public:
    MeasurementSetting(double theta, double phi) : theta_(theta), phi_(phi) {
        if (!std::isfinite(theta) || !std::isfinite(phi)) {
            throw std::invalid_argument("MeasurementSetting: non-finite angle");
        }
        if (theta < 0.0 || theta > std::numbers::pi / 2.0) {
            throw std::invalid_argument("MeasurementSetting: theta outside [0, pi/2]");
        }
        const double two_pi = 2.0 * std::numbers::pi;
        phi_ = std::fmod(phi_, two_pi);
        if (phi_ < 0.0) phi_ += two_pi;
    }

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    /// The unit vector cos(theta)|0> + e^{i phi} sin(theta)|1>.
    ModeVector target_vector() const {
        return make_mode_vector(Complex{std::cos(theta_), 0.0},
                                std::polar(std::sin(theta_), phi_));
    }

private:
    double theta_;
    double phi_;
};

/// Occupation test: the projector direction is |1> itself.
inline MeasurementSetting presence_setting() {
    return MeasurementSetting(std::numbers::pi / 2.0, 0.0);
}

/// 2x2 complex operator on one mode's {|0>, |1>} space.
class ModeOperator {
public:
    using Entries = std::array<std::array<Complex, 2>, 2>;

    explicit ModeOperator(const Entries& entries) : entries_(entries) {
        for (const auto& row : entries_) {
            for (Complex e : row) {
                if (!detail::is_finite(e)) {
                    throw std::invalid_argument("ModeOperator: non-finite entry");
                }
            }
        }
    }

    static ModeOperator identity() {
        return ModeOperator({{{Complex{1.0, 0.0}, Complex{0.0, 0.0}},
                              {Complex{0.0, 0.0}, Complex{1.0, 0.0}}}});
    }

    /// Number operator diag(0, 1).
    static ModeOperator number() {
        return ModeOperator({{{Complex{0.0, 0.0}, Complex{0.0, 0.0}},
                              {Complex{0.0, 0.0}, Complex{1.0, 0.0}}}});
    }

    const Entries& entries() const { return entries_; }
    Complex entry(int row, int col) const {
        return entries_[static_cast<unsigned>(row)][static_cast<unsigned>(col)];
    }

    bool is_hermitian(double tol = kTolerance) const {
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                if (std::abs(entries_[static_cast<unsigned>(r)][static_cast<unsigned>(c)] -
                             std::conj(entries_[static_cast<unsigned>(c)][static_cast<unsigned>(r)])) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    Complex trace() const { return entries_[0][0] + entries_[1][1]; }

private:
    Entries entries_;
};

/// I - M, the complementary outcome operator.
inline ModeOperator complement(const ModeOperator& m) {
    const ModeOperator id = ModeOperator::identity();
    ModeOperator::Entries e;
    for (unsigned r = 0; r < 2; ++r) {
        for (unsigned c = 0; c < 2; ++c) {
            e[r][c] = id.entries()[r][c] - m.entries()[r][c];
        }
    }
    return ModeOperator(e);
}

/// |m><m| for the setting's target vector; Hermitian, idempotent, trace 1.
inline ModeOperator mode_projector(const MeasurementSetting& m) {
    const ModeVector v = m.target_vector();
    ModeOperator::Entries e;
    for (unsigned r = 0; r < 2; ++r) {
        for (unsigned c = 0; c < 2; ++c) {
            e[r][c] = v.amplitude(static_cast<int>(r)) * std::conj(v.amplitude(static_cast<int>(c)));
        }
    }
    return ModeOperator(e);
}

/// <s| opA (x) opB |s> for Hermitian operators; the imaginary residue is
/// checked against tolerance and discarded. Pass ModeOperator::identity()
/// for a single-side expectation.
inline double expectation(const TwoModeState& s, const ModeOperator& op_a,
                          const ModeOperator& op_b) {
    if (!op_a.is_hermitian() || !op_b.is_hermitian()) {
        throw NonHermitianOperator("expectation: operator fails hermiticity check");
    }
    const auto& c = s.amplitudes();
    Complex acc{0.0, 0.0};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    acc += std::conj(c[TwoModeState::index_of(i, j)]) * op_a.entry(i, k) *
                           op_b.entry(j, l) * c[TwoModeState::index_of(k, l)];
                }
            }
        }
    }
    if (std::abs(acc.imag()) > kTolerance) {
        throw std::logic_error("expectation: imaginary residue above tolerance");
    }
    return acc.real();
}

/// Joint probabilities of the two binary outcomes; outcome 1 means the
/// projector fires, outcome 0 is the complement.
struct ProbTable {
    std::array<std::array<double, 2>, 2> p{};

    double operator()(int alice_outcome, int bob_outcome) const {
        return p[static_cast<unsigned>(alice_outcome)][static_cast<unsigned>(bob_outcome)];
    }
    double marginal_a(int alice_outcome) const {
        return p[static_cast<unsigned>(alice_outcome)][0] + p[static_cast<unsigned>(alice_outcome)][1];
    }
    double marginal_b(int bob_outcome) const {
        return p[0][static_cast<unsigned>(bob_outcome)] + p[1][static_cast<unsigned>(bob_outcome)];
    }
    double sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
};

inline ProbTable joint_distribution(const TwoModeState& s, const MeasurementSetting& a,
                                    const MeasurementSetting& b) {
    const ModeOperator pa = mode_projector(a);
    const ModeOperator pb = mode_projector(b);
    const std::array<ModeOperator, 2> ma{complement(pa), pa};
    const std::array<ModeOperator, 2> mb{complement(pb), pb};
    ProbTable t;
    for (unsigned i = 0; i < 2; ++i) {
        for (unsigned j = 0; j < 2; ++j) {
            t.p[i][j] = expectation(s, ma[i], mb[j]);
        }
    }
    return t;
}

enum class Side { A, B };

struct CollapseResult {
    TwoModeState state;
    double probability;
};

/// Lüders update: projects |s> with the outcome operator on one side,
/// renormalizes, and reports the outcome probability. Throws
/// ZeroProbabilityOutcome when that probability is <= 1e-12.
inline CollapseResult post_measurement_state(const TwoModeState& s, Side side,
                                             const MeasurementSetting& m, int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("post_measurement_state: outcome must be 0 or 1");
    }
    const ModeOperator proj = mode_projector(m);
    const ModeOperator op = (outcome == 1) ? proj : complement(proj);

    const auto& c = s.amplitudes();
    TwoModeState::Amplitudes out{};
    for (int na = 0; na < 2; ++na) {
        for (int nb = 0; nb < 2; ++nb) {
            Complex acc{0.0, 0.0};
            if (side == Side::A) {
                for (int k = 0; k < 2; ++k) acc += op.entry(na, k) * c[TwoModeState::index_of(k, nb)];
            } else {
                for (int l = 0; l < 2; ++l) acc += op.entry(nb, l) * c[TwoModeState::index_of(na, l)];
            }
            out[TwoModeState::index_of(na, nb)] = acc;
        }
    }

    double prob = 0.0;
    for (Complex a : out) prob += std::norm(a);
    if (prob <= kTolerance) {
        throw ZeroProbabilityOutcome("post_measurement_state: outcome probability below tolerance");
    }
    return CollapseResult{make_raw_state(out), prob};
}

namespace detail {

/// Spectral norm (largest singular value) of a 2x2 complex matrix.
inline double spectral_norm_2x2(const std::array<std::array<Complex, 2>, 2>& m) {
    // Eigenvalues of M^dagger M via trace/determinant closed form.
    std::array<std::array<Complex, 2>, 2> h{};
    for (unsigned r = 0; r < 2; ++r) {
        for (unsigned c = 0; c < 2; ++c) {
            h[r][c] = std::conj(m[0][r]) * m[0][c] + std::conj(m[1][r]) * m[1][c];
        }
    }
    const double tr = h[0][0].real() + h[1][1].real();
    const double det = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).real();
    const double disc = std::max(tr * tr - 4.0 * det, 0.0);
    const double lambda_max = 0.5 * (tr + std::sqrt(disc));
    return std::sqrt(std::max(lambda_max, 0.0));
}

}  // namespace detail

/// ||[P(m), N]|| with N = diag(0, 1); analytically |cos(theta) sin(theta)|.
inline double commutator_norm(const MeasurementSetting& m) {
    const ModeOperator p = mode_projector(m);
    const ModeOperator n = ModeOperator::number();
    std::array<std::array<Complex, 2>, 2> comm{};
    for (unsigned r = 0; r < 2; ++r) {
        for (unsigned c = 0; c < 2; ++c) {
            Complex pn{0.0, 0.0};
            Complex np{0.0, 0.0};
            for (unsigned k = 0; k < 2; ++k) {
                pn += p.entries()[r][k] * n.entries()[k][c];
                np += n.entries()[r][k] * p.entries()[k][c];
            }
            comm[r][c] = pn - np;
        }
    }
    return detail::spectral_norm_2x2(comm);
}

}  // namespace fockbell
