// optimize.hpp
// Grid sweeps over measurement settings and state coefficients, and a
// derivative-free search (coarse grid scan + cyclic coordinate descent)
// for the extremal CH value of a given state.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "fockbell/bell.hpp"
#include "fockbell/measurement.hpp"
#include "fockbell/state.hpp"

namespace fockbell {

struct BadGrid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Sweepable parameters: the eight setting angles and the three (real)
/// state coefficients of p|10> + q|01> + r|00>.
enum class SweepParameter {
    ThetaA,
    PhiA,
    ThetaAPrime,
    PhiAPrime,
    ThetaB,
    PhiB,
    ThetaBPrime,
    PhiBPrime,
    P,
    Q,
    R,
};

inline constexpr int kNumSettingParameters = 8;

constexpr bool is_setting_parameter(SweepParameter p) {
    return static_cast<int>(p) < kNumSettingParameters;
}

constexpr bool is_state_parameter(SweepParameter p) { return !is_setting_parameter(p); }

constexpr bool is_phi_parameter(SweepParameter p) {
    return is_setting_parameter(p) && (static_cast<int>(p) % 2 == 1);
}

inline const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::ThetaA: return "theta_a";
        case SweepParameter::PhiA: return "phi_a";
        case SweepParameter::ThetaAPrime: return "theta_ap";
        case SweepParameter::PhiAPrime: return "phi_ap";
        case SweepParameter::ThetaB: return "theta_b";
        case SweepParameter::PhiB: return "phi_b";
        case SweepParameter::ThetaBPrime: return "theta_bp";
        case SweepParameter::PhiBPrime: return "phi_bp";
        case SweepParameter::P: return "p";
        case SweepParameter::Q: return "q";
        case SweepParameter::R: return "r";
    }
    return "?";
}

inline std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
    constexpr std::array<SweepParameter, 11> all{
        SweepParameter::ThetaA,      SweepParameter::PhiA,   SweepParameter::ThetaAPrime,
        SweepParameter::PhiAPrime,   SweepParameter::ThetaB, SweepParameter::PhiB,
        SweepParameter::ThetaBPrime, SweepParameter::PhiBPrime, SweepParameter::P,
        SweepParameter::Q,           SweepParameter::R};
    for (SweepParameter p : all) {
        if (name == to_string(p)) return p;
    }
    return std::nullopt;
}

/// One grid axis: `steps == 1` pins the parameter (requires lo == hi),
/// `steps >= 2` sweeps [lo, hi] inclusive with evenly spaced points.
struct GridAxis {
    SweepParameter parameter;
    double lo;
    double hi;
    int steps;
};

struct SweepGrid {
    std::vector<GridAxis> axes;
};

/// One evaluated grid point. `parameters` holds the axis values in grid
/// order; state sweeps store the normalized coefficients. A degenerate
/// (zero-norm) state point is flagged and carries a NaN value.
struct SweepRecord {
    std::vector<double> parameters;
    double ch_value;
    Classification classification;
    bool degenerate = false;
};

namespace detail {

inline void validate_axis(const GridAxis& ax) {
    if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi)) {
        throw BadGrid(std::string("grid axis ") + to_string(ax.parameter) + ": non-finite bounds");
    }
    if (ax.steps < 1) {
        throw BadGrid(std::string("grid axis ") + to_string(ax.parameter) + ": steps must be >= 1");
    }
    if (ax.lo > ax.hi) {
        throw BadGrid(std::string("grid axis ") + to_string(ax.parameter) + ": lo > hi");
    }
    if (ax.steps == 1 && ax.lo != ax.hi) {
        throw BadGrid(std::string("grid axis ") + to_string(ax.parameter) +
                      ": a pinned axis (steps == 1) needs lo == hi");
    }
    if (is_setting_parameter(ax.parameter)) {
        const double hi_limit = is_phi_parameter(ax.parameter) ? 2.0 * std::numbers::pi
                                                               : std::numbers::pi / 2.0;
        if (ax.lo < 0.0 || ax.hi > hi_limit) {
            throw BadGrid(std::string("grid axis ") + to_string(ax.parameter) +
                          ": bounds outside the parameter's legal range");
        }
    }
}

inline std::vector<double> axis_values(const GridAxis& ax) {
    if (ax.steps == 1) return {ax.lo};
    std::vector<double> v(static_cast<std::size_t>(ax.steps));
    for (int i = 0; i < ax.steps; ++i) {
        v[static_cast<std::size_t>(i)] =
            ax.lo + (ax.hi - ax.lo) * static_cast<double>(i) / static_cast<double>(ax.steps - 1);
    }
    return v;
}

// Row-major odometer: the last axis varies fastest. Returns false once
// the tuple wraps around.
inline bool advance(std::vector<std::size_t>& idx, const std::vector<std::vector<double>>& values) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < values[k].size()) return true;
        idx[k] = 0;
    }
    return false;
}

inline void validate_complete_grid(const SweepGrid& grid, bool settings_sweep) {
    if (grid.axes.empty()) throw BadGrid("grid has no axes");
    std::array<int, 11> seen{};
    for (const GridAxis& ax : grid.axes) {
        validate_axis(ax);
        if (settings_sweep && !is_setting_parameter(ax.parameter)) {
            throw BadGrid(std::string("sweep_settings: state parameter ") + to_string(ax.parameter) +
                          " not allowed");
        }
        if (!settings_sweep && !is_state_parameter(ax.parameter)) {
            throw BadGrid(std::string("sweep_state: setting parameter ") + to_string(ax.parameter) +
                          " not allowed");
        }
        if (++seen[static_cast<std::size_t>(static_cast<int>(ax.parameter))] > 1) {
            throw BadGrid(std::string("duplicate grid axis ") + to_string(ax.parameter));
        }
    }
    const int first = settings_sweep ? 0 : kNumSettingParameters;
    const int last = settings_sweep ? kNumSettingParameters : 11;
    for (int i = first; i < last; ++i) {
        if (seen[static_cast<std::size_t>(i)] == 0) {
            throw BadGrid(std::string("missing grid axis ") +
                          to_string(static_cast<SweepParameter>(i)));
        }
    }
}

}  // namespace detail

/// Cartesian-product evaluation of the CH value over a complete grid of
/// the eight setting angles (pin an axis with steps == 1). Records come
/// out in row-major order over the axes as declared.
inline std::vector<SweepRecord> sweep_settings(const TwoModeState& s, const SweepGrid& grid) {
    detail::validate_complete_grid(grid, /*settings_sweep=*/true);

    const std::size_t n_axes = grid.axes.size();
    std::vector<std::vector<double>> values(n_axes);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n_axes; ++k) {
        values[k] = detail::axis_values(grid.axes[k]);
        total *= values[k].size();
    }

    std::vector<SweepRecord> records;
    records.reserve(total);
    std::vector<std::size_t> idx(n_axes, 0);
    do {
        std::array<double, kNumSettingParameters> angle{};
        std::vector<double> params(n_axes);
        for (std::size_t k = 0; k < n_axes; ++k) {
            params[k] = values[k][idx[k]];
            angle[static_cast<std::size_t>(static_cast<int>(grid.axes[k].parameter))] = params[k];
        }
        const ChSettings cs{MeasurementSetting(angle[0], angle[1]),
                            MeasurementSetting(angle[2], angle[3]),
                            MeasurementSetting(angle[4], angle[5]),
                            MeasurementSetting(angle[6], angle[7])};
        const double v = ch_value(s, cs);
        records.push_back(SweepRecord{std::move(params), v, classify(v).classification, false});
    } while (detail::advance(idx, values));
    return records;
}

/// Sweeps the real coefficients (p, q, r) at fixed settings. Every point
/// is normalized before evaluation and the record carries the normalized
/// coefficients; all-zero points are flagged degenerate and skipped.
inline std::vector<SweepRecord> sweep_state(const ChSettings& c, const SweepGrid& grid) {
    detail::validate_complete_grid(grid, /*settings_sweep=*/false);

    const std::size_t n_axes = grid.axes.size();
    std::vector<std::vector<double>> values(n_axes);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n_axes; ++k) {
        values[k] = detail::axis_values(grid.axes[k]);
        total *= values[k].size();
    }

    std::vector<SweepRecord> records;
    records.reserve(total);
    std::vector<std::size_t> idx(n_axes, 0);
    do {
        std::array<double, 3> coeff{};  // p, q, r
        std::vector<double> params(n_axes);
        for (std::size_t k = 0; k < n_axes; ++k) {
            params[k] = values[k][idx[k]];
            coeff[static_cast<std::size_t>(static_cast<int>(grid.axes[k].parameter) -
                                           kNumSettingParameters)] = params[k];
        }
        const double norm_sq =
            coeff[0] * coeff[0] + coeff[1] * coeff[1] + coeff[2] * coeff[2];
        if (norm_sq <= kTolerance) {
            records.push_back(SweepRecord{std::move(params),
                                          std::numeric_limits<double>::quiet_NaN(),
                                          Classification::WITHIN_CLASSICAL, true});
            continue;
        }
        const double norm = std::sqrt(norm_sq);
        for (std::size_t k = 0; k < n_axes; ++k) params[k] /= norm;
        const TwoModeState s = make_state(Complex{coeff[0], 0.0}, Complex{coeff[1], 0.0},
                                          Complex{coeff[2], 0.0});
        const double v = ch_value(s, c);
        records.push_back(SweepRecord{std::move(params), v, classify(v).classification, false});
    } while (detail::advance(idx, values));
    return records;
}

/// Search box for one setting parameter; `points == 0` falls back to
/// SearchOptions::grid_points. Pin a parameter with lo == hi.
struct AxisBox {
    double lo;
    double hi;
    int points = 0;
};

/// Box order matches the canonical parameter order
/// (theta_a, phi_a, theta_ap, phi_ap, theta_b, phi_b, theta_bp, phi_bp).
inline std::array<AxisBox, 8> default_search_box() {
    const double pi = std::numbers::pi;
    std::array<AxisBox, 8> box{};
    for (int k = 0; k < 8; ++k) {
        box[static_cast<std::size_t>(k)] =
            (k % 2 == 0) ? AxisBox{0.0, pi / 2.0, 0} : AxisBox{0.0, 2.0 * pi, 0};
    }
    return box;
}

struct SearchOptions {
    int grid_points = 24;        ///< coarse-grid resolution per swept angle
    int max_iterations = 200;    ///< refinement cycles
    double initial_step = 0.1;   ///< starting coordinate-descent step (rad)
    double shrink = 0.5;         ///< geometric step shrink factor
    double tolerance = 1e-10;    ///< convergence threshold on value change
    bool full_phase = false;     ///< also refine the phases (default: real amplitudes)
    std::array<AxisBox, 8> box = default_search_box();
};

struct SearchResult {
    ChSettings settings;
    double value;
    std::int64_t evaluations;
};

namespace detail {

struct SlotCandidate {
    double theta;
    double phi;
    std::array<std::array<Complex, 2>, 2> proj;
};

inline std::array<std::array<Complex, 2>, 2> projector_entries(double theta, double phi) {
    const Complex m0{std::cos(theta), 0.0};
    const Complex m1 = std::polar(std::sin(theta), phi);
    return {{{m0 * std::conj(m0), m0 * std::conj(m1)}, {m1 * std::conj(m0), m1 * std::conj(m1)}}};
}

// Contraction of the Bob side: Q[i][k] = sum_{j,l} conj(c_{ij}) B[j][l] c_{kl},
// so that <A (x) B> = sum_{i,k} A[i][k] Q[i][k].
inline std::array<std::array<Complex, 2>, 2> bob_contraction(
    const TwoModeState::Amplitudes& c, const std::array<std::array<Complex, 2>, 2>& b) {
    std::array<std::array<Complex, 2>, 2> q{};
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            Complex acc{0.0, 0.0};
            for (int j = 0; j < 2; ++j) {
                for (int l = 0; l < 2; ++l) {
                    acc += std::conj(c[TwoModeState::index_of(i, j)]) *
                           b[static_cast<unsigned>(j)][static_cast<unsigned>(l)] *
                           c[TwoModeState::index_of(k, l)];
                }
            }
            q[static_cast<unsigned>(i)][static_cast<unsigned>(k)] = acc;
        }
    }
    return q;
}

inline double contract(const std::array<std::array<Complex, 2>, 2>& a,
                       const std::array<std::array<Complex, 2>, 2>& q) {
    Complex acc{0.0, 0.0};
    for (unsigned i = 0; i < 2; ++i) {
        for (unsigned k = 0; k < 2; ++k) acc += a[i][k] * q[i][k];
    }
    return acc.real();
}

inline std::vector<SlotCandidate> slot_candidates(const AxisBox& theta_box, const AxisBox& phi_box,
                                                  int default_points) {
    std::vector<double> thetas;
    if (theta_box.lo == theta_box.hi) {
        thetas = {theta_box.lo};
    } else {
        const int n = std::max(theta_box.points > 0 ? theta_box.points : default_points, 2);
        thetas.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            thetas[static_cast<std::size_t>(i)] =
                theta_box.lo +
                (theta_box.hi - theta_box.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
    }
    // The coarse scan keeps phases on {0, pi} (all-real projectors); the
    // refinement stage explores intermediate phases in full-phase mode.
    std::vector<double> phis;
    if (phi_box.lo == phi_box.hi) {
        phis = {phi_box.lo};
    } else {
        for (double cand : {0.0, std::numbers::pi}) {
            if (cand >= phi_box.lo && cand <= phi_box.hi) phis.push_back(cand);
        }
        if (phis.empty()) phis = {phi_box.lo};
    }
    std::vector<SlotCandidate> out;
    out.reserve(thetas.size() * phis.size());
    for (double t : thetas) {
        for (double f : phis) out.push_back(SlotCandidate{t, f, projector_entries(t, f)});
    }
    return out;
}

inline ChSettings settings_from_angles(const std::array<double, 8>& a) {
    return ChSettings{MeasurementSetting(a[0], a[1]), MeasurementSetting(a[2], a[3]),
                      MeasurementSetting(a[4], a[5]), MeasurementSetting(a[6], a[7])};
}

}  // namespace detail

/// Minimizes the CH value over the measurement settings of a fixed state:
/// coarse grid scan (first-encountered minimum in row-major order wins),
/// then cyclic coordinate descent with geometrically shrinking steps.
/// The result is never worse than the best coarse-grid point.
inline SearchResult minimize_ch(const TwoModeState& s, const SearchOptions& opts = {}) {
    if (opts.grid_points < 2) throw std::invalid_argument("SearchOptions: grid_points must be >= 2");
    if (opts.max_iterations < 1) {
        throw std::invalid_argument("SearchOptions: refinement iterations must be positive");
    }
    if (!(opts.initial_step > 0.0)) {
        throw std::invalid_argument("SearchOptions: initial step must be positive");
    }
    if (!(opts.shrink > 0.0 && opts.shrink < 1.0)) {
        throw std::invalid_argument("SearchOptions: shrink factor must lie in (0, 1)");
    }
    if (!(opts.tolerance > 0.0)) {
        throw std::invalid_argument("SearchOptions: convergence threshold must be positive");
    }
    const double pi = std::numbers::pi;
    for (int k = 0; k < 8; ++k) {
        const AxisBox& box = opts.box[static_cast<std::size_t>(k)];
        const double hi_limit = (k % 2 == 0) ? pi / 2.0 : 2.0 * pi;
        if (!(box.lo <= box.hi) || box.lo < 0.0 || box.hi > hi_limit) {
            throw std::invalid_argument("SearchOptions: search box outside the legal range");
        }
    }

    // Coarse scan. Per-slot candidate projectors are precomputed and every
    // CH term is tabulated, so the scan itself is lookups and adds.
    const auto cand_a = detail::slot_candidates(opts.box[0], opts.box[1], opts.grid_points);
    const auto cand_ap = detail::slot_candidates(opts.box[2], opts.box[3], opts.grid_points);
    const auto cand_b = detail::slot_candidates(opts.box[4], opts.box[5], opts.grid_points);
    const auto cand_bp = detail::slot_candidates(opts.box[6], opts.box[7], opts.grid_points);

    const auto& c = s.amplitudes();
    const auto q_id = detail::bob_contraction(
        c, std::array<std::array<Complex, 2>, 2>{
               {{Complex{1.0, 0.0}, Complex{0.0, 0.0}}, {Complex{0.0, 0.0}, Complex{1.0, 0.0}}}});

    std::vector<std::array<std::array<Complex, 2>, 2>> q_b(cand_b.size());
    for (std::size_t y = 0; y < cand_b.size(); ++y) {
        q_b[y] = detail::bob_contraction(c, cand_b[y].proj);
    }
    std::vector<std::array<std::array<Complex, 2>, 2>> q_bp(cand_bp.size());
    for (std::size_t y = 0; y < cand_bp.size(); ++y) {
        q_bp[y] = detail::bob_contraction(c, cand_bp[y].proj);
    }

    std::vector<double> single_ap(cand_ap.size());
    for (std::size_t x = 0; x < cand_ap.size(); ++x) {
        single_ap[x] = detail::contract(cand_ap[x].proj, q_id);
    }
    std::vector<double> single_bp(cand_bp.size());
    for (std::size_t y = 0; y < cand_bp.size(); ++y) {
        single_bp[y] = (q_bp[y][0][0] + q_bp[y][1][1]).real();
    }

    const auto pair_table = [](const std::vector<detail::SlotCandidate>& xs,
                               const std::vector<std::array<std::array<Complex, 2>, 2>>& qs) {
        std::vector<double> t(xs.size() * qs.size());
        for (std::size_t x = 0; x < xs.size(); ++x) {
            for (std::size_t y = 0; y < qs.size(); ++y) {
                t[x * qs.size() + y] = detail::contract(xs[x].proj, qs[y]);
            }
        }
        return t;
    };
    const std::vector<double> pair_apbp = pair_table(cand_ap, q_bp);
    const std::vector<double> pair_apb = pair_table(cand_ap, q_b);
    const std::vector<double> pair_abp = pair_table(cand_a, q_bp);
    const std::vector<double> pair_ab = pair_table(cand_a, q_b);

    std::int64_t evaluations = 0;
    double best_scan = std::numeric_limits<double>::infinity();
    std::array<std::size_t, 4> best_idx{0, 0, 0, 0};
    for (std::size_t ia = 0; ia < cand_a.size(); ++ia) {
        for (std::size_t iap = 0; iap < cand_ap.size(); ++iap) {
            const double head = single_ap[iap];
            for (std::size_t ib = 0; ib < cand_b.size(); ++ib) {
                const double head_b =
                    head - pair_apb[iap * cand_b.size() + ib] + pair_ab[ia * cand_b.size() + ib];
                for (std::size_t ibp = 0; ibp < cand_bp.size(); ++ibp) {
                    const double v = head_b + single_bp[ibp] -
                                     pair_apbp[iap * cand_bp.size() + ibp] -
                                     pair_abp[ia * cand_bp.size() + ibp];
                    if (v < best_scan) {
                        best_scan = v;
                        best_idx = {ia, iap, ib, ibp};
                    }
                }
            }
        }
    }
    evaluations += static_cast<std::int64_t>(cand_a.size()) *
                   static_cast<std::int64_t>(cand_ap.size()) *
                   static_cast<std::int64_t>(cand_b.size()) *
                   static_cast<std::int64_t>(cand_bp.size());

    std::array<double, 8> angles{
        cand_a[best_idx[0]].theta,  cand_a[best_idx[0]].phi,  cand_ap[best_idx[1]].theta,
        cand_ap[best_idx[1]].phi,   cand_b[best_idx[2]].theta, cand_b[best_idx[2]].phi,
        cand_bp[best_idx[3]].theta, cand_bp[best_idx[3]].phi};

    double best = ch_value(s, detail::settings_from_angles(angles));
    ++evaluations;

    std::vector<int> refinable;
    for (int k = 0; k < 8; ++k) {
        const AxisBox& box = opts.box[static_cast<std::size_t>(k)];
        if (box.lo == box.hi) continue;
        if (k % 2 == 1 && !opts.full_phase) continue;
        refinable.push_back(k);
    }

    double step = opts.initial_step;
    for (int iter = 0; iter < opts.max_iterations && !refinable.empty(); ++iter) {
        const double cycle_start = best;
        for (int k : refinable) {
            for (double dir : {1.0, -1.0}) {
                const AxisBox& box = opts.box[static_cast<std::size_t>(k)];
                const double cand = std::clamp(angles[static_cast<std::size_t>(k)] + dir * step,
                                               box.lo, box.hi);
                if (cand == angles[static_cast<std::size_t>(k)]) continue;
                std::array<double, 8> trial = angles;
                trial[static_cast<std::size_t>(k)] = cand;
                const double v = ch_value(s, detail::settings_from_angles(trial));
                ++evaluations;
                if (v < best) {
                    best = v;
                    angles = trial;
                }
            }
        }
        if (best > cycle_start - opts.tolerance) {
            step *= opts.shrink;
            if (step < 1e-12) break;
        }
    }

    return SearchResult{detail::settings_from_angles(angles), best, evaluations};
}

}  // namespace fockbell
