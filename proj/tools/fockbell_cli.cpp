// fockbell CLI: reproduce the canonical violation numbers, sweep the CH
// value over settings or state coefficients, search for the extremal
// violation, list deterministic LHV strategies, evaluate commutator norms.
//
// Exit codes: 0 success, 1 reference-value mismatch, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fockbell/fockbell.hpp"

namespace {

using nlohmann::json;
using namespace fockbell;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string f6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.push_back("");
    return parts;
}

double parse_double_strict(const std::string& s, const char* what) {
    if (s.empty()) throw UsageError(std::string("empty ") + what);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw UsageError(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    return v;
}

long parse_int_strict(const std::string& s, const char* what) {
    if (s.empty()) throw UsageError(std::string("empty ") + what);
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw UsageError(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    return v;
}

// Angles accept plain radians or pi fractions: "pi", "pi/6", "2pi/3",
// "0.5pi", "-pi/4".
double parse_angle(const std::string& raw) {
    const std::string s = trim(raw);
    const std::size_t pos = s.find("pi");
    if (pos == std::string::npos) return parse_double_strict(s, "angle");

    double sign = 1.0;
    std::string coef = s.substr(0, pos);
    if (!coef.empty() && (coef.front() == '+' || coef.front() == '-')) {
        if (coef.front() == '-') sign = -1.0;
        coef.erase(coef.begin());
    }
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    const double factor = coef.empty() ? 1.0 : parse_double_strict(coef, "angle");

    double denom = 1.0;
    const std::string rest = s.substr(pos + 2);
    if (!rest.empty()) {
        if (rest.front() != '/') throw UsageError("bad angle token: '" + raw + "'");
        denom = parse_double_strict(rest.substr(1), "angle");
        if (denom == 0.0) throw UsageError("bad angle token: '" + raw + "'");
    }
    return sign * factor * std::numbers::pi / denom;
}

// Coefficients are bare reals or "re+imi" forms: "1", "-0.5", "1+2i",
// "0.5-0.25i", "2i", "i", "-i".
Complex parse_complex(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw UsageError("empty coefficient");
    if (s.back() != 'i') return Complex{parse_double_strict(s, "coefficient"), 0.0};

    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split_pos = std::string::npos;
    for (std::size_t k = 1; k < body.size(); ++k) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split_pos = k;
        }
    }
    if (split_pos == std::string::npos) {
        if (body.empty() || body == "+") return Complex{0.0, 1.0};
        if (body == "-") return Complex{0.0, -1.0};
        return Complex{0.0, parse_double_strict(body, "coefficient")};
    }
    const std::string re = body.substr(0, split_pos);
    std::string im = body.substr(split_pos);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return Complex{parse_double_strict(re, "coefficient"), parse_double_strict(im, "coefficient")};
}

std::array<Complex, 3> parse_state_coefficients(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw UsageError("--state needs three coefficients p,q,r");
    return {parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])};
}

std::array<double, 8> parse_setting_angles(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 8) {
        throw UsageError("--settings needs eight angles "
                         "theta_a,phi_a,theta_ap,phi_ap,theta_b,phi_b,theta_bp,phi_bp");
    }
    std::array<double, 8> out{};
    for (std::size_t k = 0; k < 8; ++k) out[k] = parse_angle(parts[k]);
    return out;
}

std::array<double, 8> canonical_angles() {
    const ChSettings cs = canonical_ch_settings();
    return {cs.a.theta(),       cs.a.phi(),       cs.a_prime.theta(), cs.a_prime.phi(),
            cs.b.theta(),       cs.b.phi(),       cs.b_prime.theta(), cs.b_prime.phi()};
}

GridAxis parse_grid_axis(const std::string& token, bool steps_required) {
    const auto parts = split(token, ':');
    if (parts.size() != 4 && (steps_required || parts.size() != 3)) {
        throw UsageError("bad --grid '" + token + "': expected name:lo:hi:steps");
    }
    const auto param = parse_sweep_parameter(parts[0]);
    if (!param) throw UsageError("unknown grid parameter '" + parts[0] + "'");
    const bool angle = is_setting_parameter(*param);
    const double lo = angle ? parse_angle(parts[1]) : parse_double_strict(parts[1], "grid bound");
    const double hi = angle ? parse_angle(parts[2]) : parse_double_strict(parts[2], "grid bound");
    int steps = 0;
    if (parts.size() == 4) steps = static_cast<int>(parse_int_strict(parts[3], "grid steps"));
    return GridAxis{*param, lo, hi, steps};
}

TwoModeState state_from_flag(const std::string& state_str) {
    if (state_str.empty()) return one_particle_singlet();
    const auto c = parse_state_coefficients(state_str);
    return make_state(c[0], c[1], c[2]);
}

ChSettings settings_from_angles(const std::array<double, 8>& a) {
    return ChSettings{MeasurementSetting(a[0], a[1]), MeasurementSetting(a[2], a[3]),
                      MeasurementSetting(a[4], a[5]), MeasurementSetting(a[6], a[7])};
}

// ---------------------------------------------------------------------------
// reproduce

std::tuple<std::string, int> cmd_reproduce(bool json_mode) {
    const TwoModeState s = one_particle_singlet();
    const ChSettings cs = canonical_ch_settings();
    const ModeOperator id = ModeOperator::identity();
    const ModeOperator pa = mode_projector(cs.a);
    const ModeOperator pap = mode_projector(cs.a_prime);
    const ModeOperator pb = mode_projector(cs.b);
    const ModeOperator pbp = mode_projector(cs.b_prime);

    struct Row {
        const char* label;
        const char* key;
        double computed;
        double reference;
    };
    const Row rows[] = {
        {"<P_a'>", "P_ap", expectation(s, pap, id), 0.5},
        {"<P_b'>", "P_bp", expectation(s, id, pbp), 0.5},
        {"<P_a P_b>", "P_a_P_b", expectation(s, pa, pb), 0.0},
        {"<P_a P_b'>", "P_a_P_bp", expectation(s, pa, pbp), 0.375},
        {"<P_a' P_b>", "P_ap_P_b", expectation(s, pap, pb), 0.375},
        {"<P_a' P_b'>", "P_ap_P_bp", expectation(s, pap, pbp), 0.375},
    };
    const double ch = ch_value(s, cs);
    const double ch_reference = -0.125;
    const LhvBounds bounds = lhv_bounds();
    const ChResult result = classify(ch);

    bool match = std::abs(ch - ch_reference) <= 1e-12;
    for (const Row& r : rows) match = match && std::abs(r.computed - r.reference) <= 1e-12;

    std::ostringstream os;
    if (json_mode) {
        json j;
        for (const Row& r : rows) j[r.key] = r.computed;
        j["ch_value"] = ch;
        j["lhv_min"] = bounds.min;
        j["lhv_max"] = bounds.max;
        j["classification"] = to_string(result.classification);
        j["matches_reference"] = match;
        os << j.dump(2) << "\n";
    } else {
        os << "canonical single-particle CH demonstration\n";
        os << "state: (|10> - |01>)/sqrt(2)\n";
        os << "settings: a=(pi/2, 0)  a'=(pi/6, 0)  b=(pi/2, 0)  b'=(pi/6, pi)\n";
        os << "\n";
        char line[96];
        std::snprintf(line, sizeof line, "%-15s%10s  %10s\n", "quantity", "computed", "reference");
        os << line;
        for (const Row& r : rows) {
            std::snprintf(line, sizeof line, "%-15s%10s  %10s\n", r.label, f6(r.computed).c_str(),
                          f6(r.reference).c_str());
            os << line;
        }
        std::snprintf(line, sizeof line, "%-15s%10s  %10s\n", "CH value", f6(ch).c_str(),
                      f6(ch_reference).c_str());
        os << line;
        os << "LHV bounds     [" << g17(bounds.min) << ", " << g17(bounds.max) << "]\n";
        os << "classification " << to_string(result.classification) << "\n";
        if (match) {
            os << "\nall quantities match the reference values to 1e-12\n";
        } else {
            os << "\n";
            for (const Row& r : rows) {
                if (std::abs(r.computed - r.reference) > 1e-12) {
                    os << "MISMATCH " << r.label << ": computed " << g17(r.computed)
                       << ", reference " << g17(r.reference) << "\n";
                }
            }
            if (std::abs(ch - ch_reference) > 1e-12) {
                os << "MISMATCH CH value: computed " << g17(ch) << ", reference "
                   << g17(ch_reference) << "\n";
            }
        }
    }
    return {os.str(), match ? 0 : 1};
}

// ---------------------------------------------------------------------------
// sweep

std::string cmd_sweep(const std::string& state_str, const std::string& settings_str,
                      const std::vector<std::string>& grid_tokens, bool json_mode) {
    std::vector<GridAxis> declared;
    declared.reserve(grid_tokens.size());
    for (const std::string& t : grid_tokens) {
        declared.push_back(parse_grid_axis(t, /*steps_required=*/true));
    }

    bool has_state_axis = false;
    bool has_setting_axis = false;
    std::array<bool, 11> covered{};
    for (const GridAxis& ax : declared) {
        has_state_axis = has_state_axis || is_state_parameter(ax.parameter);
        has_setting_axis = has_setting_axis || is_setting_parameter(ax.parameter);
        covered[static_cast<std::size_t>(static_cast<int>(ax.parameter))] = true;
    }
    if (has_state_axis && has_setting_axis) {
        throw UsageError("a sweep mixes state axes (p,q,r) with setting axes; pick one family");
    }

    SweepGrid grid;
    grid.axes = declared;
    std::vector<SweepRecord> records;
    if (has_state_axis) {
        const std::array<Complex, 3> base = state_str.empty()
                                                ? std::array<Complex, 3>{Complex{1.0 / std::sqrt(2.0), 0.0},
                                                                         Complex{-1.0 / std::sqrt(2.0), 0.0},
                                                                         Complex{0.0, 0.0}}
                                                : parse_state_coefficients(state_str);
        for (int k = kNumSettingParameters; k < 11; ++k) {
            if (covered[static_cast<std::size_t>(k)]) continue;
            const Complex pinned = base[static_cast<std::size_t>(k - kNumSettingParameters)];
            if (pinned.imag() != 0.0) {
                throw UsageError("state sweeps use real coefficients; cannot pin a complex value");
            }
            grid.axes.push_back(
                GridAxis{static_cast<SweepParameter>(k), pinned.real(), pinned.real(), 1});
        }
        const std::array<double, 8> ang =
            settings_str.empty() ? canonical_angles() : parse_setting_angles(settings_str);
        records = sweep_state(settings_from_angles(ang), grid);
    } else {
        const std::array<double, 8> base =
            settings_str.empty() ? canonical_angles() : parse_setting_angles(settings_str);
        for (int k = 0; k < kNumSettingParameters; ++k) {
            if (covered[static_cast<std::size_t>(k)]) continue;
            grid.axes.push_back(GridAxis{static_cast<SweepParameter>(k),
                                         base[static_cast<std::size_t>(k)],
                                         base[static_cast<std::size_t>(k)], 1});
        }
        records = sweep_settings(state_from_flag(state_str), grid);
    }

    std::ostringstream os;
    if (json_mode) {
        json arr = json::array();
        for (const SweepRecord& r : records) {
            json row;
            for (std::size_t k = 0; k < grid.axes.size(); ++k) {
                row[to_string(grid.axes[k].parameter)] = r.parameters[k];
            }
            if (r.degenerate) {
                row["ch_value"] = nullptr;
                row["classification"] = "DEGENERATE";
            } else {
                row["ch_value"] = r.ch_value;
                row["classification"] = to_string(r.classification);
            }
            arr.push_back(std::move(row));
        }
        os << arr.dump(2) << "\n";
    } else {
        for (std::size_t k = 0; k < grid.axes.size(); ++k) {
            os << (k ? "," : "") << to_string(grid.axes[k].parameter);
        }
        os << ",ch_value,classification\n";
        for (const SweepRecord& r : records) {
            for (double v : r.parameters) os << g17(v) << ",";
            if (r.degenerate) {
                os << "nan,DEGENERATE\n";
            } else {
                os << g17(r.ch_value) << "," << to_string(r.classification) << "\n";
            }
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// optimize

std::string cmd_optimize(const std::string& state_str, const std::vector<std::string>& grid_tokens,
                         int iters, double step, double shrink, double tol, bool full_phase,
                         bool json_mode) {
    SearchOptions opts;
    opts.max_iterations = iters;
    opts.initial_step = step;
    opts.shrink = shrink;
    opts.tolerance = tol;
    opts.full_phase = full_phase;
    for (const std::string& t : grid_tokens) {
        const GridAxis ax = parse_grid_axis(t, /*steps_required=*/false);
        if (!is_setting_parameter(ax.parameter)) {
            throw UsageError("optimize searches setting angles only; p,q,r are fixed by --state");
        }
        opts.box[static_cast<std::size_t>(static_cast<int>(ax.parameter))] =
            AxisBox{ax.lo, ax.hi, ax.steps};
    }

    const SearchResult res = minimize_ch(state_from_flag(state_str), opts);
    const ChResult cls = classify(res.value);

    std::ostringstream os;
    if (json_mode) {
        json j;
        j["theta_a"] = res.settings.a.theta();
        j["phi_a"] = res.settings.a.phi();
        j["theta_ap"] = res.settings.a_prime.theta();
        j["phi_ap"] = res.settings.a_prime.phi();
        j["theta_b"] = res.settings.b.theta();
        j["phi_b"] = res.settings.b.phi();
        j["theta_bp"] = res.settings.b_prime.theta();
        j["phi_bp"] = res.settings.b_prime.phi();
        j["ch_value"] = res.value;
        j["classification"] = to_string(cls.classification);
        j["evaluations"] = res.evaluations;
        os << j.dump(2) << "\n";
    } else {
        os << "best settings:\n";
        os << "  a  = (" << g17(res.settings.a.theta()) << ", " << g17(res.settings.a.phi())
           << ")\n";
        os << "  a' = (" << g17(res.settings.a_prime.theta()) << ", "
           << g17(res.settings.a_prime.phi()) << ")\n";
        os << "  b  = (" << g17(res.settings.b.theta()) << ", " << g17(res.settings.b.phi())
           << ")\n";
        os << "  b' = (" << g17(res.settings.b_prime.theta()) << ", "
           << g17(res.settings.b_prime.phi()) << ")\n";
        os << "best CH value: " << g17(res.value) << "\n";
        os << "classification: " << to_string(cls.classification) << "\n";
        os << "evaluations: " << res.evaluations << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// lhv / commutator

std::string cmd_lhv(bool json_mode) {
    const auto strategies = all_deterministic_strategies();
    const LhvBounds bounds = lhv_bounds();
    std::ostringstream os;
    if (json_mode) {
        json arr = json::array();
        for (const DeterministicStrategy& d : strategies) {
            arr.push_back(json{{"out_a", d.out_a},
                               {"out_ap", d.out_a_prime},
                               {"out_b", d.out_b},
                               {"out_bp", d.out_b_prime},
                               {"ch_value", deterministic_ch_value(d)}});
        }
        json j;
        j["strategies"] = std::move(arr);
        j["lhv_min"] = bounds.min;
        j["lhv_max"] = bounds.max;
        os << j.dump(2) << "\n";
    } else {
        os << "out_a  out_a'  out_b  out_b'  ch_value\n";
        for (const DeterministicStrategy& d : strategies) {
            char line[80];
            std::snprintf(line, sizeof line, "%5d  %6d  %5d  %6d  %8g\n", d.out_a, d.out_a_prime,
                          d.out_b, d.out_b_prime, deterministic_ch_value(d));
            os << line;
        }
        os << "\nLHV bounds: [" << g17(bounds.min) << ", " << g17(bounds.max) << "]\n";
    }
    return os.str();
}

std::string cmd_commutator(const std::string& theta_token, const std::string& phi_token,
                           bool json_mode) {
    const double theta = parse_angle(theta_token);
    const double phi = parse_angle(phi_token);
    const MeasurementSetting m(theta, phi);
    const double norm = commutator_norm(m);
    std::ostringstream os;
    if (json_mode) {
        json j;
        j["theta"] = m.theta();
        j["phi"] = m.phi();
        j["commutator_norm"] = norm;
        os << j.dump(2) << "\n";
    } else {
        os << "theta = " << g17(m.theta()) << "\n";
        os << "phi = " << g17(m.phi()) << "\n";
        os << "commutator_norm = " << g17(norm) << "\n";
    }
    return os.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file: " + out_path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-mode Fock-space nonlocality simulator: CH-inequality evaluation, "
                 "LHV bounds, projective collapse, setting sweeps and searches"};
    app.require_subcommand(1);

    bool json_mode = false;
    std::string out_path;
    std::uint64_t seed = 0;
    app.add_flag("--json", json_mode, "emit machine-readable JSON instead of text");
    app.add_option("--out", out_path, "write output to FILE instead of stdout");
    app.add_option("--seed", seed,
                   "random seed (current commands are deterministic; accepted for "
                   "interface stability)");

    auto* reproduce = app.add_subcommand(
        "reproduce", "print the canonical expectation values, CH value and LHV bounds; "
                     "exit 1 if anything deviates from the built-in reference");
    reproduce->fallthrough();

    std::string sweep_state_str;
    std::string sweep_settings_str;
    std::vector<std::string> sweep_grid;
    auto* sweep =
        app.add_subcommand("sweep", "CSV sweep of the CH value over setting angles or "
                                    "state coefficients");
    sweep->fallthrough();
    sweep->add_option("--state", sweep_state_str,
                      "state coefficients p,q,r (complex entries like 0.5+0.25i allowed; "
                      "default: the one-particle singlet)");
    sweep->add_option("--settings", sweep_settings_str,
                      "base angles theta_a,phi_a,theta_ap,phi_ap,theta_b,phi_b,theta_bp,phi_bp "
                      "(pi fractions like pi/6 allowed; default: the canonical settings)");
    sweep->add_option("--grid", sweep_grid,
                      "swept axis as name:lo:hi:steps, repeatable; axes not given are pinned "
                      "at their base values");

    std::string opt_state_str;
    std::vector<std::string> opt_grid;
    int opt_iters = 200;
    double opt_step = 0.1;
    double opt_shrink = 0.5;
    double opt_tol = 1e-10;
    bool opt_full_phase = false;
    auto* optimize = app.add_subcommand(
        "optimize", "search the settings minimizing the CH value of a state");
    optimize->fallthrough();
    optimize->add_option("--state", opt_state_str, "state coefficients p,q,r");
    optimize->add_option("--grid", opt_grid,
                         "search box per axis as name:lo:hi[:points], repeatable; "
                         "lo == hi pins the axis");
    optimize->add_option("--iters", opt_iters, "refinement iterations");
    optimize->add_option("--step", opt_step, "initial refinement step in radians");
    optimize->add_option("--shrink", opt_shrink, "step shrink factor in (0,1)");
    optimize->add_option("--tol", opt_tol, "convergence threshold on value change");
    optimize->add_flag("--full-phase", opt_full_phase,
                       "also refine the phases (default sticks to real amplitudes)");

    auto* lhv = app.add_subcommand(
        "lhv", "list all 16 deterministic local strategies and the classical bounds");
    lhv->fallthrough();

    std::string comm_theta;
    std::string comm_phi;
    auto* commutator = app.add_subcommand(
        "commutator", "spectral norm of [P(theta,phi), N] with N the number operator");
    commutator->fallthrough();
    commutator->add_option("theta", comm_theta, "polar angle (radians or pi fraction)")
        ->required();
    commutator->add_option("phi", comm_phi, "phase angle (radians or pi fraction)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        std::string text;
        int code = 0;
        if (reproduce->parsed()) {
            std::tie(text, code) = cmd_reproduce(json_mode);
        } else if (sweep->parsed()) {
            text = cmd_sweep(sweep_state_str, sweep_settings_str, sweep_grid, json_mode);
        } else if (optimize->parsed()) {
            text = cmd_optimize(opt_state_str, opt_grid, opt_iters, opt_step, opt_shrink, opt_tol,
                                opt_full_phase, json_mode);
        } else if (lhv->parsed()) {
            text = cmd_lhv(json_mode);
        } else if (commutator->parsed()) {
            text = cmd_commutator(comm_theta, comm_phi, json_mode);
        }
        emit(text, out_path);
        return code;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
