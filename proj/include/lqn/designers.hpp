#pragma once

// Constructive networks for GHZ, W, Dicke D_2^n and four-qubit cluster
// states, plus the tritter and two-particle beam splitter presets.
// All constructors return validated specs; the mode is strict whenever the
// chosen amplitudes normalize every row.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "lqn/network.hpp"

namespace lqn {

using ColorVector = std::vector<Color>;

/// Parses "udud..." (case-insensitive) into colors.
inline ColorVector parse_colors(std::string_view text) {
    ColorVector out;
    for (char c : text) {
        if (c == 'u' || c == 'U') {
            out.push_back(Color::up);
        } else if (c == 'd' || c == 'D') {
            out.push_back(Color::down);
        } else {
            throw Error(ErrorCode::invalid_argument, std::string("color string may only contain u/d, got '") + c + "'");
        }
    }
    return out;
}

inline std::string colors_to_ket(const ColorVector& colors) {
    std::string out;
    for (Color c : colors) out += ket_char(c);
    return out;
}

/// Amplitude overrides keyed by 0-based (particle, detector).
using AmplitudeTable = std::map<std::pair<std::size_t, std::size_t>, Complex>;

namespace detail {

inline void check_colors(std::size_t n, const std::optional<ColorVector>& colors) {
    if (colors && colors->size() != n) {
        throw Error(ErrorCode::bad_length,
                    "expected " + std::to_string(n) + " colors, got " + std::to_string(colors->size()));
    }
}

/// Fills missing amplitudes with 1/sqrt(row degree), applies overrides and
/// validates, choosing strict mode when every row is normalized.
inline NetworkSpec finish_design(std::size_t n, std::vector<Transition> transitions, const AmplitudeTable& overrides,
                                 Statistics statistics) {
    std::vector<std::size_t> degree(n, 0);
    for (const auto& t : transitions) ++degree[t.source];
    for (auto& t : transitions) {
        auto it = overrides.find({t.source, t.detector});
        if (it != overrides.end()) {
            t.amplitude = it->second;
        } else {
            t.amplitude = Complex{1.0 / std::sqrt(static_cast<double>(degree[t.source])), 0.0};
        }
    }
    for (const auto& [key, amp] : overrides) {
        const bool known = std::any_of(transitions.begin(), transitions.end(), [&](const Transition& t) {
            return t.source == key.first && t.detector == key.second;
        });
        if (!known) {
            throw Error(ErrorCode::invalid_argument, "amplitude given for (" + std::to_string(key.first + 1) + ",X" +
                                                         std::to_string(key.second + 1) + ") which is not an edge");
        }
    }
    NetworkSpec spec{n, statistics, NormalizationMode::design, std::move(transitions)};
    if (rows_normalized(spec)) spec.mode = NormalizationMode::strict;
    return validate_network(std::move(spec));
}

}  // namespace detail

/// GHZ-class ring: loops (a, X_a) colored c_a and ring edges (a, X_{a+1})
/// colored c_{a+1} xor 1. Exactly two PMs, giving |c> and |c xor 1...1>.
inline NetworkSpec design_ghz(std::size_t n, const std::optional<ColorVector>& colors = std::nullopt,
                              const AmplitudeTable& amplitudes = {}, Statistics statistics = Statistics::boson) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "GHZ design needs n >= 2");
    detail::check_colors(n, colors);
    const ColorVector c = colors.value_or(ColorVector(n, Color::up));
    std::vector<Transition> ts;
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t next = (a + 1) % n;
        ts.push_back({a, a, {}, c[a]});
        ts.push_back({a, next, {}, flip(c[next])});
    }
    return detail::finish_design(n, std::move(ts), amplitudes, statistics);
}

enum class WForm { star, ring };

/// W-class diagrams. Both forms have a flipped loop at particle 1 and edges
/// 1 -> a flipping detector a; the star closes each cycle with a -> 1, the
/// ring with the chain a -> a-1. With all-up colors this is the standard W
/// state; other color vectors give the W basis.
inline NetworkSpec design_w(std::size_t n, WForm form, const std::optional<ColorVector>& colors = std::nullopt,
                            const AmplitudeTable& amplitudes = {}, Statistics statistics = Statistics::boson) {
    if (n < 3) throw Error(ErrorCode::invalid_argument, "W design needs n >= 3");
    detail::check_colors(n, colors);
    const ColorVector c = colors.value_or(ColorVector(n, Color::up));
    std::vector<Transition> ts;
    ts.push_back({0, 0, {}, flip(c[0])});
    for (std::size_t a = 1; a < n; ++a) ts.push_back({0, a, {}, flip(c[a])});
    for (std::size_t a = 1; a < n; ++a) {
        const std::size_t back = form == WForm::star ? 0 : a - 1;
        ts.push_back({a, back, {}, c[back]});
        ts.push_back({a, a, {}, c[a]});
    }
    return detail::finish_design(n, std::move(ts), amplitudes, statistics);
}

enum class DickePreset { none, paper_n4, paper_n5, balanced_n5 };

/// Amplitude tables for D_2^4 and D_2^5: loops plus the edges leaving
/// particles 1 and 2; each returning edge is the complex conjugate.
inline AmplitudeTable dicke_preset_table(DickePreset preset) {
    using std::polar;
    AmplitudeTable t;
    auto pair_conj = [&t](std::size_t a, std::size_t j, Complex v) {
        t[{a, j}] = v;
        t[{j, a}] = std::conj(v);
    };
    const double pi = M_PI;
    switch (preset) {
        case DickePreset::none:
            break;
        case DickePreset::paper_n4: {
            const double s = 1.0 / std::sqrt(3.0);
            for (std::size_t i = 0; i < 4; ++i) t[{i, i}] = s;
            pair_conj(0, 2, polar(s, pi / 6));
            pair_conj(0, 3, polar(s, -pi / 6));
            pair_conj(1, 2, polar(s, -pi / 6));
            pair_conj(1, 3, polar(s, pi / 6));
            break;
        }
        case DickePreset::paper_n5:
        case DickePreset::balanced_n5: {
            // paper_n5 keeps the reference magnitudes, which leave the kets
            // non-uniform (|T11||T33| != |T13|^2). balanced_n5 keeps the phases
            // and solves the magnitudes so rows normalize and the ten kets agree:
            // r^2 = (5 - sqrt5)/10, |T11|^2 = 1 - 3r^2, |T33|^2 = 1 - 2r^2.
            double r = 0.5, p = 0.5, q = 1.0 / std::sqrt(3.0);
            if (preset == DickePreset::balanced_n5) {
                const double r2 = (5.0 - std::sqrt(5.0)) / 10.0;
                r = std::sqrt(r2);
                p = std::sqrt(1.0 - 3.0 * r2);
                q = std::sqrt(1.0 - 2.0 * r2);
            }
            t[{0, 0}] = p;
            t[{1, 1}] = p;
            for (std::size_t i = 2; i < 5; ++i) t[{i, i}] = q;
            pair_conj(0, 2, polar(r, 0.0));
            pair_conj(0, 3, polar(r, -pi / 3));
            pair_conj(0, 4, polar(r, -2 * pi / 3));
            pair_conj(1, 2, polar(r, -pi / 3));
            pair_conj(1, 3, polar(r, 0.0));
            pair_conj(1, 4, polar(r, pi / 3));
            break;
        }
    }
    return t;
}

inline std::optional<std::size_t> dicke_preset_n(DickePreset preset) {
    switch (preset) {
        case DickePreset::paper_n4: return 4;
        case DickePreset::paper_n5:
        case DickePreset::balanced_n5: return 5;
        case DickePreset::none: break;
    }
    return std::nullopt;
}

/// D_2^n diagram: down loops at particles 1 and 2, up loops elsewhere, and
/// 2-cycles (j -down-> k -up-> j) for j in {1,2}, k = 3..n.
/// PM count is 1 + 2(n-2) + 4 C(n-2, 2).
inline NetworkSpec design_dicke2(std::size_t n, DickePreset preset = DickePreset::none,
                                 const AmplitudeTable& amplitudes = {}, Statistics statistics = Statistics::boson) {
    if (n < 4) throw Error(ErrorCode::invalid_argument, "Dicke design needs n >= 4");
    if (preset != DickePreset::none && dicke_preset_n(preset) != n) {
        throw Error(ErrorCode::no_preset_for_n, "no amplitude preset of that name for n = " + std::to_string(n));
    }
    std::vector<Transition> ts;
    for (std::size_t j = 0; j < 2; ++j) {
        ts.push_back({j, j, {}, Color::down});
        for (std::size_t k = 2; k < n; ++k) ts.push_back({j, k, {}, Color::down});
    }
    for (std::size_t k = 2; k < n; ++k) {
        ts.push_back({k, 0, {}, Color::up});
        ts.push_back({k, 1, {}, Color::up});
        ts.push_back({k, k, {}, Color::up});
    }
    AmplitudeTable table = dicke_preset_table(preset);
    for (const auto& [key, value] : amplitudes) table[key] = value;
    return detail::finish_design(n, std::move(ts), table, statistics);
}

/// Four-qubit linear cluster state (|uuuu> + |uudd> + |dduu> - |dddd>)/2.
/// Up loops, down 2-cycles 1<->2 and 3<->4, down edges 2->3 and 4->1.
/// |dddd> collects two PMs, T12 T21 T34 T43 + T12 T23 T34 T41; the table below
/// is a row-normalized solution that makes it equal -T11 T22 T33 T44 while
/// the other three kets match T11 T22 T33 T44.
inline NetworkSpec design_cluster4(Statistics statistics = Statistics::boson) {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex ih{0.0, h};
    std::vector<Transition> ts{
        {0, 0, h, Color::up},      {0, 1, h, Color::down},   {1, 0, 0.5, Color::down},
        {1, 1, 0.5, Color::up},    {1, 2, ih, Color::down},  {2, 2, h, Color::up},
        {2, 3, h, Color::down},    {3, 0, ih, Color::down},  {3, 2, 0.5, Color::down},
        {3, 3, 0.5, Color::up},
    };
    AmplitudeTable table;
    for (const auto& t : ts) table[{t.source, t.detector}] = t.amplitude;
    return detail::finish_design(4, std::move(ts), table, statistics);
}

/// Balanced three-port splitter U_3 with two up particles and one down:
/// rows 1-2 blue, row 3 red.
inline NetworkSpec preset_tritter(Statistics statistics = Statistics::boson) {
    const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
    const double s = 1.0 / std::sqrt(3.0);
    const Complex u[3][3] = {{1.0, w, w * w}, {w, 1.0, w * w}, {1.0, 1.0, 1.0}};
    std::vector<Transition> ts;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t j = 0; j < 3; ++j) ts.push_back({a, j, u[a][j] * s, a < 2 ? Color::up : Color::down});
    }
    return validate_network({3, statistics, NormalizationMode::strict, std::move(ts)});
}

/// Two-particle network: particle 1 -> (alpha1 X1 up, beta1 X2 down),
/// particle 2 -> (alpha2 X1 down, beta2 X2 up). Zero amplitudes drop the edge.
inline NetworkSpec preset_beamsplitter(Complex alpha1, Complex beta1, Complex alpha2, Complex beta2,
                                       Statistics statistics = Statistics::boson, double tol = kDefaultTolerance) {
    for (auto [row, x, y] : {std::tuple{1, alpha1, beta1}, std::tuple{2, alpha2, beta2}}) {
        const double s = std::norm(x) + std::norm(y);
        if (std::abs(s - 1.0) > tol) {
            throw Error(ErrorCode::row_not_normalized, "row " + std::to_string(row) + " sums to " + std::to_string(s));
        }
    }
    std::vector<Transition> ts;
    const Transition all[] = {
        {0, 0, alpha1, Color::up}, {0, 1, beta1, Color::down}, {1, 0, alpha2, Color::down}, {1, 1, beta2, Color::up}};
    for (const auto& t : all) {
        if (t.amplitude != Complex{}) ts.push_back(t);
    }
    return validate_network({2, statistics, NormalizationMode::strict, std::move(ts)}, tol);
}

}  // namespace lqn
