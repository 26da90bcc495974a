#pragma once

// Structural separability criteria read off a PM diagram, and the numerical
// counterparts (Schmidt rank across cuts, finest product partition).

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lqn/state.hpp"

namespace lqn {

struct ForcedColor {
    std::size_t detector = 0;
    Color color = Color::up;

    friend bool operator==(const ForcedColor&, const ForcedColor&) = default;
};

/// Detectors whose incoming diagram edges (loops included) all share one
/// color. Those detectors factor out of the state in that basis state.
inline std::vector<ForcedColor> lemma1_separable_vertices(const PMDiagram& diag) {
    const std::size_t n = diag.graph.n;
    std::vector<int> up(n, 0), down(n, 0);
    for (const auto& e : diag.graph.edges) (e.color == Color::up ? up : down)[e.to] += 1;
    std::vector<ForcedColor> out;
    for (std::size_t v = 0; v < n; ++v) {
        if (up[v] > 0 && down[v] == 0) out.push_back({diag.detector_of_vertex[v], Color::up});
        if (down[v] > 0 && up[v] == 0) out.push_back({diag.detector_of_vertex[v], Color::down});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.detector < y.detector; });
    return out;
}

/// Maps a partition of diagram vertices to the detectors they carry.
inline Partition to_detector_partition(const PMDiagram& diag, const Partition& vertices) {
    Partition out;
    for (const auto& block : vertices) {
        std::vector<std::size_t> dets;
        for (std::size_t v : block) dets.push_back(diag.detector_of_vertex[v]);
        out.push_back(std::move(dets));
    }
    return canonical_partition(std::move(out));
}

/// Weak components of the diagram as detector blocks; the state is guaranteed
/// to factor across this partition.
inline Partition lemma2_partition(const PMDiagram& diag) { return to_detector_partition(diag, weak_components(diag)); }

enum class GenuineVerdict { may_be_genuine, cannot_be_genuine };

inline std::string_view verdict_name(GenuineVerdict v) {
    return v == GenuineVerdict::may_be_genuine ? "may_be_genuine" : "cannot_be_genuine";
}

struct Theorem1Report {
    std::vector<bool> color_condition_ok;  ///< per detector: incoming edges of both colors
    bool strongly_connected = false;
    GenuineVerdict verdict = GenuineVerdict::cannot_be_genuine;
};

/// Necessary conditions for genuine entanglement. Passing does not imply the
/// state is genuinely entangled.
inline Theorem1Report theorem1_check(const PMDiagram& diag) {
    const std::size_t n = diag.graph.n;
    std::vector<int> up(n, 0), down(n, 0);
    for (const auto& e : diag.graph.edges) (e.color == Color::up ? up : down)[e.to] += 1;
    Theorem1Report report;
    report.color_condition_ok.assign(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        report.color_condition_ok[diag.detector_of_vertex[v]] = up[v] > 0 && down[v] > 0;
    }
    report.strongly_connected = strongly_connected(diag).strongly_connected;
    const bool colors_ok =
        std::all_of(report.color_condition_ok.begin(), report.color_condition_ok.end(), [](bool b) { return b; });
    report.verdict =
        colors_ok && report.strongly_connected ? GenuineVerdict::may_be_genuine : GenuineVerdict::cannot_be_genuine;
    return report;
}

struct Theorem2Report {
    bool satisfied = false;
    std::size_t red_edge_count = 0;
    std::optional<std::size_t> common_source;   ///< particle all red edges leave, if any
    std::vector<DirectedEdge> violating_edges;  ///< red edges leaving another particle (original labels)
};

/// A diagram that is optimal for the n-partite W state must have exactly n
/// red edges, all leaving one particle (its loop included).
inline Theorem2Report theorem2_w_optimal_check(const PMDiagram& diag) {
    Theorem2Report report;
    std::vector<std::size_t> red_from(diag.graph.n, 0);
    for (const auto& e : diag.graph.edges) {
        if (e.color == Color::down) {
            ++report.red_edge_count;
            ++red_from[e.from];
        }
    }
    if (report.red_edge_count > 0) {
        const auto best = std::max_element(red_from.begin(), red_from.end()) - red_from.begin();
        report.common_source = static_cast<std::size_t>(best);
        for (const auto& e : diag.original_edges()) {
            if (e.color == Color::down && e.from != *report.common_source) report.violating_edges.push_back(e);
        }
    }
    report.satisfied = report.red_edge_count == diag.graph.n && report.violating_edges.empty();
    return report;
}

// Numerical analysis on the dense amplitude vector. Index bit j is set when
// detector j reads 'd'.

inline constexpr std::size_t kDenseMaxN = 10;

inline std::vector<Complex> dense_amplitudes(const NoBunchState& state) {
    if (state.n > 20) throw Error(ErrorCode::too_large, "dense state limited to n <= 20");
    std::vector<Complex> psi(std::size_t{1} << state.n);
    for (const auto& [ket, amp] : state.terms) {
        if (ket.size() != state.n) throw Error(ErrorCode::dimension_mismatch, "ket length differs from n");
        std::size_t idx = 0;
        for (std::size_t j = 0; j < state.n; ++j) {
            if (ket[j] == 'd') idx |= std::size_t{1} << j;
        }
        psi[idx] += amp;
    }
    return psi;
}

namespace detail {

inline Eigen::MatrixXcd matricize(const std::vector<Complex>& psi, std::size_t n, const std::vector<std::size_t>& cut) {
    std::vector<char> in_cut(n, 0);
    for (std::size_t j : cut) in_cut[j] = 1;
    std::vector<std::size_t> rows_bits, cols_bits;
    for (std::size_t j = 0; j < n; ++j) (in_cut[j] ? rows_bits : cols_bits).push_back(j);

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index{1} << rows_bits.size(),
                                                Eigen::Index{1} << cols_bits.size());
    for (std::size_t idx = 0; idx < psi.size(); ++idx) {
        if (psi[idx] == Complex{}) continue;
        Eigen::Index r = 0, c = 0;
        for (std::size_t k = 0; k < rows_bits.size(); ++k) r |= static_cast<Eigen::Index>((idx >> rows_bits[k]) & 1) << k;
        for (std::size_t k = 0; k < cols_bits.size(); ++k) c |= static_cast<Eigen::Index>((idx >> cols_bits[k]) & 1) << k;
        m(r, c) = psi[idx];
    }
    return m;
}

inline std::size_t rank_of(const Eigen::MatrixXcd& m, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double threshold = tol * sv(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) ++rank;
    }
    return rank;
}

inline void check_cut(std::size_t n, const std::vector<std::size_t>& cut) {
    std::vector<char> seen(n, 0);
    for (std::size_t j : cut) {
        if (j >= n || seen[j]) throw Error(ErrorCode::dimension_mismatch, "cut indices invalid for n");
        seen[j] = 1;
    }
    if (cut.empty() || cut.size() >= n) throw Error(ErrorCode::dimension_mismatch, "cut must be a proper subset");
}

}  // namespace detail

inline constexpr double kSchmidtTolerance = 1e-8;

/// Schmidt rank across S | complement(S); singular values count when above tol * sigma_max.
inline std::size_t schmidt_rank(const NoBunchState& state, const std::vector<std::size_t>& cut,
                                double tol = kSchmidtTolerance) {
    detail::check_cut(state.n, cut);
    return detail::rank_of(detail::matricize(dense_amplitudes(state), state.n, cut), tol);
}

/// Finest partition of detectors into product factors. Cuts inside a block are
/// tried in increasing size; any rank-1 cut of the full state against a subset
/// of an existing factor splits that factor.
inline Partition finest_partition(const NoBunchState& state, double tol = kSchmidtTolerance) {
    if (state.n > kDenseMaxN) {
        throw Error(ErrorCode::too_large, "finest_partition limited to n <= " + std::to_string(kDenseMaxN));
    }
    const auto psi = dense_amplitudes(state);
    const std::size_t n = state.n;

    std::vector<std::vector<std::size_t>> pending{{}};
    for (std::size_t j = 0; j < n; ++j) pending.front().push_back(j);
    Partition done;

    while (!pending.empty()) {
        auto block = std::move(pending.back());
        pending.pop_back();
        const std::size_t m = block.size();
        bool split = false;
        // Subsets T of block with |T| <= m/2; those containing block[0] when |T| == m/2 avoid duplicates.
        for (std::size_t size = 1; size * 2 <= m && !split; ++size) {
            std::vector<char> choose(m, 0);
            std::fill(choose.end() - static_cast<std::ptrdiff_t>(size), choose.end(), 1);
            do {
                std::vector<std::size_t> part, rest;
                for (std::size_t k = 0; k < m; ++k) (choose[k] ? part : rest).push_back(block[k]);
                if (size * 2 == m && !choose[0]) continue;
                if (detail::rank_of(detail::matricize(psi, n, part), tol) == 1) {
                    pending.push_back(std::move(part));
                    pending.push_back(std::move(rest));
                    split = true;
                    break;
                }
            } while (std::next_permutation(choose.begin(), choose.end()));
        }
        if (!split) done.push_back(std::move(block));
    }
    return canonical_partition(std::move(done));
}

/// Standard two-qubit pure-state concurrence 2|ad - bc| for a|uu> + b|ud> + c|du> + d|dd>.
inline double concurrence2(const NoBunchState& state) {
    if (state.n != 2) throw Error(ErrorCode::dimension_mismatch, "concurrence needs n = 2");
    const Complex a = state.amplitude("uu"), b = state.amplitude("ud"), c = state.amplitude("du"),
                  d = state.amplitude("dd");
    return 2.0 * std::abs(a * d - b * c);
}

/// Same expression on the normalized form of `state`.
inline double concurrence2_normalized(const NoBunchState& state) {
    return concurrence2(state.normalized ? state : normalize(state));
}

/// Closed form 4|a1 a2 b1 b2| quoted for the two-particle beam splitter.
inline double beamsplitter_concurrence_formula(Complex a1, Complex b1, Complex a2, Complex b2) {
    return 4.0 * std::abs(a1 * a2 * b1 * b2);
}

/// Replaces every amplitude with a random phase and magnitude in [0.3, 1],
/// then row-normalizes. Structure and colors are untouched.
template <class Rng>
NetworkSpec with_generic_amplitudes(NetworkSpec spec, Rng& rng) {
    std::uniform_real_distribution<double> magnitude(0.3, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    for (auto& t : spec.transitions) t.amplitude = std::polar(magnitude(rng), phase(rng));
    const auto sums = row_norms(spec);
    for (auto& t : spec.transitions) t.amplitude /= std::sqrt(sums[t.source]);
    spec.mode = NormalizationMode::strict;
    return spec;
}

struct SeparabilityReport {
    std::vector<ForcedColor> lemma1;
    Partition lemma2_partition;
    Theorem1Report theorem1;
    Theorem2Report theorem2;
    std::optional<Partition> numeric_finest_partition;
    std::optional<std::uint64_t> numeric_seed;
};

/// Structural report; with a seed, also the finest partition of the state
/// produced by generic random amplitudes on the same structure.
inline SeparabilityReport analyze(const NetworkSpec& spec, std::optional<std::uint64_t> numeric_seed = std::nullopt) {
    const auto diag = pm_diagram(spec);
    SeparabilityReport report{lemma1_separable_vertices(diag), lemma2_partition(diag), theorem1_check(diag),
                              theorem2_w_optimal_check(diag), std::nullopt, numeric_seed};
    if (numeric_seed) {
        std::mt19937_64 rng(*numeric_seed);
        const auto generic = with_generic_amplitudes(spec, rng);
        report.numeric_finest_partition = finest_partition(normalize(compute_state(generic)));
    }
    return report;
}

}  // namespace lqn
