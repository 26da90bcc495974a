#pragma once

// Post-selected no-bunching states. A ket is an n-character string over
// {'u','d'}; position j holds the internal state seen at detector X_{j+1}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lqn/graphs.hpp"

namespace lqn {

struct NoBunchState {
    std::size_t n = 0;
    std::map<std::string, Complex> terms;  ///< ordered by ket
    bool normalized = false;
    std::optional<double> postselect_probability;

    Complex amplitude(const std::string& ket) const {
        auto it = terms.find(ket);
        return it == terms.end() ? Complex{} : it->second;
    }

    double norm_squared() const {
        double acc = 0.0;
        for (const auto& [ket, amp] : terms) acc += std::norm(amp);
        return acc;
    }
};

/// (-1)^inversions of a permutation.
inline int permutation_parity(const std::vector<std::size_t>& perm) {
    std::vector<char> seen(perm.size(), 0);
    int sign = 1;
    for (std::size_t start = 0; start < perm.size(); ++start) {
        if (seen[start]) continue;
        std::size_t len = 0;
        for (std::size_t v = start; !seen[v]; v = perm[v]) {
            seen[v] = 1;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

inline int exchange_sign(const std::vector<std::size_t>& sigma, Statistics statistics) {
    return statistics == Statistics::boson ? 1 : permutation_parity(sigma);
}

/// Sums sign(sigma) * prod_a T_{a,sigma(a)} into the ket colored by each PM.
/// Amplitudes and colors are read from `spec`; PMs are summed in the given order.
inline NoBunchState assemble_state(const std::vector<PerfectMatching>& pms, const NetworkSpec& spec) {
    const auto adj = to_adjacency(spec);
    NoBunchState state{spec.n, {}, false, std::nullopt};
    for (const auto& pm : pms) {
        if (pm.size() != spec.n) throw Error(ErrorCode::invalid_matching, "matching size differs from n");
        std::vector<char> hit(spec.n, 0);
        std::string ket(spec.n, '?');
        Complex amp{1.0, 0.0};
        for (std::size_t a = 0; a < spec.n; ++a) {
            const std::size_t j = pm.detector_of[a];
            if (j >= spec.n || hit[j]) throw Error(ErrorCode::invalid_matching, "assignment is not a bijection");
            hit[j] = 1;
            const auto color = adj.color(a, j);
            if (!color) {
                throw Error(ErrorCode::invalid_matching,
                            "pair (" + std::to_string(a + 1) + ",X" + std::to_string(j + 1) + ") is not an edge");
            }
            amp *= adj.weight(a, j);
            ket[j] = ket_char(*color);
        }
        state.terms[ket] += static_cast<double>(exchange_sign(pm.detector_of, spec.statistics)) * amp;
    }
    return state;
}

/// Full pipeline: enumerate PMs and assemble (unnormalized).
inline NoBunchState compute_state(const NetworkSpec& spec) { return assemble_state(enumerate_pms(spec), spec); }

inline constexpr std::size_t kOracleMaxN = 10;

/// Brute-force permutation sum over all n! assignments; shares no code with
/// the cycle-based enumeration.
inline NoBunchState oracle_state(const NetworkSpec& spec) {
    if (spec.n > kOracleMaxN) {
        throw Error(ErrorCode::too_large, "oracle limited to n <= " + std::to_string(kOracleMaxN));
    }
    const std::size_t n = spec.n;
    std::vector<Complex> weight(n * n);
    std::vector<char> present(n * n, 0), down(n * n, 0);
    for (const auto& t : spec.transitions) {
        weight[t.source * n + t.detector] = t.amplitude;
        present[t.source * n + t.detector] = 1;
        down[t.source * n + t.detector] = t.color == Color::down;
    }
    NoBunchState state{n, {}, false, std::nullopt};
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        Complex amp{1.0, 0.0};
        std::string ket(n, 'u');
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) {
            const std::size_t idx = a * n + sigma[a];
            ok = present[idx] != 0;
            amp *= weight[idx];
            if (down[idx]) ket[sigma[a]] = 'd';
        }
        if (!ok) continue;
        int sign = 1;
        if (spec.statistics == Statistics::fermion) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = i + 1; k < n; ++k) {
                    if (sigma[i] > sigma[k]) sign = -sign;
                }
            }
        }
        state.terms[ket] += static_cast<double>(sign) * amp;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return state;
}

inline constexpr double kZeroNormThreshold = 1e-14;

/// Divides by the norm. The squared input norm is kept as the post-selection probability.
inline NoBunchState normalize(const NoBunchState& state) {
    const double norm2 = state.norm_squared();
    if (!(std::sqrt(norm2) > kZeroNormThreshold)) {
        throw Error(ErrorCode::zero_state, "state has zero norm (no perfect matching or full cancellation)");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    NoBunchState out{state.n, {}, true, norm2};
    for (const auto& [ket, amp] : state.terms) out.terms[ket] = amp * scale;
    return out;
}

inline Complex inner_product(const NoBunchState& bra, const NoBunchState& ket) {
    if (bra.n != ket.n) throw Error(ErrorCode::dimension_mismatch, "states have different n");
    Complex acc{};
    for (const auto& [k, amp] : ket.terms) acc += std::conj(bra.amplitude(k)) * amp;
    return acc;
}

/// True iff s1 = e^{i phi} s2 for some global phase, i.e. |<s1|s2>| = 1 within tol.
inline bool state_equiv(const NoBunchState& s1, const NoBunchState& s2, double tol = kDefaultTolerance) {
    const Complex overlap = inner_product(s1, s2);
    return std::abs(std::abs(overlap) - 1.0) <= tol;
}

/// Largest |a1(k) - a2(k)| over the union of kets; absent kets count as zero.
inline double max_amplitude_difference(const NoBunchState& s1, const NoBunchState& s2) {
    if (s1.n != s2.n) throw Error(ErrorCode::dimension_mismatch, "states have different n");
    double worst = 0.0;
    for (const auto& [k, amp] : s1.terms) worst = std::max(worst, std::abs(amp - s2.amplitude(k)));
    for (const auto& [k, amp] : s2.terms) worst = std::max(worst, std::abs(amp - s1.amplitude(k)));
    return worst;
}

/// Ket rendered with arrow glyphs for human output.
inline std::string arrow_ket(const std::string& ket) {
    std::string out = "|";
    for (char c : ket) out += c == 'u' ? "↑" : "↓";
    return out + "⟩";
}

}  // namespace lqn
