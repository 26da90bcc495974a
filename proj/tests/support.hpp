#pragma once

// Independent reference implementations used as test oracles. None of these
// call into the cycle-based enumeration or the SVD machinery.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "lqn/lqn.hpp"

namespace lqn::oracle {

/// All permutations sigma with every (a, sigma(a)) an edge, in lexicographic order.
inline std::vector<std::vector<std::size_t>> brute_force_pms(const NetworkSpec& spec) {
    const std::size_t n = spec.n;
    std::vector<char> present(n * n, 0);
    for (const auto& t : spec.transitions) present[t.source * n + t.detector] = 1;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) ok = present[a * n + sigma[a]] != 0;
        if (ok) out.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

/// Plain DFS count of directed simple cycles of length >= 2, each rooted at its minimum vertex.
inline std::size_t brute_force_cycle_count(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [u, v] : edges) {
        if (u != v) adj[u][v] = 1;
    }
    std::size_t count = 0;
    std::vector<char> on_path(n, 0);
    std::function<void(std::size_t, std::size_t, std::size_t)> dfs = [&](std::size_t root, std::size_t u, std::size_t len) {
        for (std::size_t v = root; v < n; ++v) {
            if (!adj[u][v]) continue;
            if (v == root && len >= 2) {
                ++count;
            } else if (v != root && !on_path[v]) {
                on_path[v] = 1;
                dfs(root, v, len + 1);
                on_path[v] = 0;
            }
        }
    };
    for (std::size_t r = 0; r < n; ++r) {
        on_path[r] = 1;
        dfs(r, r, 1);
        on_path[r] = 0;
    }
    return count;
}

/// psi over 2^n with bit j set when detector j reads 'd'.
inline std::vector<Complex> dense(const NoBunchState& s) {
    std::vector<Complex> psi(std::size_t{1} << s.n);
    for (const auto& [ket, amp] : s.terms) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < s.n; ++j) {
            if (ket[j] == 'd') idx |= std::size_t{1} << j;
        }
        psi[idx] = amp;
    }
    return psi;
}

/// Product test across mask | ~mask using every 2x2 minor:
/// psi(x_A x_B) psi(y_A y_B) == psi(x_A y_B) psi(y_A x_B).
inline bool factorizes(const std::vector<Complex>& psi, std::size_t n, std::size_t mask, double tol) {
    const std::size_t full = (std::size_t{1} << n) - 1;
    const std::size_t other = full & ~mask;
    double scale = 0.0;
    for (auto z : psi) scale = std::max(scale, std::abs(z));
    for (std::size_t x = 0; x <= full; ++x) {
        for (std::size_t y = 0; y <= full; ++y) {
            const Complex lhs = psi[x] * psi[y];
            const Complex rhs = psi[(x & mask) | (y & other)] * psi[(y & mask) | (x & other)];
            if (std::abs(lhs - rhs) > tol * scale * scale) return false;
        }
    }
    return true;
}

inline std::size_t mask_of(const std::vector<std::size_t>& block) {
    std::size_t m = 0;
    for (std::size_t j : block) m |= std::size_t{1} << j;
    return m;
}

/// True when some nontrivial bipartition factorizes.
inline bool has_product_cut(const NoBunchState& s, double tol) {
    const auto psi = dense(s);
    const std::size_t full = (std::size_t{1} << s.n) - 1;
    for (std::size_t mask = 1; mask < full; ++mask) {
        if ((mask & 1) && factorizes(psi, s.n, mask, tol)) return true;
    }
    return false;
}

inline Complex random_phase_amp(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.2, 1.0), ph(0.0, 2.0 * M_PI);
    return std::polar(mag(rng), ph(rng));
}

/// Random strict network: a hidden permutation guarantees a PM, other pairs
/// appear with probability `density`; colors uniform; rows normalized.
inline NetworkSpec random_network(std::size_t n, std::mt19937_64& rng, double density = 0.4,
                                  Statistics stats = Statistics::boson) {
    std::bernoulli_distribution edge(density), coin(0.5);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    NetworkSpec spec{n, stats, NormalizationMode::strict, {}};
    std::vector<double> norms(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t j = 0; j < n; ++j) {
            if (perm[a] == j || edge(rng)) {
                const Complex amp = random_phase_amp(rng);
                norms[a] += std::norm(amp);
                spec.transitions.push_back({a, j, amp, coin(rng) ? Color::up : Color::down});
            }
        }
    }
    for (auto& t : spec.transitions) t.amplitude /= std::sqrt(norms[t.source]);
    return validate_network(spec);
}

/// Random row (alpha, beta) with |alpha|^2 + |beta|^2 = 1.
inline std::pair<Complex, Complex> random_row2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.05, M_PI / 2 - 0.05), ph(0.0, 2.0 * M_PI);
    const double t = angle(rng);
    return {std::polar(std::cos(t), ph(rng)), std::polar(std::sin(t), ph(rng))};
}

inline double global_phase_distance(const NoBunchState& a, const NoBunchState& b) {
    const Complex ov = inner_product(a, b);
    const Complex phase = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex{1.0, 0.0};
    double worst = 0.0;
    std::set<std::string> kets;
    for (const auto& [k, v] : a.terms) kets.insert(k);
    for (const auto& [k, v] : b.terms) kets.insert(k);
    for (const auto& k : kets) worst = std::max(worst, std::abs(a.amplitude(k) * phase - b.amplitude(k)));
    return worst;
}

}  // namespace lqn::oracle
