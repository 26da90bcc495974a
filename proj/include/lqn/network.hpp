#pragma once

// Linear quantum network model: particles a = 0..n-1 evolve into detectors
// j = 0..n-1 with amplitude T[a][j] and arrival color r[a][j]. Indices are
// 0-based here; file formats and human output are 1-based.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqn/types.hpp"

namespace lqn {

struct Transition {
    std::size_t source = 0;    ///< particle a
    std::size_t detector = 0;  ///< detector j
    Complex amplitude;
    Color color = Color::up;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct NetworkSpec {
    std::size_t n = 0;
    Statistics statistics = Statistics::boson;
    NormalizationMode mode = NormalizationMode::strict;
    std::vector<Transition> transitions;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Squared row norms sum_j |T_aj|^2, one entry per particle.
inline std::vector<double> row_norms(const NetworkSpec& spec) {
    std::vector<double> sums(spec.n, 0.0);
    for (const auto& t : spec.transitions) {
        if (t.source < spec.n) sums[t.source] += std::norm(t.amplitude);
    }
    return sums;
}

inline bool rows_normalized(const NetworkSpec& spec, double tol = kDefaultTolerance) {
    for (double s : row_norms(spec)) {
        if (std::abs(s - 1.0) > tol) return false;
    }
    return true;
}

/// Checks the structural invariants and, in strict mode, row normalization.
/// Returns the spec with transitions sorted by (source, detector).
inline NetworkSpec validate_network(NetworkSpec raw, double tol = kDefaultTolerance) {
    if (raw.n == 0) throw Error(ErrorCode::invalid_argument, "network must have n >= 1");
    std::vector<char> seen(raw.n * raw.n, 0);
    for (const auto& t : raw.transitions) {
        if (t.source >= raw.n || t.detector >= raw.n) {
            throw Error(ErrorCode::index_out_of_range,
                        "edge (" + std::to_string(t.source + 1) + "," + std::to_string(t.detector + 1) +
                            ") outside 1.." + std::to_string(raw.n));
        }
        auto& slot = seen[t.source * raw.n + t.detector];
        if (slot) {
            throw Error(ErrorCode::duplicate_edge,
                        "edge (" + std::to_string(t.source + 1) + ",X" + std::to_string(t.detector + 1) +
                            ") given twice");
        }
        slot = 1;
        if (t.amplitude == Complex{0.0, 0.0}) {
            throw Error(ErrorCode::zero_amplitude,
                        "edge (" + std::to_string(t.source + 1) + ",X" + std::to_string(t.detector + 1) +
                            ") has zero amplitude");
        }
    }
    if (raw.mode == NormalizationMode::strict) {
        auto sums = row_norms(raw);
        for (std::size_t a = 0; a < raw.n; ++a) {
            if (std::abs(sums[a] - 1.0) > tol) {
                throw Error(ErrorCode::row_not_normalized,
                            "row " + std::to_string(a + 1) + " sums to " + std::to_string(sums[a]));
            }
        }
    }
    std::sort(raw.transitions.begin(), raw.transitions.end(), [](const Transition& x, const Transition& y) {
        return std::pair(x.source, x.detector) < std::pair(y.source, y.detector);
    });
    return raw;
}

/// Weight matrix A_d and color matrix C_d, row-major, sharing one sparsity pattern.
class ColoredAdjacency {
public:
    ColoredAdjacency() = default;
    explicit ColoredAdjacency(std::size_t n) : n_(n), weights_(n * n), colors_(n * n) {}

    std::size_t size() const { return n_; }

    Complex weight(std::size_t a, std::size_t j) const { return weights_[a * n_ + j]; }
    std::optional<Color> color(std::size_t a, std::size_t j) const { return colors_[a * n_ + j]; }
    bool has_edge(std::size_t a, std::size_t j) const { return colors_[a * n_ + j].has_value(); }

    void set(std::size_t a, std::size_t j, Complex w, Color c) {
        weights_[a * n_ + j] = w;
        colors_[a * n_ + j] = c;
    }

    void clear(std::size_t a, std::size_t j) {
        weights_[a * n_ + j] = Complex{};
        colors_[a * n_ + j].reset();
    }

    std::size_t edge_count() const {
        return static_cast<std::size_t>(
            std::count_if(colors_.begin(), colors_.end(), [](const auto& c) { return c.has_value(); }));
    }

    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < n_; ++j) {
            std::swap(weights_[a * n_ + j], weights_[b * n_ + j]);
            std::swap(colors_[a * n_ + j], colors_[b * n_ + j]);
        }
    }

    friend bool operator==(const ColoredAdjacency&, const ColoredAdjacency&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Complex> weights_;
    std::vector<std::optional<Color>> colors_;
};

inline ColoredAdjacency to_adjacency(const NetworkSpec& spec) {
    ColoredAdjacency adj(spec.n);
    for (const auto& t : spec.transitions) adj.set(t.source, t.detector, t.amplitude, t.color);
    return adj;
}

/// Inverse of to_adjacency; transitions come out in row-major order.
inline NetworkSpec to_network(const ColoredAdjacency& adj, Statistics statistics, NormalizationMode mode) {
    NetworkSpec spec{adj.size(), statistics, mode, {}};
    for (std::size_t a = 0; a < adj.size(); ++a) {
        for (std::size_t j = 0; j < adj.size(); ++j) {
            if (auto c = adj.color(a, j)) spec.transitions.push_back({a, j, adj.weight(a, j), *c});
        }
    }
    return spec;
}

struct BipartiteEdge {
    std::size_t particle = 0;
    std::size_t detector = 0;
    Complex weight;
    Color color = Color::up;

    friend bool operator==(const BipartiteEdge&, const BipartiteEdge&) = default;
};

/// Balanced bigraph: particles U = {0..n-1} on the left, detectors V = {X_0..X_{n-1}} on the right.
struct BipartiteView {
    std::size_t n = 0;
    std::vector<BipartiteEdge> edges;  ///< sorted by (particle, detector)
};

inline BipartiteView to_bipartite(const ColoredAdjacency& adj) {
    BipartiteView view{adj.size(), {}};
    for (std::size_t a = 0; a < adj.size(); ++a) {
        for (std::size_t j = 0; j < adj.size(); ++j) {
            if (auto c = adj.color(a, j)) view.edges.push_back({a, j, adj.weight(a, j), *c});
        }
    }
    return view;
}

/// Swaps particle rows a and b. The returned sign is the exchange phase the
/// swapped matrix carries relative to the original: +1 bosons, -1 fermions.
inline std::pair<ColoredAdjacency, int> exchange_rows(ColoredAdjacency adj, std::size_t a, std::size_t b,
                                                      Statistics statistics) {
    if (a >= adj.size() || b >= adj.size()) {
        throw Error(ErrorCode::index_out_of_range, "row index outside 1.." + std::to_string(adj.size()));
    }
    if (a == b) throw Error(ErrorCode::invalid_argument, "exchange_rows needs two distinct rows");
    adj.swap_rows(a, b);
    return {std::move(adj), statistics == Statistics::boson ? 1 : -1};
}

/// A_d A_d^dagger == I entrywise within tol.
inline bool is_unitary(const ColoredAdjacency& adj, double tol = kDefaultTolerance) {
    const std::size_t n = adj.size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += adj.weight(r, k) * std::conj(adj.weight(c, k));
            const Complex expected = r == c ? Complex{1.0, 0.0} : Complex{};
            if (std::abs(acc - expected) > tol) return false;
        }
    }
    return true;
}

// General transform with both spin components per channel, T_{a,j r}.

struct Channel {
    std::size_t source = 0;
    std::size_t detector = 0;
    Complex amp_up;
    Complex amp_down;

    friend bool operator==(const Channel&, const Channel&) = default;
};

struct GeneralTransform {
    std::size_t n = 0;
    std::vector<Channel> channels;

    friend bool operator==(const GeneralTransform&, const GeneralTransform&) = default;
};

inline GeneralTransform validate_general_transform(GeneralTransform gt, double tol = kDefaultTolerance) {
    if (gt.n == 0) throw Error(ErrorCode::invalid_argument, "transform must have n >= 1");
    std::vector<char> seen(gt.n * gt.n, 0);
    std::vector<double> sums(gt.n, 0.0);
    for (const auto& ch : gt.channels) {
        if (ch.source >= gt.n || ch.detector >= gt.n) {
            throw Error(ErrorCode::index_out_of_range, "channel outside 1.." + std::to_string(gt.n));
        }
        if (std::exchange(seen[ch.source * gt.n + ch.detector], 1)) {
            throw Error(ErrorCode::duplicate_edge, "channel (" + std::to_string(ch.source + 1) + ",X" +
                                                       std::to_string(ch.detector + 1) + ") given twice");
        }
        sums[ch.source] += std::norm(ch.amp_up) + std::norm(ch.amp_down);
    }
    for (std::size_t a = 0; a < gt.n; ++a) {
        if (std::abs(sums[a] - 1.0) > tol) {
            throw Error(ErrorCode::row_not_normalized,
                        "row " + std::to_string(a + 1) + " sums to " + std::to_string(sums[a]));
        }
    }
    return gt;
}

/// Collapses single-spin channels to colored transitions. Channels whose two
/// spin components are both nonzero need a multigraph and are rejected.
inline NetworkSpec reduce_general_transform(const GeneralTransform& gt, Statistics statistics = Statistics::boson,
                                            double zero_tol = 1e-12) {
    NetworkSpec spec{gt.n, statistics, NormalizationMode::strict, {}};
    for (const auto& ch : gt.channels) {
        const bool has_up = std::abs(ch.amp_up) > zero_tol;
        const bool has_down = std::abs(ch.amp_down) > zero_tol;
        if (has_up && has_down) {
            throw Error(ErrorCode::superposed_internal_state,
                        "channel (" + std::to_string(ch.source + 1) + ",X" + std::to_string(ch.detector + 1) +
                            ") arrives in a superposition of up and down");
        }
        if (!has_up && !has_down) continue;
        spec.transitions.push_back(
            {ch.source, ch.detector, has_up ? ch.amp_up : ch.amp_down, has_up ? Color::up : Color::down});
    }
    return validate_network(std::move(spec), 1e-9);
}

inline GeneralTransform expand_to_general(const NetworkSpec& spec) {
    GeneralTransform gt{spec.n, {}};
    for (const auto& t : spec.transitions) {
        gt.channels.push_back({t.source, t.detector, t.color == Color::up ? t.amplitude : Complex{},
                               t.color == Color::down ? t.amplitude : Complex{}});
    }
    return gt;
}

}  // namespace lqn
