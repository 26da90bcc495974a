#pragma once

// Directed-graph view of a network and the perfect-matching machinery built on
// it. Vertex w_i merges particle i with detector X_i, so a transition
// (a, X_j) becomes the directed edge w_a -> w_j and a loop when a == j.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqn/network.hpp"

namespace lqn {

struct DirectedEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    Complex weight;
    Color color = Color::up;

    bool is_loop() const { return from == to; }
    friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

struct DirectedView {
    std::size_t n = 0;
    std::vector<DirectedEdge> edges;  ///< sorted by (from, to)

    std::vector<std::vector<std::size_t>> successors() const {
        std::vector<std::vector<std::size_t>> out(n);
        for (const auto& e : edges) out[e.from].push_back(e.to);
        return out;
    }
};

struct PerfectMatching {
    std::vector<std::size_t> detector_of;  ///< sigma(a), indexed by particle
    std::vector<Complex> weights;          ///< T_{a, sigma(a)}
    std::vector<Color> colors;             ///< color of (a, sigma(a))

    std::size_t size() const { return detector_of.size(); }
    friend bool operator==(const PerfectMatching&, const PerfectMatching&) = default;
};

/// Vertex sequence (w_{i1}, ..., w_{ik}) closing back to w_{i1}; starts at its smallest vertex.
using ElementaryCycle = std::vector<std::size_t>;

inline DirectedView to_directed(const ColoredAdjacency& adj) {
    DirectedView view{adj.size(), {}};
    for (std::size_t a = 0; a < adj.size(); ++a) {
        for (std::size_t j = 0; j < adj.size(); ++j) {
            if (auto c = adj.color(a, j)) view.edges.push_back({a, j, adj.weight(a, j), *c});
        }
    }
    return view;
}

inline DirectedView to_directed(const BipartiteView& bip) {
    DirectedView view{bip.n, {}};
    for (const auto& e : bip.edges) view.edges.push_back({e.particle, e.detector, e.weight, e.color});
    std::sort(view.edges.begin(), view.edges.end(),
              [](const auto& x, const auto& y) { return std::pair(x.from, x.to) < std::pair(y.from, y.to); });
    return view;
}

inline BipartiteView to_bipartite(const DirectedView& dir) {
    BipartiteView bip{dir.n, {}};
    for (const auto& e : dir.edges) bip.edges.push_back({e.from, e.to, e.weight, e.color});
    return bip;
}

namespace detail {

inline const DirectedEdge* find_edge(const DirectedView& dir, std::size_t from, std::size_t to) {
    auto it = std::lower_bound(dir.edges.begin(), dir.edges.end(), std::pair(from, to),
                               [](const DirectedEdge& e, const std::pair<std::size_t, std::size_t>& key) {
                                   return std::pair(e.from, e.to) < key;
                               });
    if (it == dir.edges.end() || it->from != from || it->to != to) return nullptr;
    return &*it;
}

inline PerfectMatching matching_from_assignment(const DirectedView& dir, std::vector<std::size_t> sigma) {
    PerfectMatching pm;
    pm.weights.reserve(sigma.size());
    pm.colors.reserve(sigma.size());
    for (std::size_t a = 0; a < sigma.size(); ++a) {
        const auto* e = find_edge(dir, a, sigma[a]);
        if (e == nullptr) {
            throw Error(ErrorCode::invalid_matching,
                        "pair (" + std::to_string(a + 1) + ",X" + std::to_string(sigma[a] + 1) + ") is not an edge");
        }
        pm.weights.push_back(e->weight);
        pm.colors.push_back(e->color);
    }
    pm.detector_of = std::move(sigma);
    return pm;
}

/// Tarjan's algorithm over the subgraph induced by `active` vertices.
/// Components are returned in reverse topological order.
inline std::vector<std::vector<std::size_t>> tarjan_scc(const std::vector<std::vector<std::size_t>>& succ,
                                                        const std::vector<char>& active) {
    const std::size_t n = succ.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    // Iterative DFS: frames hold (vertex, next successor position).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (!active[root] || index[root] != unvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < succ[v].size()) {
                const std::size_t w = succ[v][pos++];
                if (!active[w]) continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) {
                auto& parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                std::vector<std::size_t> comp;
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
        }
    }
    return components;
}

}  // namespace detail

/// One perfect matching found by Kuhn's augmenting-path search, or nullopt.
/// Particles are processed in index order and edges in detector order, so the
/// result is deterministic for a given input.
inline std::optional<PerfectMatching> initial_perfect_matching(const BipartiteView& bip) {
    const std::size_t n = bip.n;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : bip.edges) adj[e.particle].push_back(e.detector);
    for (auto& row : adj) std::sort(row.begin(), row.end());

    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> particle_at(n, none);
    std::vector<char> visited(n);

    std::function<bool(std::size_t)> augment = [&](std::size_t a) {
        for (std::size_t j : adj[a]) {
            if (visited[j]) continue;
            visited[j] = 1;
            if (particle_at[j] == none || augment(particle_at[j])) {
                particle_at[j] = a;
                return true;
            }
        }
        return false;
    };

    for (std::size_t a = 0; a < n; ++a) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!augment(a)) return std::nullopt;
    }
    std::vector<std::size_t> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[particle_at[j]] = j;
    return detail::matching_from_assignment(to_directed(bip), std::move(sigma));
}

/// Maps detector labels so that `pm` becomes the set of loops.
/// Vertex v of the result carries particle v and detector `relabeling[v]`.
struct Relabeled {
    DirectedView graph;
    std::vector<std::size_t> relabeling;
};

inline Relabeled relabel_to_loops(const DirectedView& dir, const PerfectMatching& pm) {
    const std::size_t n = dir.n;
    if (pm.size() != n) throw Error(ErrorCode::invalid_matching, "matching size differs from n");
    std::vector<std::size_t> vertex_of_detector(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t j = pm.detector_of[a];
        if (j >= n || vertex_of_detector[j] != n) {
            throw Error(ErrorCode::invalid_matching, "assignment is not a bijection");
        }
        if (detail::find_edge(dir, a, j) == nullptr) {
            throw Error(ErrorCode::invalid_matching,
                        "pair (" + std::to_string(a + 1) + ",X" + std::to_string(j + 1) + ") is not an edge");
        }
        vertex_of_detector[j] = a;
    }
    Relabeled out{{n, {}}, pm.detector_of};
    out.graph.edges.reserve(dir.edges.size());
    for (const auto& e : dir.edges) out.graph.edges.push_back({e.from, vertex_of_detector[e.to], e.weight, e.color});
    std::sort(out.graph.edges.begin(), out.graph.edges.end(),
              [](const auto& x, const auto& y) { return std::pair(x.from, x.to) < std::pair(y.from, y.to); });
    return out;
}

/// All elementary cycles of length >= 2 (loops excluded), via Johnson's
/// blocking search. Each cycle starts at its smallest vertex; the list is
/// sorted lexicographically.
inline std::vector<ElementaryCycle> elementary_cycles(const DirectedView& dir) {
    const std::size_t n = dir.n;
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& e : dir.edges) {
        if (!e.is_loop()) succ[e.from].push_back(e.to);
    }

    std::vector<ElementaryCycle> cycles;
    std::vector<char> blocked(n), in_component(n);
    std::vector<std::vector<std::size_t>> block_map(n);
    std::vector<std::size_t> path;

    std::function<void(std::size_t)> unblock = [&](std::size_t u) {
        blocked[u] = 0;
        auto pending = std::move(block_map[u]);
        block_map[u].clear();
        for (std::size_t w : pending) {
            if (blocked[w]) unblock(w);
        }
    };

    for (std::size_t s = 0; s < n; ++s) {
        std::vector<char> active(n, 0);
        for (std::size_t v = s; v < n; ++v) active[v] = 1;
        const auto comps = detail::tarjan_scc(succ, active);
        const auto it = std::find_if(comps.begin(), comps.end(), [&](const auto& c) { return c.front() == s; });
        if (it == comps.end() || it->size() < 2) continue;

        std::fill(in_component.begin(), in_component.end(), 0);
        for (std::size_t v : *it) {
            in_component[v] = 1;
            blocked[v] = 0;
            block_map[v].clear();
        }

        std::function<bool(std::size_t)> circuit = [&](std::size_t v) {
            bool found = false;
            path.push_back(v);
            blocked[v] = 1;
            for (std::size_t w : succ[v]) {
                if (!in_component[w]) continue;
                if (w == s) {
                    cycles.push_back(path);
                    found = true;
                } else if (!blocked[w] && circuit(w)) {
                    found = true;
                }
            }
            if (found) {
                unblock(v);
            } else {
                for (std::size_t w : succ[v]) {
                    if (!in_component[w]) continue;
                    auto& bm = block_map[w];
                    if (std::find(bm.begin(), bm.end(), v) == bm.end()) bm.push_back(v);
                }
            }
            path.pop_back();
            return found;
        };
        circuit(s);
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

/// Complete PM set. After relabeling an initial PM onto the loops, every PM
/// is the edge exchange along one set of pairwise vertex-disjoint elementary
/// cycles. Output is sorted lexicographically by assignment.
inline std::vector<PerfectMatching> enumerate_pms(const BipartiteView& bip) {
    auto initial = initial_perfect_matching(bip);
    if (!initial) return {};
    const DirectedView dir = to_directed(bip);
    const auto relabeled = relabel_to_loops(dir, *initial);
    const auto cycles = elementary_cycles(relabeled.graph);
    const std::size_t n = bip.n;
    const auto& detector_of_vertex = relabeled.relabeling;

    std::vector<PerfectMatching> out;
    std::vector<char> used(n, 0);
    std::vector<std::size_t> next(n);  // relabeled permutation: vertex -> vertex
    std::iota(next.begin(), next.end(), 0);

    auto emit = [&] {
        std::vector<std::size_t> sigma(n);
        for (std::size_t a = 0; a < n; ++a) sigma[a] = detector_of_vertex[next[a]];
        out.push_back(detail::matching_from_assignment(dir, std::move(sigma)));
    };

    std::function<void(std::size_t)> choose = [&](std::size_t first) {
        emit();
        for (std::size_t c = first; c < cycles.size(); ++c) {
            const auto& cyc = cycles[c];
            if (std::any_of(cyc.begin(), cyc.end(), [&](std::size_t v) { return used[v]; })) continue;
            for (std::size_t k = 0; k < cyc.size(); ++k) {
                used[cyc[k]] = 1;
                next[cyc[k]] = cyc[(k + 1) % cyc.size()];
            }
            choose(c + 1);
            for (std::size_t v : cyc) {
                used[v] = 0;
                next[v] = v;
            }
        }
    };
    choose(0);

    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.detector_of < y.detector_of; });
    return out;
}

inline std::vector<PerfectMatching> enumerate_pms(const NetworkSpec& spec) {
    return enumerate_pms(to_bipartite(to_adjacency(spec)));
}

/// Loop-labeled subgraph holding the loops and every edge on an elementary
/// cycle. Vertex v carries particle v and detector `detector_of_vertex[v]`;
/// `removed` lists the dropped edges in original (particle, detector) labels.
struct PMDiagram {
    DirectedView graph;
    std::vector<std::size_t> detector_of_vertex;
    std::vector<DirectedEdge> removed;

    /// Retained edges as original (particle -> detector) transitions, sorted.
    std::vector<DirectedEdge> original_edges() const {
        std::vector<DirectedEdge> out;
        for (const auto& e : graph.edges) out.push_back({e.from, detector_of_vertex[e.to], e.weight, e.color});
        std::sort(out.begin(), out.end(),
                  [](const auto& x, const auto& y) { return std::pair(x.from, x.to) < std::pair(y.from, y.to); });
        return out;
    }

    bool identity_labeling() const {
        for (std::size_t v = 0; v < detector_of_vertex.size(); ++v) {
            if (detector_of_vertex[v] != v) return false;
        }
        return true;
    }
};

inline PMDiagram pm_diagram(const DirectedView& dir) {
    // Prefer the existing labeling when every vertex already has a loop.
    std::optional<PerfectMatching> pm;
    {
        std::vector<std::size_t> identity(dir.n);
        std::iota(identity.begin(), identity.end(), 0);
        const bool all_loops = std::all_of(identity.begin(), identity.end(),
                                           [&](std::size_t v) { return detail::find_edge(dir, v, v) != nullptr; });
        pm = all_loops ? std::optional(detail::matching_from_assignment(dir, identity))
                       : initial_perfect_matching(to_bipartite(dir));
    }
    if (!pm) throw Error(ErrorCode::no_perfect_matching, "network has no perfect matching");

    const auto relabeled = relabel_to_loops(dir, *pm);
    const auto cycles = elementary_cycles(relabeled.graph);
    const std::size_t n = dir.n;
    std::vector<char> keep(n * n, 0);
    for (std::size_t v = 0; v < n; ++v) keep[v * n + v] = 1;
    for (const auto& cyc : cycles) {
        for (std::size_t k = 0; k < cyc.size(); ++k) keep[cyc[k] * n + cyc[(k + 1) % cyc.size()]] = 1;
    }

    PMDiagram diagram{{n, {}}, relabeled.relabeling, {}};
    for (const auto& e : relabeled.graph.edges) {
        if (keep[e.from * n + e.to]) {
            diagram.graph.edges.push_back(e);
        } else {
            diagram.removed.push_back({e.from, relabeled.relabeling[e.to], e.weight, e.color});
        }
    }
    std::sort(diagram.removed.begin(), diagram.removed.end(),
              [](const auto& x, const auto& y) { return std::pair(x.from, x.to) < std::pair(y.from, y.to); });
    return diagram;
}

inline PMDiagram pm_diagram(const NetworkSpec& spec) { return pm_diagram(to_directed(to_adjacency(spec))); }

/// Connected components ignoring direction, in diagram vertex labels.
inline Partition weak_components(const DirectedView& graph) {
    std::vector<std::size_t> parent(graph.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& e : graph.edges) parent[root(e.from)] = root(e.to);
    std::vector<std::vector<std::size_t>> groups(graph.n);
    for (std::size_t v = 0; v < graph.n; ++v) groups[root(v)].push_back(v);
    Partition out;
    for (auto& g : groups) {
        if (!g.empty()) out.push_back(std::move(g));
    }
    return canonical_partition(std::move(out));
}

inline Partition weak_components(const PMDiagram& diagram) { return weak_components(diagram.graph); }

struct StrongConnectivity {
    bool strongly_connected = false;
    Partition components;
};

inline StrongConnectivity strongly_connected(const DirectedView& graph) {
    std::vector<std::vector<std::size_t>> succ(graph.n);
    for (const auto& e : graph.edges) {
        if (!e.is_loop()) succ[e.from].push_back(e.to);
    }
    auto comps = canonical_partition(detail::tarjan_scc(succ, std::vector<char>(graph.n, 1)));
    const bool single = comps.size() == 1;
    return {single, std::move(comps)};
}

inline StrongConnectivity strongly_connected(const PMDiagram& diagram) { return strongly_connected(diagram.graph); }

}  // namespace lqn
