#pragma once

// JSON (de)serialization for networks, states and reports, and Graphviz DOT
// export. Everything outside the library is 1-based.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lqn/entanglement.hpp"

namespace lqn {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& pointer, const std::string& what) {
    throw Error(ErrorCode::parse_error, "at " + (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& pointer) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(pointer, "missing field \"" + key + "\"");
    return *it;
}

inline double number_at(const Json& j, const std::string& pointer) {
    if (!j.is_number()) schema_error(pointer, "expected a number");
    return j.get<double>();
}

inline std::size_t index_at(const Json& j, const std::string& pointer) {
    if (!j.is_number_integer()) schema_error(pointer, "expected an integer");
    const auto v = j.get<long long>();
    if (v < 1) schema_error(pointer, "indices are 1-based, got " + std::to_string(v));
    return static_cast<std::size_t>(v - 1);
}

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k) line += text[k] == '\n';
    return line;
}

inline Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Complex parse_amplitude(const Json& amp, const std::string& pointer) {
    if (!amp.is_object()) schema_error(pointer, "amplitude must be an object");
    const bool cartesian = amp.contains("re") || amp.contains("im");
    const bool polar = amp.contains("r") || amp.contains("theta");
    if (cartesian == polar) schema_error(pointer, "amplitude needs either {re, im} or {r, theta}");
    if (cartesian) {
        return {number_at(require(amp, "re", pointer), pointer + "/re"),
                number_at(require(amp, "im", pointer), pointer + "/im")};
    }
    return std::polar(number_at(require(amp, "r", pointer), pointer + "/r"),
                      number_at(require(amp, "theta", pointer), pointer + "/theta"));
}

inline Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_of_offset(text, e.byte)) + ": " + std::string(e.what()));
    }
}

}  // namespace detail

/// Schema check without validation; JSON pointers locate every failure.
inline NetworkSpec network_from_json(const Json& doc) {
    if (!doc.is_object()) detail::schema_error("", "top level must be an object");
    if (auto v = doc.find("version"); v != doc.end() && *v != 1) {
        detail::schema_error("/version", "unsupported version " + v->dump());
    }
    NetworkSpec spec;
    const auto& n = detail::require(doc, "n", "");
    if (!n.is_number_integer() || n.get<long long>() < 1) detail::schema_error("/n", "n must be a positive integer");
    spec.n = n.get<std::size_t>();

    if (auto s = doc.find("statistics"); s != doc.end()) {
        if (*s == "boson") {
            spec.statistics = Statistics::boson;
        } else if (*s == "fermion") {
            spec.statistics = Statistics::fermion;
        } else {
            detail::schema_error("/statistics", "expected \"boson\" or \"fermion\", got " + s->dump());
        }
    }
    if (auto m = doc.find("mode"); m != doc.end()) {
        if (*m == "strict") {
            spec.mode = NormalizationMode::strict;
        } else if (*m == "design") {
            spec.mode = NormalizationMode::design;
        } else {
            detail::schema_error("/mode", "expected \"strict\" or \"design\", got " + m->dump());
        }
    }

    const auto& edges = detail::require(doc, "edges", "");
    if (!edges.is_array()) detail::schema_error("/edges", "edges must be an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string at = "/edges/" + std::to_string(k);
        const auto& e = edges[k];
        if (!e.is_object()) detail::schema_error(at, "edge must be an object");
        Transition t;
        t.source = detail::index_at(detail::require(e, "from", at), at + "/from");
        t.detector = detail::index_at(detail::require(e, "to", at), at + "/to");
        t.amplitude = detail::parse_amplitude(detail::require(e, "amp", at), at + "/amp");
        const auto& color = detail::require(e, "color", at);
        if (color == "up") {
            t.color = Color::up;
        } else if (color == "down") {
            t.color = Color::down;
        } else {
            detail::schema_error(at + "/color", "expected \"up\" or \"down\", got " + color.dump());
        }
        spec.transitions.push_back(t);
    }
    return spec;
}

inline NetworkSpec parse_network(std::string_view text, double tol = kDefaultTolerance) {
    return validate_network(network_from_json(detail::parse_json_text(text)), tol);
}

/// Cartesian amplitudes; doubles are written in shortest round-trip form.
inline Json network_to_json(const NetworkSpec& spec) {
    Json edges = Json::array();
    for (const auto& t : spec.transitions) {
        edges.push_back(Json{{"from", t.source + 1},
                             {"to", t.detector + 1},
                             {"amp", detail::complex_json(t.amplitude)},
                             {"color", color_name(t.color)}});
    }
    return Json{{"version", 1},
                {"n", spec.n},
                {"statistics", statistics_name(spec.statistics)},
                {"mode", mode_name(spec.mode)},
                {"edges", std::move(edges)}};
}

inline std::string serialize_network(const NetworkSpec& spec) { return network_to_json(spec).dump(2) + "\n"; }

inline Json state_to_json(const NoBunchState& state) {
    Json terms = Json::array();
    for (const auto& [ket, amp] : state.terms) terms.push_back(Json{{"ket", ket}, {"amp", detail::complex_json(amp)}});
    Json out{{"n", state.n}, {"normalized", state.normalized}};
    out["postselect_probability"] = state.postselect_probability ? Json(*state.postselect_probability) : Json(nullptr);
    out["terms"] = std::move(terms);
    return out;
}

inline NoBunchState state_from_json(const Json& doc) {
    if (!doc.is_object()) detail::schema_error("", "top level must be an object");
    NoBunchState state;
    state.n = detail::require(doc, "n", "").get<std::size_t>();
    state.normalized = detail::require(doc, "normalized", "").get<bool>();
    const auto& p = detail::require(doc, "postselect_probability", "");
    if (!p.is_null()) state.postselect_probability = detail::number_at(p, "/postselect_probability");
    const auto& terms = detail::require(doc, "terms", "");
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string at = "/terms/" + std::to_string(k);
        const auto ket = detail::require(terms[k], "ket", at).get<std::string>();
        if (ket.size() != state.n || ket.find_first_not_of("ud") != std::string::npos) {
            detail::schema_error(at + "/ket", "ket must be " + std::to_string(state.n) + " characters of u/d");
        }
        state.terms[ket] = detail::parse_amplitude(detail::require(terms[k], "amp", at), at + "/amp");
    }
    return state;
}

inline Json partition_json(const Partition& p) {
    Json out = Json::array();
    for (const auto& block : p) {
        Json b = Json::array();
        for (std::size_t v : block) b.push_back(v + 1);
        out.push_back(std::move(b));
    }
    return out;
}

inline Json report_to_json(const SeparabilityReport& r) {
    Json lemma1 = Json::array();
    for (const auto& f : r.lemma1) lemma1.push_back(Json{{"detector", f.detector + 1}, {"color", color_name(f.color)}});
    Json violating = Json::array();
    for (const auto& e : r.theorem2.violating_edges) {
        violating.push_back(Json{{"from", e.from + 1}, {"to", e.to + 1}, {"color", color_name(e.color)}});
    }
    Json out;
    out["lemma1"] = std::move(lemma1);
    out["lemma2_partition"] = partition_json(r.lemma2_partition);
    out["theorem1"] = Json{{"color_condition_ok", r.theorem1.color_condition_ok},
                           {"strongly_connected", r.theorem1.strongly_connected},
                           {"verdict", verdict_name(r.theorem1.verdict)}};
    out["theorem2"] = Json{{"satisfied", r.theorem2.satisfied},
                           {"red_edge_count", r.theorem2.red_edge_count},
                           {"common_source", r.theorem2.common_source ? Json(*r.theorem2.common_source + 1) : Json()},
                           {"violating_edges", std::move(violating)}};
    out["numeric_finest_partition"] =
        r.numeric_finest_partition ? partition_json(*r.numeric_finest_partition) : Json(nullptr);
    out["numeric_seed"] = r.numeric_seed ? Json(*r.numeric_seed) : Json(nullptr);
    return out;
}

/// "(X1,X4)|(X2,X5)|(X3)"
inline std::string format_partition(const Partition& p) {
    std::string out;
    for (std::size_t b = 0; b < p.size(); ++b) {
        if (b) out += "|";
        out += "(";
        for (std::size_t k = 0; k < p[b].size(); ++k) {
            if (k) out += ",";
            out += "X" + std::to_string(p[b][k] + 1);
        }
        out += ")";
    }
    return out;
}

inline std::string format_complex(Complex z, int digits = 6) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%+.*f%+.*fi", digits, z.real(), digits, z.imag());
    return buf;
}

// DOT export

enum class DotView { bipartite, directed, pm_diagram };

struct DotRenderOptions {
    DotView view = DotView::directed;
    bool show_weights = false;
    std::optional<std::size_t> highlight_pm;  ///< 0-based index into enumerate_pms order
};

namespace detail {

inline std::string dot_edge_attrs(Complex w, Color c, bool weights, bool bold) {
    std::string attrs = std::string("color=") + (c == Color::up ? "blue" : "red");
    if (weights) attrs += ", label=\"" + format_complex(w, 3) + "\"";
    if (bold) attrs += ", penwidth=3";
    return "[" + attrs + "]";
}

}  // namespace detail

/// Edges carry color=blue for up and color=red for down. The bipartite view
/// is an undirected graph with particles and detectors in two ranks; the
/// other views are digraphs over w_1..w_n with loops.
inline std::string export_dot(const NetworkSpec& spec, const DotRenderOptions& opts = {}) {
    std::vector<char> highlight;
    if (opts.highlight_pm) {
        const auto pms = enumerate_pms(spec);
        if (*opts.highlight_pm >= pms.size()) {
            throw Error(ErrorCode::index_out_of_range,
                        "PM index " + std::to_string(*opts.highlight_pm + 1) + " outside 1.." + std::to_string(pms.size()));
        }
        highlight.assign(spec.n * spec.n, 0);
        const auto& pm = pms[*opts.highlight_pm];
        for (std::size_t a = 0; a < spec.n; ++a) highlight[a * spec.n + pm.detector_of[a]] = 1;
    }
    auto bold = [&](std::size_t a, std::size_t j) { return !highlight.empty() && highlight[a * spec.n + j]; };

    std::ostringstream os;
    if (opts.view == DotView::bipartite) {
        os << "graph lqn {\n";
        os << "  rankdir=LR;\n";
        os << "  { rank=same;";
        for (std::size_t a = 0; a < spec.n; ++a) os << " p" << a + 1;
        os << " }\n";
        os << "  { rank=same;";
        for (std::size_t j = 0; j < spec.n; ++j) os << " x" << j + 1;
        os << " }\n";
        for (std::size_t a = 0; a < spec.n; ++a) os << "  p" << a + 1 << " [label=\"" << a + 1 << "\", shape=circle];\n";
        for (std::size_t j = 0; j < spec.n; ++j) os << "  x" << j + 1 << " [label=\"X" << j + 1 << "\", shape=box];\n";
        for (const auto& e : to_bipartite(to_adjacency(spec)).edges) {
            os << "  p" << e.particle + 1 << " -- x" << e.detector + 1 << " "
               << detail::dot_edge_attrs(e.weight, e.color, opts.show_weights, bold(e.particle, e.detector)) << ";\n";
        }
        os << "}\n";
        return os.str();
    }

    std::vector<DirectedEdge> edges;
    if (opts.view == DotView::directed) {
        edges = to_directed(to_adjacency(spec)).edges;
    } else {
        edges = pm_diagram(spec).original_edges();
    }
    os << "digraph lqn {\n";
    for (std::size_t v = 0; v < spec.n; ++v) os << "  w" << v + 1 << " [label=\"w" << v + 1 << "\"];\n";
    for (const auto& e : edges) {
        os << "  w" << e.from + 1 << " -> w" << e.to + 1 << " "
           << detail::dot_edge_attrs(e.weight, e.color, opts.show_weights, bold(e.from, e.to)) << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace lqn
