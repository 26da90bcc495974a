#pragma once

// Command-line front end. run_cli returns the process exit code:
// 0 ok, 1 usage, 2 validation, 3 verification mismatch.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lqn/designers.hpp"
#include "lqn/io.hpp"

namespace lqn {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_validation = 2, exit_mismatch = 3 };

inline constexpr double kVerifyTolerance = 1e-12;
inline constexpr std::uint64_t kDefaultNumericSeed = 1;

/// LQN_TOL if set and parseable, else the library default.
inline double tolerance_from_env() {
    if (const char* env = std::getenv("LQN_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0.0) return v;
    }
    return kDefaultTolerance;
}

inline NetworkSpec load_network(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::invalid_argument, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str(), tol);
}

inline void print_state_text(std::ostream& out, const NoBunchState& state) {
    for (const auto& [ket, amp] : state.terms) out << "  " << format_complex(amp) << "  " << arrow_ket(ket) << "\n";
    if (state.postselect_probability) out << "postselect probability: " << *state.postselect_probability << "\n";
}

inline void print_report_text(std::ostream& out, const SeparabilityReport& r) {
    out << "lemma1 forced detectors:";
    if (r.lemma1.empty()) out << " none";
    for (const auto& f : r.lemma1) out << " (X" << f.detector + 1 << "," << color_name(f.color) << ")";
    out << "\n";
    out << "lemma2 partition: " << format_partition(r.lemma2_partition) << "\n";
    out << "theorem1: colors";
    bool all = true;
    for (std::size_t j = 0; j < r.theorem1.color_condition_ok.size(); ++j) {
        if (!r.theorem1.color_condition_ok[j]) {
            out << " fail@X" << j + 1;
            all = false;
        }
    }
    if (all) out << " ok";
    out << ", strongly connected " << (r.theorem1.strongly_connected ? "yes" : "no") << ", verdict "
        << verdict_name(r.theorem1.verdict) << "\n";
    out << "theorem2 (W-optimal): " << (r.theorem2.satisfied ? "satisfied" : "not satisfied") << ", "
        << r.theorem2.red_edge_count << " red edges\n";
    if (r.numeric_finest_partition) {
        out << "numeric finest partition (seed " << *r.numeric_seed << "): " << format_partition(*r.numeric_finest_partition)
            << "\n";
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Linear quantum network states via perfect matchings", "lqn"};
    app.require_subcommand(1);
    const double tol = tolerance_from_env();

    std::string file;
    auto add_file = [&](CLI::App* sub) { sub->add_option("file", file, "network JSON")->required(); };

    auto* compute = app.add_subcommand("compute", "assemble and normalize the no-bunching state");
    add_file(compute);
    bool as_json = false, as_text = false;
    compute->add_flag("--json", as_json, "JSON output");
    compute->add_flag("--text", as_text, "human output with arrow kets (default)");

    auto* analyze_cmd = app.add_subcommand("analyze", "structural and numerical separability report");
    add_file(analyze_cmd);
    std::string seed_text;
    auto* numeric_opt =
        analyze_cmd->add_option("--numeric", seed_text, "finest partition for seeded generic amplitudes")->expected(0, 1);
    bool analyze_json = false;
    analyze_cmd->add_flag("--json", analyze_json, "JSON output");

    auto* diagram_cmd = app.add_subcommand("pm-diagram", "edges kept in the PM diagram and edges removed");
    add_file(diagram_cmd);
    bool diagram_dot = false;
    diagram_cmd->add_flag("--dot", diagram_dot, "emit DOT instead of an edge list");

    auto* design_cmd = app.add_subcommand("design", "emit a designer network");
    std::string kind, colors_text, form_text = "star", preset_text, out_path, stats_text = "boson";
    std::size_t n = 0;
    double theta1 = std::numbers::pi / 4, theta2 = std::numbers::pi / 4;
    design_cmd->add_option("kind", kind, "ghz|w|dicke|cluster4|tritter|beamsplitter")
        ->required()
        ->check(CLI::IsMember({"ghz", "w", "dicke", "cluster4", "tritter", "beamsplitter"}));
    design_cmd->add_option("--n", n, "number of particles");
    design_cmd->add_option("--colors", colors_text, "target colors, e.g. udud");
    design_cmd->add_option("--form", form_text, "W form")->check(CLI::IsMember({"star", "ring"}));
    design_cmd->add_option("--preset", preset_text, "Dicke amplitude preset")
        ->check(CLI::IsMember({"paper-n4", "paper-n5", "balanced-n5"}));
    design_cmd->add_option("--statistics", stats_text, "boson|fermion")->check(CLI::IsMember({"boson", "fermion"}));
    design_cmd->add_option("--theta1", theta1, "beam splitter: particle 1 -> cos X1 up + sin X2 down");
    design_cmd->add_option("--theta2", theta2, "beam splitter: particle 2 -> cos X1 down + sin X2 up");
    design_cmd->add_option("--out", out_path, "write to file instead of stdout");

    auto* verify_cmd = app.add_subcommand("verify", "compare the PM assembly against the permutation-sum oracle");
    add_file(verify_cmd);

    auto* dot_cmd = app.add_subcommand("dot", "Graphviz export");
    add_file(dot_cmd);
    std::string view_text = "d";
    bool dot_weights = false;
    std::size_t highlight = 0;
    dot_cmd->add_option("--view", view_text, "bb|d|pm")->check(CLI::IsMember({"bb", "d", "pm"}));
    dot_cmd->add_flag("--weights", dot_weights, "label edges with amplitudes");
    auto* highlight_opt = dot_cmd->add_option("--highlight", highlight, "bold the k-th perfect matching (1-based)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return exit_usage;
    }

    try {
        if (compute->parsed()) {
            if (as_json && as_text) {
                err << "usage error: --json and --text are exclusive\n";
                return exit_usage;
            }
            const auto spec = load_network(file, tol);
            const auto state = normalize(compute_state(spec));
            if (as_json) {
                out << state_to_json(state).dump(2) << "\n";
            } else {
                print_state_text(out, state);
            }
        } else if (analyze_cmd->parsed()) {
            const auto spec = load_network(file, tol);
            std::optional<std::uint64_t> seed;
            if (numeric_opt->count() > 0) seed = seed_text.empty() ? kDefaultNumericSeed : std::stoull(seed_text);
            const auto report = analyze(spec, seed);
            if (analyze_json) {
                out << report_to_json(report).dump(2) << "\n";
            } else {
                print_report_text(out, report);
            }
        } else if (diagram_cmd->parsed()) {
            const auto spec = load_network(file, tol);
            if (diagram_dot) {
                out << export_dot(spec, {DotView::pm_diagram, false, std::nullopt});
            } else {
                const auto diag = pm_diagram(spec);
                out << "kept:\n";
                for (const auto& e : diag.original_edges()) {
                    out << "  (" << e.from + 1 << ",X" << e.to + 1 << ") " << color_name(e.color) << "\n";
                }
                out << "removed:\n";
                for (const auto& e : diag.removed) {
                    out << "  (" << e.from + 1 << ",X" << e.to + 1 << ") " << color_name(e.color) << "\n";
                }
            }
        } else if (design_cmd->parsed()) {
            const Statistics stats = stats_text == "fermion" ? Statistics::fermion : Statistics::boson;
            std::optional<ColorVector> colors;
            if (!colors_text.empty()) colors = parse_colors(colors_text);
            auto need_n = [&](std::size_t fallback) {
                if (n != 0) return n;
                if (colors) return colors->size();
                return fallback;
            };
            NetworkSpec spec;
            if (kind == "ghz") {
                spec = design_ghz(need_n(3), colors, {}, stats);
            } else if (kind == "w") {
                spec = design_w(need_n(3), form_text == "ring" ? WForm::ring : WForm::star, colors, {}, stats);
            } else if (kind == "dicke") {
                DickePreset preset = DickePreset::none;
                if (preset_text == "paper-n4") preset = DickePreset::paper_n4;
                if (preset_text == "paper-n5") preset = DickePreset::paper_n5;
                if (preset_text == "balanced-n5") preset = DickePreset::balanced_n5;
                spec = design_dicke2(n != 0 ? n : dicke_preset_n(preset).value_or(4), preset, {}, stats);
            } else if (kind == "cluster4") {
                spec = design_cluster4(stats);
            } else if (kind == "tritter") {
                spec = preset_tritter(stats);
            } else {
                spec = preset_beamsplitter(std::cos(theta1), std::sin(theta1), std::cos(theta2), std::sin(theta2), stats);
            }
            const std::string text = serialize_network(spec);
            if (out_path.empty()) {
                out << text;
            } else {
                std::ofstream f(out_path);
                if (!f) throw Error(ErrorCode::invalid_argument, "cannot write " + out_path);
                f << text;
            }
        } else if (verify_cmd->parsed()) {
            const auto spec = load_network(file, tol);
            const auto fast = compute_state(spec);
            const auto slow = oracle_state(spec);
            const double diff = max_amplitude_difference(fast, slow);
            out << "pms: " << enumerate_pms(spec).size() << "\n";
            out << "max amplitude difference: " << diff << "\n";
            if (diff > kVerifyTolerance) {
                out << "MISMATCH\n";
                return exit_mismatch;
            }
            out << "OK\n";
        } else if (dot_cmd->parsed()) {
            const auto spec = load_network(file, tol);
            DotRenderOptions opts;
            opts.view = view_text == "bb" ? DotView::bipartite : view_text == "pm" ? DotView::pm_diagram : DotView::directed;
            opts.show_weights = dot_weights;
            if (highlight_opt->count() > 0) {
                if (highlight == 0) {
                    err << "usage error: --highlight is 1-based\n";
                    return exit_usage;
                }
                opts.highlight_pm = highlight - 1;
            }
            out << export_dot(spec, opts);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::logic_error& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_ok;
}

}  // namespace lqn
