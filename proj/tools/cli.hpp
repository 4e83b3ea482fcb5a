#ifndef DHOLO_TOOLS_CLI_HPP
#define DHOLO_TOOLS_CLI_HPP

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dholo/dholo.hpp>

namespace dholo::cli {

enum Exit : int { ok = 0, negative = 1, bad_input = 2, capped = 3 };

struct Common {
    std::size_t radius = 0;
    std::uint64_t seed = 0;
    std::string policy = "canonical";
    double tol = 1e-9;
    std::string svg, csv, json;
};

inline cplx parse_complex(const std::string& s) {
    std::stringstream ss(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    ss >> re;
    if (!ss) throw input_error("expected a complex number as 're,im', got '" + s + "'");
    if (ss >> comma) {
        if (comma != ',' || !(ss >> im)) throw input_error("expected a complex number as 're,im', got '" + s + "'");
    }
    return {re, im};
}

inline void emit(const std::string& path, const std::string& text) {
    if (!path.empty()) io::write_file(path, text);
}

inline void require_policy(const Common& c, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (c.policy == a) return;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    throw input_error("policy '" + c.policy + "' not available here (use " + list + ")");
}

inline std::vector<RenderPoint> function_points(const ComplexFunction& f, Vertex root) {
    auto depth = f.graph().distances_from(root);
    std::vector<RenderPoint> pts;
    for (Vertex v = 0; v < f.graph().size(); ++v)
        if (f.has_value(v)) pts.push_back({f.value(v), depth[v], 0});
    return pts;
}

inline void write_function_outputs(const Common& c, const ComplexFunction& f, Vertex root) {
    emit(c.json, io::dump(io::to_json(f)));
    emit(c.csv, points_csv(function_points(f, root)));
    emit(c.svg, render_function_svg(f, root));
}

inline int cmd_check(const Common& c, const std::string& input, const std::string& mode, int order, std::ostream& out) {
    auto loaded = io::function_from_json(io::read_json_file(input));
    const auto f = loaded.complex();
    const Tolerance tol(c.tol, c.tol);
    CheckResult r;
    if (mode == "harmonic")
        r = is_harmonic(f, tol);
    else if (mode == "holomorphic")
        r = is_holomorphic(f, tol);
    else if (mode == "n-holomorphic")
        r = is_n_holomorphic(f, order, tol);
    else
        throw input_error("unknown check mode '" + mode + "'");
    const std::string text = io::dump(io::to_json(r));
    out << text;
    emit(c.json, text);
    return r.verdict ? ok : negative;
}

inline int cmd_extend_t3(const Common& c, bool full, const std::string& alpha_s, const std::string& beta_s,
                         std::ostream& out) {
    require_policy(c, {"canonical", "seeded", "exhaustive"});
    const cplx alpha = parse_complex(alpha_s), beta = parse_complex(beta_s);
    auto ball = full ? TreeBall::full(2, c.radius) : TreeBall::rooted(2, c.radius);
    io::json summary{{"radius", c.radius}, {"vertices", ball.size()}, {"policy", c.policy}};
    if (c.policy == "exhaustive") {
        auto all = enumerate_holomorphic(alpha, beta, c.radius);
        std::vector<RenderPoint> pts;
        for (const auto& f : all) {
            auto p = function_points(f, ball.root());
            pts.insert(pts.end(), p.begin(), p.end());
        }
        summary["extensions"] = all.size();
        emit(c.csv, points_csv(pts));
        emit(c.svg, render_svg(pts));
        if (!all.empty()) emit(c.json, io::dump(io::to_json(all.front())));
    } else {
        const auto choices =
            c.policy == "seeded" ? ChoiceAssignment::random(ball, c.seed) : ChoiceAssignment::constant(ball);
        const auto vals = extend_values(ball, alpha, beta, choices);
        const auto f = to_function(ball, vals);
        summary["holomorphic"] = is_holomorphic(f, Tolerance(c.tol, c.tol)).verdict;
        summary["locally_injective"] = is_locally_injective(f, c.tol);
        if (alpha == cplx{} && beta == cplx{1.0, 0.0} && c.policy == "canonical") {
            auto exact = canonical_phi_exact(ball, EisensteinNumber(0, 0), EisensteinNumber(1, 0));
            summary["on_hexagonal_tiling"] = hex_covering_check(ball, exact).ok();
        }
        write_function_outputs(c, f, ball.root());
    }
    out << io::dump(summary);
    return ok;
}

inline int cmd_nholo(const Common& c, int order, std::ostream& out) {
    require_policy(c, {"canonical", "seeded"});
    if (order < 2) throw input_error("--order must be >= 2");
    auto ball = TreeBall::rooted(static_cast<std::size_t>(order), c.radius);
    std::optional<ChoiceAssignment> choices;
    if (c.policy == "seeded") choices = ChoiceAssignment::random(ball, c.seed);
    auto f = nholo_extend(order, 0.0, 1.0, c.radius, choices);
    const auto r = is_n_holomorphic(f, order, Tolerance(c.tol, c.tol));
    io::json summary{{"order", order},
                     {"radius", c.radius},
                     {"vertices", ball.size()},
                     {"policy", c.policy},
                     {"n_holomorphic", r.verdict},
                     {"max_residual", io::round12(r.max_residual)}};
    write_function_outputs(c, f, ball.root());
    out << io::dump(summary);
    return ok;
}

inline int cmd_extend_tr3(const Common& c, std::size_t samples, const std::string& state_path, std::ostream& out) {
    require_policy(c, {"canonical", "seeded", "exhaustive"});
    MarkedTriangle start{0.0, 1.0, cplx(0.0, 1.0)};
    if (!state_path.empty()) start = io::triangle_from_json(io::read_json_file(state_path));
    Tr3Ball ball(c.radius);
    std::vector<CloudPoint> cloud;
    if (c.policy == "exhaustive") {
        cloud = ball_image_cloud_exhaustive(start, c.radius);
    } else if (c.policy == "seeded") {
        if (samples == 0) throw input_error("--samples must be >= 1");
        if (samples > 20000000 / ball.size()) throw resource_cap_error("too many sampled points");
        cloud = ball_image_cloud_sampled(start, c.radius, samples, c.seed);
    }
    const auto sel = c.policy == "seeded" ? BranchSelector::random(ball, c.seed) : BranchSelector::constant(ball);
    auto f = extend_tr3(start, ball, sel);
    if (c.policy == "canonical") {
        for (Vertex v = 0; v < ball.size(); ++v) cloud.push_back({f.value(v), ball.vertex_depth(v)});
    }
    std::vector<RenderPoint> pts;
    pts.reserve(cloud.size());
    for (const auto& p : cloud) pts.push_back({p.z, p.depth, 0});
    emit(c.json, io::dump(io::to_json(f)));
    emit(c.csv, points_csv(pts));
    RenderSpec spec;
    spec.point_radius = pts.size() > 20000 ? 0.6 : 1.5;
    emit(c.svg, render_svg(pts, spec));
    io::json summary{{"radius", c.radius},
                     {"policy", c.policy},
                     {"points", pts.size()},
                     {"start", io::to_json(start)},
                     {"holomorphic", is_holomorphic(f, Tolerance(c.tol, c.tol)).verdict}};
    out << io::dump(summary);
    return ok;
}

inline int cmd_conjugate(const Common& c, const std::string& input, const std::string& fixture, std::size_t valency,
                         std::ostream& out) {
    require_policy(c, {"canonical", "seeded"});
    std::optional<RealVertexFunction> f;
    if (!input.empty() && !fixture.empty()) throw input_error("give an input file or a fixture, not both");
    if (!input.empty()) {
        auto loaded = io::function_from_json(io::read_json_file(input));
        if (!loaded.real) throw input_error("conjugate needs real values");
        f = loaded.real_part();
    } else if (fixture == "dipole") {
        f = dipole_without_conjugate(std::max<std::size_t>(c.radius, 2));
    } else if (fixture == "constant-norm") {
        f = constant_norm_harmonic(valency, c.radius, c.seed);
    } else {
        throw input_error(fixture.empty() ? "no input function" : "unknown fixture '" + fixture + "'");
    }
    const auto mode = c.policy == "seeded" ? CompletionMode::seeded : CompletionMode::deterministic;
    auto res = find_conjugate(*f, std::nullopt, mode, c.seed, Tolerance(c.tol, c.tol));
    if (res.found()) {
        const std::string text = io::dump(io::to_json(*res.g));
        out << text;
        emit(c.json, text);
        return ok;
    }
    io::json report;
    if (auto cert = forced_propagation_infeasibility(*f, c.tol)) {
        report = {{"status", "infeasible"}, {"proven", true}, {"certificate", io::to_json(*cert)}};
    } else {
        report = {{"status", res.proven ? "infeasible" : "sweep failed"},
                  {"proven", res.proven},
                  {"certificate", io::to_json(*res.failure)}};
    }
    const std::string text = io::dump(report);
    out << text;
    emit(c.json, text);
    return negative;
}

inline int cmd_walk(const Common& c, std::size_t length, std::size_t walks, double bin, std::ostream& out) {
    if (length < 1) throw input_error("--length must be >= 1");
    if (walks < 1) throw input_error("--walks must be >= 1");
    if (!(bin > 0.0)) throw input_error("--bin must be positive");
    if (length * walks > 100000000) throw resource_cap_error("more than 1e8 walk steps requested");
    WalkShift shift;
    std::ostringstream csv;
    csv << (walks > 1 ? "walk," : "") << "step,symbol,re,im,abs\n";
    double sum = 0.0, worst = 0.0;
    std::size_t forbidden = 0;
    std::map<std::string, std::size_t> hist;
    std::vector<RenderPoint> pts;
    std::vector<std::pair<cplx, cplx>> path;
    char buf[160];
    for (std::size_t w = 0; w < walks; ++w) {
        const auto s = walk_sample(shift, length, c.seed + w);
        for (std::size_t i = 0; i < s.steps.size(); ++i) {
            const auto& st = s.steps[i];
            if (i > 0 && !shift.admissible(s.steps[i - 1].symbol, st.symbol)) ++forbidden;
            if (!c.csv.empty()) {
                if (walks > 1) csv << w << ',';
                const double re = std::abs(st.position.real()) < 5e-13 ? 0.0 : st.position.real();
                const double im = std::abs(st.position.imag()) < 5e-13 ? 0.0 : st.position.imag();
                std::snprintf(buf, sizeof buf, "%zu,%s,%.12g,%.12g,%.12g\n", st.step,
                              WalkShift::names()[static_cast<std::size_t>(st.symbol)].c_str(), re, im,
                              std::abs(st.position));
                csv << buf;
            }
            if (w == 0 && walks == 1) {
                pts.push_back({st.position, 0, 0});
                path.emplace_back(i == 0 ? cplx{} : s.steps[i - 1].position, st.position);
            }
        }
        const cplx end = s.steps.back().position;
        sum += std::abs(end);
        worst = std::max(worst, std::abs(end));
        const long bx = std::lround(std::floor(end.real() / bin)), by = std::lround(std::floor(end.imag() / bin));
        ++hist[std::to_string(bx) + "," + std::to_string(by)];
        if (walks > 1) pts.push_back({end, 0, 0});
    }
    emit(c.csv, csv.str());
    RenderSpec spec;
    spec.color_by = ColorBy::none;
    spec.point_radius = 1.0;
    emit(c.svg, render_svg(pts, spec, path));
    io::json summary{{"walks", walks},
                     {"length", length},
                     {"seed", c.seed},
                     {"mean_final_distance", io::round12(sum / static_cast<double>(walks))},
                     {"max_final_distance", io::round12(worst)},
                     {"forbidden_transitions", forbidden},
                     {"histogram", {{"bin", bin}, {"counts", hist}}}};
    const std::string text = io::dump(summary);
    out << text;
    emit(c.json, text);
    return ok;
}

inline int cmd_render(const Common& c, const std::string& input, const std::string& color, int width, int height) {
    if (c.svg.empty()) throw input_error("render needs --svg PATH");
    RenderSpec spec;
    spec.width = width;
    spec.height = height;
    if (color == "none")
        spec.color_by = ColorBy::none;
    else if (color != "depth")
        throw input_error("unknown colouring '" + color + "'");
    const bool is_json = input.size() >= 5 && input.substr(input.size() - 5) == ".json";
    if (is_json) {
        auto f = io::function_from_json(io::read_json_file(input)).complex();
        emit(c.svg, render_function_svg(f, 0, spec));
        return ok;
    }
    std::ifstream in(input);
    if (!in) throw input_error("cannot open '" + input + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    emit(c.svg, render_svg(points_from_csv(ss.str()), spec));
    return ok;
}

/// Runs one command line; args exclude the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete holomorphic functions on graphs, trees and tilings"};
    app.require_subcommand(1);
    std::map<const CLI::App*, Common> commons;
    auto common = [&commons](CLI::App* s, std::size_t radius, const std::string& policy) {
        Common& c = commons[s];
        c.radius = radius;
        c.policy = policy;
        s->add_option("--radius", c.radius, "ball radius")->capture_default_str();
        s->add_option("--seed", c.seed, "random seed")->capture_default_str();
        s->add_option("--policy", c.policy, "choice policy: canonical, seeded, exhaustive")->capture_default_str();
        s->add_option("--tol", c.tol, "absolute and relative tolerance")->capture_default_str();
        s->add_option("--svg", c.svg, "write an SVG picture");
        s->add_option("--csv", c.csv, "write a CSV table");
        s->add_option("--json", c.json, "write JSON output");
    };

    std::string input, mode = "holomorphic", alpha = "0,0", beta = "1,0", state, fixture, color = "depth";
    int order = 3, nholo_order = 4, width = 800, height = 800;
    bool full = false;
    std::size_t samples = 64, valency = 4, length = 1000, walks = 1;
    double bin = 8.0;

    auto* check = app.add_subcommand("check", "check harmonicity / holomorphy of a function file");
    check->add_option("input", input, "function JSON")->required();
    check->add_option("--mode", mode, "harmonic, holomorphic or n-holomorphic")->capture_default_str();
    check->add_option("--order", order, "N for n-holomorphic")->capture_default_str();
    auto* t3 = app.add_subcommand("extend-t3", "holomorphic extension on a ball of T3");
    t3->add_flag("--full", full, "ball around the root edge instead of the rooted ball");
    t3->add_option("--alpha", alpha, "value at O' as re,im")->capture_default_str();
    t3->add_option("--beta", beta, "value at O as re,im")->capture_default_str();
    auto* tr3 = app.add_subcommand("extend-tr3", "triangle dynamics on a ball of Tr3");
    tr3->add_option("--samples", samples, "extensions sampled by the seeded policy")->capture_default_str();
    tr3->add_option("--state", state, "starting triangle JSON {p, e, f}");
    auto* nh = app.add_subcommand("nholo", "N-holomorphic extension on a ball of T_{N+1}");
    nh->add_option("--order", nholo_order, "N")->capture_default_str();
    auto* conj = app.add_subcommand("conjugate", "conjugate part of a real harmonic function on a tree");
    conj->add_option("input", input, "real function JSON");
    conj->add_option("--fixture", fixture, "dipole or constant-norm instead of a file");
    conj->add_option("--valency", valency, "tree valency for the constant-norm fixture")->capture_default_str();
    auto* walk = app.add_subcommand("walk", "non-backtracking walks on the hexagonal tiling");
    walk->add_option("--length", length, "steps per walk")->capture_default_str();
    walk->add_option("--walks", walks, "number of walks")->capture_default_str();
    walk->add_option("--bin", bin, "endpoint histogram cell size")->capture_default_str();
    auto* render = app.add_subcommand("render", "draw a CSV point cloud or a function file as SVG");
    render->add_option("input", input, "CSV (re,im[,depth]) or function JSON")->required();
    render->add_option("--color", color, "depth or none")->capture_default_str();
    render->add_option("--width", width)->capture_default_str();
    render->add_option("--height", height)->capture_default_str();

    common(check, 0, "canonical");
    common(t3, 6, "canonical");
    common(tr3, 5, "seeded");
    common(nh, 4, "canonical");
    common(conj, 3, "canonical");
    common(walk, 0, "seeded");
    common(render, 0, "canonical");

    std::vector<std::string> argv_store{"dholo"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return bad_input;
    }

    const CLI::App* active = app.get_subcommands().front();
    const Common& c = commons.at(active);
    try {
        if (!(c.tol > 0.0)) throw input_error("--tol must be positive");
        if (*check) return cmd_check(c, input, mode, order, out);
        if (*t3) return cmd_extend_t3(c, full, alpha, beta, out);
        if (*tr3) return cmd_extend_tr3(c, samples, state, out);
        if (*nh) return cmd_nholo(c, nholo_order, out);
        if (*conj) return cmd_conjugate(c, input, fixture, valency, out);
        if (*walk) return cmd_walk(c, length, walks, bin, out);
        if (*render) return cmd_render(c, input, color, width, height);
    } catch (const resource_cap_error& e) {
        err << "resource cap: " << e.what() << "\n";
        return capped;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return bad_input;
    } catch (const missing_data_error& e) {
        err << "input error: " << e.what() << "\n";
        return bad_input;
    } catch (const unsupported_error& e) {
        err << "input error: " << e.what() << "\n";
        return bad_input;
    } catch (const error& e) {
        err << e.what() << "\n";
        return negative;
    }
    return bad_input;
}

}  // namespace dholo::cli

#endif  // DHOLO_TOOLS_CLI_HPP
