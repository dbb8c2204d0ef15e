#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tcpkit/classify.hpp"
#include "tcpkit/degree.hpp"
#include "tcpkit/io.hpp"
#include "tcpkit/spectral.hpp"
#include "tcpkit/tcp.hpp"
#include "tcpkit/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;

struct GlobalOpts {
    double tol = 1e-10;
    std::uint64_t seed = tcpkit::kDefaultSeed;
    std::string format = "json";
    bool quiet = false;
};

void emit(const GlobalOpts& g, const tcpkit::Json& json, const std::string& text) {
    if (g.quiet) return;
    if (g.format == "json")
        std::cout << json.dump(2) << "\n";
    else
        std::cout << text;
}

std::string vec_text(const std::vector<double>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += tcpkit::detail::format_double(v[i]);
    }
    return s + ")";
}

std::string verdict_text(const tcpkit::PropertyVerdict& v) {
    std::string s = v.property + ": " + tcpkit::to_string(v.status) + " [" +
                    tcpkit::to_string(v.method) + "]";
    if (!v.certificate.note.empty()) s += " " + v.certificate.note;
    if (v.certificate.multi_index) {
        s += " at (";
        for (std::size_t i = 0; i < v.certificate.multi_index->size(); ++i) {
            if (i) s += ",";
            s += std::to_string((*v.certificate.multi_index)[i] + 1);
        }
        s += ")";
    }
    if (v.certificate.vector) s += " witness " + vec_text(*v.certificate.vector);
    if (v.certificate.interval)
        s += " interval [" + tcpkit::detail::format_double(v.certificate.interval->first) +
             ", " + tcpkit::detail::format_double(v.certificate.interval->second) + "]";
    s += "\n";
    return s;
}

int run_spectral(const GlobalOpts& g, const std::string& path) {
    const tcpkit::Tensor a = tcpkit::parse_tensor_file(path);
    const tcpkit::SpectralEstimate est = tcpkit::spectral_radius(a, g.tol);
    std::string text = "rho " + tcpkit::detail::format_double(est.rho) + " in [" +
                       tcpkit::detail::format_double(est.lower) + ", " +
                       tcpkit::detail::format_double(est.upper) + "], iterations " +
                       std::to_string(est.iterations) +
                       (est.converged ? ", converged" : ", not converged") + "\nvector " +
                       vec_text(est.vector) + "\n";
    emit(g, tcpkit::to_json(est), text);
    return kExitOk;
}

int run_classify(const GlobalOpts& g, const std::string& path, const std::string& props) {
    const tcpkit::Tensor a = tcpkit::parse_tensor_file(path);
    tcpkit::ClassificationReport report = tcpkit::classify_tensor(a, g.tol);
    if (props != "all") {
        std::vector<std::string> keep;
        std::size_t pos = 0;
        while (pos <= props.size()) {
            const std::size_t comma = std::min(props.find(',', pos), props.size());
            const std::string token = props.substr(pos, comma - pos);
            if (token == "z") {
                keep.push_back("z");
            } else if (token == "m") {
                keep.push_back("strong-m");
                keep.push_back("weak-m");
            } else if (token == "s") {
                keep.push_back("s");
            } else if (token == "p") {
                keep.push_back("extended-p");
                keep.push_back("p-condition");
            } else if (token == "gus") {
                keep.push_back("gus-pattern");
            } else {
                throw tcpkit::ParseError("--props: unknown property \"" + token + "\"");
            }
            if (comma == props.size()) break;
            pos = comma + 1;
        }
        std::vector<tcpkit::PropertyVerdict> filtered;
        for (auto& v : report.verdicts)
            for (const auto& k : keep)
                if (v.property == k) {
                    filtered.push_back(v);
                    break;
                }
        report.verdicts = std::move(filtered);
    }
    std::string text;
    for (const auto& v : report.verdicts) text += verdict_text(v);
    if (report.mu) text += "mu " + tcpkit::detail::format_double(*report.mu) + "\n";
    emit(g, tcpkit::to_json(report), text);
    return kExitOk;
}

int run_solve(const GlobalOpts& g, const std::string& path, const std::string& q_spec,
              const std::string& method, const std::string& x0_spec) {
    const tcpkit::Tensor a = tcpkit::parse_tensor_file(path);
    const std::vector<double> q = tcpkit::parse_vector_spec(q_spec);
    const tcpkit::TCPInstance inst(a, q);
    std::optional<tcpkit::TCPSolution> sol;
    if (method == "newton") {
        std::vector<double> x0(static_cast<std::size_t>(a.dim()), 1.0);
        if (!x0_spec.empty()) x0 = tcpkit::parse_vector_spec(x0_spec);
        sol = tcpkit::solve_newton(inst, x0, g.tol);
    } else {
        // Fixed point solves A x^{m-1} = -q, a TCP solution when q <= 0 and
        // the tensor is certified strong M.
        for (double c : q)
            if (c > 0.0)
                throw tcpkit::ParseError(
                    "--method fixed-point requires q <= 0 (use newton otherwise)");
        std::vector<double> rhs(q);
        for (double& c : rhs) c = -c;
        const std::vector<double> x = tcpkit::solve_tensor_equation(a, rhs, g.tol);
        const tcpkit::VerifyOutcome v = tcpkit::verify_solution(inst, x, g.tol * 1e2);
        if (v.accepted) sol = v.solution;
    }
    if (!sol) {
        if (!g.quiet) std::cerr << "no solution found\n";
        return kExitFail;
    }
    const std::string text = "x " + vec_text(sol->x) + "\nw " + vec_text(sol->w) +
                             "\nresidual " + tcpkit::detail::format_double(sol->residual) +
                             ", gap " +
                             tcpkit::detail::format_double(sol->complementarity_gap) + "\n";
    emit(g, tcpkit::to_json(*sol), text);
    return kExitOk;
}

int run_enumerate(const GlobalOpts& g, const std::string& path, const std::string& q_spec,
                  double box, int grid) {
    const tcpkit::Tensor a = tcpkit::parse_tensor_file(path);
    const std::vector<double> q = tcpkit::parse_vector_spec(q_spec);
    const tcpkit::SolutionSet set =
        tcpkit::enumerate_solutions(tcpkit::TCPInstance(a, q), box, grid, g.tol);
    std::string text = std::to_string(set.solutions.size()) + " solution(s), " +
                       (set.complete_within_box ? "complete" : "incomplete") +
                       " within box " + tcpkit::detail::format_double(set.box_radius) + ", " +
                       std::to_string(set.supports_examined) + " supports\n";
    for (const auto& s : set.solutions) text += "  x " + vec_text(s.x) + "\n";
    emit(g, tcpkit::to_json(set), text);
    return set.complete_within_box ? kExitOk : kExitFail;
}

int run_degree(const GlobalOpts& g, const std::string& path, const std::string& map_name,
               double radius, int probes) {
    const tcpkit::Tensor a = tcpkit::parse_tensor_file(path);
    const tcpkit::MapKind map =
        map_name == "F" ? tcpkit::MapKind::f : tcpkit::MapKind::phi;
    const tcpkit::DegreeResult deg =
        tcpkit::local_degree(a, map, radius, probes, 15, g.seed, g.tol);
    std::string text = "degree " + std::to_string(deg.value) + " (" +
                       (deg.consistent ? "consistent" : "inconsistent") + ", " +
                       std::to_string(deg.solution_counts.size()) + " probes, ball " +
                       tcpkit::detail::format_double(deg.ball_radius) + ")\n";
    emit(g, tcpkit::to_json(deg), text);
    return kExitOk;
}

int run_verify_cmd(const GlobalOpts& g, int n_max, int instances) {
    const tcpkit::VerifyReport report = tcpkit::run_verify(g.seed, n_max, {3, 4}, instances);
    emit(g, tcpkit::to_json(report), tcpkit::render_text(report));
    return report.all_passed ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tcpkit: tensor complementarity toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    if (const char* env = std::getenv("TCPKIT_SEED")) {
        try {
            std::size_t eaten = 0;
            g.seed = std::stoull(env, &eaten);
            if (eaten != std::string(env).size()) throw std::invalid_argument(env);
        } catch (const std::exception&) {
            std::cerr << "TCPKIT_SEED is not an unsigned integer: " << env << "\n";
            return kExitBadInput;
        }
    }
    app.add_option("--tol", g.tol, "Numerical tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "Random seed (TCPKIT_SEED overrides the default)")
        ->capture_default_str();
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_flag("--quiet", g.quiet, "Suppress normal output; exit code carries the answer");

    std::string tensor_path;
    std::string q_spec;
    std::string x0_spec;
    std::string props = "all";
    std::string method = "newton";
    std::string map_name = "F";
    double box = 10.0;
    int grid = 20;
    double radius = 1.0;
    int probes = 5;
    int n_max = 3;
    int instances = 12;

    CLI::App* spectral = app.add_subcommand(
        "spectral", "Certified spectral radius of a nonnegative tensor");
    spectral->add_option("tensor-file", tensor_path, "Tensor JSON file")->required();

    CLI::App* classify = app.add_subcommand("classify", "Tensor class verdicts");
    classify->add_option("tensor-file", tensor_path, "Tensor JSON file")->required();
    classify->add_option("--props", props, "all or comma list from z,m,s,p,gus")
        ->capture_default_str();

    CLI::App* solve = app.add_subcommand("solve", "Solve one TCP instance");
    solve->add_option("tensor-file", tensor_path, "Tensor JSON file")->required();
    solve->add_option("--q", q_spec, "q vector: inline comma-separated or JSON array file")
        ->required();
    solve->add_option("--method", method, "Solution method")
        ->check(CLI::IsMember({"newton", "fixed-point"}))
        ->capture_default_str();
    solve->add_option("--x0", x0_spec, "Newton start (default: all ones)");

    CLI::App* enumerate = app.add_subcommand("enumerate", "Enumerate TCP solutions in a box");
    enumerate->add_option("tensor-file", tensor_path, "Tensor JSON file")->required();
    enumerate->add_option("--q", q_spec, "q vector: inline comma-separated or JSON array file")
        ->required();
    enumerate->add_option("--box", box, "Box radius")->capture_default_str();
    enumerate->add_option("--grid", grid, "Grid points per axis")->capture_default_str();

    CLI::App* degree = app.add_subcommand("degree", "Local degree at the origin");
    degree->add_option("tensor-file", tensor_path, "Tensor JSON file")->required();
    degree->add_option("--map", map_name, "Map to probe")
        ->check(CLI::IsMember({"F", "Phi"}))
        ->capture_default_str();
    degree->add_option("--radius", radius, "Ball radius")->capture_default_str();
    degree->add_option("--probes", probes, "Regular-value probes")->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "Cross-module verification suites");
    verify->add_option("--nmax", n_max, "Largest generated dimension")->capture_default_str();
    verify->add_option("--instances", instances, "Generated instances")->capture_default_str();

    for (CLI::App* sub : {spectral, classify, solve, enumerate, degree, verify})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(spectral)) return run_spectral(g, tensor_path);
        if (app.got_subcommand(classify)) return run_classify(g, tensor_path, props);
        if (app.got_subcommand(solve)) return run_solve(g, tensor_path, q_spec, method, x0_spec);
        if (app.got_subcommand(enumerate)) return run_enumerate(g, tensor_path, q_spec, box, grid);
        if (app.got_subcommand(degree)) return run_degree(g, tensor_path, map_name, radius, probes);
        if (app.got_subcommand(verify)) return run_verify_cmd(g, n_max, instances);
    } catch (const tcpkit::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const tcpkit::TensorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
