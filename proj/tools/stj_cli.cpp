// stj: JSON-in/JSON-out command line front end.
// Exit codes: 0 ok, 2 parse error, 3 precondition failure, 4 verification failure.

#include "stj/json_io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using stj::io::json;
namespace io = stj::io;

constexpr int kParse = 2, kPrecondition = 3, kVerification = 4;

struct Options {
    double tol = 1e-4;
    std::string grid;    // comma separated radii
    std::string ladder;  // comma separated extraction multipliers
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string mode;    // overrides the input's mode when set
    int k = -1;
    std::string path = "-";
};

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !(v > 0)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw io::ParseError(std::string(what) + ": expected positive numbers separated by commas");
        }
    }
    if (out.empty()) throw io::ParseError(std::string(what) + ": empty list");
    return out;
}

json read_input(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(path);
        if (!in) throw io::ParseError("cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return io::parse_text(text, path);
}

std::vector<stj::cd> grid_for(const Options& o, double alpha) {
    return o.grid.empty() ? stj::default_grid(alpha) : stj::default_grid(alpha, parse_list(o.grid, "--grid"));
}

stj::ExtractionConfig extraction_for(const Options& o) {
    stj::ExtractionConfig ex;
    if (!o.ladder.empty()) ex.ladder = parse_list(o.ladder, "--ladder");
    return ex;
}

stj::Mode mode_for(const Options& o, const json& in) {
    if (!o.mode.empty()) return io::mode_from_string(o.mode);
    if (in.is_object() && in.contains("mode")) {
        if (!in["mode"].is_string()) throw io::ParseError("mode must be a string");
        return io::mode_from_string(in["mode"].get<std::string>());
    }
    return stj::Mode::Leq;
}

int emit(const json& j, int code = 0) {
    std::cout << io::dump(j) << "\n";
    return code;
}

int cmd_classify(const Options& o) {
    const auto seq = io::sequence_from_json(read_input(o.path));
    return emit(io::to_json(stj::classify(seq)));
}

int cmd_schur(const Options& o) {
    const auto seq = io::sequence_from_json(read_input(o.path));
    auto tr = stj::schur_trace(seq);
    if (o.k >= 0) {
        if (o.k > seq.m()) throw stj::PreconditionError("k exceeds the sequence length");
        tr.stages.resize(o.k + 1);
        tr.diagonal.resize(o.k + 1);
    }
    return emit(io::to_json(tr));
}

int cmd_poly(const Options& o) {
    const auto seq = io::sequence_from_json(read_input(o.path));
    const auto r = stj::compose_resolvent(seq);
    json diag = json::array();
    for (const auto& d : r.diagonal) diag.push_back(io::to_json(d));
    return emit({{"V", io::polynomial_with_blocks(r.V)}, {"W", io::polynomial_with_blocks(r.W)}, {"diagonal", diag}});
}

int cmd_solve(const Options& o) {
    const json in = read_input(o.path);
    const auto seq = io::sequence_from_json(io::detail::field(in, "sequence", "solve input"));
    const auto grid = grid_for(o, seq.alpha);
    const auto param = io::pair_from_json(io::detail::field(in, "parameter", "solve input"), seq.alpha, {}, grid);
    const stj::Mode mode = mode_for(o, in);
    stj::SolveResult res;
    if (param.q() < seq.q()) {
        stj::CMat W;
        if (in.contains("basis")) W = io::matrix_from_json(in["basis"], "basis");
        res = stj::solve_degenerate_embedded(seq, param, W, mode);
    } else {
        res = stj::solve(seq, param, mode);
    }
    const auto rep = stj::verify_solution(res.F, seq, mode, o.tol, extraction_for(o));
    json out = {{"case", stj::to_string(res.tag)},
                {"rational_function", io::to_json(res.F)},
                {"samples", io::samples(res.F, grid, 1e-12)},
                {"verification_report", io::to_json(rep)}};
    return emit(out, rep.passed ? 0 : kVerification);
}

int cmd_verify(const Options& o) {
    const json in = read_input(o.path);
    const auto seq = io::sequence_from_json(io::detail::field(in, "sequence", "verify input"));
    const auto F = io::function_from_json(io::detail::field(in, "function", "verify input"));
    if (F.rows() != seq.q() || F.cols() != seq.q()) throw stj::PreconditionError("function size differs from the sequence size");
    const auto rep = stj::verify_solution(F, seq, mode_for(o, in), o.tol, extraction_for(o));
    return emit(io::to_json(rep), rep.passed ? 0 : kVerification);
}

int cmd_oracle(const Options& o) {
    const json in = read_input(o.path);
    int m = 3;
    if (in.contains("m")) {
        if (!in["m"].is_number_integer() || in["m"].get<int>() < 0) throw io::ParseError("m must be a nonnegative integer");
        m = in["m"].get<int>();
    }
    stj::DiscreteMeasure mu;
    if (in.contains("atoms") && in["atoms"].is_array()) {
        mu = io::measure_from_json(in);
    } else {
        stj::RandomMeasureSpec sp;
        auto get_int = [&](const char* key, int& dst) {
            if (!in.contains(key)) return;
            if (!in[key].is_number_integer()) throw io::ParseError(std::string(key) + " must be an integer");
            dst = in[key].get<int>();
        };
        get_int("q", sp.q);
        get_int("atoms", sp.atoms);
        sp.m = m;
        if (in.contains("seed")) {
            if (!in["seed"].is_number_unsigned()) throw io::ParseError("seed must be a nonnegative integer");
            sp.seed = in["seed"].get<std::uint64_t>();
        }
        if (o.seed_given) sp.seed = o.seed;
        if (in.contains("alpha")) sp.alpha = io::detail::number(in["alpha"], "alpha");
        mu = stj::random_measure(sp);
    }
    const auto F = stj::stieltjes_transform(mu);
    return emit({{"measure", io::to_json(mu)},
                 {"sequence", io::to_json(stj::moments(mu, m))},
                 {"samples", io::samples(F, grid_for(o, mu.alpha), 1e-12)}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated matricial Stieltjes moment problem toolkit"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--tol", o.tol, "relative verification tolerance")->check(CLI::PositiveNumber);
    app.add_option("--grid", o.grid, "radii of the sample grid around alpha, comma separated");
    app.add_option("--ladder", o.ladder, "contour radius multipliers for moment extraction, comma separated");
    app.add_option("--seed", o.seed, "seed for random oracle specs");
    app.add_option("--mode", o.mode, "problem mode")->check(CLI::IsMember({"leq", "eq"}));

    std::map<std::string, std::function<int(const Options&)>> handlers{
        {"classify", cmd_classify}, {"schur", cmd_schur},   {"poly", cmd_poly},
        {"solve", cmd_solve},       {"verify", cmd_verify}, {"oracle", cmd_oracle}};
    const std::map<std::string, std::string> help{
        {"classify", "class membership report of a moment sequence"},
        {"schur", "alpha-Schur transform stages and diagonal"},
        {"poly", "resolvent matrix polynomials V and W"},
        {"solve", "solution from a parameter pair, with verification"},
        {"verify", "check a function against prescribed moments"},
        {"oracle", "moments and transform samples of a discrete measure"}};
    for (const auto& [name, _] : handlers) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("input", o.path, "input JSON file, - for stdin");
        if (name == "schur") sub->add_option("-k", o.k, "number of transform steps")->check(CLI::NonNegativeNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kParse;
    }
    o.seed_given = app.count("--seed") > 0;
    try {
        for (const auto& [name, fn] : handlers)
            if (app.got_subcommand(name)) return fn(o);
    } catch (const io::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const stj::Error& e) {
        std::cerr << "precondition failure: " << e.what() << "\n";
        return kPrecondition;
    }
    return kParse;
}
