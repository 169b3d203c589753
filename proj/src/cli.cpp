#include "ffb/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ffb/experiments.hpp"
#include "ffb/jsonio.hpp"
#include "ffb/rank_search.hpp"

namespace ffb {

using nlohmann::json;

json invocation_echo(const Invocation& inv) {
    json echo;
    echo["subcommand"] = inv.subcommand;
    echo["field"] = inv.field;
    echo["nvars"] = inv.nvars;
    echo["poly"] = inv.poly;
    echo["poly2"] = inv.poly2;
    echo["n"] = inv.n;
    echo["nmax"] = inv.nmax;
    echo["r"] = inv.r;
    echo["theta"] = inv.theta ? json(*inv.theta) : json(nullptr);
    echo["refine_u"] = inv.refine_u ? json(*inv.refine_u) : json(nullptr);
    echo["max_r"] = inv.max_r;
    echo["ext"] = inv.ext;
    echo["threshold"] = inv.threshold;
    echo["seed"] = inv.seed;
    echo["budget"] = inv.budget;
    echo["jobs"] = inv.jobs;
    echo["format"] = inv.format;
    echo["suites"] = inv.suites;
    return echo;
}

Invocation invocation_from_json(const json& echo) {
    Invocation inv;
    inv.subcommand = echo.at("subcommand").get<std::string>();
    inv.field = echo.at("field").get<std::string>();
    inv.nvars = echo.at("nvars").get<std::uint32_t>();
    inv.poly = echo.at("poly").get<std::string>();
    inv.poly2 = echo.at("poly2").get<std::string>();
    inv.n = echo.at("n").get<std::uint32_t>();
    inv.nmax = echo.at("nmax").get<std::uint32_t>();
    inv.r = echo.at("r").get<std::uint32_t>();
    if (!echo.at("theta").is_null()) inv.theta = echo.at("theta").get<std::uint32_t>();
    if (!echo.at("refine_u").is_null()) inv.refine_u = echo.at("refine_u").get<std::uint32_t>();
    inv.max_r = echo.at("max_r").get<std::uint32_t>();
    inv.ext = echo.at("ext").get<std::uint32_t>();
    inv.threshold = echo.at("threshold").get<double>();
    inv.seed = echo.at("seed").get<std::uint64_t>();
    inv.budget = echo.at("budget").get<std::uint64_t>();
    inv.jobs = echo.at("jobs").get<std::uint32_t>();
    inv.format = echo.at("format").get<std::string>();
    inv.suites = echo.at("suites").get<std::vector<std::string>>();
    return inv;
}

namespace {

MultiPoly parse_input_poly(const Invocation& inv, const FieldPtr& f, const std::string& text) {
    if (text.empty()) throw Error(ErrorCode::InvalidArgument, "--poly is required");
    if (inv.nvars == 0) throw Error(ErrorCode::InvalidArgument, "--nvars is required");
    return parse_poly(text, f, inv.nvars);
}

std::string render(const json& report, const std::string& format) {
    if (format == "text") return report.dump(2) + "\n";
    return report.dump() + "\n";
}

json dispatch_json(const Invocation& inv, int& exit_code, std::string& extra_text) {
    EnumOptions opt;
    opt.budget = inv.budget;
    opt.jobs = inv.jobs;

    json report;
    report["invocation"] = invocation_echo(inv);

    if (inv.subcommand == "verify") {
        ExperimentConfig cfg;
        cfg.seed = inv.seed;
        cfg.budget = inv.budget;
        cfg.jobs = inv.jobs;
        std::vector<std::string> ids = inv.suites.empty() ? acceptance_suite_ids() : inv.suites;
        auto results = run_suites(ids, cfg);
        json suites = json::array();
        bool all_pass = true;
        std::ostringstream lines;
        for (const auto& r : results) {
            json s;
            s["id"] = r.id;
            s["pass"] = r.pass;
            s["details"] = r.details;
            if (inv.timings) s["runtime_sec"] = r.runtime_sec;
            suites.push_back(std::move(s));
            if (!r.pass) all_pass = false;
            char line[160];
            std::snprintf(line, sizeof(line), "[%s] %s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                          r.id.c_str(), r.runtime_sec);
            lines << line;
        }
        report["suites"] = std::move(suites);
        report["all_pass"] = all_pass;
        report["schema"] = "verify/v1";
        extra_text = lines.str();
        if (!all_pass) exit_code = 1;
        return report;
    }

    auto f = parse_field_descriptor(inv.field);

    if (inv.subcommand == "sum" || inv.subcommand == "bias") {
        auto P = parse_input_poly(inv, f, inv.poly);
        auto cs = count_vector(P, inv.n, opt);
        if (inv.subcommand == "sum") {
            report.update(sum_report_json(cs));
            report["schema"] = "sum/v1";
        } else {
            report.update(bias_triple_json(bias(cs)));
            report["field"] = f->descriptor();
            report["n"] = inv.n;
            report["schema"] = "bias/v1";
        }
        return report;
    }
    if (inv.subcommand == "profile") {
        auto P = parse_input_poly(inv, f, inv.poly);
        auto profile = bias_profile(P, inv.nmax, opt);
        report.update(profile_report_json(profile, f->descriptor()));
        report["schema"] = "profile/v1";
        if (inv.format == "csv") extra_text = profile_csv(profile);
        return report;
    }
    if (inv.subcommand == "quad") {
        auto P = parse_input_poly(inv, f, inv.poly);
        auto Q = QuadraticForm::from_poly(P);
        report.update(quad_report_json(Q));
        report["schema"] = "quad/v1";
        return report;
    }
    if (inv.subcommand == "slice") {
        auto P = parse_input_poly(inv, f, inv.poly);
        auto S = slice_decompose(P, inv.r);
        std::uint32_t theta = inv.theta.value_or(2 * inv.r + 2);
        std::vector<std::uint32_t> thetas{theta};
        report["pencil"] = pencil_report_json(pencil_scan(S, thetas, inv.budget));
        report["classification"] =
            case_report_json(classify_case(S, theta, inv.refine_u, false, inv.budget));
        report["schema"] = "slice/v1";
        return report;
    }
    if (inv.subcommand == "rank") {
        auto P = parse_input_poly(inv, f, inv.poly);
        std::uint32_t max_r = inv.max_r ? inv.max_r : inv.nvars;
        auto cert = min_vanishing_codim(P, max_r, inv.ext, inv.budget);
        if (cert) {
            report.update(rank_report_json(*cert));
            report["found"] = true;
        } else {
            report["found"] = false;
            report["max_r"] = max_r;
        }
        report["schema"] = "rank/v1";
        return report;
    }
    if (inv.subcommand == "product") {
        auto Q = parse_input_poly(inv, f, inv.poly);
        auto R = parse_input_poly(inv, f, inv.poly2);
        ExperimentConfig cfg;
        cfg.seed = inv.seed;
        cfg.budget = inv.budget;
        cfg.jobs = inv.jobs;
        auto rep = product_fiber_experiment(Q, R, cfg);
        report["measurements"] = rep.measurements;
        report["pass"] = rep.pass;
        report["schema"] = "product/v1";
        if (!rep.pass) exit_code = 1;
        return report;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + inv.subcommand + "'");
}

}  // namespace

DispatchResult dispatch(const Invocation& inv) {
    DispatchResult out;
    try {
        std::string extra_text;
        json report = dispatch_json(inv, out.exit_code, extra_text);
        if (inv.format == "csv" && inv.subcommand == "profile") {
            out.output = extra_text;
        } else if (inv.format == "text" && inv.subcommand == "verify") {
            out.output = extra_text;
        } else {
            out.output = render(report, inv.format);
        }
    } catch (const Error& e) {
        json err;
        err["invocation"] = invocation_echo(inv);
        err["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
        out.output = err.dump() + "\n";
        out.diagnostics = std::string("error: ") + e.what() + "\n";
        out.exit_code = e.code() == ErrorCode::BudgetExceeded ? 3 : 2;
    } catch (const std::exception& e) {
        out.diagnostics = std::string("error: ") + e.what() + "\n";
        out.exit_code = 2;
    }
    return out;
}

std::vector<std::string> tokenize_command_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            continue;
        }
        if (!quoted && std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

namespace {

void add_common_options(CLI::App* cmd, Invocation& inv) {
    cmd->add_option("--field", inv.field, "field descriptor p^m[:c0,c1,...]");
    cmd->add_option("--nvars", inv.nvars, "number of variables");
    cmd->add_option("--poly", inv.poly, "polynomial text");
    cmd->add_option("--seed", inv.seed, "master seed");
    cmd->add_option("--budget", inv.budget, "point budget");
    cmd->add_option("--jobs", inv.jobs, "worker count");
    cmd->add_option("--format", inv.format, "json|csv|text");
    cmd->add_flag("--timings", inv.timings, "include runtimes in reports");
}

std::unique_ptr<CLI::App> build_app(Invocation& inv) {
    auto app = std::make_unique<CLI::App>("exact character sums and bias of polynomials over small finite fields", "ffbias");
    app->require_subcommand(1);

    auto* sum = app->add_subcommand("sum", "count vector and magnitude of a_n(P)");
    add_common_options(sum, inv);
    sum->add_option("--n", inv.n, "tower level");

    auto* bias_cmd = app->add_subcommand("bias", "bias triple of P at one level");
    add_common_options(bias_cmd, inv);
    bias_cmd->add_option("--n", inv.n, "tower level");

    auto* profile = app->add_subcommand("profile", "bias profile over levels 1..nmax");
    add_common_options(profile, inv);
    profile->add_option("--nmax", inv.nmax, "top level");

    auto* quad = app->add_subcommand("quad", "quadratic form analysis");
    add_common_options(quad, inv);

    auto* slice = app->add_subcommand("slice", "cubic slice and pencil analysis");
    add_common_options(slice, inv);
    slice->add_option("--r", inv.r, "number of slicing variables");
    slice->add_option("--theta", inv.theta, "pencil rank threshold (default 2r+2)");
    slice->add_option("--refine-u", inv.refine_u, "refinement parameter for the line case");

    auto* rank = app->add_subcommand("rank", "algebraic rank search for cubics");
    add_common_options(rank, inv);
    rank->add_option("--max-r", inv.max_r, "largest summand count to try");
    rank->add_option("--ext", inv.ext, "extension level for the search field");

    auto* product = app->add_subcommand("product", "fiber identities for P = Q * R");
    add_common_options(product, inv);
    product->add_option("--poly2", inv.poly2, "second factor");

    auto* verify = app->add_subcommand("verify", "run verification suites");
    add_common_options(verify, inv);
    verify->add_option("--suite", inv.suites, "suite ids (default: all acceptance suites)");

    auto* batch = app->add_subcommand("batch", "run newline-delimited invocations from a file");
    batch->add_option("--file", inv.batch_file, "path, or - for standard input")->required();
    batch->add_option("--format", inv.format, "json|csv|text");

    return app;
}

}  // namespace

Invocation parse_invocation(const std::vector<std::string>& args) {
    Invocation inv;
    auto app = build_app(inv);
    std::vector<const char*> argv;
    argv.push_back("ffbias");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app->parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    for (auto* sub : app->get_subcommands()) inv.subcommand = sub->get_name();
    return inv;
}

DispatchResult run_batch(std::istream& lines, const std::string& format) {
    DispatchResult out;
    std::string line;
    while (std::getline(lines, line)) {
        auto tokens = tokenize_command_line(line);
        if (tokens.empty()) continue;
        try {
            Invocation inv = parse_invocation(tokens);
            if (inv.format == "json" && !format.empty()) inv.format = format;
            auto result = dispatch(inv);
            out.output += result.output;
            out.diagnostics += result.diagnostics;
        } catch (const Error& e) {
            json err;
            err["line"] = line;
            err["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
            out.output += err.dump() + "\n";
        }
    }
    return out;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    Invocation inv;
    try {
        inv = parse_invocation(args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (inv.subcommand == "batch") {
        DispatchResult result;
        if (inv.batch_file == "-") {
            result = run_batch(std::cin, inv.format);
        } else {
            std::ifstream file(inv.batch_file);
            if (!file) {
                std::cerr << "error: cannot open '" << inv.batch_file << "'\n";
                return 2;
            }
            result = run_batch(file, inv.format);
        }
        std::cout << result.output;
        std::cerr << result.diagnostics;
        return 0;
    }

    auto result = dispatch(inv);
    std::cout << result.output;
    std::cerr << result.diagnostics;
    return result.exit_code;
}

}  // namespace ffb
