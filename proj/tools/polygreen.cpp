#include "verify.h"

#include "polygreen/annulus_green.h"
#include "polygreen/ball_green.h"
#include "polygreen/errors.h"
#include "polygreen/estimator.h"
#include "polygreen/exterior_green.h"
#include "polygreen/report.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using nlohmann::json;
using namespace polygreen;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags as given on the command line; unset ones fall back to --config, then defaults.
struct Flags {
    std::optional<int> n, k, r, samples, threads, level;
    std::optional<double> a, b, delta, q, tol;
    std::optional<unsigned long long> seed;
    std::optional<std::string> eps, out, format, config, domain, x, y;
    bool dump_pairs = false;
};

void add_flags(CLI::App* app, Flags& f) {
    app->add_option("--n", f.n, "dimension");
    app->add_option("--k", f.k, "polyharmonic order");
    app->add_option("--a", f.a, "inner radius (annulus, exterior hole)");
    app->add_option("--b", f.b, "outer radius");
    app->add_option("--eps", f.eps, "hole scales, comma separated, strictly decreasing");
    app->add_option("--r", f.r, "derivative order");
    app->add_option("--delta", f.delta, "cutoff radius for glue-residual");
    app->add_option("--q", f.q, "admissibility factor, eps < q b / diam(hole)");
    app->add_option("--tol", f.tol, "series tolerance");
    app->add_option("--samples", f.samples, "random pairs per hole scale");
    app->add_option("--seed", f.seed, "RNG seed");
    app->add_option("--threads", f.threads, "worker threads (default: available parallelism)");
    app->add_option("--level", f.level, "stratified probe refinement level");
    app->add_option("--out", f.out, "output path (default: stdout)");
    app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--config", f.config, "JSON config file; flags override its values");
    app->add_option("--domain", f.domain, "ball, exterior or annulus (eval)");
    app->add_option("--x", f.x, "point, comma separated");
    app->add_option("--y", f.y, "point, comma separated");
    app->add_flag("--dump-pairs", f.dump_pairs, "one CSV row per probe pair");
}

json defaults(const std::string& cmd) {
    json d = {{"n", 5},       {"k", 2},        {"a", 0.1},     {"b", 1.0},       {"r", 1},
              {"delta", 0.15}, {"q", 0.5},     {"tol", 1e-10}, {"samples", 200}, {"seed", 7},
              {"threads", 0}, {"level", 0},    {"format", cmd == "eval" || cmd == "verify" ? "json" : "csv"},
              {"domain", "annulus"}, {"dump_pairs", false}};
    if (cmd == "scaling-limit") {
        d["eps"] = {0.1, 0.05, 0.02, 0.01};
    } else if (cmd == "glue-residual") {
        d["eps"] = {0.02, 0.01, 0.005};
    } else {
        d["eps"] = {0.2, 0.1, 0.05, 0.02, 0.01};
    }
    return d;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string("cannot parse ") + what + " entry '" + item + "'");
        }
    }
    if (v.empty()) throw ConfigError(std::string("empty ") + what);
    return v;
}

json resolve(const std::string& cmd, const Flags& f) {
    json c = defaults(cmd);
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw ConfigError("cannot open config file " + *f.config);
        json file;
        try {
            file = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
        for (auto& [key, value] : file.items()) {
            if (!c.contains(key) && key != "x" && key != "y" && key != "out")
                throw ConfigError("unknown config key '" + key + "'");
            c[key] = value;
        }
    }
    auto set = [&c](const char* key, const auto& opt) {
        if (opt) c[key] = *opt;
    };
    set("n", f.n);
    set("k", f.k);
    set("a", f.a);
    set("b", f.b);
    set("r", f.r);
    set("delta", f.delta);
    set("q", f.q);
    set("tol", f.tol);
    set("samples", f.samples);
    set("seed", f.seed);
    set("threads", f.threads);
    set("level", f.level);
    set("format", f.format);
    set("domain", f.domain);
    set("out", f.out);
    if (f.eps) c["eps"] = parse_list(*f.eps, "--eps");
    if (f.x) c["x"] = parse_list(*f.x, "--x");
    if (f.y) c["y"] = parse_list(*f.y, "--y");
    if (f.dump_pairs) c["dump_pairs"] = true;
    c["command"] = cmd;
    if (c["threads"].get<int>() <= 0) c["threads"] = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return c;
}

ScanOptions scan_options(const json& c) {
    ScanOptions o;
    o.samples = c.at("samples").get<int>();
    o.seed = c.at("seed").get<unsigned long long>();
    o.q = c.at("q").get<double>();
    o.tol = c.at("tol").get<double>();
    o.threads = c.at("threads").get<int>();
    o.level = c.at("level").get<int>();
    o.keep_pairs = c.at("dump_pairs").get<bool>();
    return o;
}

Point point_of(const json& c, const char* key, int n) {
    if (!c.contains(key)) throw ConfigError(std::string("missing --") + key);
    std::vector<double> v = c.at(key).get<std::vector<double>>();
    if (static_cast<int>(v.size()) != n)
        throw ConfigError(std::string("--") + key + " needs " + std::to_string(n) + " coordinates");
    return Point(std::move(v));
}

void emit(const json& c, const std::string& csv, json body) {
    const std::string format = c.at("format").get<std::string>();
    const bool to_file = c.contains("out");
    std::string text;
    if (format == "csv") {
        text = csv;
    } else {
        body["config"] = c;
        text = body.dump(2) + "\n";
    }
    if (!to_file) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    const std::string path = c.at("out").get<std::string>();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    if (format == "csv") {
        // CSV cannot carry the config without breaking the header row
        std::ofstream side(path + ".config.json", std::ios::binary);
        side << c.dump(2) << "\n";
    }
}

int flagged_exit(int flagged) {
    if (flagged == 0) return 0;
    std::cerr << json{{"error", "numerical"}, {"message", "evaluations hit the mode cap"}, {"flagged", flagged}}.dump()
              << "\n";
    return kExitNumeric;
}

int run_eval(const json& c) {
    const ProblemSpec spec(c.at("n").get<int>(), c.at("k").get<int>());
    const Point x = point_of(c, "x", spec.n()), y = point_of(c, "y", spec.n());
    const std::string domain = c.at("domain").get<std::string>();
    const double a = c.at("a").get<double>(), b = c.at("b").get<double>();
    GreenEvaluation e;
    if (domain == "annulus") {
        AnnulusGreenOptions o;
        o.tol = c.at("tol").get<double>();
        e = AnnulusGreen(spec, AnnulusDomain(a, b), o).evaluate(x, y);
    } else if (domain == "ball") {
        e.value = BoggioKernel(spec, BallDomain::centered(spec.n(), b))(x, y);
        e.converged = true;
    } else if (domain == "exterior") {
        e.value = ExteriorKernel::ball_hole(spec, a)(x, y);
        e.converged = true;
    } else {
        throw ConfigError("unknown domain '" + domain + "'");
    }
    const json j = evaluation_json(e);
    std::string csv = "value,truncation_estimate,modes_used,converged\n" + format_double(e.value) + ',' +
                      format_double(e.truncation_estimate) + ',' + std::to_string(e.modes_used) + ',' +
                      (e.converged ? "1" : "0") + '\n';
    emit(c, csv, j);
    return e.converged ? 0 : flagged_exit(1);
}

int run_scan(const std::string& cmd, const json& c) {
    const ProblemSpec spec(c.at("n").get<int>(), c.at("k").get<int>());
    const double b = c.at("b").get<double>();
    const std::vector<double> grid = c.at("eps").get<std::vector<double>>();
    const ScanOptions o = scan_options(c);
    ScanReport r;
    if (cmd == "scan-uniform") {
        r = scan_uniform(spec, b, grid, o);
    } else if (cmd == "scan-derivative") {
        r = scan_derivative(spec, b, grid, c.at("r").get<int>(), o);
    } else {
        std::vector<std::pair<Point, Point>> probes;
        if (c.contains("x") || c.contains("y")) {
            probes.emplace_back(point_of(c, "x", spec.n()), point_of(c, "y", spec.n()));
        } else {
            probes.emplace_back(Point::unit(spec.n(), 0, 2.0), Point::unit(spec.n(), 0, -3.0));
        }
        r = scaling_limit(spec, b, grid, probes, o);
    }
    json body = scan_json(r, c);
    if (o.keep_pairs) {
        json pairs = json::array();
        for (const PairRecord& p : r.pairs) {
            std::vector<double> xv(p.x.coords().begin(), p.x.coords().end()),
                yv(p.y.coords().begin(), p.y.coords().end());
            pairs.push_back({{"epsilon", p.epsilon}, {"x", xv}, {"y", yv}, {"value", p.value}, {"flagged", p.flagged}});
        }
        body["pairs"] = pairs;
    }
    emit(c, o.keep_pairs ? pairs_csv(r.pairs) : scan_csv(r), body);
    return flagged_exit(r.flagged);
}

int run_glue(const json& c) {
    const ProblemSpec spec(c.at("n").get<int>(), c.at("k").get<int>());
    const double b = c.at("b").get<double>();
    CutoffSpec cut;
    cut.delta = c.at("delta").get<double>();
    cut.order = spec.k();
    const ScanOptions o = scan_options(c);
    std::vector<GlueReport> reports;
    std::vector<PairRecord> pairs;
    int flagged = 0;
    for (double eps : c.at("eps").get<std::vector<double>>()) {
        reports.push_back(glue_residual(spec, b, eps, cut, o));
        flagged += reports.back().flagged;
        pairs.insert(pairs.end(), reports.back().pairs.begin(), reports.back().pairs.end());
    }
    emit(c, o.keep_pairs ? pairs_csv(pairs) : glue_csv(reports), glue_json(reports, c));
    return flagged_exit(flagged);
}

int run_verify_cmd(const json& c) {
    const ProblemSpec spec(c.at("n").get<int>(), c.at("k").get<int>());
    const auto results = cli::run_verify(spec, c.at("seed").get<unsigned long long>(), c.at("threads").get<int>());
    bool ok = true;
    json rows = json::array();
    std::string csv = "check,passed,measured,threshold\n";
    for (const auto& r : results) {
        ok = ok && r.passed;
        std::fprintf(stderr, "%s  %s  (%.3g vs %.3g)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.measured,
                     r.threshold);
        rows.push_back({{"check", r.name}, {"passed", r.passed}, {"measured", r.measured}, {"threshold", r.threshold}});
        csv += r.name + ',' + (r.passed ? "1" : "0") + ',' + format_double(r.measured) + ',' +
               format_double(r.threshold) + '\n';
    }
    emit(c, csv, json{{"checks", rows}, {"passed", ok}});
    return ok ? 0 : kExitNumeric;
}

int error_exit(int code, const char* kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polyharmonic Dirichlet Green functions on balls, exteriors and annuli"};
    app.require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"eval", "single Green function evaluation"},
        {"scan-uniform", "weighted sup of |G| over shrinking holes"},
        {"scan-derivative", "weighted sup of the r-th y-derivative over shrinking holes"},
        {"scaling-limit", "rescaled annulus kernel against the exterior kernel"},
        {"glue-residual", "sup of the glued kernel minus the annulus kernel"},
        {"verify", "invariant suite for one (n, k)"}};
    std::vector<Flags> flags(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i)
        add_flags(app.add_subcommand(commands[i].first, commands[i].second), flags[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return error_exit(kExitConfig, "config", e.what());
    }

    std::size_t which = 0;
    for (; which < commands.size(); ++which)
        if (app.got_subcommand(commands[which].first)) break;
    const std::string cmd = commands[which].first;

    try {
        const json c = resolve(cmd, flags[which]);
        if (cmd == "eval") return run_eval(c);
        if (cmd == "glue-residual") return run_glue(c);
        if (cmd == "verify") return run_verify_cmd(c);
        return run_scan(cmd, c);
    } catch (const NumericalError& e) {
        return error_exit(kExitNumeric, "numerical", e.what());
    } catch (const ConfigError& e) {
        return error_exit(kExitConfig, "config", e.what());
    } catch (const json::exception& e) {
        return error_exit(kExitConfig, "config", e.what());
    } catch (const std::invalid_argument& e) {
        return error_exit(kExitConfig, "precondition", e.what());
    } catch (const std::domain_error& e) {
        return error_exit(kExitConfig, "domain", e.what());
    }
}
