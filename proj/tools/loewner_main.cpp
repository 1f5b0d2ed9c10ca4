// loewner: falsify or confirm matrix-order inequalities for scalar functions
// under spectral functional calculus. Reports are deterministic JSON keyed
// to (flags, seed); --jobs only changes wall time, never the verdict.
//
// Exit codes: 0 holds / success, 1 violated, 2 domain error or chain
// inconsistency, 64 flag errors, 65 invalid inputs (function text, files).

#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "loewner/json_io.hpp"
#include "loewner/monotone.hpp"
#include "loewner/psineq.hpp"
#include "loewner/version.hpp"

namespace {

using namespace loewner;

constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitDomainError = 2;
constexpr int kExitFlagError = 64;
constexpr int kExitInputError = 65;

struct CommonFlags {
    std::string fn_text;
    int order = 2;
    int dim = 4;
    long trials = 1000;
    std::string domain = "1e-6:1e6";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 1;
    bool strict = false;
    double psd_rel = Tol::psd_rel;
};

DomainInterval parse_interval(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw DomainError("interval must look like lo:hi, got '" + text + "'");
    try {
        double lo = std::stod(text.substr(0, colon));
        double hi = std::stod(text.substr(colon + 1));
        return DomainInterval(lo, hi);
    } catch (const std::invalid_argument&) {
        throw DomainError("interval must hold two numbers, got '" + text + "'");
    }
}

std::uint64_t resolve_seed(CommonFlags& flags) {
    if (flags.seed_given) return flags.seed;
    if (flags.strict)
        throw CLI::ValidationError("--seed is required in --strict mode for randomized commands");
    std::random_device rd;
    flags.seed = (std::uint64_t(rd()) << 32) ^ rd();
    return flags.seed;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

int emit_report(const std::string& command, ojson config, ojson payload,
                const Timer& timer, int exit_code) {
    ojson report;
    report["schema"] = 1;
    report["version"] = kVersion;
    report["command"] = command;
    report["config"] = std::move(config);
    for (auto& [key, value] : payload.items()) report[key] = value;
    report["timing_s"] = timer.seconds();
    std::cout << report.dump(2) << "\n";
    return exit_code;
}

int verdict_exit(const Verdict& v) {
    switch (v.status) {
    case Verdict::Status::Holds: return kExitHolds;
    case Verdict::Status::Violated: return kExitViolated;
    case Verdict::Status::DomainErr: return kExitDomainError;
    }
    return kExitDomainError;
}

ojson tolerance_echo(double clamp, double psd_rel) {
    ojson t;
    t["psd_eps_rel"] = psd_rel;
    t["clamp"] = clamp;
    return t;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_order, bool with_dim,
                bool with_domain = true) {
    if (with_order)
        cmd->add_option("--order", flags.order, "matrix order n")->required();
    if (with_dim)
        cmd->add_option("--dim", flags.dim, "matrix dimension")->required();
    cmd->add_option("--trials", flags.trials, "trial budget")->default_val(1000);
    if (with_domain)
        cmd->add_option("--domain", flags.domain, "working interval lo:hi")->default_val("1e-6:1e6");
    cmd->add_option("--seed", flags.seed, "RNG seed")->each([&flags](const std::string&) {
        flags.seed_given = true;
    });
    cmd->add_option("--jobs", flags.jobs, "worker threads (never affects results)")->default_val(1);
    cmd->add_flag("--strict", flags.strict, "require explicit seeds");
    cmd->add_option("--psd-eps-rel", flags.psd_rel, "scale-relative PSD tolerance")
        ->default_val(Tol::psd_rel);
}

// One verdict-flavored check (monotone / concave / hansen-pedersen).
int run_order_check(const std::string& command, CommonFlags& flags, const Timer& timer) {
    ScalarFunction fn = ScalarFunction::parse(flags.fn_text);
    DomainInterval dom = parse_interval(flags.domain);
    std::uint64_t seed = resolve_seed(flags);

    Verdict v;
    if (command == "check-monotone")
        v = check_n_monotone(fn, flags.order, dom, flags.trials, seed, flags.jobs, flags.psd_rel);
    else if (command == "check-concave")
        v = check_n_concave(fn, flags.order, dom, flags.trials, seed, flags.jobs, flags.psd_rel);
    else
        v = check_hansen_pedersen(fn, flags.order, dom, flags.trials, seed, flags.jobs, flags.psd_rel);

    ojson config;
    config["fn"] = flags.fn_text;
    config["order"] = flags.order;
    config["domain"] = {dom.lo, dom.hi};
    config["trials"] = flags.trials;
    config["seed"] = seed;
    config["tolerances"] = tolerance_echo(dom.lo, flags.psd_rel);

    ojson payload;
    payload["verdict"] = verdict_to_json(v);
    return emit_report(command, std::move(config), std::move(payload), timer, verdict_exit(v));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix monotonicity and trace-inequality falsification toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string state_spec = "trace";
    std::string matrix_path, direction_path, range_text = "1e-3:1e3";
    int grid = 128;
    bool ordered_only = false, inject_fixtures = false;
    double clamp = Tol::clamp;

    auto* monotone_cmd = app.add_subcommand("check-monotone", "falsify n-monotonicity");
    monotone_cmd->add_option("--fn", flags.fn_text, "function of t")->required();
    add_common(monotone_cmd, flags, true, false);

    auto* concave_cmd = app.add_subcommand("check-concave", "falsify n-concavity");
    concave_cmd->add_option("--fn", flags.fn_text, "function of t")->required();
    add_common(concave_cmd, flags, true, false);

    auto* hp_cmd = app.add_subcommand("check-hp", "falsify the contraction inequality f(C^T A C) >= C^T f(A) C");
    hp_cmd->add_option("--fn", flags.fn_text, "function of t")->required();
    add_common(hp_cmd, flags, true, false);

    auto* chain_cmd = app.add_subcommand("chain", "cross-check the concavity/contraction/monotonicity chain");
    chain_cmd->add_option("--fn", flags.fn_text, "function of t")->required();
    add_common(chain_cmd, flags, true, false);

    auto* ps_cmd = app.add_subcommand("check-ps", "falsify the generalized Powers-Stormer inequality");
    ps_cmd->add_option("--fn", flags.fn_text, "function f of t")->required();
    add_common(ps_cmd, flags, false, true, false);
    ps_cmd->add_option("--state", state_spec, "'trace' or a density-matrix JSON file")->default_val("trace");
    ps_cmd->add_flag("--ordered-only", ordered_only, "restrict pairs to 0 < A <= B");
    ps_cmd->add_flag("--fixtures", inject_fixtures, "inject the known bad pair at trial 0");
    ps_cmd->add_option("--clamp", clamp, "spectrum clamp")->default_val(Tol::clamp);

    auto* trace_cmd = app.add_subcommand("trace-condition", "grid infimum of sqrt(g'(l)g'(m)) / divided difference");
    trace_cmd->add_option("--g", flags.fn_text, "function g of t")->required();
    trace_cmd->add_option("--range", range_text, "grid range lo:hi")->default_val("1e-3:1e3");
    trace_cmd->add_option("--grid", grid, "grid size")->default_val(128);

    auto* counter_cmd = app.add_subcommand("find-counterexample", "search for g(A) <= g(B) failing and extract a state witness");
    counter_cmd->add_option("--g", flags.fn_text, "function g of t")->required();
    add_common(counter_cmd, flags, false, true, false);

    auto* frechet_cmd = app.add_subcommand("frechet", "Daleckii-Krein directional derivative of fn at A towards C");
    frechet_cmd->add_option("--fn", flags.fn_text, "function of t")->required();
    frechet_cmd->add_option("--matrix", matrix_path, "JSON file with A")->required();
    frechet_cmd->add_option("--direction", direction_path, "JSON file with C")->required();
    frechet_cmd->add_option("--clamp", clamp, "spectrum clamp")->default_val(Tol::clamp);

    auto* fixtures_cmd = app.add_subcommand("fixtures", "reproduce the worked examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFlagError;
    }

    Timer timer;
    try {
        if (monotone_cmd->parsed())
            return run_order_check("check-monotone", flags, timer);
        if (concave_cmd->parsed())
            return run_order_check("check-concave", flags, timer);
        if (hp_cmd->parsed())
            return run_order_check("check-hp", flags, timer);

        if (chain_cmd->parsed()) {
            ScalarFunction fn = ScalarFunction::parse(flags.fn_text);
            DomainInterval dom = parse_interval(flags.domain);
            std::uint64_t seed = resolve_seed(flags);
            ChainReport rep = chain_consistency(fn, flags.order, dom, flags.trials, seed,
                                                flags.jobs, flags.psd_rel);

            ojson config;
            config["fn"] = flags.fn_text;
            config["order"] = flags.order;
            config["domain"] = {dom.lo, dom.hi};
            config["trials"] = flags.trials;
            config["seed"] = seed;
            config["tolerances"] = tolerance_echo(dom.lo, flags.psd_rel);

            ojson payload;
            payload["chain"] = chain_report_to_json(rep);
            int code = !rep.inconsistencies.empty() || rep.any_domain_error() ? kExitDomainError
                       : rep.any_violated()                                   ? kExitViolated
                                                                              : kExitHolds;
            return emit_report("chain", std::move(config), std::move(payload), timer, code);
        }

        if (ps_cmd->parsed()) {
            PsCheckConfig cfg;
            cfg.fn_f = ScalarFunction::parse(flags.fn_text);
            cfg.dim = flags.dim;
            cfg.trials = flags.trials;
            cfg.ordered_only = ordered_only;
            cfg.inject_fixture = inject_fixtures;
            cfg.seed = resolve_seed(flags);
            cfg.jobs = flags.jobs;
            cfg.clamp = clamp;
            cfg.psd_rel = flags.psd_rel;
            if (state_spec != "trace")
                cfg.state = load_state_file(state_spec);

            Verdict v = check_ps(cfg);

            ojson config;
            config["fn"] = flags.fn_text;
            config["dim"] = cfg.dim;
            config["trials"] = cfg.trials;
            config["seed"] = cfg.seed;
            config["state"] = state_spec;
            config["ordered_only"] = cfg.ordered_only;
            config["fixtures"] = cfg.inject_fixture;
            config["tolerances"] = tolerance_echo(cfg.clamp, cfg.psd_rel);

            ojson payload;
            payload["verdict"] = verdict_to_json(v);
            return emit_report("check-ps", std::move(config), std::move(payload), timer, verdict_exit(v));
        }

        if (trace_cmd->parsed()) {
            ScalarFunction g = ScalarFunction::parse(flags.fn_text);
            DomainInterval range = parse_interval(range_text);

            ojson config;
            config["g"] = flags.fn_text;
            config["range"] = {range.lo, range.hi};
            config["grid"] = grid;

            ojson payload;
            try {
                InfEstimate est = trace_condition_inf(g, range, grid);
                payload["infimum"] = inf_estimate_to_json(est);
                return emit_report("trace-condition", std::move(config), std::move(payload), timer, kExitHolds);
            } catch (const NotIncreasingError& e) {
                payload["status"] = "domain-error";
                payload["error"] = e.what();
                return emit_report("trace-condition", std::move(config), std::move(payload), timer, kExitDomainError);
            }
        }

        if (counter_cmd->parsed()) {
            ScalarFunction g = ScalarFunction::parse(flags.fn_text);
            std::uint64_t seed = resolve_seed(flags);
            Verdict v = counterexample_search(g, flags.dim, flags.trials, seed, flags.jobs,
                                              flags.psd_rel);

            ojson config;
            config["g"] = flags.fn_text;
            config["dim"] = flags.dim;
            config["trials"] = flags.trials;
            config["seed"] = seed;
            config["tolerances"] = tolerance_echo(Tol::clamp, flags.psd_rel);

            ojson payload;
            payload["verdict"] = verdict_to_json(v);
            return emit_report("find-counterexample", std::move(config), std::move(payload), timer, verdict_exit(v));
        }

        if (frechet_cmd->parsed()) {
            ScalarFunction fn = ScalarFunction::parse(flags.fn_text);
            SymMatrix a = load_matrix_file(matrix_path);
            SymMatrix c = load_matrix_file(direction_path);

            ojson config;
            config["fn"] = flags.fn_text;
            config["matrix"] = matrix_path;
            config["direction"] = direction_path;
            config["tolerances"] = tolerance_echo(clamp, flags.psd_rel);

            ojson payload;
            try {
                SymMatrix d = frechet_derivative(fn, a, c, clamp);
                payload["derivative"] = matrix_to_json(d);
                return emit_report("frechet", std::move(config), std::move(payload), timer, kExitHolds);
            } catch (const DomainError& e) {
                payload["status"] = "domain-error";
                payload["error"] = e.what();
                return emit_report("frechet", std::move(config), std::move(payload), timer, kExitDomainError);
            }
        }

        if (fixtures_cmd->parsed()) {
            FixtureReport rep = reproduce_fixtures();
            ojson config = ojson::object();
            ojson payload;
            payload["report"] = fixture_report_to_json(rep);
            return emit_report("fixtures", std::move(config), std::move(payload), timer,
                               rep.all_expected() ? kExitHolds : kExitViolated);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlagError;
    } catch (const ParseError& e) {
        std::cerr << "error: cannot parse function: " << e.what() << "\n";
        return kExitInputError;
    } catch (const OrderError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const EigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    }

    return kExitFlagError;
}
