#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "karnrto/exactnum.hpp"
#include "karnrto/limitwit.hpp"
#include "karnrto/netsim.hpp"
#include "karnrto/report.hpp"
#include "karnrto/rtocalc.hpp"
#include "karnrto/scenario.hpp"
#include "karnrto/steadystate.hpp"
#include "karnrto/trace.hpp"

namespace karnrto::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational rational_flag(const std::string& text, const char* flag) {
    try {
        return Rational::parse(text);
    } catch (const ParseError& e) {
        throw UsageError(std::string("--") + flag + ": " + e.what());
    }
}

std::optional<Rational> optional_rational(const std::string& text, const char* flag) {
    if (text.empty()) {
        return std::nullopt;
    }
    return rational_flag(text, flag);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open '" + path + "' for writing");
    }
    return f;
}

// --- witness ----------------------------------------------------------------

struct WitnessOptions {
    std::string alpha;
    std::string eps;
    std::string method = "both";
    std::uint64_t verify = 10;
    bool json = false;
};

int cmd_witness(const WitnessOptions& o, std::ostream& out) {
    const Rational alpha = rational_flag(o.alpha, "alpha");
    const Rational eps = rational_flag(o.eps, "eps");
    std::vector<limitwit::Method> methods;
    if (o.method == "ceiling" || o.method == "both") {
        methods.push_back(limitwit::Method::Ceiling);
    }
    if (o.method == "binomial" || o.method == "both") {
        methods.push_back(limitwit::Method::BinomialSemiAuto);
    }
    if (o.method == "brute-force") {
        methods.push_back(limitwit::Method::BruteForce);
    }
    if (methods.empty()) {
        throw UsageError("--method must be one of ceiling, binomial, both, brute-force");
    }

    bool all_ok = true;
    for (const auto m : methods) {
        limitwit::WitnessResult w;
        try {
            w = limitwit::witness(m, alpha, eps);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        const auto bad = limitwit::first_violation(w, o.verify);
        const std::uint64_t passed = bad ? *bad - to_u64(w.delta.value()) - 1 : o.verify;
        all_ok = all_ok && !bad;
        if (o.json) {
            out << report::witness_json(w, passed, o.verify, !bad) << '\n';
        } else {
            out << "method=" << limitwit::to_string(m) << " alpha=" << alpha << " eps=" << eps
                << " delta=" << w.delta << " verified=" << passed << '/' << o.verify
                << (bad ? " FAIL at n=" + std::to_string(*bad) : std::string(" ok")) << '\n';
        }
    }
    return all_ok ? kOk : kVerificationFailed;
}

// --- shared RTO parameter flags --------------------------------------------

struct ParamOptions {
    std::string alpha = "1/8";
    std::string beta = "1/4";
    std::string g;
};

void add_param_flags(CLI::App* sub, ParamOptions& p, bool g_required,
                     const std::string& g_default = "") {
    sub->add_option("--alpha", p.alpha, "srtt gain")->capture_default_str();
    sub->add_option("--beta", p.beta, "rttvar gain")->capture_default_str();
    p.g = g_default;
    auto* g = sub->add_option("--g", p.g, "clock granularity G");
    if (g_required) {
        g->required();
    } else {
        g->capture_default_str();
    }
}

rtocalc::RtoParams to_params(const ParamOptions& p) {
    try {
        return rtocalc::make_params(rational_flag(p.alpha, "alpha"), rational_flag(p.beta, "beta"),
                                    rational_flag(p.g, "g"));
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

// --- trace ------------------------------------------------------------------

struct BoundOptions {
    std::string c;
    std::string r;
    std::string srtt_prior;
    std::string rttvar_prior;
};

void add_bound_flags(CLI::App* sub, BoundOptions& b) {
    sub->add_option("--c", b.c, "steady-state center");
    sub->add_option("--r", b.r, "steady-state radius");
    sub->add_option("--srtt-prior", b.srtt_prior, "srtt before the first sample");
    sub->add_option("--rttvar-prior", b.rttvar_prior, "rttvar before the first sample");
}

std::optional<steadystate::SteadySpec> to_spec(const BoundOptions& b,
                                               const rtocalc::RtoParams& params) {
    const int given = !b.c.empty() + !b.r.empty() + !b.srtt_prior.empty() + !b.rttvar_prior.empty();
    if (given == 0) {
        return std::nullopt;
    }
    if (given != 4) {
        throw UsageError("bounds need all of --c, --r, --srtt-prior and --rttvar-prior");
    }
    steadystate::SteadySpec spec{rational_flag(b.c, "c"), rational_flag(b.r, "r"), params,
                                 rational_flag(b.srtt_prior, "srtt-prior"),
                                 rational_flag(b.rttvar_prior, "rttvar-prior")};
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

struct TraceOptions {
    std::string samples_file;
    ParamOptions params;
    BoundOptions bounds;
    std::string out_path;
    std::optional<unsigned> decimal;
};

int cmd_trace(const TraceOptions& o, std::ostream& out, std::ostream& err) {
    const auto params = to_params(o.params);
    std::ifstream in(o.samples_file);
    if (!in) {
        throw UsageError("cannot read samples file '" + o.samples_file + "'");
    }
    std::vector<Rational> samples;
    try {
        samples = read_samples(in);
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
    if (samples.empty()) {
        throw UsageError("samples file is empty");
    }
    for (const auto& s : samples) {
        if (s.sign() <= 0) {
            throw UsageError("samples must be positive, got " + s.to_string());
        }
    }

    auto spec = to_spec(o.bounds, params);
    if (spec && !steadystate::is_steady_state(samples, spec->c, spec->r)) {
        err << "warning: samples are not in a " << spec->c << "/" << spec->r
            << " steady state; bounds omitted\n";
        spec.reset();
    }

    Trace trace;
    if (spec) {
        const auto prior = rtocalc::from_priors(params, spec->srtt_prior, spec->rttvar_prior);
        trace = make_trace(samples, rtocalc::resume(params, prior, samples));
        add_bounds(trace, *spec);
    } else {
        trace = make_trace(samples, rtocalc::run(params, samples));
    }

    if (o.out_path.empty()) {
        write_trace_csv(out, trace, o.decimal);
    } else {
        auto f = open_output(o.out_path);
        write_trace_csv(f, trace, o.decimal);
    }
    if (spec) {
        for (const auto& row : trace.rows) {
            if (row.srtt < *row.low || row.srtt > *row.high || row.rttvar > *row.rttvar_upper) {
                err << "bound violated at step " << row.step << '\n';
                return kVerificationFailed;
            }
        }
    }
    return kOk;
}

// --- bounds -----------------------------------------------------------------

struct BoundsOptions {
    ParamOptions params;
    BoundOptions bounds;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::string eps;
    std::string method = "ceiling";
};

int cmd_bounds(const BoundsOptions& o, std::ostream& out) {
    const auto params = to_params(o.params);
    const auto spec = to_spec(o.bounds, params);
    if (!spec) {
        throw UsageError("bounds needs --c, --r, --srtt-prior and --rttvar-prior");
    }
    const auto rep = steadystate::report(*spec, o.n, o.m);
    out << "n=" << rep.n << '\n'
        << "L=" << rep.low << '\n'
        << "H=" << rep.high << '\n'
        << "delta_m(m=" << o.m << ")=" << rep.delta_m << '\n'
        << "deviation_bound(0.." << o.n << ")=" << steadystate::deviation_bound(*spec, 0, o.n)
        << '\n'
        << "rttvar_upper=" << rep.rttvar_upper << '\n'
        << "steady_rttvar_bound=" << steadystate::steady_rttvar_bound(*spec, o.n) << '\n';
    if (!o.eps.empty()) {
        const Rational eps = rational_flag(o.eps, "eps");
        if (eps.sign() <= 0) {
            throw UsageError("--eps must be positive");
        }
        limitwit::Method method = limitwit::Method::Ceiling;
        if (o.method == "binomial") {
            method = limitwit::Method::BinomialSemiAuto;
        } else if (o.method != "ceiling") {
            throw UsageError("--method must be ceiling or binomial");
        }
        using steadystate::Target;
        const std::pair<const char*, Target> targets[] = {
            {"L->c-r", Target::LowToCMinusR},
            {"H->c+r", Target::HighToCPlusR},
            {"rttvar_bound->2r", Target::RttvarBoundTo2R},
        };
        for (const auto& [name, t] : targets) {
            out << "N[" << name << "]=" << steadystate::convergence_n_for(*spec, t, eps, method)
                << '\n';
        }
    }
    return kOk;
}

// --- scenario ---------------------------------------------------------------

struct ScenarioOptions {
    std::string preset;
    std::uint64_t length = 1000;
    std::uint64_t seed = 0;
    ParamOptions params;
    std::uint64_t period = 100;
    std::string base = "60";
    std::string spike = "75";
    std::string lo = "60";
    std::string hi = "75";
    std::string out_path;
    std::string report_path;
    std::optional<unsigned> decimal;
};

int cmd_scenario(const ScenarioOptions& o, std::ostream& out, std::ostream& err) {
    scenario::ScenarioSpec spec;
    spec.length = o.length;
    spec.params = to_params(o.params);
    if (o.preset == "pathological") {
        spec.kind = scenario::Pathological{o.period, rational_flag(o.base, "base"),
                                           rational_flag(o.spike, "spike")};
    } else if (o.preset == "uniform") {
        spec.kind = scenario::Uniform{rational_flag(o.lo, "lo"), rational_flag(o.hi, "hi"), o.seed};
    } else {
        throw UsageError("--preset must be pathological or uniform");
    }
    scenario::TimeoutReport rep;
    try {
        rep = scenario::run(spec);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }

    const std::string summary = report::timeout_report_json(rep);
    if (!o.report_path.empty()) {
        auto f = open_output(o.report_path);
        f << summary << '\n';
    }
    if (o.out_path.empty()) {
        write_trace_csv(out, rep.trace, o.decimal);
        err << "timeouts=" << rep.timeout_steps.size() << '\n';
    } else {
        auto f = open_output(o.out_path);
        write_trace_csv(f, rep.trace, o.decimal);
        out << summary << '\n';
    }
    return kOk;
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
    double drop = 0.0;
    double dup = 0.0;
    std::optional<std::uint64_t> delay;
    std::uint64_t min_delay = 1;
    std::uint64_t max_delay = 5;
    bool fifo_acks = false;
    std::uint64_t n_packets = 10;
    std::uint64_t window = 1;
    std::string initial_rto;
    std::uint64_t max_ticks = 1'000'000;
    std::uint64_t seed = 0;
    ParamOptions params;
    std::string replay;
    std::string out_dir;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
    const auto params = to_params(o.params);
    netsim::SimReport rep;
    bool replay_failed = false;
    if (!o.replay.empty()) {
        if (o.replay != "fig1" && o.replay != "fig1-lossless") {
            throw UsageError("--replay must be fig1 or fig1-lossless");
        }
        rep = netsim::run_scripted(netsim::ambiguous_ack_script(o.replay == "fig1-lossless"),
                                   params);
        if (o.replay == "fig1") {
            for (const auto& s : rep.samples) {
                replay_failed = replay_failed || s.packet == 2;
            }
        }
    } else {
        netsim::ChannelConfig cfg;
        cfg.drop_prob = o.drop;
        cfg.dup_prob = o.dup;
        cfg.min_delay = o.delay.value_or(o.min_delay);
        cfg.max_delay = o.delay.value_or(o.max_delay);
        cfg.fifo_acks = o.fifo_acks;
        cfg.seed = o.seed;
        netsim::WindowPolicy policy;
        policy.window = o.window;
        policy.initial_rto = optional_rational(o.initial_rto, "initial-rto");
        policy.max_ticks = o.max_ticks;
        try {
            rep = netsim::run_simulation(cfg, o.n_packets, params, policy);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }

    out << "samples=" << rep.samples.size() << " transmitted=" << rep.packets_transmitted
        << " retransmissions=" << rep.retransmissions << " timeouts=" << rep.timeouts
        << " acks_received=" << rep.acks_received << " violations=" << rep.violations.size()
        << " ambiguous_acks=" << rep.ambiguities.size() << " completed=" << rep.completed
        << " end_tick=" << rep.end_tick << '\n';
    for (const auto& s : rep.samples) {
        out << "sample packet=" << s.packet << " ack=" << s.ack << " tick=" << s.tick
            << " rtt=" << s.rtt << '\n';
    }
    for (const auto& a : rep.ambiguities) {
        out << "ambiguous ack=" << a.ack << " tick=" << a.tick << " packet=" << a.packet
            << " candidate_rtts=";
        const auto rtts = a.candidate_rtts();
        for (std::size_t k = 0; k < rtts.size(); ++k) {
            out << (k ? "|" : "") << rtts[k];
        }
        out << " (no sample)\n";
    }
    if (const auto fs = rep.final_state()) {
        out << "final srtt=" << fs->srtt << " rttvar=" << fs->rttvar << " rto=" << fs->rto << '\n';
    }

    if (!o.out_dir.empty()) {
        const std::filesystem::path dir(o.out_dir);
        std::filesystem::create_directories(dir);
        {
            auto f = open_output((dir / "samples.csv").string());
            report::write_samples_csv(f, rep);
        }
        {
            auto f = open_output((dir / "trace.csv").string());
            write_trace_csv(f, report::simulation_trace(rep));
        }
        open_output((dir / "invariants.json").string()) << report::invariant_log_json(rep) << '\n';
        open_output((dir / "ambiguities.json").string()) << report::ambiguity_log_json(rep) << '\n';
        open_output((dir / "report.json").string()) << report::sim_report_json(rep) << '\n';
    }
    return rep.violations.empty() && !replay_failed ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact RTO recursion, steady-state bounds, limit witnesses and Karn sampling "
                 "simulation"};
    app.require_subcommand(1);

    WitnessOptions wo;
    auto* witness = app.add_subcommand("witness", "delta with alpha^n < eps for all n > delta");
    witness->add_option("--alpha", wo.alpha, "base in [0, 1)")->required();
    witness->add_option("--eps", wo.eps, "epsilon > 0")->required();
    witness->add_option("--method", wo.method, "ceiling | binomial | both | brute-force")
        ->capture_default_str();
    witness->add_option("--verify", wo.verify, "check n = delta+1 .. delta+K exactly")
        ->capture_default_str();
    witness->add_flag("--json", wo.json, "JSON output");

    TraceOptions to;
    auto* trace = app.add_subcommand("trace", "RTO recursion over a samples file");
    trace->add_option("samples", to.samples_file, "one sample per line")->required();
    add_param_flags(trace, to.params, true);
    add_bound_flags(trace, to.bounds);
    trace->add_option("--out", to.out_path, "CSV path (default stdout)");
    trace->add_option("--decimal", to.decimal, "add K-digit decimal columns");

    BoundsOptions bo;
    auto* bounds = app.add_subcommand("bounds", "steady-state srtt/rttvar bounds");
    add_param_flags(bounds, bo.params, false, "1");
    add_bound_flags(bounds, bo.bounds);
    bounds->add_option("--n", bo.n, "samples past the priors")->capture_default_str();
    bounds->add_option("--m", bo.m, "cutoff for delta_m")->capture_default_str();
    bounds->add_option("--eps", bo.eps, "also report convergence N for this eps");
    bounds->add_option("--method", bo.method, "ceiling | binomial")->capture_default_str();

    ScenarioOptions so;
    auto* scen = app.add_subcommand("scenario", "preset sample sequences and timeouts");
    scen->add_option("--preset", so.preset, "pathological | uniform")->required();
    scen->add_option("--length", so.length)->capture_default_str();
    scen->add_option("--seed", so.seed)->capture_default_str();
    add_param_flags(scen, so.params, true);
    scen->add_option("--period", so.period)->capture_default_str();
    scen->add_option("--base", so.base)->capture_default_str();
    scen->add_option("--spike", so.spike)->capture_default_str();
    scen->add_option("--lo", so.lo)->capture_default_str();
    scen->add_option("--hi", so.hi)->capture_default_str();
    scen->add_option("--out", so.out_path, "trace CSV path (default stdout)");
    scen->add_option("--report", so.report_path, "timeout report JSON path");
    scen->add_option("--decimal", so.decimal, "add K-digit decimal columns");

    SimulateOptions mo;
    auto* sim = app.add_subcommand("simulate", "sender/receiver simulation with Karn sampling");
    sim->add_option("--drop", mo.drop, "drop probability")->capture_default_str();
    sim->add_option("--dup", mo.dup, "duplication probability")->capture_default_str();
    sim->add_option("--delay", mo.delay, "constant one-way delay in ticks");
    sim->add_option("--min-delay", mo.min_delay)->capture_default_str();
    sim->add_option("--max-delay", mo.max_delay)->capture_default_str();
    sim->add_flag("--fifo-acks", mo.fifo_acks, "keep ACK path in order");
    sim->add_option("--n-packets", mo.n_packets)->capture_default_str();
    sim->add_option("--window", mo.window)->capture_default_str();
    sim->add_option("--initial-rto", mo.initial_rto, "RTO before the first sample");
    sim->add_option("--max-ticks", mo.max_ticks)->capture_default_str();
    sim->add_option("--seed", mo.seed)->capture_default_str();
    add_param_flags(sim, mo.params, false, "1");
    sim->add_option("--replay", mo.replay, "fig1 | fig1-lossless scripted timeline");
    sim->add_option("--out-dir", mo.out_dir, "write samples/trace/invariant files here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) {
            reversed.pop_back();
        }
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*witness) return cmd_witness(wo, out);
        if (*trace) return cmd_trace(to, out, err);
        if (*bounds) return cmd_bounds(bo, out);
        if (*scen) return cmd_scenario(so, out, err);
        if (*sim) return cmd_simulate(mo, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace karnrto::cli
