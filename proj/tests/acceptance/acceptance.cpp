// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "certify.hpp"
#include "gen.hpp"
#include "karnrto/exactnum.hpp"
#include "karnrto/limitwit.hpp"
#include "karnrto/netsim.hpp"
#include "karnrto/report.hpp"
#include "karnrto/rtocalc.hpp"
#include "karnrto/scenario.hpp"
#include "karnrto/steadystate.hpp"

namespace {

using namespace karnrto;
using testgen::Gen;

struct Outcome {
    bool ok = true;
    std::string detail;
};

Rational nat(std::uint64_t v) { return Rational(Natural(v).value()); }

Rational frac(std::uint64_t p, std::uint64_t q) {
    return Rational(Natural(p).value(), Natural(q).value());
}

// alpha in (0, 1) and eps in (0, 2), numerators and denominators up to `bound`.
Rational random_alpha(Gen& g, std::uint64_t bound) {
    const std::uint64_t q = g.range(2, bound);
    return frac(g.range(1, q - 1), q);
}

Rational random_eps(Gen& g, std::uint64_t bound) {
    const std::uint64_t q = g.range(1, bound);
    return frac(g.range(1, std::min(2 * q - 1, bound)), q);
}

Outcome witness_sweep() {
    const auto t0 = std::chrono::steady_clock::now();
    Gen g(1001);
    std::uint64_t checks = 0, failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Rational a = random_alpha(g, 1'000'000);
        const Rational e = random_eps(g, 1'000'000);
        for (const auto m : {limitwit::Method::Ceiling, limitwit::Method::BinomialSemiAuto}) {
            const auto w = limitwit::witness(m, a, e);
            checks += 10;
            if (limitwit::first_violation(w, 10)) {
                ++failures;
                std::fprintf(stderr, "  violation: %s alpha=%s eps=%s delta=%s\n",
                             std::string(limitwit::to_string(m)).c_str(), a.to_string().c_str(),
                             e.to_string().c_str(), w.delta.to_string().c_str());
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << "2000 witnesses, " << checks << " exact checks, " << failures << " failures, " << secs
      << " s";
    return {failures == 0 && secs < 60.0, d.str()};
}

Outcome oracle_lower_bound() {
    Gen g(1002);
    int pairs = 0, failures = 0, skipped = 0;
    while (pairs < 200) {
        const Rational a = random_alpha(g, 1000);
        const Rational e = random_eps(g, 1000);
        const auto dmin = limitwit::brute_force_min_delta(a, e, 10'000);
        if (!dmin) {
            ++skipped;
            continue;
        }
        ++pairs;
        const Natural lo(*dmin);
        if (limitwit::ceiling_delta(a, e).delta < lo || limitwit::binomial_delta(a, e).delta < lo) {
            ++failures;
        }
    }
    std::ostringstream d;
    d << pairs << " pairs (" << skipped << " skipped above the scan cap), " << failures
      << " failures";
    return {failures == 0, d.str()};
}

Outcome ceiling_lemmas() {
    Gen g(1003);
    int nested = 0, quotient = 0, k_bound = 0, f_bound = 0;
    for (int i = 0; i < 1000; ++i) {
        const Rational x = g.positive_below(100000, 10000);
        const Rational m = nat(g.range(1, 1000));
        const Rational n = nat(g.range(1, 1000));
        nested += ceil(x / (m * n)) != ceil(Rational(ceil(x / m)) / n);

        const Rational y = g.positive_below(1000, 10000);
        quotient += !(x / Rational(ceil_div(x, y)) <= y);

        const Rational a = random_alpha(g, 10000);
        const Integer k = limitwit::ceiling_k(a);
        k_bound += !(a <= Rational(k, k + 1));

        const Rational b = random_alpha(g, 1000);
        const auto kb = to_u64(limitwit::ceiling_k(b));
        for (std::uint64_t j = kb; j <= kb + 50; ++j) {
            if (!(pow(b, j) <= limitwit::f_alpha(b, j))) {
                ++f_bound;
                break;
            }
        }
    }
    std::ostringstream d;
    d << "failures: nested-ceiling " << nested << ", quotient " << quotient << ", k-bound "
      << k_bound << ", power-vs-f " << f_bound << " (1000 each)";
    return {nested + quotient + k_bound + f_bound == 0, d.str()};
}

Outcome binomial_lemmas() {
    Gen g(1004);
    int inequality = 0, numerator_pow = 0, d_bound = 0;
    for (std::uint64_t n = 1; n <= 200; ++n) {
        inequality += !limitwit::check_binomial_inequality(n);
    }
    const Rational half(1, 2);
    for (int i = 0; i < 1000; ++i) {
        const Rational a = random_alpha(g, 1'000'000);
        const auto p = to_u64(a.numerator());
        numerator_pow += !(pow_less(a, p, half) || pow(a, p) == half);

        const Rational e = random_eps(g, 1'000'000);
        d_bound += !(pow(half, to_u64(limitwit::d_of_eps(e).value())) < e);
    }
    std::ostringstream d;
    d << "failures: 2n^n<=(1+n)^n " << inequality << "/200, alpha^numerator<=1/2 "
      << numerator_pow << "/1000, 2^-d(eps)<eps " << d_bound << "/1000";
    return {inequality + numerator_pow + d_bound == 0, d.str()};
}

steadystate::SteadySpec random_spec(Gen& g) {
    const Rational c = Rational(5) + g.positive_below(200, 8);
    const Rational r = c * g.unit_open(32);
    const auto params = rtocalc::make_params(g.unit_open(16), g.unit_open(16), g.positive_below(30, 4));
    steadystate::SteadySpec spec{c, r, params, g.positive_below(400, 8), g.positive_below(100, 8)};
    spec.validate();
    return spec;
}

Outcome containment() {
    Gen g(1005);
    std::uint64_t steps = 0, srtt_bad = 0, rttvar_checks = 0, rttvar_bad = 0;
    // Diagnostic only: the single-branch delta_m value is not an upper bound.
    std::uint64_t single_branch_misses = 0;
    for (int run = 0; run < 500; ++run) {
        const auto spec = random_spec(g);
        const std::uint64_t len = g.range(1, 500);
        std::vector<Rational> s;
        for (std::uint64_t j = 0; j < len; ++j) {
            s.push_back(g.coin() ? g.between(spec.low(), spec.high(), 1024)
                                 : (g.coin() ? spec.low() : spec.high()));
        }
        const auto& p = spec.params;
        const auto states =
            rtocalc::resume(p, rtocalc::from_priors(p, spec.srtt_prior, spec.rttvar_prior), s);
        for (std::uint64_t n = 0; n < len; ++n) {
            ++steps;
            const auto b = steadystate::srtt_bounds(spec, n);
            srtt_bad += !(b.low <= states[n].srtt && states[n].srtt <= b.high);
            ++rttvar_checks;
            rttvar_bad += !(states[n].rttvar <= steadystate::rttvar_upper(spec, n));
            if (n > 0) {
                const std::uint64_t m = g.range(1, n);
                const Rational before = states[m - 1].rttvar;
                if (m < n) {
                    ++rttvar_checks;
                    rttvar_bad +=
                        !(states[n].rttvar <= steadystate::rttvar_upper(spec, n, m, before));
                    single_branch_misses += states[n].rttvar > steadystate::rttvar_bound(
                                                                   p.beta, n + 1 - m, before,
                                                                   steadystate::delta_m(spec, m));
                }
            }
        }
    }
    std::ostringstream d;
    d << "500 runs, " << steps << " srtt checks (" << srtt_bad << " outside [L,H]), "
      << rttvar_checks << " rttvar checks (" << rttvar_bad << " above bound; single-branch delta_m "
      << "value exceeded at " << single_branch_misses << ")";
    return {srtt_bad == 0 && rttvar_bad == 0, d.str()};
}

Outcome convergence() {
    Gen g(1006);
    const Rational eps(1, 1000);
    using steadystate::Target;
    int failures = 0;
    std::uint64_t largest = 0;
    for (int i = 0; i < 100; ++i) {
        const auto spec = random_spec(g);
        for (const auto t : {Target::LowToCMinusR, Target::HighToCPlusR, Target::RttvarBoundTo2R}) {
            const auto n0 = to_u64(steadystate::convergence_n_for(spec, t, eps).value());
            largest = std::max(largest, n0);
            for (std::uint64_t n = n0 + 1; n <= n0 + 10; ++n) {
                failures += !testgen::within_eps(spec, t, n, eps);
            }
        }
    }
    std::ostringstream d;
    d << "100 specs x 3 limits x 10 n, " << failures << " failures (largest N " << largest << ")";
    return {failures == 0, d.str()};
}

Outcome pathological() {
    const auto p = rtocalc::make_params(Rational(1, 8), Rational(1, 4), Rational(1));
    const auto rep = scenario::run({scenario::Pathological{100, nat(60), nat(75)}, 1000, p});
    std::size_t from_second = 0;
    bool only_spikes = true;
    for (const auto step : rep.timeout_steps) {
        only_spikes = only_spikes && step % 100 == 0;
        from_second += step >= 200;
    }
    const auto p20 = rtocalc::make_params(Rational(1, 8), Rational(1, 4), nat(20));
    std::size_t uniform_timeouts = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        uniform_timeouts +=
            scenario::run({scenario::Uniform{nat(60), nat(75), seed}, 1000, p20}).timeout_steps.size();
    }
    std::ostringstream d;
    d << rep.timeout_steps.size() << "/" << rep.spike_steps.size()
      << " spikes time out (" << from_second << "/9 from the second), non-spike timeouts: "
      << (only_spikes ? 0 : 1) << ", uniform G=20 timeouts over 10 seeds: " << uniform_timeouts;
    return {from_second == 9 && only_spikes && uniform_timeouts == 0, d.str()};
}

Outcome replay() {
    const auto p = rtocalc::make_params(Rational(1, 8), Rational(1, 4), Rational(1));
    const auto lossy = netsim::run_scripted(netsim::ambiguous_ack_script(false), p);
    const auto clean = netsim::run_scripted(netsim::ambiguous_ack_script(true), p);
    bool lossy_sampled_2 = false, clean_sampled_2 = false;
    for (const auto& s : lossy.samples) {
        lossy_sampled_2 = lossy_sampled_2 || s.packet == 2;
    }
    for (const auto& s : clean.samples) {
        clean_sampled_2 = clean_sampled_2 || (s.packet == 2 && s.rtt == 4);
    }
    const bool logged = lossy.ambiguities.size() == 1 && lossy.ambiguities[0].packet == 2 &&
                        lossy.ambiguities[0].tick == 7 &&
                        lossy.ambiguities[0].candidate_rtts() == std::vector<std::uint64_t>{4, 1};
    std::ostringstream d;
    d << "lossy: " << (lossy_sampled_2 ? "sampled" : "no sample for") << " packet 2, ambiguity "
      << (logged ? "logged (rtt 4 or 1)" : "NOT logged") << "; lossless: packet 2 "
      << (clean_sampled_2 ? "sampled with rtt 4" : "NOT sampled");
    return {!lossy_sampled_2 && logged && clean_sampled_2 && lossy.violations.empty() &&
                clean.violations.empty(),
            d.str()};
}

Outcome simulator_invariants() {
    const auto p = rtocalc::make_params(Rational(1, 8), Rational(1, 4), Rational(1));
    int runs = 0, violations = 0, fifo_mismatch = 0, nondeterministic = 0, incomplete = 0;
    std::uint64_t samples = 0;
    const double drops[] = {0.0, 0.1, 0.5};
    const double dups[] = {0.0, 0.1};
    for (int i = 0; i < 100; ++i) {
        netsim::ChannelConfig cfg;
        cfg.drop_prob = drops[i % 3];
        cfg.dup_prob = dups[(i / 3) % 2];
        cfg.fifo_acks = (i / 6) % 2 == 0;
        cfg.min_delay = 1;
        cfg.max_delay = 1 + static_cast<std::uint64_t>(i % 7);
        cfg.seed = 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1);
        netsim::WindowPolicy pol;
        pol.window = 1 + static_cast<std::uint64_t>(i % 4);
        const auto rep = netsim::run_simulation(cfg, 200, p, pol);
        ++runs;
        violations += static_cast<int>(rep.violations.size());
        incomplete += !rep.completed;
        samples += rep.samples.size();
        for (const auto& s : rep.samples) {
            fifo_mismatch += cfg.fifo_acks && s.packet != s.prev_highest_ack;
        }
        nondeterministic += report::sim_report_json(rep) !=
                            report::sim_report_json(netsim::run_simulation(cfg, 200, p, pol));
    }
    std::ostringstream d;
    d << runs << " runs, " << samples << " samples, " << violations << " violations, "
      << fifo_mismatch << " FIFO attribution mismatches, " << nondeterministic
      << " non-identical replays, " << incomplete << " incomplete";
    return {violations == 0 && fifo_mismatch == 0 && nondeterministic == 0, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"witness validity sweep", witness_sweep},
        {"oracle lower bound", oracle_lower_bound},
        {"ceiling-lemma suite", ceiling_lemmas},
        {"binomial-lemma suite", binomial_lemmas},
        {"steady-state containment", containment},
        {"convergence certificates", convergence},
        {"pathological scenario", pathological},
        {"ambiguous-ACK replay", replay},
        {"simulator invariants", simulator_invariants},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.ok;
        std::printf("%s  %d. %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
