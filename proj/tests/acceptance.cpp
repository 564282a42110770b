// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Monte Carlo criteria run 10^5 samples per configuration with 4-sigma
// two-sided gates.

#include "padicroots/dseries.hpp"
#include "padicroots/experiments.hpp"
#include "padicroots/incidence.hpp"
#include "padicroots/theta.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using namespace padicroots;

namespace {

struct Config {
    int n;
    long p;
};
const std::vector<Config> kMcConfigs = {{2, 2}, {2, 3}, {2, 5}, {3, 2}, {3, 3}};
constexpr long long kMcSamples = 100000;
constexpr std::uint64_t kSeed = 20250811;

int failures = 0;

void report(int idx, const char* name, bool ok, double seconds, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %-34s (%6.1fs)%s%s\n", ok ? "PASS" : "FAIL", idx, name,
                seconds, detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename Fn>
void run(int idx, const char* name, Fn fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(idx, name, ok, dt, detail);
}

bool criterion_inversion(std::string&) {
    DFamily fam;
    for (int n = 1; n <= 30; ++n)
        if (!fam.inversion_check(n)) return false;
    return true;
}

bool criterion_cross_forms(std::string&) {
    DFamily fam;
    for (int n = 1; n <= 30; ++n)
        if (!(fam.d_chain_form(n) == fam.d(n))) return false;
    std::vector<int> subset_ns{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 24, 30};
    for (int n : subset_ns)
        if (!(fam.d_subset_form(n) == fam.d(n))) return false;
    return true;
}

bool criterion_dstar_parity(std::string&) {
    DFamily fam;
    for (int n = 1; n <= 15; ++n) fam.d_star(n);  // throws on any odd power of sqrt(t)
    return true;
}

bool criterion_incidence(std::string& detail) {
    for (long n = 1; n <= 1000; ++n) {
        FinitePoset p = divisor_poset(n);
        if (!(mobius_element(p).value(1, n) == BigRat(mobius(n)))) {
            detail = "classical mobius mismatch at n=" + std::to_string(n);
            return false;
        }
    }

    for (long n : {4L, 6L, 8L, 12L, 30L}) {
        FinitePoset p = divisor_poset(n);
        auto zeta = IncidenceElement<BigRat>::zeta(p);
        auto mu = mobius_element(p);
        auto delta = IncidenceElement<BigRat>::delta(p);
        if (!(zeta.convolve(mu) == delta) || !(mu.convolve(zeta) == delta)) return false;
        if (!(zeta.inverse_via_chains() == mu)) return false;

        for (auto& chain : p.all_chains(1, n))
            for (int m = 0; m <= static_cast<int>(p.size()); ++m)
                if (p.count_refinements(chain, m) !=
                    static_cast<long>(p.refinements(chain, m).size())) {
                    detail = "refinement count mismatch at n=" + std::to_string(n);
                    return false;
                }

        auto divs = p.elements();
        for (std::size_t mask = 1; mask < (std::size_t{1} << divs.size()); ++mask) {
            std::vector<long> q;
            for (std::size_t i = 0; i < divs.size(); ++i)
                if ((mask >> i) & 1) q.push_back(divs[i]);
            for (long y : q)
                for (long x : divs)
                    if (gamma_q(p, mu, q, x, y) != gamma_q_closed_form(p, mu, q, x, y)) {
                        detail = "gamma case split failed at n=" + std::to_string(n);
                        return false;
                    }
        }

        for (auto& pair : complementing_pairs(p, 1, n)) {
            if (!mobius_completion_check(p, pair)) {
                detail = "mobius completion failed at n=" + std::to_string(n);
                return false;
            }
            if (!theta_inversion_check(p, pair)) {
                detail = "theta inversion failed at n=" + std::to_string(n);
                return false;
            }
            // every admissible monomial's closed-form coefficient matches the
            // symbolic restricted inverse, including vanishing ones
            LaurentPoly inv = theta_restricted_inverse(p, pair.q, 1, n);
            for (auto& m : all_admissible_monomials(p, pair.q, 1, n))
                if (theta_inverse_coefficient(p, pair.q, 1, n, m) != inv.coefficient(m)) {
                    detail = "admissible coefficient mismatch at n=" + std::to_string(n);
                    return false;
                }
        }
    }
    return true;
}

bool criterion_probability_values(std::string&) {
    DFamily fam;
    ProbabilityTable t23 = fam.probabilities(2, 3);
    if (!(t23.rho == BigRat(7, 26) && t23.alpha == BigRat(3, 8) && t23.beta == BigRat(1, 8)))
        return false;
    for (long p : {2L, 3L, 5L}) {
        ProbabilityTable t = fam.probabilities(1, p);
        if (!(t.rho == 1 && t.alpha == 1 && t.beta == 1)) return false;
    }
    for (int n = 1; n <= 12; ++n)
        for (long p : {2L, 3L, 5L, 7L}) {
            ProbabilityTable t = fam.probabilities(n, p);
            BigRat pr(p), pn = pow_rat(BigRat(p), n);
            if (!(t.rho == (pr - 1) / (pn * pr - 1) * (pn * t.alpha + t.beta))) return false;
            if (!(t.rho > 0 && t.rho <= 1 && t.alpha > 0 && t.alpha <= 1 && t.beta > 0 &&
                  t.beta <= 1))
                return false;
        }
    return true;
}

bool gates_ok(const std::vector<Estimate>& es, long long samples, std::string& detail) {
    std::ostringstream zs;
    bool ok = true;
    long long inconclusive = 0;
    for (auto& e : es) {
        zs << (zs.tellp() > 0 ? " " : "") << "z=" << std::fixed;
        zs.precision(2);
        zs << e.z;
        ok = ok && std::abs(e.z) <= 4.0;
        inconclusive += e.inconclusive;
    }
    if (static_cast<double>(inconclusive) >= 1e-3 * static_cast<double>(samples)) {
        detail += " inconclusive rate too high;";
        ok = false;
    }
    detail += " " + zs.str();
    return ok;
}

bool criterion_mc_root_expectations(std::string& detail) {
    DFamily fam;
    ExperimentRunner runner(fam);
    bool all_ok = true;
    for (auto& cfg : kMcConfigs) {
        SamplingModel m{ModelKind::haar, cfg.n, BigInt(cfg.p), 40};
        RootTallies t = runner.root_tallies(m, kMcSamples, kSeed);
        std::vector<Estimate> es;
        for (Region r : {Region::OK, Region::MK, Region::ALL})
            es.push_back(
                runner.estimate_from_tallies(t, m, r, runner.target_root_expectation(m, r)));
        std::string d = "(" + std::to_string(cfg.n) + "," + std::to_string(cfg.p) + ")";
        all_ok = gates_ok(es, kMcSamples, d) && all_ok;
        detail += d + ";";
    }
    return all_ok;
}

bool criterion_mc_conditional(std::string& detail) {
    DFamily fam;
    ExperimentRunner runner(fam);
    bool all_ok = true;
    for (auto& cfg : kMcConfigs) {
        for (ModelKind kind : {ModelKind::monic, ModelKind::monic_xn}) {
            SamplingModel m{kind, cfg.n, BigInt(cfg.p), 40};
            Estimate e = runner.estimate_probability(m, kMcSamples, kSeed);
            std::string d = std::string(model_name(kind)) + "(" + std::to_string(cfg.n) + "," +
                            std::to_string(cfg.p) + ")";
            all_ok = gates_ok({e}, kMcSamples, d) && all_ok;
            detail += d + ";";
        }
    }
    return all_ok;
}

bool criterion_mc_phi(std::string& detail) {
    DFamily fam;
    ExperimentRunner runner(fam);
    bool all_ok = true;
    for (auto& cfg : kMcConfigs) {
        GaloisRingContext ctx(cfg.p, cfg.n, 40);
        std::vector<Estimate> es{runner.estimate_phi_integral(ctx, Region::OK, kMcSamples, kSeed),
                                 runner.estimate_phi_integral(ctx, Region::MK, kMcSamples, kSeed)};
        if (cfg.n == 2 && cfg.p == 3) {
            if (!(es[0].target == BigRat(3, 4) && es[1].target == BigRat(1, 36))) return false;
        }
        std::string d = "(" + std::to_string(cfg.n) + "," + std::to_string(cfg.p) + ")";
        all_ok = gates_ok(es, kMcSamples, d) && all_ok;
        detail += d + ";";
    }
    return all_ok;
}

bool criterion_phi_scaling(std::string&) {
    for (auto& cfg : kMcConfigs) {
        GaloisRingContext ctx(cfg.p, cfg.n, 40);
        const long shift = static_cast<long>(cfg.n) * (cfg.n - 1);
        int checked = 0;
        for (long long i = 0; checked < 1000 && i < 2000; ++i) {
            SplitMix64 rng = SplitMix64::substream(kSeed, 77, static_cast<std::uint64_t>(i));
            std::vector<BigInt> c(static_cast<std::size_t>(cfg.n));
            for (auto& x : c) x = rng.uniform_below(ctx.p_pow(40));
            GaloisRingElement x = ctx.element(std::move(c));
            auto v = ctx.disc_valuation(x);
            auto vp = ctx.disc_valuation(ctx.mul_scalar(x, ctx.p()));
            if (!v || !vp) continue;  // overflow: resample
            if (*vp != *v + shift) return false;
            ++checked;
        }
        if (checked < 1000) return false;
    }
    return true;
}

bool criterion_igusa(std::string&) {
    DFamily fam;
    for (int n = 1; n <= 12; ++n)
        if (!fam.igusa_functional_equation_check(n)) return false;
    return true;
}

bool criterion_reproducibility(std::string&) {
    DFamily fam;
    ExperimentRunner parallel(fam);
    ExperimentRunner serial(fam, 1);
    SuiteConfig cfg;
    cfg.n = 2;
    cfg.p = 3;
    cfg.samples = 2000;
    cfg.seed = 42;
    auto dump = [](const std::vector<ExperimentReport>& rs) {
        std::string s;
        for (auto& r : rs) s += report_to_json(r).dump() + "\n";
        return s;
    };
    std::string a = dump(run_suite(parallel, cfg));
    std::string b = dump(run_suite(parallel, cfg));
    std::string c = dump(run_suite(serial, cfg));
    return !a.empty() && a == b && a == c;
}

}  // namespace

int main() {
    std::printf("acceptance suite: exact identities and Monte Carlo gates\n");
    run(1, "symbolic inversion, n = 1..30", criterion_inversion);
    run(2, "cross-form agreement", criterion_cross_forms);
    run(3, "D*_n rational in t, n <= 15", criterion_dstar_parity);
    run(4, "incidence suite", criterion_incidence);
    run(5, "probability values", criterion_probability_values);
    run(6, "MC root expectations", criterion_mc_root_expectations);
    run(7, "MC conditional estimators", criterion_mc_conditional);
    run(8, "MC phi integral", criterion_mc_phi);
    run(9, "phi scaling law", criterion_phi_scaling);
    run(10, "igusa functional equation, n <= 12", criterion_igusa);
    run(11, "reproducibility", criterion_reproducibility);
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
