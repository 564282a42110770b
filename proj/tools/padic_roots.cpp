// Command-line front end: exact D-series rendering, probability tables,
// symbolic identity verification, and the Monte Carlo suites.
//
// Exit codes: 0 success, 1 validation error, 2 verification failure,
// 3 statistical gate failure.

#include "padicroots/dseries.hpp"
#include "padicroots/experiments.hpp"
#include "padicroots/incidence.hpp"
#include "padicroots/theta.hpp"
#include "padicroots/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace padicroots;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;
constexpr int kExitStatistical = 3;

std::string default_out_path(const std::string& name) {
    const char* dir = std::getenv("PADIC_ROOTS_OUT");
    std::string base = dir && *dir ? dir : ".";
    return base + "/" + name;
}

std::string now_string() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int cmd_dfunc(int n, const std::string& format) {
    DFamily fam;
    RationalFunction d = fam.d(n);
    RationalFunction ds = fam.d_star(n);
    if (format == "json") {
        nlohmann::ordered_json j;
        j["n"] = n;
        j["d"] = d.to_string();
        j["d_star"] = ds.to_string();
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "D_" << n << " = " << d.to_string() << "\n";
        std::cout << "D*_" << n << " = " << ds.to_string() << "\n";
    }
    return 0;
}

int cmd_probs(int n, long p, const std::string& format) {
    DFamily fam;
    ProbabilityTable t = fam.probabilities(n, p);
    if (format == "json") {
        nlohmann::ordered_json j;
        j["n"] = n;
        j["p"] = p;
        j["rho"] = rat_to_string(t.rho);
        j["alpha"] = rat_to_string(t.alpha);
        j["beta"] = rat_to_string(t.beta);
        j["rho_decimal"] = t.rho.get_d();
        j["alpha_decimal"] = t.alpha.get_d();
        j["beta_decimal"] = t.beta.get_d();
        std::cout << j.dump() << "\n";
    } else {
        auto line = [&](const char* name, const BigRat& v) {
            std::printf("%-5s = %-12s = %.12f\n", name, rat_to_string(v).c_str(), v.get_d());
        };
        line("rho", t.rho);
        line("alpha", t.alpha);
        line("beta", t.beta);
    }
    return 0;
}

struct VerifyState {
    int passed = 0;
    int failed = 0;
    std::string format;

    void record(const std::string& check, long n, bool ok) {
        ok ? ++passed : ++failed;
        if (format == "json") {
            nlohmann::ordered_json j;
            j["check"] = check;
            j["n"] = n;
            j["status"] = ok ? "pass" : "fail";
            std::cout << j.dump() << "\n";
        } else {
            std::cout << (ok ? "[PASS] " : "[FAIL] ") << check << " n=" << n << "\n";
        }
    }
};

void verify_dseries(VerifyState& st, int nmax) {
    DFamily fam;
    for (int n = 1; n <= nmax; ++n) {
        st.record("dseries.inversion", n, fam.inversion_check(n));
        st.record("dseries.chain_form", n, fam.d_chain_form(n) == fam.d(n));
        if (divisors(n).size() <= 10)
            st.record("dseries.subset_form", n, fam.d_subset_form(n) == fam.d(n));
        if (n <= 15) {
            bool ok = true;
            try {
                fam.d_star(n);
            } catch (const std::logic_error&) {
                ok = false;
            }
            st.record("dseries.d_star_rational_in_t", n, ok);
        }
        if (n <= 12) st.record("dseries.igusa", n, fam.igusa_functional_equation_check(n));
        if (n <= 12) {
            bool ok = true;
            for (long p : {2L, 3L, 5L, 7L}) {
                ProbabilityTable t = fam.probabilities(n, p);
                BigRat pr(p), pn = pow_rat(BigRat(p), n);
                ok = ok && t.rho == (pr - 1) / (pn * pr - 1) * (pn * t.alpha + t.beta);
                ok = ok && t.rho > 0 && t.rho <= 1 && t.alpha > 0 && t.alpha <= 1 && t.beta > 0 &&
                     t.beta <= 1;
            }
            st.record("dseries.probability_identity", n, ok);
        }
    }
}

void verify_incidence(VerifyState& st, int nmax) {
    for (long n = 1; n <= nmax; ++n) {
        FinitePoset p = divisor_poset(n);
        auto zeta = IncidenceElement<BigRat>::zeta(p);
        auto mu = mobius_element(p);
        st.record("incidence.mobius_classical", n, mu.value(1, n) == BigRat(mobius(n)));
        st.record("incidence.zeta_mu_delta", n,
                  zeta.convolve(mu) == IncidenceElement<BigRat>::delta(p));
        st.record("incidence.chain_inverse", n, zeta.inverse_via_chains() == mu);

        bool refine_ok = true;
        for (auto& chain : p.all_chains(1, n))
            for (int m = 0; m <= static_cast<int>(p.size()); ++m)
                refine_ok = refine_ok && p.count_refinements(chain, m) ==
                                             static_cast<long>(p.refinements(chain, m).size());
        st.record("incidence.refinement_counts", n, refine_ok);

        if (p.size() >= 2 && p.size() <= 8) {
            bool pair_ok = true;
            for (auto& pair : complementing_pairs(p, 1, n)) {
                pair_ok = pair_ok && mobius_completion_check(p, pair);
                pair_ok = pair_ok && theta_inversion_check(p, pair);
            }
            st.record("incidence.complementing_pairs", n, pair_ok);
        }
        if (p.size() <= 6) {
            bool gamma_ok = true;
            auto divs = p.elements();
            for (std::size_t mask = 1; mask < (std::size_t{1} << divs.size()); ++mask) {
                std::vector<long> q;
                for (std::size_t i = 0; i < divs.size(); ++i)
                    if ((mask >> i) & 1) q.push_back(divs[i]);
                for (long y : q)
                    for (long x : divs)
                        gamma_ok = gamma_ok &&
                                   gamma_q(p, mu, q, x, y) == gamma_q_closed_form(p, mu, q, x, y);
            }
            st.record("incidence.gamma_cases", n, gamma_ok);
        }
    }
}

int cmd_verify(const std::string& scope, int nmax, const std::string& format) {
    VerifyState st;
    st.format = format;
    if (scope == "dseries" || scope == "all") verify_dseries(st, nmax);
    if (scope == "incidence" || scope == "all") verify_incidence(st, nmax);
    if (format != "json")
        std::cout << st.passed << " checks passed, " << st.failed << " failed\n";
    return st.failed == 0 ? 0 : kExitVerification;
}

void write_reports(const std::vector<ExperimentReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    bool csv = path.size() > 4 && path.substr(path.size() - 4) == ".csv";
    if (csv) {
        out << csv_header() << "\n";
        for (auto& r : reports) out << report_to_csv(r) << "\n";
    } else {
        for (auto& r : reports) out << report_to_json(r).dump() << "\n";
    }
}

int render_reports(std::vector<ExperimentReport>& reports, const std::string& out_path,
                   const std::string& format) {
    for (auto& r : reports) r.timestamp = now_string();
    if (!out_path.empty()) write_reports(reports, out_path);
    if (format == "json") {
        for (auto& r : reports) std::cout << report_to_json(r).dump() << "\n";
    } else if (format == "csv") {
        std::cout << csv_header() << "\n";
        for (auto& r : reports) std::cout << report_to_csv(r) << "\n";
    } else {
        std::printf("%-18s %-8s %-6s %10s %12s %12s %8s\n", "quantity", "model", "region", "mean",
                    "stderr", "target", "z");
        for (auto& r : reports)
            std::printf("%-18s %-8s %-6s %10.6f %12.2e %12.6f %8.2f\n", r.quantity.c_str(),
                        model_name(r.model.kind), region_name(r.region), r.estimate.mean,
                        r.estimate.stderr_, r.estimate.target.get_d(), r.estimate.z);
    }
    bool gate_ok = true;
    for (auto& r : reports) gate_ok = gate_ok && std::abs(r.estimate.z) <= 4.0;
    return gate_ok ? 0 : kExitStatistical;
}

int cmd_simulate(const SuiteConfig& cfg, const std::string& out_path, const std::string& format) {
    DFamily fam;
    ExperimentRunner runner(fam);
    auto reports = run_suite(runner, cfg);
    return render_reports(reports, out_path, format);
}

int cmd_integrate(const SuiteConfig& cfg, const std::string& region, const std::string& out_path,
                  const std::string& format) {
    DFamily fam;
    ExperimentRunner runner(fam);
    GaloisRingContext ctx(cfg.p, cfg.n, cfg.M);
    SamplingModel haar{ModelKind::haar, cfg.n, cfg.p, cfg.M};
    std::vector<ExperimentReport> reports;
    auto add = [&](Region reg) {
        ExperimentReport r;
        r.quantity = "phi_integral";
        r.model = haar;
        r.region = reg;
        r.estimate = runner.estimate_phi_integral(ctx, reg, cfg.samples, cfg.seed);
        r.seed = cfg.seed;
        reports.push_back(std::move(r));
    };
    if (region == "ok" || region == "both") add(Region::OK);
    if (region == "mk" || region == "both") add(Region::MK);
    return render_reports(reports, out_path, format);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo computations for random p-adic polynomials "
                 "and the unramified splitting type"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    int n = 2;
    long p = 3;
    long long samples = 100000;
    std::uint64_t seed = 1;
    int precision = 40;
    std::string out_path, format = "text", scope = "all", region = "both";

    auto* dfunc = app.add_subcommand("dfunc", "Print D_n(u,v) and D*_n(t) exactly");
    dfunc->add_option("--n", n, "degree")->required()->check(CLI::Range(1, 60));
    dfunc->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* probs = app.add_subcommand("probs", "Exact rho, alpha, beta for degree n at prime p");
    probs->add_option("--n", n, "degree")->required()->check(CLI::Range(1, 60));
    probs->add_option("--p", p, "prime")->required()->check(CLI::Range(2L, 1000000L));
    probs->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify", "Run the symbolic identity verifiers");
    verify->add_option("--scope", scope)->check(CLI::IsMember({"incidence", "dseries", "all"}));
    verify->add_option("--n", n, "verify degrees 1..n")->required()->check(CLI::Range(1, 30));
    verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo suite against exact targets");
    auto* integrate = app.add_subcommand("integrate", "Monte Carlo phi integral");
    for (CLI::App* cmd : {simulate, integrate}) {
        cmd->add_option("--n", n, "degree")->required()->check(CLI::Range(1, 6));
        cmd->add_option("--p", p, "prime")->required()->check(CLI::Range(2L, 1000L));
        cmd->add_option("--samples", samples)->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed);
        cmd->add_option("--precision", precision)->check(CLI::Range(4, 200));
        cmd->add_option("--out", out_path, "report file (.jsonl or .csv)");
        cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    }
    integrate->add_option("--region", region)->check(CLI::IsMember({"ok", "mk", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (dfunc->parsed()) return cmd_dfunc(n, format);
        if (probs->parsed()) return cmd_probs(n, p, format);
        if (verify->parsed()) return cmd_verify(scope, n, format);
        SuiteConfig cfg;
        cfg.n = n;
        cfg.p = p;
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.M = precision;
        if (simulate->parsed()) {
            std::string path = out_path.empty() ? default_out_path("reports.jsonl") : out_path;
            return cmd_simulate(cfg, path, format);
        }
        if (integrate->parsed()) return cmd_integrate(cfg, region, out_path, format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
