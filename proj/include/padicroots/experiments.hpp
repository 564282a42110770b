#pragma once

// Monte Carlo estimation of the expected generating-root counts, the
// probabilities rho/alpha/beta through their conditioning models, and the
// phi integral, against exact targets from the D-series. Estimators
// accumulate integer tallies only, so results are independent of thread
// scheduling; reports serialize to a fixed JSON-lines schema.

#include "padicroots/dseries.hpp"
#include "padicroots/rng.hpp"
#include "padicroots/root_count.hpp"
#include "padicroots/version.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace padicroots {

enum class ModelKind { haar, monic, monic_xn };
enum class Region { OK, MK, ALL };

inline const char* model_name(ModelKind k) {
    switch (k) {
        case ModelKind::haar: return "haar";
        case ModelKind::monic: return "monic";
        case ModelKind::monic_xn: return "monic_xn";
    }
    return "?";
}

inline const char* region_name(Region r) {
    switch (r) {
        case Region::OK: return "OK";
        case Region::MK: return "MK";
        case Region::ALL: return "ALL";
    }
    return "?";
}

struct SamplingModel {
    ModelKind kind = ModelKind::haar;
    int n = 2;
    BigInt p = 3;
    int M = 40;
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double z = 0.0;
    long long samples = 0;
    long long inconclusive = 0;
    BigRat target;
};

struct ExperimentReport {
    std::string quantity;
    SamplingModel model;
    Region region = Region::ALL;
    Estimate estimate;
    std::uint64_t seed = 0;
    std::string timestamp;  // informational; not part of the wire schema
    std::string version = kVersion;
};

inline nlohmann::ordered_json report_to_json(const ExperimentReport& r) {
    nlohmann::ordered_json j;
    j["quantity"] = r.quantity;
    j["n"] = r.model.n;
    j["p"] = r.model.p.get_si();
    j["model"] = model_name(r.model.kind);
    j["region"] = region_name(r.region);
    j["samples"] = r.estimate.samples;
    j["mean"] = r.estimate.mean;
    j["stderr"] = r.estimate.stderr_;
    j["target_num"] = r.estimate.target.get_num().get_str();
    j["target_den"] = r.estimate.target.get_den().get_str();
    j["z"] = r.estimate.z;
    j["inconclusive"] = r.estimate.inconclusive;
    j["seed"] = r.seed;
    j["version"] = r.version;
    return j;
}

inline ExperimentReport report_from_json(const nlohmann::ordered_json& j) {
    ExperimentReport r;
    r.quantity = j.at("quantity").get<std::string>();
    r.model.n = j.at("n").get<int>();
    r.model.p = BigInt(j.at("p").get<long>());
    std::string m = j.at("model").get<std::string>();
    r.model.kind = m == "haar" ? ModelKind::haar : (m == "monic" ? ModelKind::monic : ModelKind::monic_xn);
    std::string reg = j.at("region").get<std::string>();
    r.region = reg == "OK" ? Region::OK : (reg == "MK" ? Region::MK : Region::ALL);
    r.estimate.samples = j.at("samples").get<long long>();
    r.estimate.mean = j.at("mean").get<double>();
    r.estimate.stderr_ = j.at("stderr").get<double>();
    r.estimate.target = make_rat(BigInt(j.at("target_num").get<std::string>()),
                                 BigInt(j.at("target_den").get<std::string>()));
    r.estimate.z = j.at("z").get<double>();
    r.estimate.inconclusive = j.at("inconclusive").get<long long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    return r;
}

inline std::string csv_header() {
    return "quantity,n,p,model,region,samples,mean,stderr,target_num,target_den,z,inconclusive,seed,version";
}

inline std::string report_to_csv(const ExperimentReport& r) {
    char num[64];
    auto fmt = [&](double x) {
        std::snprintf(num, sizeof num, "%.17g", x);
        return std::string(num);
    };
    std::string line;
    line += r.quantity;
    line += "," + std::to_string(r.model.n);
    line += "," + r.model.p.get_str();
    line += std::string(",") + model_name(r.model.kind);
    line += std::string(",") + region_name(r.region);
    line += "," + std::to_string(r.estimate.samples);
    line += "," + fmt(r.estimate.mean);
    line += "," + fmt(r.estimate.stderr_);
    line += "," + r.estimate.target.get_num().get_str();
    line += "," + r.estimate.target.get_den().get_str();
    line += "," + fmt(r.estimate.z);
    line += "," + std::to_string(r.estimate.inconclusive);
    line += "," + std::to_string(r.seed);
    line += "," + r.version;
    return line;
}

// ---------------------------------------------------------------------------
// Sampling

// Stream salts keep the passes of a suite statistically independent while
// staying reproducible from a single user seed.
namespace stream_salt {
inline constexpr std::uint64_t roots = 1;
inline constexpr std::uint64_t phi = 2;
}  // namespace stream_salt

inline PadicPolynomial sample_polynomial(const SamplingModel& m, const GaloisRingContext& ctx,
                                         SplitMix64& rng, long long& degenerate) {
    const BigInt& pM = ctx.p_pow(m.M);
    BigInt pM1 = ctx.p_pow(m.M - 1);
    BigInt p_half = ctx.p_pow(m.M / 2);
    for (int attempt = 0; attempt < 100; ++attempt) {
        PadicPolynomial f;
        f.coeffs.resize(static_cast<std::size_t>(m.n) + 1);
        switch (m.kind) {
            case ModelKind::haar:
                for (auto& c : f.coeffs) c = rng.uniform_below(pM);
                break;
            case ModelKind::monic:
                for (int i = 0; i < m.n; ++i) f.coeffs[i] = rng.uniform_below(pM);
                f.coeffs[m.n] = 1;
                break;
            case ModelKind::monic_xn:
                for (int i = 0; i < m.n; ++i) f.coeffs[i] = ctx.p() * rng.uniform_below(pM1);
                f.coeffs[m.n] = 1;
                break;
        }
        bool degenerate_sample = true;
        for (auto& c : f.coeffs)
            if (c % p_half != 0) {
                degenerate_sample = false;
                break;
            }
        if (!degenerate_sample) return f;
        ++degenerate;
    }
    throw std::runtime_error("sample_polynomial: persistent degenerate draws");
}

// ---------------------------------------------------------------------------
// Tallies (integer-only accumulation)

struct RootTallies {
    long long samples = 0;
    long long sum_ok = 0, sum_mk = 0, sum_all = 0, sum_out = 0;
    long long sq_ok = 0, sq_mk = 0, sq_all = 0, sq_out = 0;
    long long inconclusive = 0;
    long long degenerate = 0;

    void merge(const RootTallies& o) {
        samples += o.samples;
        sum_ok += o.sum_ok;
        sum_mk += o.sum_mk;
        sum_all += o.sum_all;
        sum_out += o.sum_out;
        sq_ok += o.sq_ok;
        sq_mk += o.sq_mk;
        sq_all += o.sq_all;
        sq_out += o.sq_out;
        inconclusive += o.inconclusive;
        degenerate += o.degenerate;
    }
};

struct PhiTallies {
    long long samples = 0;
    std::map<long, long long> valuation_hist;  // disc valuation -> count
    long long overflow = 0;                    // phi snapped to 0

    void merge(const PhiTallies& o) {
        samples += o.samples;
        for (auto& [v, c] : o.valuation_hist) valuation_hist[v] += c;
        overflow += o.overflow;
    }
};

namespace detail {

template <typename Tally, typename PerSample>
Tally run_chunked(long long samples, int threads, const PerSample& per_sample) {
    if (threads < 1) threads = 1;
    if (threads == 1 || samples < 256) {
        Tally t;
        for (long long i = 0; i < samples; ++i) per_sample(i, t);
        t.samples = samples;
        return t;
    }
    std::vector<Tally> parts(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    long long chunk = (samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        long long lo = t * chunk, hi = std::min(samples, (t + 1) * chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, t, lo, hi] {
            for (long long i = lo; i < hi; ++i) per_sample(i, parts[static_cast<std::size_t>(t)]);
            parts[static_cast<std::size_t>(t)].samples = hi - lo;
        });
    }
    for (auto& th : pool) th.join();
    Tally total;
    for (auto& part : parts) total.merge(part);  // fixed order
    return total;
}

inline void finish_moments(Estimate& e, long long samples, double sum, double sumsq) {
    e.samples = samples;
    e.mean = sum / static_cast<double>(samples);
    double var = 0.0;
    if (samples > 1) {
        var = (sumsq - static_cast<double>(samples) * e.mean * e.mean) /
              static_cast<double>(samples - 1);
        if (var < 0) var = 0;  // rounding guard
    }
    e.stderr_ = std::sqrt(var / static_cast<double>(samples));
    double target = e.target.get_d();
    if (e.stderr_ > 0) {
        e.z = (e.mean - target) / e.stderr_;
    } else {
        e.z = (e.mean == target) ? 0.0 : (e.mean > target ? HUGE_VAL : -HUGE_VAL);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Estimators

class ExperimentRunner {
public:
    explicit ExperimentRunner(DFamily& dseries, int threads = default_threads())
        : ds_(&dseries), threads_(threads) {}

    static int default_threads() {
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
    }

    // Exact targets from the D-series.
    BigRat target_root_expectation(const SamplingModel& m, Region region) {
        ProbabilityTable t = ds_->probabilities(m.n, m.p);
        BigRat p(m.p);
        BigRat pn = pow_rat(p, m.n);
        switch (m.kind) {
            case ModelKind::haar:
                if (region == Region::OK) return (pn * p - pn) / (pn * p - 1) * t.alpha;
                if (region == Region::MK) return (p - 1) / (pn * p - 1) * t.beta;
                return t.rho;
            case ModelKind::monic:
                if (region == Region::OK || region == Region::ALL) return t.alpha;
                break;
            case ModelKind::monic_xn:
                if (region == Region::MK || region == Region::ALL) return t.beta;
                break;
        }
        throw std::invalid_argument("no exact target for this model/region combination");
    }

    BigRat target_phi_integral(int n, const BigInt& p, Region region) {
        ProbabilityTable t = ds_->probabilities(n, p);
        if (region == Region::OK) return BigRat(n) * t.alpha;  // D_n(p, p^{-n/2})
        if (region == Region::MK) return BigRat(n) * t.beta / pow_rat(BigRat(p), n);
        throw std::invalid_argument("phi integral: region must be OK or MK");
    }

    RootTallies root_tallies(const SamplingModel& m, long long samples, std::uint64_t seed) {
        if (samples < 1) throw std::invalid_argument("samples must be >= 1");
        GaloisRingContext ctx(m.p, m.n, m.M);
        RootCounter counter(ctx);
        auto tally = detail::run_chunked<RootTallies>(
            samples, threads_, [&](long long i, RootTallies& t) {
                SplitMix64 rng = SplitMix64::substream(seed, stream_salt::roots, static_cast<std::uint64_t>(i));
                PadicPolynomial f = sample_polynomial(m, ctx, rng, t.degenerate);
                RootCountResult r = counter.count(f);
                t.sum_ok += r.count_ok;
                t.sum_mk += r.count_mk;
                t.sum_all += r.total();
                t.sum_out += r.count_outside;
                t.sq_ok += r.count_ok * r.count_ok;
                t.sq_mk += r.count_mk * r.count_mk;
                t.sq_all += r.total() * r.total();
                t.sq_out += r.count_outside * r.count_outside;
                t.inconclusive += r.inconclusive;
            });
        if (tally.degenerate * 100 > tally.samples)
            throw std::runtime_error("degenerate sample rate above 1%: check precision settings");
        return tally;
    }

    Estimate estimate_from_tallies(const RootTallies& t, const SamplingModel& m, Region region,
                                   const BigRat& target) {
        long long sum = region == Region::OK ? t.sum_ok : (region == Region::MK ? t.sum_mk : t.sum_all);
        long long sq = region == Region::OK ? t.sq_ok : (region == Region::MK ? t.sq_mk : t.sq_all);
        Estimate e;
        e.target = target;
        e.inconclusive = t.inconclusive;
        double n = static_cast<double>(m.n);
        detail::finish_moments(e, t.samples, static_cast<double>(sum) / n,
                               static_cast<double>(sq) / (n * n));
        return e;
    }

    // (1/n) E[N(region)] under the model's conditioning.
    Estimate estimate_root_expectation(const SamplingModel& m, Region region, long long samples,
                                       std::uint64_t seed) {
        BigRat target = target_root_expectation(m, region);
        return estimate_from_tallies(root_tallies(m, samples, seed), m, region, target);
    }

    // rho (haar), alpha (monic) or beta (monic_xn), all through region ALL.
    Estimate estimate_probability(const SamplingModel& m, long long samples, std::uint64_t seed) {
        return estimate_root_expectation(m, Region::ALL, samples, seed);
    }

    PhiTallies phi_tallies(const GaloisRingContext& ctx, Region region, long long samples,
                           std::uint64_t seed) {
        if (samples < 1) throw std::invalid_argument("samples must be >= 1");
        if (region == Region::ALL) throw std::invalid_argument("phi integral: region must be OK or MK");
        const BigInt& pM = ctx.p_pow(ctx.precision());
        return detail::run_chunked<PhiTallies>(samples, threads_, [&](long long i, PhiTallies& t) {
            SplitMix64 rng = SplitMix64::substream(seed, stream_salt::phi, static_cast<std::uint64_t>(i));
            std::vector<BigInt> coeffs(static_cast<std::size_t>(ctx.n()));
            for (auto& c : coeffs) c = rng.uniform_below(pM);
            GaloisRingElement x = ctx.element(std::move(coeffs));
            if (region == Region::MK) x = ctx.mul_scalar(x, ctx.p());
            auto v = ctx.disc_valuation(x);
            if (v)
                ++t.valuation_hist[*v];
            else
                ++t.overflow;
        });
    }

    // Mean of phi over the region as an estimate of the integral; the MK
    // integrand carries the measure factor p^{-n} of the change of variables.
    Estimate estimate_phi_integral(const GaloisRingContext& ctx, Region region, long long samples,
                                   std::uint64_t seed) {
        PhiTallies t = phi_tallies(ctx, region, samples, seed);
        Estimate e;
        e.target = target_phi_integral(ctx.n(), ctx.p(), region);
        e.inconclusive = t.overflow;
        double scale = region == Region::MK ? std::pow(ctx.p().get_d(), -ctx.n()) : 1.0;
        double p = ctx.p().get_d();
        double sum = 0.0, sumsq = 0.0;
        for (auto& [v, c] : t.valuation_hist) {
            double phi = scale * std::pow(p, -0.5 * static_cast<double>(v));
            sum += static_cast<double>(c) * phi;
            sumsq += static_cast<double>(c) * phi * phi;
        }
        detail::finish_moments(e, t.samples, sum, sumsq);
        return e;
    }

    int threads() const { return threads_; }

private:
    DFamily* ds_;
    int threads_;
};

// ---------------------------------------------------------------------------
// Suite

struct SuiteConfig {
    int n = 2;
    BigInt p = 3;
    long long samples = 100000;
    std::uint64_t seed = 1;
    int M = 40;
};

inline std::vector<ExperimentReport> run_suite(ExperimentRunner& runner, const SuiteConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("run_suite: samples must be >= 1");
    if (cfg.n < 1) throw std::invalid_argument("run_suite: n must be >= 1");
    if (!is_prime(cfg.p)) throw std::invalid_argument("run_suite: p must be prime");

    std::vector<ExperimentReport> reports;
    auto add = [&](const char* quantity, const SamplingModel& m, Region region, Estimate est) {
        ExperimentReport r;
        r.quantity = quantity;
        r.model = m;
        r.region = region;
        r.estimate = std::move(est);
        r.seed = cfg.seed;
        reports.push_back(std::move(r));
    };

    for (ModelKind kind : {ModelKind::haar, ModelKind::monic, ModelKind::monic_xn}) {
        SamplingModel m{kind, cfg.n, cfg.p, cfg.M};
        RootTallies t = runner.root_tallies(m, cfg.samples, cfg.seed);
        auto est = [&](Region reg) {
            return runner.estimate_from_tallies(t, m, reg, runner.target_root_expectation(m, reg));
        };
        switch (kind) {
            case ModelKind::haar:
                add("root_expectation", m, Region::OK, est(Region::OK));
                add("root_expectation", m, Region::MK, est(Region::MK));
                add("rho", m, Region::ALL, est(Region::ALL));
                break;
            case ModelKind::monic:
                add("root_expectation", m, Region::OK, est(Region::OK));
                add("alpha", m, Region::ALL, est(Region::ALL));
                break;
            case ModelKind::monic_xn:
                add("root_expectation", m, Region::MK, est(Region::MK));
                add("beta", m, Region::ALL, est(Region::ALL));
                break;
        }
    }

    GaloisRingContext ctx(cfg.p, cfg.n, cfg.M);
    SamplingModel haar{ModelKind::haar, cfg.n, cfg.p, cfg.M};
    add("phi_integral", haar, Region::OK,
        runner.estimate_phi_integral(ctx, Region::OK, cfg.samples, cfg.seed));
    add("phi_integral", haar, Region::MK,
        runner.estimate_phi_integral(ctx, Region::MK, cfg.samples, cfg.seed));
    return reports;
}

}  // namespace padicroots
