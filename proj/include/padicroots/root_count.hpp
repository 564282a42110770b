#pragma once

// Counting the roots of a random polynomial that generate the unramified
// extension: recursive residue refinement with Hensel lifting of simple
// residue roots, roots outside the valuation ring via the reciprocal
// polynomial, and the weighted count of inertial residue classes.

#include "padicroots/galois_ring.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace padicroots {

// A degree-bounded polynomial over Z_p truncated at p^M; the leading
// coefficient may vanish (the model is not necessarily monic).
struct PadicPolynomial {
    std::vector<BigInt> coeffs;  // size n+1, each in [0, p^M)
};

inline PadicPolynomial reciprocal(const PadicPolynomial& f) {
    PadicPolynomial r = f;
    std::reverse(r.coeffs.begin(), r.coeffs.end());
    return r;
}

// Theta_d(q) = sum_{e | d} mu(d/e) q^e: the number of residue classes whose
// inertial representatives have exact degree d.
inline BigInt inertial_count(const BigInt& q, long d) {
    if (d < 1) throw std::invalid_argument("inertial_count: d must be positive");
    BigInt acc = 0;
    for (long e : divisors(d)) {
        int m = mobius(d / e);
        if (m != 0) acc += m * pow_int(q, static_cast<unsigned long>(e));
    }
    return acc;
}

struct RootCountResult {
    long count_ok = 0;       // generating roots in O_K
    long count_mk = 0;       // generating roots in the maximal ideal
    long count_outside = 0;  // generating roots in K minus O_K
    long inconclusive = 0;   // precision-ambiguous branches, never dropped silently
    long total() const { return count_ok + count_outside; }
};

// Polynomial with Galois-ring coefficients (degree stays <= n).
class GRPoly {
public:
    GRPoly(const GaloisRingContext& ctx, std::vector<GaloisRingElement> coeffs)
        : ctx_(&ctx), c_(std::move(coeffs)) {}

    static GRPoly from_scalars(const GaloisRingContext& ctx, const std::vector<BigInt>& scalars) {
        std::vector<GaloisRingElement> c;
        c.reserve(scalars.size());
        for (auto& s : scalars) c.push_back(ctx.from_int(s));
        return GRPoly(ctx, std::move(c));
    }

    const std::vector<GaloisRingElement>& coeffs() const { return c_; }

    GaloisRingElement eval(const GaloisRingElement& x) const {
        GaloisRingElement acc = ctx_->zero();
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = ctx_->add(ctx_->mul(acc, x), *it);
        return acc;
    }

    GRPoly derivative() const {
        std::vector<GaloisRingElement> d;
        for (std::size_t i = 1; i < c_.size(); ++i)
            d.push_back(ctx_->mul_scalar(c_[i], BigInt(static_cast<long>(i))));
        if (d.empty()) d.push_back(ctx_->zero());
        return GRPoly(*ctx_, std::move(d));
    }

    int content_valuation() const {
        int best = ctx_->precision();
        for (auto& c : c_) best = std::min(best, ctx_->valuation(c));
        return best;
    }

    GRPoly divided_by_p_pow(int k) const {
        std::vector<GaloisRingElement> d;
        d.reserve(c_.size());
        for (auto& c : c_) d.push_back(ctx_->divide_exact(c, k));
        return GRPoly(*ctx_, std::move(d));
    }

    // g(t) = f(a + p t): Taylor shift by a, then scale t by p.
    GRPoly shifted_scaled(const GaloisRingElement& a) const {
        std::vector<GaloisRingElement> d = c_;
        const int deg = static_cast<int>(d.size()) - 1;
        for (int j = 0; j < deg; ++j)
            for (int i = deg - 1; i >= j; --i) d[i] = ctx_->add(d[i], ctx_->mul(d[i + 1], a));
        BigInt pk(1);
        for (int i = 1; i <= deg; ++i) {
            pk *= ctx_->p();
            d[i] = ctx_->mul_scalar(d[i], pk);
        }
        return GRPoly(*ctx_, std::move(d));
    }

    std::vector<GaloisRingContext::Residue> residue_coeffs() const {
        std::vector<GaloisRingContext::Residue> r;
        r.reserve(c_.size());
        for (auto& c : c_) r.push_back(ctx_->residue_of(c));
        return r;
    }

private:
    const GaloisRingContext* ctx_;
    std::vector<GaloisRingElement> c_;
};

inline GaloisRingContext::Residue residue_eval(const GaloisRingContext& ctx,
                                               const std::vector<GaloisRingContext::Residue>& f,
                                               const GaloisRingContext::Residue& x) {
    GaloisRingContext::Residue acc(ctx.n(), 0);
    for (auto it = f.rbegin(); it != f.rend(); ++it)
        acc = ctx.residue_add(ctx.residue_mul(acc, x), *it);
    return acc;
}

inline std::vector<GaloisRingContext::Residue> residue_derivative(
    const GaloisRingContext& ctx, const std::vector<GaloisRingContext::Residue>& f) {
    std::vector<GaloisRingContext::Residue> d;
    for (std::size_t i = 1; i < f.size(); ++i)
        d.push_back(ctx.residue_scale(f[i], static_cast<long>(i)));
    if (d.empty()) d.push_back(GaloisRingContext::Residue(ctx.n(), 0));
    return d;
}

// Newton refinement of a residue-simple root; nullopt if it fails to settle.
inline std::optional<GaloisRingElement> hensel_lift_root(const GaloisRingContext& ctx,
                                                         const GRPoly& h,
                                                         const GaloisRingElement& start) {
    GRPoly deriv = h.derivative();
    GaloisRingElement x = start;
    GaloisRingElement fx = h.eval(x);
    int guard = 2 * ctx.precision() + 8;
    while (!ctx.is_zero(fx)) {
        GaloisRingElement dfx = deriv.eval(x);
        if (ctx.valuation(dfx) != 0) return std::nullopt;
        x = ctx.sub(x, ctx.mul(fx, ctx.unit_inverse(dfx)));
        fx = h.eval(x);
        if (--guard < 0) return std::nullopt;
    }
    return x;
}

class RootCounter {
public:
    explicit RootCounter(const GaloisRingContext& ctx) : ctx_(ctx) {}

    RootCountResult count(const PadicPolynomial& f) const {
        if (static_cast<int>(f.coeffs.size()) != ctx_.n() + 1)
            throw std::invalid_argument("count_generating_roots: expected n+1 coefficients");
        return count_gr(GRPoly::from_scalars(ctx_, f.coeffs),
                        GRPoly::from_scalars(ctx_, reciprocal(f).coeffs));
    }

    // Ring-coefficient entry; rev carries the reciprocal when the outside
    // count is wanted (pass the polynomial's own reversal for scalar f).
    RootCountResult count_gr(const GRPoly& poly, const std::optional<GRPoly>& rev = std::nullopt) const {
        if (poly.content_valuation() >= ctx_.precision())
            throw std::invalid_argument("count_generating_roots: f is 0 mod p^M");

        RootCountResult res;
        std::vector<GaloisRingElement> roots;
        explore(poly, ctx_.zero(), 0, false, roots, res.inconclusive);
        for (auto& x : roots) {
            if (!verify_root(poly, x, res)) continue;
            if (ctx_.element_degree(x) != ctx_.n()) continue;
            ++res.count_ok;
            if (ctx_.valuation(x) >= 1) ++res.count_mk;
        }
        if (!rev) return res;

        // Roots in K \ O_K: x <-> 1/x, a root of the reversed polynomial in
        // the maximal ideal. Generation is preserved under inversion.
        std::vector<GaloisRingElement> mk_roots;
        explore(*rev, ctx_.zero(), 0, true, mk_roots, res.inconclusive);
        for (auto& x : mk_roots) {
            if (!verify_root(*rev, x, res)) continue;
            if (ctx_.element_degree(x) != ctx_.n()) continue;
            ++res.count_outside;
        }
        return res;
    }

private:
    // Collect the roots of poly congruent to base mod p^level. When
    // zero_residue_only is set, the first layer considers only the residue 0
    // branch (roots in the maximal ideal).
    void explore(const GRPoly& poly, const GaloisRingElement& base, int level,
                 bool zero_residue_only, std::vector<GaloisRingElement>& roots,
                 long& inconclusive) const {
        int c = poly.content_valuation();
        if (c >= ctx_.precision()) {
            ++inconclusive;  // no information left at this branch
            return;
        }
        GRPoly h = c > 0 ? poly.divided_by_p_pow(c) : poly;
        auto hbar = h.residue_coeffs();
        auto hbar_deriv = residue_derivative(ctx_, hbar);

        const long count = ctx_.residue_count();
        for (long idx = 0; idx < count; ++idx) {
            auto r = ctx_.residue_by_index(idx);
            if (zero_residue_only && !ctx_.residue_is_zero(r)) continue;
            if (!ctx_.residue_is_zero(residue_eval(ctx_, hbar, r))) continue;
            GaloisRingElement lift = ctx_.lift_residue(r);
            if (!ctx_.residue_is_zero(residue_eval(ctx_, hbar_deriv, r))) {
                auto root = hensel_lift_root(ctx_, h, lift);
                if (!root) {
                    ++inconclusive;
                    continue;
                }
                roots.push_back(compose(base, *root, level));
            } else {
                if (level + 1 > ctx_.precision() / 2) {
                    ++inconclusive;  // refinement budget exhausted
                    continue;
                }
                explore(h.shifted_scaled(lift), compose(base, lift, level), level + 1, false,
                        roots, inconclusive);
            }
        }
    }

    // base + p^level * t
    GaloisRingElement compose(const GaloisRingElement& base, const GaloisRingElement& t,
                              int level) const {
        if (level == 0) return t;
        return ctx_.add(base, ctx_.mul_scalar(t, ctx_.p_pow(level)));
    }

    // Counted roots must re-verify against the full polynomial at precision
    // close to M; anything short of the gate is precision loss, not a root.
    bool verify_root(const GRPoly& poly, const GaloisRingElement& x, RootCountResult& res) const {
        int gate = (3 * ctx_.precision() + 3) / 4;
        if (ctx_.valuation(poly.eval(x)) < gate) {
            ++res.inconclusive;
            return false;
        }
        return true;
    }

    const GaloisRingContext& ctx_;
};

inline RootCountResult count_generating_roots(const PadicPolynomial& f,
                                              const GaloisRingContext& ctx) {
    return RootCounter(ctx).count(f);
}

}  // namespace padicroots
