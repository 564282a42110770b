#pragma once

// The rational-function family D_n(u, v), its diagonal specialization
// D*_n(t) = (1/n) D_n(t, t^{-n/2}), the probability formulas for the
// unramified splitting type, and the symbolic identity checks. Three
// independent routes to D_n (recursion, chain form, subset form) act as
// mutual oracles; the recursion is the production path.

#include "padicroots/incidence.hpp"
#include "padicroots/numbers.hpp"
#include "padicroots/rational_function.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace padicroots {

struct ProbabilityTable {
    int n;
    BigInt p;
    BigRat rho, alpha, beta;
};

// theta(d, e; u) = sum over d | f | e of mu(e/f) u^{f - d}.
inline LaurentPoly theta_u(long d, long e) {
    LaurentPoly acc;
    for (long f : divisors(e))
        if (f % d == 0) {
            int m = mobius(e / f);
            if (m != 0) acc += LaurentPoly(Monomial(var("u"), f - d), BigRat(m));
        }
    return acc;
}

class DFamily {
public:
    DFamily() : u_(var("u")), v_(var("v")), t_(var("t")) {}

    // D_n by the defining recursion; memoized, safe for concurrent readers.
    RationalFunction d(int n) {
        if (n < 1) throw std::invalid_argument("d: n must be positive");
        {
            std::shared_lock lock(mu_);
            auto it = cache_.find(n);
            if (it != cache_.end()) return it->second;
        }
        RationalFunction value = compute(n);
        std::unique_lock lock(mu_);
        return cache_.emplace(n, std::move(value)).first->second;
    }

    // D*_n(t): substitute u -> s^2, v -> s^{-n} and halve exponents. Any odd
    // power of s surviving the denominator symmetrization is a fatal error.
    RationalFunction d_star(int n) {
        VarId s = var("s");
        std::map<VarId, LaurentPoly::MonomialImage> sub{
            {u_, {BigRat(1), Monomial(s, 2)}},
            {v_, {BigRat(1), Monomial(s, -static_cast<long>(n))}},
        };
        RationalFunction r = d(n).substitute_monomials(sub);
        LaurentPoly num = r.num();
        LaurentPoly den(1);
        for (auto& [f, e] : r.den_factors()) {
            LaurentPoly mirror = flip_sign(f, s);
            if (mirror == f) {
                den *= f.pow(static_cast<unsigned long>(e));
            } else {
                num *= mirror.pow(static_cast<unsigned long>(e));
                den *= (f * mirror).pow(static_cast<unsigned long>(e));
            }
        }
        return RationalFunction(halve(num, s).scaled(BigRat(1, n)), halve(den, s));
    }

    // Chain form: sum over proper chains 1 = d_0 < ... < d_k = n of
    // prod_i v^{n/d_{i+1}} theta(d_i, d_{i+1}; u) / (u^{n - d_i} v - v^{n/d_i}).
    RationalFunction d_chain_form(int n) {
        if (n < 1) throw std::invalid_argument("d_chain_form: n must be positive");
        if (n == 1) return RationalFunction(1);
        FinitePoset p = divisor_poset(n);
        RationalFunction acc;
        for (auto& chain : p.all_chains(1, n)) {
            RationalFunction term(1);
            for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
                long di = chain[i], dj = chain[i + 1];
                LaurentPoly num = LaurentPoly(Monomial(v_, n / dj), BigRat(1)) * theta_u(di, dj);
                LaurentPoly den = LaurentPoly(Monomial(u_, n - di) * Monomial(v_, 1), BigRat(1)) -
                                  LaurentPoly(Monomial(v_, n / di), BigRat(1));
                term *= RationalFunction(num, den);
            }
            acc += term;
        }
        return acc;
    }

    // Subset form: -v^{-n+1} / prod_{e|n, e != n} (r_e - 1) times the signed
    // sum over subsets Q containing 1 and n of Inv_Q theta(1, n; u) prod r_e,
    // with r_e = u^{n-e} v^{-n/e+1}.
    RationalFunction d_subset_form(int n) {
        if (n < 1) throw std::invalid_argument("d_subset_form: n must be positive");
        if (n == 1) return RationalFunction(1);
        FinitePoset p = divisor_poset(n);
        IncidenceElement<LaurentPoly> theta(p, [&](long a, long b) { return theta_u(a, b); });
        auto ds = p.elements();
        std::vector<long> interior(ds.begin() + 1, ds.end() - 1);
        auto r_mono = [&](long e) { return Monomial(u_, n - e) * Monomial(v_, -(n / e) + 1); };

        LaurentPoly sum;
        for (std::size_t mask = 0; mask < (std::size_t{1} << interior.size()); ++mask) {
            std::vector<long> q{1, n};
            Monomial outside;
            for (std::size_t i = 0; i < interior.size(); ++i) {
                if ((mask >> i) & 1)
                    q.push_back(interior[i]);
                else
                    outside = outside * r_mono(interior[i]);
            }
            LaurentPoly inv = restricted_inverse(theta, q, 1, n);
            LaurentPoly term = inv.shifted(outside);
            if (q.size() % 2 == 1) term = -term;
            sum += term;
        }
        RationalFunction result(sum.shifted(Monomial(v_, -(n - 1))).scaled(BigRat(-1)));
        for (long e : ds)
            if (e != n)
                result /= RationalFunction(LaurentPoly(r_mono(e), BigRat(1)) - LaurentPoly(1));
        return result;
    }

    // D_n(u^{-1}, v^{-1}) = v^{n-1} D_n(u, v), exactly.
    bool inversion_check(int n) {
        RationalFunction dn = d(n);
        std::map<VarId, LaurentPoly::MonomialImage> inv{
            {u_, {BigRat(1), Monomial(u_, -1)}},
            {v_, {BigRat(1), Monomial(v_, -1)}},
        };
        RationalFunction lhs = dn.substitute_monomials(inv);
        RationalFunction rhs = dn * RationalFunction(LaurentPoly(Monomial(v_, n - 1), BigRat(1)));
        return lhs == rhs;
    }

    // Functional equation of the associated local zeta function, stated on an
    // internal variable w with v = w^2 so odd n stays inside the Laurent ring:
    // D_n(u, w^{-n}) = w^{n(n-1)} D_n(u^{-1}, w^n), i.e. exponent C(n, 2) in v.
    bool igusa_functional_equation_check(int n) {
        VarId w = var("w");
        RationalFunction dn = d(n);
        std::map<VarId, LaurentPoly::MonomialImage> lhs_sub{
            {v_, {BigRat(1), Monomial(w, -static_cast<long>(n))}},
        };
        std::map<VarId, LaurentPoly::MonomialImage> rhs_sub{
            {u_, {BigRat(1), Monomial(u_, -1)}},
            {v_, {BigRat(1), Monomial(w, n)}},
        };
        RationalFunction lhs = dn.substitute_monomials(lhs_sub);
        RationalFunction rhs = dn.substitute_monomials(rhs_sub) *
                               RationalFunction(LaurentPoly(Monomial(w, static_cast<long>(n) * (n - 1)), BigRat(1)));
        return lhs == rhs;
    }

    // alpha = D*_n(p), beta = D*_n(1/p),
    // rho = (p-1)/(p^{n+1}-1) (p^n alpha + beta), all exact.
    ProbabilityTable probabilities(int n, const BigInt& p) {
        if (!is_prime(p)) throw std::invalid_argument("probabilities: p must be prime");
        RationalFunction ds = d_star(n);
        ProbabilityTable table;
        table.n = n;
        table.p = p;
        try {
            table.alpha = ds.eval({{t_, BigRat(p)}});
            table.beta = ds.eval({{t_, BigRat(1) / BigRat(p)}});
        } catch (const std::domain_error&) {
            throw std::logic_error("probabilities: D*_n has a pole at a prime argument");
        }
        BigRat pn = pow_rat(BigRat(p), n);
        table.rho = (BigRat(p) - 1) / (pn * p - 1) * (pn * table.alpha + table.beta);
        return table;
    }

private:
    RationalFunction compute(int n) {
        if (n == 1) return RationalFunction(1);
        RationalFunction acc;
        for (long dv : divisors(n)) {
            if (dv == 1) continue;
            std::map<VarId, LaurentPoly::MonomialImage> power_sub{
                {u_, {BigRat(1), Monomial(u_, dv)}},
            };
            RationalFunction child = d(static_cast<int>(n / dv)).substitute_monomials(power_sub);
            LaurentPoly weight = LaurentPoly(Monomial(v_, n / dv - 1), BigRat(1)) * theta_u(1, dv);
            acc += RationalFunction(weight) * child;
        }
        LaurentPoly den = LaurentPoly(Monomial(u_, n - 1), BigRat(1)) -
                          LaurentPoly(Monomial(v_, n - 1), BigRat(1));
        return acc / RationalFunction(den);
    }

    static LaurentPoly flip_sign(const LaurentPoly& f, VarId s) {
        LaurentPoly r;
        for (auto& [m, c] : f.terms()) {
            BigRat cc = (m.exponent(s) % 2 != 0) ? -c : c;
            r += LaurentPoly(m, cc);
        }
        return r;
    }

    // s^{2k} -> t^k; an odd exponent here means D*_n left the ring of
    // rational functions of t, which the construction rules out.
    LaurentPoly halve(const LaurentPoly& f, VarId s) const {
        LaurentPoly r;
        for (auto& [m, c] : f.terms()) {
            long e = 0;
            for (auto& [vv, ee] : m.powers) {
                if (vv != s) throw std::logic_error("d_star: unexpected variable after substitution");
                e = ee;
            }
            if (e % 2 != 0) throw std::logic_error("d_star: odd power of sqrt(t) survived");
            r += LaurentPoly(Monomial(t_, e / 2), c);
        }
        return r;
    }

    VarId u_, v_, t_;
    std::map<int, RationalFunction> cache_;
    std::shared_mutex mu_;
};

}  // namespace padicroots
