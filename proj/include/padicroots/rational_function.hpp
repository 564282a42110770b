#pragma once

// Quotients of Laurent polynomials. No GCD reduction: equality is decided by
// cross-multiplication, a/b = c/d iff a*d = c*b. Internally the denominator
// is a multiset of content-normalized factors so that sums take least common
// multiples instead of blind products; den() expands the product on demand.
// Light normalization only — removing a factor never changes the value.

#include "padicroots/laurent.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace padicroots {

class RationalFunction {
public:
    using Factors = std::vector<std::pair<LaurentPoly, long>>;

    RationalFunction() = default;
    RationalFunction(int c) : num_(c) {}
    RationalFunction(const BigInt& c) : num_(c) {}
    RationalFunction(const BigRat& c) : num_(c) {}
    RationalFunction(const LaurentPoly& p) : num_(p) {}

    RationalFunction(const LaurentPoly& num, const LaurentPoly& den) : num_(num) {
        if (den.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
        push_den_factor(den, 1);
        cancel();
    }

    const LaurentPoly& num() const { return num_; }
    const Factors& den_factors() const { return den_; }

    LaurentPoly den() const {
        LaurentPoly d(1);
        for (auto& [f, e] : den_)
            d *= f.pow(static_cast<unsigned long>(e));
        return d;
    }

    bool is_zero() const { return num_.is_zero(); }

    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        RationalFunction r;
        r.num_ = a.num_ * b.num_;
        r.den_ = merge_sum(a.den_, b.den_);
        r.cancel();
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        RationalFunction r;
        Factors lcm = merge_max(a.den_, b.den_);
        r.num_ = a.num_ * expand(diff(lcm, a.den_)) + b.num_ * expand(diff(lcm, b.den_));
        r.den_ = std::move(lcm);
        r.cancel();
        return r;
    }

    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }

    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        return a * b.reciprocal();
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    RationalFunction reciprocal() const {
        if (is_zero()) throw std::domain_error("RationalFunction: division by zero");
        RationalFunction r;
        r.num_ = expand(den_);
        r.push_den_factor(num_, 1);
        r.cancel();
        return r;
    }

    RationalFunction pow(long k) const {
        if (k == 0) return RationalFunction(1);
        if (k < 0) return reciprocal().pow(-k);
        RationalFunction r;
        r.num_ = num_.pow(static_cast<unsigned long>(k));
        for (auto& [f, e] : den_) r.den_.emplace_back(f, e * k);
        return r;
    }

    // a/b = c/d iff a*d = c*b; shared factors are cancelled first.
    bool operator==(const RationalFunction& o) const {
        Factors mine = den_, theirs = o.den_;
        cancel_common(mine, theirs);
        return num_ * expand(theirs) == o.num_ * expand(mine);
    }

    BigRat eval(const std::map<VarId, BigRat>& point) const {
        BigRat d(1);
        for (auto& [f, e] : den_) {
            BigRat fv = f.eval(point);
            if (fv == 0) throw std::domain_error("RationalFunction::eval: pole");
            d *= pow_rat(fv, e);
        }
        return num_.eval(point) / d;
    }

    // Per-variable scaled-monomial substitution (u -> u^2, v -> 3*w^-1, ...).
    RationalFunction substitute_monomials(const std::map<VarId, LaurentPoly::MonomialImage>& images) const {
        RationalFunction r;
        r.num_ = num_.substitute_monomials(images);
        for (auto& [f, e] : den_) {
            LaurentPoly g = f.substitute_monomials(images);
            if (g.is_zero()) throw std::domain_error("substitution produced zero denominator");
            r.push_den_factor_pow(g, e);
        }
        r.cancel();
        return r;
    }

    // General substitution, variable -> rational function.
    RationalFunction substitute(const std::map<VarId, RationalFunction>& images) const {
        RationalFunction result = substitute_poly(num_, images);
        for (auto& [f, e] : den_) {
            RationalFunction fi = substitute_poly(f, images);
            if (fi.is_zero()) throw std::domain_error("substitution produced zero denominator");
            result = result * fi.pow(-e);
        }
        return result;
    }

    // "num/den" with both sides scaled to coprime integer coefficients and a
    // positive leading denominator coefficient; stable for golden output.
    std::string to_string() const;

private:
    static RationalFunction substitute_poly(const LaurentPoly& p,
                                            const std::map<VarId, RationalFunction>& images) {
        RationalFunction acc;
        for (auto& [m, c] : p.terms()) {
            RationalFunction t{LaurentPoly(c)};
            for (auto& [v, e] : m.powers) {
                auto it = images.find(v);
                if (it == images.end())
                    throw std::invalid_argument("substitute: unassigned variable " +
                                                VarTable::instance().name(v));
                t = t * it->second.pow(e);
            }
            acc = acc + t;
        }
        return acc;
    }

    static LaurentPoly expand(const Factors& fs) {
        LaurentPoly r(1);
        for (auto& [f, e] : fs) r *= f.pow(static_cast<unsigned long>(e));
        return r;
    }

    static Factors merge_sum(const Factors& a, const Factors& b) {
        Factors r = a;
        for (auto& [f, e] : b) {
            auto it = std::find_if(r.begin(), r.end(), [&](auto& p) { return p.first == f; });
            if (it != r.end())
                it->second += e;
            else
                r.emplace_back(f, e);
        }
        return r;
    }

    static Factors merge_max(const Factors& a, const Factors& b) {
        Factors r = a;
        for (auto& [f, e] : b) {
            auto it = std::find_if(r.begin(), r.end(), [&](auto& p) { return p.first == f; });
            if (it != r.end())
                it->second = std::max(it->second, e);
            else
                r.emplace_back(f, e);
        }
        return r;
    }

    // lcm minus own factors: what the numerator must be multiplied by.
    static Factors diff(const Factors& lcm, const Factors& own) {
        Factors r;
        for (auto& [f, e] : lcm) {
            long o = 0;
            auto it = std::find_if(own.begin(), own.end(), [&](auto& p) { return p.first == f; });
            if (it != own.end()) o = it->second;
            if (e - o > 0) r.emplace_back(f, e - o);
        }
        return r;
    }

    static void cancel_common(Factors& a, Factors& b) {
        for (auto& [f, e] : a) {
            auto it = std::find_if(b.begin(), b.end(), [&](auto& p) { return p.first == f; });
            if (it != b.end()) {
                long c = std::min(e, it->second);
                e -= c;
                it->second -= c;
            }
        }
        auto drop = [](Factors& fs) {
            fs.erase(std::remove_if(fs.begin(), fs.end(), [](auto& p) { return p.second == 0; }),
                     fs.end());
        };
        drop(a);
        drop(b);
    }

    // Normalize f to its primitive part and fold the extracted scalar monomial
    // into the numerator, preserving the value of num_/den.
    void push_den_factor(const LaurentPoly& f, long mult) { push_den_factor_pow(f, mult); }

    void push_den_factor_pow(const LaurentPoly& f, long mult) {
        if (mult == 0) return;
        Monomial mc = f.monomial_content();
        LaurentPoly g = f.shifted(mc.inverse());
        BigRat c = g.content();
        g = g.scaled(BigRat(1) / c);
        if (!g.is_one()) {
            auto it = std::find_if(den_.begin(), den_.end(), [&](auto& p) { return p.first == g; });
            if (it != den_.end())
                it->second += mult;
            else
                den_.emplace_back(g, mult);
        }
        num_ = num_.shifted(mc.pow(-mult)).scaled(pow_rat(c, -mult));
    }

    // Divide exact den factors out of the numerator where possible and drop
    // a pure-monomial numerator's... nothing else: value is untouched.
    void cancel() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        for (auto& [f, e] : den_) {
            while (e > 0) {
                auto q = num_.divided_by(f);
                if (!q) break;
                num_ = std::move(*q);
                --e;
            }
        }
        den_.erase(std::remove_if(den_.begin(), den_.end(), [](auto& p) { return p.second == 0; }),
                   den_.end());
        std::sort(den_.begin(), den_.end(), [](auto& a, auto& b) {
            if (a.first.terms() != b.first.terms()) return a.first.terms() < b.first.terms();
            return a.second < b.second;
        });
    }

    LaurentPoly num_;
    Factors den_;
};

inline std::string RationalFunction::to_string() const {
    LaurentPoly n = num_, d = den();
    if (n.is_zero()) return "0";
    BigRat cn = n.content(), cd = d.content();
    // scale both by the same unit so den has integral coprime coefficients,
    // positive leading, and num picks up the rest
    LaurentPoly dn = d.scaled(BigRat(1) / cd);
    LaurentPoly nn = n.scaled(BigRat(1) / cd);
    // clear remaining rational content denominators jointly
    BigInt lcm(1);
    for (auto& [m, c] : nn.terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    for (auto& [m, c] : dn.terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    BigInt gcd(0);
    auto gather = [&](const LaurentPoly& p) {
        for (auto& [m, c] : p.terms()) {
            BigInt scaled = c.get_num() * (lcm / c.get_den());
            mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), scaled.get_mpz_t());
        }
    };
    gather(nn);
    gather(dn);
    BigRat scale(lcm, gcd);
    scale.canonicalize();
    nn = nn.scaled(scale);
    dn = dn.scaled(scale);
    if (dn.is_one()) return nn.to_string();
    return "(" + nn.to_string() + ")/(" + dn.to_string() + ")";
}

}  // namespace padicroots
