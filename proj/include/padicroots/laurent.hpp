#pragma once

// Sparse multivariate Laurent polynomials over arbitrary-precision rationals.
//
// Variables are interned process-wide; a monomial is a sorted vector of
// (variable, nonzero signed exponent) pairs. Polynomials store only nonzero
// terms, so two polynomials over the same variables are equal iff their term
// maps are equal. Values are immutable after construction apart from the
// usual value-semantics copying.

#include "padicroots/numbers.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace padicroots {

using VarId = std::uint32_t;

class VarTable {
public:
    static VarTable& instance() {
        static VarTable t;
        return t;
    }

    VarId intern(const std::string& name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    std::string name(VarId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.at(id);
    }

private:
    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> ids_;
};

inline VarId var(const std::string& name) { return VarTable::instance().intern(name); }

// Product of variable powers; exponents are nonzero signed integers and the
// pair list is kept sorted by variable id.
struct Monomial {
    std::vector<std::pair<VarId, long>> powers;

    Monomial() = default;
    Monomial(VarId v, long e) {
        if (e != 0) powers.emplace_back(v, e);
    }

    bool is_one() const { return powers.empty(); }

    long degree() const {
        long d = 0;
        for (auto& [v, e] : powers) d += e;
        return d;
    }

    long exponent(VarId v) const {
        for (auto& [w, e] : powers)
            if (w == v) return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.powers.reserve(powers.size() + o.powers.size());
        std::size_t i = 0, j = 0;
        while (i < powers.size() && j < o.powers.size()) {
            if (powers[i].first < o.powers[j].first) {
                r.powers.push_back(powers[i++]);
            } else if (powers[i].first > o.powers[j].first) {
                r.powers.push_back(o.powers[j++]);
            } else {
                long e = powers[i].second + o.powers[j].second;
                if (e != 0) r.powers.emplace_back(powers[i].first, e);
                ++i, ++j;
            }
        }
        for (; i < powers.size(); ++i) r.powers.push_back(powers[i]);
        for (; j < o.powers.size(); ++j) r.powers.push_back(o.powers[j]);
        return r;
    }

    Monomial inverse() const {
        Monomial r = *this;
        for (auto& [v, e] : r.powers) e = -e;
        return r;
    }

    Monomial pow(long k) const {
        Monomial r = *this;
        if (k == 0) return Monomial();
        for (auto& [v, e] : r.powers) e *= k;
        return r;
    }

    auto operator<=>(const Monomial&) const = default;
};

// Graded order: total degree first, then exponents variable-by-variable.
// Translation-invariant, which is what the division routine needs.
inline bool grlex_less(const Monomial& a, const Monomial& b) {
    long da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        if (a.powers[i].first != b.powers[j].first) {
            // The side owning the smaller variable id has a nonzero exponent there.
            if (a.powers[i].first < b.powers[j].first) return a.powers[i].second < 0;
            return b.powers[j].second > 0;
        }
        if (a.powers[i].second != b.powers[j].second)
            return a.powers[i].second < b.powers[j].second;
        ++i, ++j;
    }
    if (i < a.powers.size()) return a.powers[i].second < 0;
    if (j < b.powers.size()) return b.powers[j].second > 0;
    return false;
}

class LaurentPoly {
public:
    using TermMap = std::map<Monomial, BigRat>;

    LaurentPoly() = default;
    LaurentPoly(int c) { insert(Monomial(), BigRat(c)); }
    LaurentPoly(const BigInt& c) { insert(Monomial(), BigRat(c)); }
    LaurentPoly(const BigRat& c) { insert(Monomial(), c); }
    LaurentPoly(const Monomial& m, const BigRat& c) { insert(m, c); }

    static LaurentPoly variable(VarId v, long e = 1) { return LaurentPoly(Monomial(v, e), BigRat(1)); }
    static LaurentPoly variable(const std::string& name, long e = 1) { return variable(var(name), e); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    bool is_monomial() const { return terms_.size() == 1; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second == 1;
    }

    BigRat coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? BigRat(0) : it->second;
    }

    std::set<VarId> variables() const {
        std::set<VarId> vs;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.powers) vs.insert(v);
        return vs;
    }

    LaurentPoly operator-() const {
        LaurentPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (auto& [m, c] : o.terms_) insert(m, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (auto& [m, c] : o.terms_) insert(m, -c);
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (auto& [ma, ca] : a.terms_) {
            for (auto& [mb, cb] : b.terms_) r.insert(ma * mb, ca * cb);
        }
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    LaurentPoly scaled(const BigRat& c) const {
        if (c == 0) return LaurentPoly();
        LaurentPoly r = *this;
        for (auto& [m, v] : r.terms_) v *= c;
        return r;
    }

    LaurentPoly shifted(const Monomial& m) const {
        LaurentPoly r;
        for (auto& [mm, c] : terms_) r.terms_.emplace(mm * m, c);
        return r;
    }

    LaurentPoly pow(unsigned long k) const {
        LaurentPoly acc(1), b = *this;
        while (k) {
            if (k & 1) acc *= b;
            if (k >>= 1) b *= b;
        }
        return acc;
    }

    bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }

    // Exact evaluation; a negative exponent at a zero coordinate is a pole.
    BigRat eval(const std::map<VarId, BigRat>& point) const {
        BigRat acc(0);
        for (auto& [m, c] : terms_) {
            BigRat t = c;
            for (auto& [v, e] : m.powers) {
                auto it = point.find(v);
                if (it == point.end())
                    throw std::invalid_argument("LaurentPoly::eval: unassigned variable " +
                                                VarTable::instance().name(v));
                t *= pow_rat(it->second, e);
            }
            acc += t;
        }
        return acc;
    }

    // Substitution of a scaled monomial per variable (exact, stays in the ring).
    // Variables without an entry are left alone.
    struct MonomialImage {
        BigRat coeff{1};
        Monomial mono;
    };
    LaurentPoly substitute_monomials(const std::map<VarId, MonomialImage>& images) const {
        LaurentPoly r;
        for (auto& [m, c] : terms_) {
            BigRat coeff = c;
            Monomial mono;
            for (auto& [v, e] : m.powers) {
                auto it = images.find(v);
                if (it == images.end()) {
                    mono = mono * Monomial(v, e);
                } else {
                    coeff *= pow_rat(it->second.coeff, e);
                    mono = mono * it->second.mono.pow(e);
                }
            }
            r.insert(mono, coeff);
        }
        return r;
    }

    // Rebuild with every monomial transformed (used e.g. to halve exponents).
    LaurentPoly map_monomials(const auto& fn) const {
        LaurentPoly r;
        for (auto& [m, c] : terms_) r.insert(fn(m), c);
        return r;
    }

    // gcd of numerators over lcm of denominators, sign of the grlex-leading term.
    BigRat content() const {
        if (terms_.empty()) return BigRat(0);
        BigInt num(0), den(1);
        for (auto& [m, c] : terms_) {
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
        }
        BigRat r(num, den);
        r.canonicalize();
        if (leading_term().second < 0) r = -r;
        return r;
    }

    // Componentwise minimum exponent; dividing by it lands min exponents at 0.
    Monomial monomial_content() const {
        if (terms_.empty()) return Monomial();
        std::map<VarId, long> mins;
        bool first = true;
        for (auto& [m, c] : terms_) {
            std::map<VarId, long> exps;
            for (auto& [v, e] : m.powers) exps[v] = e;
            if (first) {
                mins = exps;
                first = false;
            } else {
                for (auto it = mins.begin(); it != mins.end();) {
                    auto jt = exps.find(it->first);
                    long other = jt == exps.end() ? 0 : jt->second;
                    it->second = std::min(it->second, other);
                    ++it;
                }
                for (auto& [v, e] : exps)
                    if (!mins.count(v)) mins[v] = std::min(0L, e);
            }
        }
        Monomial m;
        for (auto& [v, e] : mins)
            if (e != 0) m.powers.emplace_back(v, e);
        return m;
    }

    std::pair<Monomial, BigRat> leading_term() const {
        if (terms_.empty()) throw std::domain_error("leading_term of zero polynomial");
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (grlex_less(best->first, it->first)) best = it;
        return {best->first, best->second};
    }

    // Exact division test. Returns the quotient when divisor | *this, else nullopt.
    std::optional<LaurentPoly> divided_by(const LaurentPoly& divisor) const {
        if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
        if (is_zero()) return LaurentPoly();
        // Shift both to ordinary polynomials so grlex is a well-order.
        Monomial sn = monomial_content(), sd = divisor.monomial_content();
        LaurentPoly n = shifted(sn.inverse());
        LaurentPoly d = divisor.shifted(sd.inverse());
        auto [dlm, dlc] = d.leading_term();
        LaurentPoly q;
        while (!n.is_zero()) {
            auto [nlm, nlc] = n.leading_term();
            Monomial qm = nlm * dlm.inverse();
            for (auto& [v, e] : qm.powers)
                if (e < 0) return std::nullopt;
            BigRat qc = nlc / dlc;
            LaurentPoly step(qm, qc);
            q += step;
            n -= step * d;
        }
        return q.shifted(sn * sd.inverse());
    }

    std::string to_string() const;

private:
    void insert(const Monomial& m, const BigRat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    TermMap terms_;
};

// Rendering uses graded lexicographic order, earliest-interned variable first,
// largest term leading, so printed forms are stable across runs.
inline std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Monomial, BigRat>*> order;
    order.reserve(terms_.size());
    for (auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
        long da = a->first.degree(), db = b->first.degree();
        if (da != db) return da > db;
        return a->first.powers < b->first.powers;
    });
    std::ostringstream out;
    bool first = true;
    for (auto* t : order) {
        const auto& [m, c] = *t;
        BigRat a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool unit = (a == 1);
        if (!unit || m.is_one()) out << rat_to_string(a);
        bool lead = unit && !m.is_one();
        for (auto& [v, e] : m.powers) {
            if (!lead) out << "*";
            lead = false;
            out << VarTable::instance().name(v);
            if (e != 1) out << "^" << e;
        }
    }
    return out.str();
}

}  // namespace padicroots
