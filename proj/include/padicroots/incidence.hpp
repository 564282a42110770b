#pragma once

// Incidence algebras over a finite poset: convolution, delta/zeta, inverses
// (recursive and chain-sum forms), restriction to subposets, the Möbius
// function, and the Gamma function on pairs (P x Q).

#include "padicroots/laurent.hpp"
#include "padicroots/poset.hpp"
#include "padicroots/rational_function.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace padicroots {

template <typename C>
struct coeff_ops {
    static C one() { return C(1); }
    static bool is_one(const C& c) { return c == C(1); }
    static C invert(const C& c);
};

template <>
inline BigRat coeff_ops<BigRat>::invert(const BigRat& c) {
    if (c == 0) throw std::domain_error("incidence: diagonal value 0 is not invertible");
    return BigRat(1) / c;
}

// Units of the Laurent ring are the scaled monomials.
template <>
inline LaurentPoly coeff_ops<LaurentPoly>::invert(const LaurentPoly& c) {
    if (!c.is_monomial())
        throw std::domain_error("incidence: diagonal value is not a unit of the Laurent ring");
    auto& [m, a] = *c.terms().begin();
    return LaurentPoly(m.inverse(), BigRat(1) / a);
}

template <>
inline RationalFunction coeff_ops<RationalFunction>::invert(const RationalFunction& c) {
    return c.reciprocal();
}

// A coefficient-valued function on the ordered pairs of a poset; value is
// conceptually zero off the order relation. Values are filled eagerly for
// explicit elements; inversion memoizes per pair.
template <typename C>
class IncidenceElement {
public:
    IncidenceElement(const FinitePoset& poset, const std::function<C(long, long)>& fn)
        : poset_(&poset) {
        const int n = static_cast<int>(poset.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (poset.leq_idx(i, j)) {
                    C v = fn(poset.label(i), poset.label(j));
                    if (!(v == C())) vals_.emplace(std::make_pair(i, j), std::move(v));
                }
    }

    static IncidenceElement delta(const FinitePoset& p) {
        return IncidenceElement(p, [](long x, long y) { return x == y ? C(1) : C(); });
    }
    static IncidenceElement zeta(const FinitePoset& p) {
        return IncidenceElement(p, [](long, long) { return C(1); });
    }

    const FinitePoset& poset() const { return *poset_; }

    C value(long x, long y) const { return value_idx(poset_->index(x), poset_->index(y)); }

    C value_idx(int i, int j) const {
        auto it = vals_.find({i, j});
        return it == vals_.end() ? C() : it->second;
    }

    bool operator==(const IncidenceElement& o) const {
        if (poset_ != o.poset_) return false;
        const int n = static_cast<int>(poset_->size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (poset_->leq_idx(i, j) && !(value_idx(i, j) == o.value_idx(i, j))) return false;
        return true;
    }

    IncidenceElement convolve(const IncidenceElement& o) const {
        if (poset_ != o.poset_)
            throw std::invalid_argument("convolve: elements live on different posets");
        const FinitePoset& p = *poset_;
        return IncidenceElement(p, [&](long x, long y) {
            int i = p.index(x), j = p.index(y);
            C acc{};
            for (int z = 0; z < static_cast<int>(p.size()); ++z)
                if (p.leq_idx(i, z) && p.leq_idx(z, j))
                    acc = acc + value_idx(i, z) * o.value_idx(z, j);
            return acc;
        });
    }

    bool has_unit_diagonal() const {
        for (int i = 0; i < static_cast<int>(poset_->size()); ++i)
            if (!coeff_ops<C>::is_one(value_idx(i, i))) return false;
        return true;
    }

    // Two-sided inverse by the diagonal recursion; requires every diagonal
    // value to be invertible in the coefficient ring.
    IncidenceElement inverse() const;

    // Alternating chain-sum form; requires a unit diagonal.
    IncidenceElement inverse_via_chains() const {
        if (!has_unit_diagonal())
            throw std::domain_error("inverse_via_chains: diagonal must be identically 1");
        const FinitePoset& p = *poset_;
        return IncidenceElement(p, [&](long x, long y) {
            C acc{};
            for (auto& chain : p.all_chains(x, y)) {
                C prod = coeff_ops<C>::one();
                for (std::size_t i = 0; i + 1 < chain.size(); ++i)
                    prod = prod * value(chain[i], chain[i + 1]);
                if ((chain.size() - 1) % 2 == 1) prod = C() - prod;
                acc = acc + prod;
            }
            return acc;
        });
    }

private:
    const FinitePoset* poset_;
    std::map<std::pair<int, int>, C> vals_;
};

// Inv_Q e: the inverse of e restricted to the subposet on Q, evaluated
// lazily with memoization. Q is a set of element labels.
template <typename C>
class SubposetInverter {
public:
    SubposetInverter(const IncidenceElement<C>& e, const std::vector<long>& q_labels)
        : e_(&e), poset_(&e.poset()) {
        for (long x : q_labels) q_.push_back(poset_->index(x));
        std::sort(q_.begin(), q_.end());
        q_.erase(std::unique(q_.begin(), q_.end()), q_.end());
    }

    bool in_q(long x) const {
        int i = poset_->index(x);
        return std::binary_search(q_.begin(), q_.end(), i);
    }

    C value(long x, long y) {
        if (!in_q(x) || !in_q(y))
            throw std::invalid_argument("restricted inverse: endpoint outside the subposet");
        return value_idx(poset_->index(x), poset_->index(y));
    }

private:
    C value_idx(int i, int j) {
        if (!poset_->leq_idx(i, j)) return C();
        auto key = std::make_pair(i, j);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        C result;
        if (i == j) {
            result = coeff_ops<C>::invert(e_->value_idx(i, i));
        } else {
            C acc{};
            for (int z : q_)
                if (z != i && poset_->leq_idx(i, z) && poset_->leq_idx(z, j))
                    acc = acc + e_->value_idx(i, z) * value_idx(z, j);
            result = C() - coeff_ops<C>::invert(e_->value_idx(i, i)) * acc;
        }
        memo_.emplace(key, result);
        return memo_.at(key);
    }

    const IncidenceElement<C>* e_;
    const FinitePoset* poset_;
    std::vector<int> q_;
    std::map<std::pair<int, int>, C> memo_;
};

template <typename C>
IncidenceElement<C> IncidenceElement<C>::inverse() const {
    SubposetInverter<C> inv(*this, poset_->elements());
    const FinitePoset& p = *poset_;
    return IncidenceElement<C>(p, [&](long x, long y) { return inv.value(x, y); });
}

template <typename C>
C restricted_inverse(const IncidenceElement<C>& e, const std::vector<long>& q, long x, long y) {
    SubposetInverter<C> inv(e, q);
    return inv.value(x, y);
}

// Möbius function of P (inverse of zeta).
inline IncidenceElement<BigRat> mobius_element(const FinitePoset& p) {
    return IncidenceElement<BigRat>::zeta(p).inverse();
}

// mu_Q(x, y), the Möbius function of the subposet on Q.
inline BigRat mobius_subposet(const FinitePoset& p, const std::vector<long>& q, long x, long y) {
    return restricted_inverse(IncidenceElement<BigRat>::zeta(p), q, x, y);
}

// Gamma_Q(x, y) = sum over z in Q, x <= z <= y, of mu(x, z) * Inv_Q mu(z, y).
// Defined for y in Q and any x in P.
inline BigRat gamma_q(const FinitePoset& p, const IncidenceElement<BigRat>& mu,
                      const std::vector<long>& q, long x, long y) {
    if (std::find(q.begin(), q.end(), y) == q.end())
        throw std::invalid_argument("gamma_q: y must lie in Q");
    SubposetInverter<BigRat> inv_mu(mu, q);
    BigRat acc(0);
    for (long z : q)
        if (p.leq(x, z) && p.leq(z, y)) acc += mu.value(x, z) * inv_mu.value(z, y);
    return acc;
}

// The three-case closed form of Gamma_Q.
inline BigRat gamma_q_closed_form(const FinitePoset& p, const IncidenceElement<BigRat>& mu,
                                  std::vector<long> q, long x, long y) {
    bool x_in_q = std::find(q.begin(), q.end(), x) != q.end();
    if (!x_in_q) {
        if (!p.leq(x, y)) return BigRat(0);
        q.push_back(x);
        return -restricted_inverse(mu, q, x, y);
    }
    return x == y ? BigRat(1) : BigRat(0);
}

// Subposets Q, Qc complement the interval [x,y]_P: both contain x and y, and
// each strictly interior element lies in exactly one of them.
struct SubposetPair {
    std::vector<long> q, qc;
    long x, y;
};

inline void validate_complementing(const FinitePoset& p, const SubposetPair& pair) {
    auto has = [](const std::vector<long>& s, long v) {
        return std::find(s.begin(), s.end(), v) != s.end();
    };
    if (!has(pair.q, pair.x) || !has(pair.q, pair.y) || !has(pair.qc, pair.x) || !has(pair.qc, pair.y))
        throw std::invalid_argument("complementing pair: endpoints must lie in both subsets");
    for (long z : p.interval(pair.x, pair.y)) {
        if (z == pair.x || z == pair.y) continue;
        if (has(pair.q, z) == has(pair.qc, z))
            throw std::invalid_argument("complementing pair: interior element not split");
    }
}

// All pairs (Q, Q') complementing [x,y]_P; 2^(interior size) of them.
inline std::vector<SubposetPair> complementing_pairs(const FinitePoset& p, long x, long y) {
    std::vector<long> interior;
    for (long z : p.interval(x, y))
        if (z != x && z != y) interior.push_back(z);
    if (interior.size() > 14)
        throw std::invalid_argument("complementing_pairs: interval too large to enumerate");
    std::vector<SubposetPair> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << interior.size()); ++mask) {
        SubposetPair pair;
        pair.x = x;
        pair.y = y;
        pair.q = {x, y};
        pair.qc = {x, y};
        for (std::size_t i = 0; i < interior.size(); ++i)
            ((mask >> i) & 1 ? pair.q : pair.qc).push_back(interior[i]);
        out.push_back(std::move(pair));
    }
    return out;
}

// Lemma check: Inv_Q mu(x, y) = -mu_{Q'}(x, y) for a complementing pair.
inline bool mobius_completion_check(const FinitePoset& p, const SubposetPair& pair) {
    validate_complementing(p, pair);
    auto mu = mobius_element(p);
    BigRat lhs = restricted_inverse(mu, pair.q, pair.x, pair.y);
    BigRat rhs = -mobius_subposet(p, pair.qc, pair.x, pair.y);
    return lhs == rhs;
}

}  // namespace padicroots
