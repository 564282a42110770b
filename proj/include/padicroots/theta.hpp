#pragma once

// The theta polynomial theta(x, y) = sum_{x <= z <= y} mu(z, y) t_z / t_x,
// admissible monomials, the closed form for coefficients of Inv_Q theta, and
// the inversion identity between complementing subposets.

#include "padicroots/incidence.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace padicroots {

inline VarId theta_var(long label) { return var("t" + std::to_string(label)); }

inline LaurentPoly theta_poly(const FinitePoset& p, const IncidenceElement<BigRat>& mu,
                              long x, long y) {
    if (!p.leq(x, y)) throw std::invalid_argument("theta: x must be <= y");
    LaurentPoly acc;
    Monomial tx_inv(theta_var(x), -1);
    for (long z : p.interval(x, y)) {
        BigRat c = mu.value(z, y);
        if (c != 0) acc += LaurentPoly(Monomial(theta_var(z), 1) * tx_inv, c);
    }
    return acc;
}

inline IncidenceElement<LaurentPoly> theta_element(const FinitePoset& p) {
    auto mu = mobius_element(p);
    return IncidenceElement<LaurentPoly>(p, [&](long x, long y) { return theta_poly(p, mu, x, y); });
}

inline LaurentPoly theta_restricted_inverse(const FinitePoset& p, const std::vector<long>& q,
                                            long x, long y) {
    auto theta = theta_element(p);
    return restricted_inverse(theta, q, x, y);
}

// Reduced interleaved representation of a Q-admissible monomial:
// m = prod t_{w_i}/t_{z_i} with z_i in Q and z_1 <= w_1 <= ... <= z_k <= w_k <= y,
// everything inside [x, y]_P.
struct AdmissibleForm {
    std::vector<long> z, w;  // both of size k; k = 0 for m = 1
};

inline std::optional<AdmissibleForm> admissible_form(const Monomial& m, const FinitePoset& p,
                                                     const std::vector<long>& q, long x, long y) {
    auto interval = p.interval(x, y);
    auto in = [](const std::vector<long>& s, long v) {
        return std::find(s.begin(), s.end(), v) != s.end();
    };
    std::vector<long> zs, ws;
    for (auto& [v, e] : m.powers) {
        // map the variable back to a poset label
        long label = -1;
        for (long candidate : p.elements())
            if (theta_var(candidate) == v) {
                label = candidate;
                break;
            }
        if (label < 0 || !in(interval, label)) return std::nullopt;
        if (e == 1) {
            ws.push_back(label);
        } else if (e == -1) {
            if (!in(q, label)) return std::nullopt;
            zs.push_back(label);
        } else {
            return std::nullopt;  // reduced forms carry only unit exponents
        }
    }
    if (zs.size() != ws.size()) return std::nullopt;
    // Each side must be a chain; sort by the (total on a chain) poset order.
    auto chain_sort = [&](std::vector<long>& v) {
        for (long a : v)
            for (long b : v)
                if (!p.leq(a, b) && !p.leq(b, a)) return false;
        std::sort(v.begin(), v.end(), [&](long a, long b) { return p.less(a, b); });
        return true;
    };
    if (!chain_sort(zs) || !chain_sort(ws)) return std::nullopt;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (!p.leq(zs[i], ws[i])) return std::nullopt;
        if (i + 1 < zs.size() && !p.leq(ws[i], zs[i + 1])) return std::nullopt;
    }
    if (!ws.empty() && !p.leq(ws.back(), y)) return std::nullopt;
    return AdmissibleForm{std::move(zs), std::move(ws)};
}

// Closed form for the coefficient of m in Inv_Q theta(x, y):
//   Inv_Q mu(x, z_1) * prod_i mu_{Q_i}(z_i, w_i) * Gamma_Q(w_i, z_{i+1}),
// with z_{k+1} = y and Q_i = Q + {w_i}; zero for non-admissible m.
inline BigRat theta_inverse_coefficient(const FinitePoset& p, const std::vector<long>& q,
                                        long x, long y, const Monomial& m) {
    auto in = [](const std::vector<long>& s, long v) {
        return std::find(s.begin(), s.end(), v) != s.end();
    };
    if (!in(q, x) || !in(q, y))
        throw std::invalid_argument("theta_inverse_coefficient: endpoints must lie in Q");
    auto form = admissible_form(m, p, q, x, y);
    if (!form) return BigRat(0);
    auto mu = mobius_element(p);
    auto zeta = IncidenceElement<BigRat>::zeta(p);
    const std::size_t k = form->z.size();
    long z1 = k == 0 ? y : form->z[0];
    BigRat acc = restricted_inverse(mu, q, x, z1);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<long> qi = q;
        if (!in(qi, form->w[i])) qi.push_back(form->w[i]);
        acc *= restricted_inverse(zeta, qi, form->z[i], form->w[i]);  // mu_{Q_i}(z_i, w_i)
        long z_next = i + 1 < k ? form->z[i + 1] : y;
        acc *= gamma_q(p, mu, q, form->w[i], z_next);
        if (acc == 0) break;
    }
    return acc;
}

// Every [x,y]_Q-admissible monomial: all reduced interleaved sequences
// z_1 <= w_1 <= ... <= z_k <= w_k <= y drawn from the interval.
inline std::vector<Monomial> all_admissible_monomials(const FinitePoset& p,
                                                      const std::vector<long>& q, long x, long y) {
    auto interval = p.interval(x, y);
    std::vector<long> qi;  // Q restricted to the interval
    for (long z : interval)
        if (std::find(q.begin(), q.end(), z) != q.end()) qi.push_back(z);

    std::set<Monomial> seen{Monomial()};
    Monomial acc;
    // depth-first over interleaved (z, w) pairs; telescoping products repeat
    // monomials, hence the set
    auto rec = [&](auto&& self, long prev) -> void {
        for (long z : qi) {
            if (!p.leq(prev, z)) continue;
            for (long w : interval) {
                if (!p.leq(z, w) || z == w || !p.leq(w, y)) continue;
                Monomial saved = acc;
                acc = acc * Monomial(theta_var(w), 1) * Monomial(theta_var(z), -1);
                seen.insert(acc);
                self(self, w);
                acc = saved;
            }
        }
    };
    rec(rec, x);
    return std::vector<Monomial>(seen.begin(), seen.end());
}

// Lemma check: Inv_Q theta(x, y; t) = -(t_y/t_x) * Inv_{Q'} theta(x, y; t^{-1})
// for complementing (Q, Q'), plus the per-monomial closed-form comparison.
inline bool theta_inversion_check(const FinitePoset& p, const SubposetPair& pair) {
    validate_complementing(p, pair);
    LaurentPoly lhs = theta_restricted_inverse(p, pair.q, pair.x, pair.y);
    LaurentPoly other = theta_restricted_inverse(p, pair.qc, pair.x, pair.y);
    Monomial flip = Monomial(theta_var(pair.y), 1) * Monomial(theta_var(pair.x), -1);
    LaurentPoly rhs;
    for (auto& [m, c] : other.terms()) rhs += LaurentPoly(m.inverse() * flip, -c);
    if (!(lhs == rhs)) return false;

    // Coefficient route: every monomial of Inv_Q theta must be admissible with
    // the closed-form value, and must match its mirrored coefficient.
    for (auto& [m, c] : lhs.terms()) {
        if (!admissible_form(m, p, pair.q, pair.x, pair.y)) return false;
        if (theta_inverse_coefficient(p, pair.q, pair.x, pair.y, m) != c) return false;
        Monomial mirrored = m.inverse() * flip;
        if (theta_inverse_coefficient(p, pair.qc, pair.x, pair.y, mirrored) != -c) return false;
    }
    return true;
}

}  // namespace padicroots
