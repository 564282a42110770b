#pragma once

// Finite-precision arithmetic in the degree-n unramified extension of Z_p:
// the ring Z_p[X]/(modulus, p^M) with a deterministically chosen monic
// modulus, irreducible mod p. Supplies Frobenius, element degrees, element
// discriminants and the phi function. Contexts are immutable and shared by
// pointer; elements are plain values.

#include "padicroots/numbers.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace padicroots {

class GaloisRingContext;

class GaloisRingElement {
public:
    GaloisRingElement() : ctx_(nullptr) {}
    GaloisRingElement(const GaloisRingContext* ctx, std::vector<BigInt> coeffs)
        : ctx_(ctx), c_(std::move(coeffs)) {}

    const std::vector<BigInt>& coeffs() const { return c_; }
    const GaloisRingContext& ctx() const { return *ctx_; }

    bool operator==(const GaloisRingElement& o) const { return c_ == o.c_; }

private:
    friend class GaloisRingContext;
    const GaloisRingContext* ctx_;
    std::vector<BigInt> c_;  // canonical, 0 <= c_i < p^M
};

class GaloisRingContext {
public:
    GaloisRingContext(const BigInt& p, int n, int M) : p_(p), n_(n), M_(M) {
        if (!is_prime(p)) throw std::invalid_argument("GaloisRingContext: p must be prime");
        if (n < 1) throw std::invalid_argument("GaloisRingContext: n must be >= 1");
        if (M < 4) throw std::invalid_argument("GaloisRingContext: M must be >= 4");
        ppow_.resize(static_cast<std::size_t>(M) + 1);
        ppow_[0] = 1;
        for (int i = 1; i <= M; ++i) ppow_[i] = ppow_[i - 1] * p_;
        pl_ = p_.get_si();
        choose_modulus();
        build_frobenius();
    }

    GaloisRingContext(const GaloisRingContext&) = delete;
    GaloisRingContext& operator=(const GaloisRingContext&) = delete;

    const BigInt& p() const { return p_; }
    int n() const { return n_; }
    int precision() const { return M_; }
    const BigInt& p_pow(int k) const { return ppow_.at(static_cast<std::size_t>(k)); }
    const BigInt& modulus_mod_pM() const { return ppow_.back(); }
    const std::vector<BigInt>& modulus() const { return mod_; }

    // --- element construction -------------------------------------------

    GaloisRingElement zero() const { return element(std::vector<BigInt>(n_, 0)); }
    GaloisRingElement one() const { return from_int(1); }

    GaloisRingElement from_int(const BigInt& c) const {
        std::vector<BigInt> v(n_, 0);
        v[0] = c;
        return element(std::move(v));
    }

    GaloisRingElement generator() const {
        std::vector<BigInt> v(n_, 0);
        if (n_ > 1) v[1] = 1;
        return element(std::move(v));
    }

    GaloisRingElement element(std::vector<BigInt> coeffs) const {
        if (static_cast<int>(coeffs.size()) != n_)
            throw std::invalid_argument("GaloisRingElement: wrong coefficient count");
        for (auto& c : coeffs) reduce(c);
        return GaloisRingElement(this, std::move(coeffs));
    }

    // --- ring operations --------------------------------------------------

    GaloisRingElement add(const GaloisRingElement& a, const GaloisRingElement& b) const {
        std::vector<BigInt> r(n_);
        for (int i = 0; i < n_; ++i) {
            r[i] = a.c_[i] + b.c_[i];
            if (r[i] >= ppow_.back()) r[i] -= ppow_.back();
        }
        return GaloisRingElement(this, std::move(r));
    }

    GaloisRingElement sub(const GaloisRingElement& a, const GaloisRingElement& b) const {
        std::vector<BigInt> r(n_);
        for (int i = 0; i < n_; ++i) {
            r[i] = a.c_[i] - b.c_[i];
            if (r[i] < 0) r[i] += ppow_.back();
        }
        return GaloisRingElement(this, std::move(r));
    }

    GaloisRingElement neg(const GaloisRingElement& a) const { return sub(zero(), a); }

    GaloisRingElement mul(const GaloisRingElement& a, const GaloisRingElement& b) const {
        std::vector<BigInt> prod(2 * n_ - 1);
        for (int i = 0; i < n_; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < n_; ++j) prod[i + j] += a.c_[i] * b.c_[j];
        }
        reduce_poly(prod);
        prod.resize(n_);
        for (auto& c : prod) reduce(c);
        return GaloisRingElement(this, std::move(prod));
    }

    GaloisRingElement mul_scalar(const GaloisRingElement& a, const BigInt& s) const {
        std::vector<BigInt> r(n_);
        for (int i = 0; i < n_; ++i) {
            r[i] = a.c_[i] * s;
            reduce(r[i]);
        }
        return GaloisRingElement(this, std::move(r));
    }

    bool is_zero(const GaloisRingElement& a) const {
        for (auto& c : a.c_)
            if (c != 0) return false;
        return true;
    }

    // p-adic valuation, capped at M (M means "0 mod p^M").
    int valuation(const GaloisRingElement& a) const {
        int best = M_;
        for (auto& c : a.c_) best = std::min(best, scalar_valuation(c));
        return best;
    }

    int scalar_valuation(const BigInt& c) const {
        if (c == 0) return M_;
        BigInt t;
        int v = static_cast<int>(mpz_remove(t.get_mpz_t(), c.get_mpz_t(), p_.get_mpz_t()));
        return std::min(v, M_);
    }

    // Exact division by p^k; requires valuation >= k. Digits above M - k are
    // a definite lift, not information.
    GaloisRingElement divide_exact(const GaloisRingElement& a, int k) const {
        std::vector<BigInt> r(n_);
        for (int i = 0; i < n_; ++i) {
            if (a.c_[i] % ppow_[k] != 0)
                throw std::domain_error("divide_exact: element not divisible by p^k");
            r[i] = a.c_[i] / ppow_[k];
        }
        return GaloisRingElement(this, std::move(r));
    }

    // Inverse of a unit: residue-field inverse lifted by Newton iteration.
    GaloisRingElement unit_inverse(const GaloisRingElement& a) const {
        if (valuation(a) != 0) throw std::domain_error("unit_inverse: argument is not a unit");
        GaloisRingElement y = residue_inverse(a);
        GaloisRingElement two = from_int(2);
        for (int prec = 1; prec < M_; prec *= 2) y = mul(y, sub(two, mul(a, y)));
        return y;
    }

    // --- Frobenius ---------------------------------------------------------

    GaloisRingElement frobenius(const GaloisRingElement& a) const { return frobenius_pow(a, 1); }

    GaloisRingElement frobenius_pow(const GaloisRingElement& a, int k) const {
        k %= n_;
        if (k < 0) k += n_;
        if (k == 0) return a;
        GaloisRingElement acc = zero();
        for (int j = 0; j < n_; ++j)
            if (a.c_[j] != 0) acc = add(acc, mul_scalar(frob_basis_[k][j], a.c_[j]));
        return acc;
    }

    // Smallest d | n with frobenius^d(x) = x at precision M. A false match
    // requires the true difference to vanish to M digits (probability ~p^-M
    // for random data); see RootCountResult for the tallied failure modes.
    int element_degree(const GaloisRingElement& a) const {
        for (long d : divisors(n_))
            if (frobenius_pow(a, static_cast<int>(d)) == a) return static_cast<int>(d);
        return n_;  // unreachable: d = n always matches
    }

    // --- discriminant and phi ----------------------------------------------

    // v_p(disc(x)) with disc(x) = prod_{i<j} (sigma^i x - sigma^j x)^2.
    // nullopt when some conjugate difference vanishes mod p^M (overflow).
    std::optional<long> disc_valuation(const GaloisRingElement& a) const {
        return disc_valuation_rel(a, 1);
    }

    // Same but over the subring fixed by frobenius^m (conjugates sigma^{m i}).
    std::optional<long> disc_valuation_rel(const GaloisRingElement& a, int m) const {
        if (n_ % m != 0) throw std::invalid_argument("disc_valuation_rel: m must divide n");
        int count = n_ / m;
        std::vector<GaloisRingElement> conj;
        conj.reserve(count);
        conj.push_back(a);
        for (int i = 1; i < count; ++i) conj.push_back(frobenius_pow(conj.back(), m));
        long total = 0;
        for (int i = 0; i < count; ++i)
            for (int j = i + 1; j < count; ++j) {
                int v = valuation(sub(conj[i], conj[j]));
                if (v >= M_) return std::nullopt;
                total += 2 * v;
            }
        return total;
    }

    // phi(x) = p^{-v(disc x)/2}; overflow collapses to 0 with recorded bias
    // bound p^{-M/2}.
    double phi(const GaloisRingElement& a) const {
        auto v = disc_valuation(a);
        if (!v) return 0.0;
        return std::pow(p_.get_d(), -0.5 * static_cast<double>(*v));
    }

    // --- residue field -------------------------------------------------------

    long p_long() const { return pl_; }

    // Residue elements are coefficient vectors over [0, p); arithmetic mod p.
    using Residue = std::vector<long>;

    Residue residue_of(const GaloisRingElement& a) const {
        Residue r(n_);
        for (int i = 0; i < n_; ++i) r[i] = mpz_fdiv_ui(a.c_[i].get_mpz_t(), static_cast<unsigned long>(pl_));
        return r;
    }

    GaloisRingElement lift_residue(const Residue& r) const {
        std::vector<BigInt> c(n_);
        for (int i = 0; i < n_; ++i) c[i] = r[i];
        return GaloisRingElement(this, std::move(c));
    }

    bool residue_is_zero(const Residue& r) const {
        return std::all_of(r.begin(), r.end(), [](long c) { return c == 0; });
    }

    Residue residue_mul(const Residue& a, const Residue& b) const {
        std::vector<long> prod(2 * n_ - 1, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % pl_;
        for (int k = 2 * n_ - 2; k >= n_; --k) {
            long carry = prod[k];
            if (carry == 0) continue;
            for (int j = 0; j < n_; ++j)
                prod[k - n_ + j] = (prod[k - n_ + j] - carry * modl_[j]) % pl_;
        }
        Residue r(n_);
        for (int i = 0; i < n_; ++i) r[i] = ((prod[i] % pl_) + pl_) % pl_;
        return r;
    }

    Residue residue_add(const Residue& a, const Residue& b) const {
        Residue r(n_);
        for (int i = 0; i < n_; ++i) r[i] = (a[i] + b[i]) % pl_;
        return r;
    }

    Residue residue_scale(const Residue& a, long s) const {
        Residue r(n_);
        s %= pl_;
        for (int i = 0; i < n_; ++i) r[i] = (((a[i] * s) % pl_) + pl_) % pl_;
        return r;
    }

    // Iterate all p^n residue elements: index -> base-p digits.
    Residue residue_by_index(long idx) const {
        Residue r(n_);
        for (int i = 0; i < n_; ++i) {
            r[i] = idx % pl_;
            idx /= pl_;
        }
        return r;
    }

    long residue_count() const {
        long c = 1;
        for (int i = 0; i < n_; ++i) c *= pl_;
        return c;
    }

private:
    void reduce(BigInt& c) const { mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), ppow_.back().get_mpz_t()); }

    // Reduce a degree <= 2n-2 coefficient vector by the monic modulus.
    void reduce_poly(std::vector<BigInt>& prod) const {
        for (int k = static_cast<int>(prod.size()) - 1; k >= n_; --k) {
            if (prod[k] == 0) continue;
            BigInt carry = prod[k];
            prod[k] = 0;
            for (int j = 0; j < n_; ++j)
                if (mod_[j] != 0) prod[k - n_ + j] -= carry * mod_[j];
        }
    }

    // Lexicographically first monic irreducible of degree n mod p, constant
    // coefficient most significant; irreducibility by trial division over all
    // monic divisors of degree <= n/2.
    void choose_modulus() {
        mod_.assign(n_, 0);
        modl_.assign(n_, 0);
        if (n_ == 1) return;  // modulus X
        std::vector<long> c(n_, 0);
        while (true) {
            if (residue_irreducible(c)) break;
            int i = n_ - 1;
            while (i >= 0 && c[i] == pl_ - 1) c[i--] = 0;
            if (i < 0) throw std::logic_error("no irreducible modulus found");
            ++c[i];
        }
        for (int i = 0; i < n_; ++i) {
            mod_[i] = c[i];
            modl_[i] = c[i];
        }
    }

    bool residue_irreducible(const std::vector<long>& c) const {
        // divides f = X^n + sum c_i X^i by monic g of degree d, mod p
        auto divisible = [&](const std::vector<long>& g, int d) {
            std::vector<long> rem(c.begin(), c.end());
            rem.push_back(1);  // leading X^n
            for (int k = n_; k >= d; --k) {
                long q = rem[k] % pl_;
                if (q == 0) continue;
                for (int j = 0; j <= d; ++j) {
                    long gj = j == d ? 1 : g[j];
                    rem[k - d + j] = (rem[k - d + j] - q * gj) % pl_;
                }
            }
            for (int i = 0; i < d; ++i)
                if (rem[i] % pl_ != 0) return false;
            return true;
        };
        for (int d = 1; d <= n_ / 2; ++d) {
            long total = 1;
            for (int i = 0; i < d; ++i) total *= pl_;
            for (long idx = 0; idx < total; ++idx) {
                std::vector<long> g(d);
                long t = idx;
                for (int i = 0; i < d; ++i) {
                    g[i] = t % pl_;
                    t /= pl_;
                }
                if (divisible(g, d)) return false;
            }
        }
        return true;
    }

    void build_frobenius() {
        frob_basis_.assign(n_, std::vector<GaloisRingElement>(n_));
        for (int j = 0; j < n_; ++j) {
            std::vector<BigInt> e(n_, 0);
            e[j] = 1;
            frob_basis_[0][j] = GaloisRingElement(this, std::move(e));
        }
        if (n_ == 1) return;

        // Hensel-lift the p-power conjugate of the generator: the root of the
        // modulus congruent to g^p mod p.
        Residue gp = residue_pow(residue_of(generator()), pl_);
        GaloisRingElement r = lift_residue(gp);
        GaloisRingElement mod_at = eval_modulus(r);
        int guard = 0;
        while (!is_zero(mod_at)) {
            GaloisRingElement deriv = eval_modulus_derivative(r);
            r = sub(r, mul(mod_at, unit_inverse(deriv)));
            mod_at = eval_modulus(r);
            if (++guard > 2 * M_ + 8) throw std::logic_error("frobenius lift did not converge");
        }
        GaloisRingElement acc = one();
        for (int j = 0; j < n_; ++j) {
            frob_basis_[1][j] = acc;
            if (j + 1 < n_) acc = mul(acc, r);
        }
        for (int k = 2; k < n_; ++k)
            for (int j = 0; j < n_; ++j) frob_basis_[k][j] = frobenius_pow(frob_basis_[k - 1][j], 1);

        // frobenius^n must fix the generator exactly at precision M
        GaloisRingElement y = generator();
        for (int k = 0; k < n_; ++k) y = frobenius_pow(y, 1);
        if (!(y == generator())) throw std::logic_error("frobenius order check failed");
    }

    Residue residue_pow(const Residue& a, long e) const {
        Residue acc(n_, 0);
        acc[0] = 1;
        Residue b = a;
        while (e) {
            if (e & 1) acc = residue_mul(acc, b);
            b = residue_mul(b, b);
            e >>= 1;
        }
        return acc;
    }

    GaloisRingElement residue_inverse(const GaloisRingElement& a) const {
        // Fermat in F_{p^n}: a^{p^n - 2}
        long q = residue_count();
        Residue inv = residue_pow(residue_of(a), q - 2);
        return lift_residue(inv);
    }

    GaloisRingElement eval_modulus(const GaloisRingElement& x) const {
        // modulus(x) = x^n + sum mod_[i] x^i, Horner with the monic head
        GaloisRingElement acc = x;  // start from leading 1 * x
        for (int i = n_ - 1; i >= 1; --i) acc = mul(add(acc, from_int(mod_[i])), x);
        // after the loop acc = x^n + mod_{n-1} x^{n-1} + ... + mod_1 x
        return add(acc, from_int(mod_[0]));
    }

    GaloisRingElement eval_modulus_derivative(const GaloisRingElement& x) const {
        // n x^{n-1} + sum i * mod_[i] x^{i-1}
        GaloisRingElement acc = from_int(n_);
        for (int i = n_ - 1; i >= 1; --i) acc = add(mul(acc, x), from_int(mod_[i] * i));
        return acc;
    }

    BigInt p_;
    long pl_ = 0;
    int n_, M_;
    std::vector<BigInt> ppow_;
    std::vector<BigInt> mod_;   // low n coefficients of the monic modulus
    std::vector<long> modl_;    // same, as machine ints (coeffs live in [0, p))
    std::vector<std::vector<GaloisRingElement>> frob_basis_;  // [k][j] = frob^k(g^j)
};

}  // namespace padicroots
