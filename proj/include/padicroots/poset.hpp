#pragma once

// Finite posets with explicit order relations, divisor posets, and chain
// enumeration. Elements are opaque integer labels; the order axioms are
// checked at construction. Immutable after construction.

#include "padicroots/numbers.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace padicroots {

using Chain = std::vector<long>;  // strictly increasing in the poset order

class FinitePoset {
public:
    FinitePoset(std::vector<long> elements, const std::function<bool(long, long)>& leq)
        : elems_(std::move(elements)) {
        const std::size_t n = elems_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (!index_.emplace(elems_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("FinitePoset: duplicate element");
        }
        leq_.assign(n, std::vector<char>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) leq_[i][j] = leq(elems_[i], elems_[j]) ? 1 : 0;
        validate();
    }

    std::size_t size() const { return elems_.size(); }
    const std::vector<long>& elements() const { return elems_; }
    long label(int i) const { return elems_.at(static_cast<std::size_t>(i)); }

    int index(long x) const {
        auto it = index_.find(x);
        if (it == index_.end()) throw std::invalid_argument("FinitePoset: unknown element");
        return it->second;
    }
    bool contains(long x) const { return index_.count(x) != 0; }

    bool leq(long x, long y) const { return leq_[index(x)][index(y)] != 0; }
    bool less(long x, long y) const { return x != y && leq(x, y); }
    bool leq_idx(int i, int j) const { return leq_[i][j] != 0; }

    std::vector<long> interval(long x, long y) const {
        int i = index(x), j = index(y);
        std::vector<long> r;
        for (std::size_t k = 0; k < elems_.size(); ++k)
            if (leq_[i][k] && leq_[k][j]) r.push_back(elems_[k]);
        return r;
    }

    // All proper chains of length k+1 from x to y.
    std::vector<Chain> chains(long x, long y, int k) const {
        if (k < 0) throw std::invalid_argument("chains: negative length");
        std::vector<Chain> out;
        Chain cur{x};
        extend_chains(index(x), index(y), k, cur, out);
        return out;
    }

    // All proper chains from x to y of any length.
    std::vector<Chain> all_chains(long x, long y) const {
        std::vector<Chain> out;
        std::size_t n = interval(x, y).size();
        for (int k = 0; k <= static_cast<int>(n); ++k) {
            auto ck = chains(x, y, k);
            out.insert(out.end(), ck.begin(), ck.end());
            if (ck.empty() && k > 0) break;  // no longer chains exist either
        }
        return out;
    }

    long count_chains(long x, long y, int k) const {
        return static_cast<long>(chains(x, y, k).size());
    }

    // Refinement count of a proper chain via the composition-sum identity
    // #C^m(z_0..z_k) = sum over m_1+...+m_k = m of prod #C^{m_i}(z_{i-1}, z_i).
    long count_refinements(const Chain& chain, int m) const {
        check_chain(chain);
        if (chain.size() == 1) return m == 0 ? 1 : 0;
        return refine_rec(chain, 1, m);
    }

    // Direct enumeration of the refinements themselves (the independent route).
    std::vector<Chain> refinements(const Chain& chain, int m) const {
        check_chain(chain);
        std::vector<Chain> all = chains(chain.front(), chain.back(), m);
        std::vector<Chain> out;
        for (auto& c : all)
            if (is_subsequence(chain, c)) out.push_back(c);
        return out;
    }

private:
    void validate() const {
        const std::size_t n = elems_.size();
        for (std::size_t i = 0; i < n; ++i)
            if (!leq_[i][i]) throw std::invalid_argument("FinitePoset: relation not reflexive");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && leq_[i][j] && leq_[j][i])
                    throw std::invalid_argument("FinitePoset: relation not antisymmetric");
                if (!leq_[i][j]) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (leq_[j][k] && !leq_[i][k])
                        throw std::invalid_argument("FinitePoset: relation not transitive");
            }
    }

    void extend_chains(int cur, int target, int remaining, Chain& acc,
                       std::vector<Chain>& out) const {
        if (remaining == 0) {
            if (cur == target) out.push_back(acc);
            return;
        }
        for (std::size_t z = 0; z < elems_.size(); ++z) {
            int zi = static_cast<int>(z);
            if (zi != cur && leq_[cur][z] && leq_[z][target]) {
                acc.push_back(elems_[z]);
                extend_chains(zi, target, remaining - 1, acc, out);
                acc.pop_back();
            }
        }
    }

    long refine_rec(const Chain& chain, std::size_t seg, int budget) const {
        if (seg == chain.size() - 1) return count_chains(chain[seg - 1], chain[seg], budget);
        long total = 0;
        for (int mi = 1; mi <= budget; ++mi) {
            long c = count_chains(chain[seg - 1], chain[seg], mi);
            if (c != 0) total += c * refine_rec(chain, seg + 1, budget - mi);
        }
        return total;
    }

    void check_chain(const Chain& chain) const {
        if (chain.empty()) throw std::invalid_argument("chain must be nonempty");
        for (std::size_t i = 0; i + 1 < chain.size(); ++i)
            if (!less(chain[i], chain[i + 1]))
                throw std::invalid_argument("sequence is not a proper chain");
        for (long x : chain) index(x);
    }

    static bool is_subsequence(const Chain& needle, const Chain& hay) {
        std::size_t i = 0;
        for (long x : hay)
            if (i < needle.size() && needle[i] == x) ++i;
        return i == needle.size();
    }

    std::vector<long> elems_;
    std::unordered_map<long, int> index_;
    std::vector<std::vector<char>> leq_;
};

// Divisors of n ordered by divisibility.
inline FinitePoset divisor_poset(long n) {
    auto ds = divisors(n);
    std::vector<long> elems(ds.begin(), ds.end());
    return FinitePoset(elems, [](long a, long b) { return b % a == 0; });
}

}  // namespace padicroots
