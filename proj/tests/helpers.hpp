#pragma once

// Shared generators for randomized tests.

#include "padicroots/incidence.hpp"
#include "padicroots/poset.hpp"

#include <random>
#include <vector>

namespace padicroots::testing {

// Random poset on up to max_size elements: random edges on an index order,
// then transitive closure. Labels are 0..k-1.
inline FinitePoset random_poset(std::mt19937_64& gen, int max_size = 8) {
    std::uniform_int_distribution<int> size_dist(1, max_size);
    std::uniform_real_distribution<double> edge(0.0, 1.0);
    int k = size_dist(gen);
    std::vector<std::vector<char>> rel(k, std::vector<char>(k, 0));
    for (int i = 0; i < k; ++i) rel[i][i] = 1;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (edge(gen) < 0.35) rel[i][j] = 1;
    for (int m = 0; m < k; ++m)  // transitive closure
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (rel[i][m] && rel[m][j]) rel[i][j] = 1;
    std::vector<long> labels;
    for (int i = 0; i < k; ++i) labels.push_back(i);
    return FinitePoset(labels, [rel](long a, long b) { return rel[a][b] != 0; });
}

inline IncidenceElement<BigRat> random_invertible_element(const FinitePoset& p,
                                                          std::mt19937_64& gen) {
    std::uniform_int_distribution<int> coeff(-4, 4), diag(1, 5);
    return IncidenceElement<BigRat>(p, [&](long x, long y) {
        if (x == y) return BigRat(diag(gen));
        return BigRat(coeff(gen));
    });
}

inline IncidenceElement<BigRat> random_unit_diagonal_element(const FinitePoset& p,
                                                             std::mt19937_64& gen) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    return IncidenceElement<BigRat>(p, [&](long x, long y) {
        if (x == y) return BigRat(1);
        return BigRat(coeff(gen));
    });
}

}  // namespace padicroots::testing
