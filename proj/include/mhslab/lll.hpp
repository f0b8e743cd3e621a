#pragma once

// All-integer LLL reduction (delta = 3/4) on the rows of an mpz matrix.
// Maintains the Gram-Schmidt data as integers: d[i] is the Gram determinant of
// the first i rows and lambda[i][j] = mu[i][j] * d[j+1-ish] in the classical
// normalization, so every division below is exact. Dependent rows surface as a
// vanishing Gram determinant.

#include <vector>

#include <gmpxx.h>

#include "mhslab/errors.hpp"

namespace mhslab {

using IntMatrix = std::vector<std::vector<mpz_class>>;

namespace detail {

inline mpz_class dot(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    mpz_class s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// nearest integer to num/den, den > 0
inline mpz_class round_div(const mpz_class& num, const mpz_class& den) {
    mpz_class q;
    mpz_class two_num = 2 * num + den;
    mpz_class two_den = 2 * den;
    mpz_fdiv_q(q.get_mpz_t(), two_num.get_mpz_t(), two_den.get_mpz_t());
    return q;
}

} // namespace detail

inline IntMatrix lll_reduce(IntMatrix basis) {
    const size_t n = basis.size();
    if (n == 0) return basis;
    const size_t cols = basis[0].size();
    for (const auto& row : basis)
        if (row.size() != cols) fail(errc::precondition_violated, "ragged basis matrix");
    if (n == 1) return basis;

    // 1-indexed d, lambda
    std::vector<mpz_class> d(n + 1);
    d[0] = 1;
    std::vector<std::vector<mpz_class>> lam(n + 1, std::vector<mpz_class>(n + 1));

    auto init_row = [&](size_t i) {
        for (size_t j = 1; j <= i; ++j) {
            mpz_class u = detail::dot(basis[i - 1], basis[j - 1]);
            for (size_t s = 1; s < j; ++s) u = (d[s] * u - lam[i][s] * lam[j][s]) / d[s - 1];
            if (j < i) lam[i][j] = u;
            else d[i] = u;
        }
        if (d[i] == 0) fail(errc::dependent_rows, "basis rows are linearly dependent");
    };
    for (size_t i = 1; i <= n; ++i) init_row(i);

    auto redi = [&](size_t k, size_t l) {
        if (2 * abs(lam[k][l]) <= d[l]) return;
        mpz_class q = detail::round_div(lam[k][l], d[l]);
        for (size_t c = 0; c < cols; ++c) basis[k - 1][c] -= q * basis[l - 1][c];
        lam[k][l] -= q * d[l];
        for (size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };

    auto swapi = [&](size_t k) {
        std::swap(basis[k - 1], basis[k - 2]);
        for (size_t j = 1; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        mpz_class l = lam[k][k - 1];
        mpz_class b = (d[k - 2] * d[k] + l * l) / d[k - 1];
        for (size_t i = k + 1; i <= n; ++i) {
            mpz_class t = lam[i][k];
            lam[i][k] = (d[k] * lam[i][k - 1] - l * t) / d[k - 1];
            lam[i][k - 1] = (b * t + l * lam[i][k]) / d[k];
        }
        d[k - 1] = b;
    };

    size_t k = 2;
    while (k <= n) {
        redi(k, k - 1);
        // Lovasz at delta = 3/4: swap when 4 d_k d_{k-2} < 3 d_{k-1}^2 - 4 lambda^2
        if (4 * d[k] * d[k - 2] < 3 * d[k - 1] * d[k - 1] - 4 * lam[k][k - 1] * lam[k][k - 1]) {
            swapi(k);
            k = k > 2 ? k - 1 : 2;
        } else {
            for (size_t l = k >= 2 ? k - 1 : 0; l-- > 1;) redi(k, l);
            ++k;
        }
    }
    return basis;
}

} // namespace mhslab
