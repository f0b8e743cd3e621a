#pragma once

// p-restricted multiple harmonic sums in Z/p^k:
//
//   H_N(a_1,...,a_n) = sum over 0 < k_1 < ... < k_n < N, p coprime k_i,
//                      of prod k_i^{-a_i}
//   U_N(a_1,...,a_n) = the same over pairwise-distinct unordered-free tuples,
//                      reached from H by summing over permutations.
//
// H runs as a prefix-sum dynamic program in O(n*N) ring operations; U iterates
// the distinct permutations of the exponent multiset and scales by the
// multiplicity. check_lemma_U compares U_{bp} against its closed Bernoulli
// form at modulus p^3 (odd weight) or p^2 (even weight).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "mhslab/bernoulli.hpp"
#include "mhslab/modring.hpp"
#include "mhslab/report.hpp"

namespace mhslab {

struct ExponentVector {
    std::vector<unsigned> entries;

    unsigned weight() const { return std::accumulate(entries.begin(), entries.end(), 0u); }
    size_t size() const { return entries.size(); }

    std::string str() const {
        std::ostringstream out;
        out << '(';
        for (size_t i = 0; i < entries.size(); ++i) out << (i ? "," : "") << entries[i];
        out << ')';
        return out.str();
    }
};

namespace detail {

// invs[t] = t^{-1} mod ctx.modulus for unit t < N, zero at multiples of p.
// One extended Euclid plus O(N) multiplications (batched prefix trick).
inline std::vector<uint64_t> unit_inverses(const ResidueContext& ctx, uint64_t N) {
    const uint64_t M = ctx.modulus;
    std::vector<uint64_t> out(N, 0);
    std::vector<uint64_t> units;
    units.reserve(N);
    for (uint64_t t = 1; t < N; ++t)
        if (t % ctx.p != 0) units.push_back(t);
    if (units.empty()) return out;
    std::vector<uint64_t> prefix(units.size());
    uint64_t acc = 1;
    for (size_t i = 0; i < units.size(); ++i) {
        acc = (acc * (units[i] % M)) % M;
        prefix[i] = acc;
    }
    uint64_t inv_all = invmod_unit(acc, M);
    for (size_t i = units.size(); i-- > 0;) {
        uint64_t before = i == 0 ? 1 : prefix[i - 1];
        out[units[i]] = (inv_all * before) % M;
        inv_all = (inv_all * (units[i] % M)) % M;
    }
    return out;
}

inline uint64_t pow_small(uint64_t x, unsigned e, uint64_t M) {
    uint64_t acc = 1 % M;
    for (unsigned i = 0; i < e; ++i) acc = (acc * x) % M;
    return acc;
}

inline uint64_t mhs_H_with_inverses(const std::vector<unsigned>& alphas, const ResidueContext& ctx,
                                    const std::vector<uint64_t>& invs) {
    const uint64_t M = ctx.modulus;
    const uint64_t N = invs.size();
    const size_t n = alphas.size();
    if (n == 0) return 1 % M;
    if (N <= n) return 0; // needs n distinct values below N

    std::vector<uint64_t> layer(N, 0); // layer[t]: tuples whose current last entry is t
    for (uint64_t t = 1; t < N; ++t)
        if (invs[t]) layer[t] = pow_small(invs[t], alphas[0], M);
    std::vector<uint64_t> next(N, 0);
    for (size_t i = 1; i < n; ++i) {
        uint64_t run = 0;
        for (uint64_t t = 1; t < N; ++t) {
            uint64_t below = run; // sum of layer[s] for s < t
            run = (run + layer[t]) % M;
            next[t] = invs[t] ? (below * pow_small(invs[t], alphas[i], M)) % M : 0;
        }
        std::swap(layer, next);
    }
    uint64_t total = 0;
    for (uint64_t t = 1; t < N; ++t) total = (total + layer[t]) % M;
    return total;
}

} // namespace detail

inline Residue mhs_H(uint64_t N, const ExponentVector& alphas, const ResidueContext& ctx) {
    if (N < 1) fail(errc::precondition_violated, "N must be >= 1");
    auto invs = detail::unit_inverses(ctx, N);
    return Residue(ctx, detail::mhs_H_with_inverses(alphas.entries, ctx, invs));
}

inline Residue mhs_U(uint64_t N, const ExponentVector& alphas, const ResidueContext& ctx) {
    if (N < 1) fail(errc::precondition_violated, "N must be >= 1");
    if (alphas.size() > 8) fail(errc::limit_exceeded, "mhs_U guarded at n <= 8 (factorial blowup)");
    const uint64_t M = ctx.modulus;
    if (alphas.size() == 0) return Residue(ctx, 1 % M);

    auto invs = detail::unit_inverses(ctx, N);
    std::vector<unsigned> perm = alphas.entries;
    std::sort(perm.begin(), perm.end());
    // each distinct arrangement stands for prod_v (count of v)! permutations
    uint64_t multiplicity = 1;
    for (size_t i = 0; i < perm.size();) {
        size_t j = i;
        while (j < perm.size() && perm[j] == perm[i]) ++j;
        for (size_t c = 2; c <= j - i; ++c) multiplicity = (multiplicity * (c % M)) % M;
        i = j;
    }
    uint64_t total = 0;
    do {
        total = (total + detail::mhs_H_with_inverses(perm, ctx, invs)) % M;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Residue(ctx, (total * multiplicity) % M);
}

// U_{bp}(a_1,...,a_n) against the closed form
//   odd  r: (-1)^n     (n-1)! * b^2 r(r+1)/(2(r+2)) * B_{p-r-2} * p^2 (mod p^3)
//   even r: (-1)^{n-1} (n-1)! * b r/(r+1)           * B_{p-r-1} * p   (mod p^2)
// where r is the weight; requires r <= p-3.
inline CongruenceReport check_lemma_U(unsigned b, const ExponentVector& alphas, uint64_t p) {
    if (b < 1 || alphas.size() < 1) fail(errc::precondition_violated, "need b >= 1 and at least one exponent");
    if (!is_prime(p) || p < 7) fail(errc::precondition_violated, "p must be a prime >= 7");
    const unsigned r = alphas.weight();
    if (r > p - 3) fail(errc::precondition_violated, "weight exceeds p-3");

    CongruenceReport rep;
    rep.theorem_id = "lemmaU";
    rep.n = static_cast<int>(alphas.size());
    rep.m = static_cast<int>(b);
    rep.p = p;
    rep.r = static_cast<int>(r);
    rep.note = "alphas=" + alphas.str();

    const unsigned n = static_cast<unsigned>(alphas.size());
    const bool odd_weight = r % 2 == 1;
    const unsigned k = odd_weight ? 3 : 2;
    ResidueContext ctx = ctx_new(p, k);
    rep.modulus = ctx.modulus;
    rep.lhs = mhs_U(static_cast<uint64_t>(b) * p, alphas, ctx).value();

    mpz_class fact_n1;
    mpz_fac_ui(fact_n1.get_mpz_t(), n - 1);
    Rational coeff = odd_weight
        ? Rational(fact_n1) * Rational(static_cast<long>(b) * b * r * (r + 1), 2L * (r + 2))
        : Rational(fact_n1) * Rational(static_cast<long>(b) * r, static_cast<long>(r) + 1);
    const bool negate = odd_weight ? (n % 2 == 1) : (n % 2 == 0);
    if (negate) coeff = -coeff;
    const unsigned offset = odd_weight ? r + 2 : r + 1;
    rep.rhs = bernoulli_rhs_residue(p, k, odd_weight ? 2 : 1, {{coeff, {offset}}});
    rep.pass = rep.lhs == rep.rhs;
    return rep;
}

} // namespace mhslab
