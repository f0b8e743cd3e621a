#pragma once

// Restricted-composition harmonic sums via truncated power-series convolution.
//
//   S_n^(m)(p^r) = sum over l_1+...+l_n = m*p^r, l_i < p^r, p coprime l_i,
//                  of 1/(l_1 ... l_n)
//   R_n^(m)(p^r) = the same with the upper bound on the parts removed.
//
// Both are coefficient m*p^r of the n-th power of the generating series
// f(x) = sum_{p coprime l} x^l / l, truncated at degree m*p^r and powered by
// binary exponentiation. Direct enumeration is O(p^{rn}) and infeasible past
// toy sizes; it survives here as the guarded brute-force oracle.
//
// Also houses the Lemma 2.3 lattice-point counts C_a^(m) (solutions of
// x_1+...+x_6 = mp-a with 0 <= x_i < p) and their checker.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mhslab/bernoulli.hpp"
#include "mhslab/mhs.hpp"
#include "mhslab/modring.hpp"
#include "mhslab/report.hpp"

namespace mhslab {

inline constexpr uint64_t kDegreeCap = 2'000'000;
inline constexpr uint64_t kBruteForceCap = 10'000'000;

// Coefficients of the harmonic generating series over one context.
// coeffs[0] = 0 and coeffs[l] = 0 whenever p | l.
struct CoeffSeries {
    ResidueContext ctx;
    std::vector<uint64_t> coeffs; // indexed 0 .. degree_cap

    uint64_t degree_cap() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

inline CoeffSeries harmonic_gf(const ResidueContext& ctx, uint64_t limit) {
    if (limit > kDegreeCap) fail(errc::limit_exceeded, "harmonic_gf limit beyond degree cap policy");
    CoeffSeries s{ctx, detail::unit_inverses(ctx, limit)};
    if (s.coeffs.empty()) s.coeffs.assign(1, 0);
    return s;
}

namespace detail {

// Truncated schoolbook products. Terms are < 2^62 and at most kDegreeCap of
// them accumulate per coefficient, so a 128-bit accumulator never wraps and
// one division per output coefficient suffices.
inline std::vector<uint64_t> mul_trunc(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                                       uint64_t cap, uint64_t mod) {
    std::vector<uint64_t> c(cap + 1, 0);
    const uint64_t da = a.size() - 1, db = b.size() - 1;
    for (uint64_t i = 0; i <= cap; ++i) {
        const uint64_t jlo = i > db ? i - db : 0;
        if (jlo > da || jlo > i) continue;
        const uint64_t jhi = i < da ? i : da;
        unsigned __int128 acc = 0;
        const uint64_t* ap = a.data() + jlo;
        const uint64_t* bp = b.data() + (i - jlo);
        for (uint64_t j = jlo; j <= jhi; ++j) acc += static_cast<unsigned __int128>(*ap++) * (*bp--);
        c[i] = static_cast<uint64_t>(acc % mod);
    }
    return c;
}

inline std::vector<uint64_t> sqr_trunc(const std::vector<uint64_t>& a, uint64_t cap, uint64_t mod) {
    std::vector<uint64_t> c(cap + 1, 0);
    const uint64_t da = a.size() - 1;
    for (uint64_t i = 0; i <= cap; ++i) {
        const uint64_t jlo = i > da ? i - da : 0;
        const uint64_t half = i / 2;
        unsigned __int128 acc = 0;
        const uint64_t* lo = a.data() + jlo;
        const uint64_t* hi = a.data() + (i - jlo);
        for (uint64_t j = jlo; j < half + (i % 2); ++j) acc += static_cast<unsigned __int128>(*lo++) * (*hi--);
        acc <<= 1;
        if (i % 2 == 0 && half <= da && half >= jlo) acc += static_cast<unsigned __int128>(a[half]) * a[half];
        c[i] = static_cast<uint64_t>(acc % mod);
    }
    return c;
}

// f^n truncated at cap; squarings use the symmetric kernel.
inline std::vector<uint64_t> pow_trunc(std::vector<uint64_t> base, unsigned n, uint64_t cap, uint64_t mod) {
    std::vector<uint64_t> acc;
    bool have = false;
    while (n) {
        if (n & 1) {
            acc = have ? mul_trunc(acc, base, cap, mod) : base;
            have = true;
        }
        n >>= 1;
        if (n) base = sqr_trunc(base, cap, mod);
    }
    return acc;
}

inline uint64_t checked_pow(uint64_t base, unsigned exp, const char* what) {
    uint64_t v = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (v > kDegreeCap / base) fail(errc::limit_exceeded, what);
        v *= base;
    }
    return v;
}

} // namespace detail

enum class CompKind { S, R };

namespace detail {

inline Residue comp_sum(CompKind kind, unsigned n, unsigned m, uint64_t p, unsigned r, unsigned k) {
    if (m < 1 || m >= n) fail(errc::precondition_violated, "need 1 <= m < n");
    if (r < 1) fail(errc::precondition_violated, "need r >= 1");
    ResidueContext ctx = ctx_new(p, k);
    const uint64_t pr = checked_pow(p, r, "p^r beyond degree cap");
    if (pr > kDegreeCap / m) fail(errc::limit_exceeded, "m*p^r beyond degree cap");
    const uint64_t target = m * pr;
    const uint64_t limit = kind == CompKind::S ? pr : target;
    CoeffSeries f = harmonic_gf(ctx, limit);
    f.coeffs.resize(target + 1, 0);
    auto power = detail::pow_trunc(std::move(f.coeffs), n, target, ctx.modulus);
    return Residue(ctx, power[target]);
}

inline void brute_force_rec(uint64_t remaining, unsigned parts, uint64_t part_bound, const ResidueContext& ctx,
                            const std::vector<uint64_t>& invs, uint64_t prod, uint64_t& total) {
    if (parts == 1) {
        if (remaining >= 1 && remaining < part_bound && remaining % ctx.p != 0)
            total = (total + prod * invs[remaining]) % ctx.modulus;
        return;
    }
    const uint64_t hi = std::min<uint64_t>(part_bound - 1, remaining > parts - 1 ? remaining - (parts - 1) : 0);
    for (uint64_t l = 1; l <= hi; ++l) {
        if (l % ctx.p == 0) continue;
        brute_force_rec(remaining - l, parts - 1, part_bound, ctx, invs, (prod * invs[l]) % ctx.modulus, total);
    }
}

} // namespace detail

inline Residue comp_sum_S(unsigned n, unsigned m, uint64_t p, unsigned r, unsigned k) {
    return detail::comp_sum(CompKind::S, n, m, p, r, k);
}

inline Residue comp_sum_R(unsigned n, unsigned m, uint64_t p, unsigned r, unsigned k) {
    return detail::comp_sum(CompKind::R, n, m, p, r, k);
}

// Direct recursive enumeration of all admissible compositions; the oracle for
// the convolution path. Guarded by the total composition count so misuse is
// loud rather than slow.
inline Residue brute_force_comp_sum(CompKind kind, unsigned n, unsigned m, uint64_t p, unsigned r, unsigned k) {
    if (m < 1 || m >= n) fail(errc::precondition_violated, "need 1 <= m < n");
    if (r < 1) fail(errc::precondition_violated, "need r >= 1");
    ResidueContext ctx = ctx_new(p, k);
    const uint64_t pr = detail::checked_pow(p, r, "p^r beyond degree cap");
    if (pr > kDegreeCap / m) fail(errc::limit_exceeded, "m*p^r beyond degree cap");
    const uint64_t target = m * pr;

    mpz_class count;
    mpz_bin_uiui(count.get_mpz_t(), static_cast<unsigned long>(target - 1), n - 1);
    if (count > kBruteForceCap) fail(errc::limit_exceeded, "composition count beyond brute-force guard");

    const uint64_t part_bound = kind == CompKind::S ? pr : target + 1;
    auto invs = detail::unit_inverses(ctx, target + 1);
    uint64_t total = 0;
    detail::brute_force_rec(target, n, part_bound, ctx, invs, 1 % ctx.modulus, total);
    return Residue(ctx, total);
}

// ---------------------------------------------------------------------------
// Lemma 2.3 lattice counts
// ---------------------------------------------------------------------------

struct CountResult {
    unsigned a = 0;
    unsigned m = 0;
    mpz_class value;
};

// C_a^(m) by inclusion-exclusion over X_a(u) = C(up-a+5, 5):
//   C_a^(m) = sum_{k=1}^{m} (-1)^{k-1} X_a(m-k+1) C(6, k-1)
inline CountResult count_C_exact(unsigned a, unsigned m, uint64_t p) {
    if (a < 1 || a > 5 || m < 1 || m > 5) fail(errc::precondition_violated, "C_a^(m) defined for 1 <= a, m <= 5");
    mpz_class total = 0, x, binom;
    for (unsigned k = 1; k <= m; ++k) {
        const uint64_t up = static_cast<uint64_t>(m - k + 1) * p;
        if (up + 5 < a) continue;
        mpz_bin_uiui(x.get_mpz_t(), static_cast<unsigned long>(up - a + 5), 5);
        mpz_bin_uiui(binom.get_mpz_t(), 6, k - 1);
        if (k % 2 == 1) total += x * binom;
        else total -= x * binom;
    }
    return CountResult{a, m, total};
}

// Direct count of x_1+...+x_6 = mp-a with 0 <= x_i < p, split 3+3.
inline CountResult count_C_bruteforce(unsigned a, unsigned m, uint64_t p) {
    if (a < 1 || a > 5 || m < 1 || m > 5) fail(errc::precondition_violated, "C_a^(m) defined for 1 <= a, m <= 5");
    if (p > 31) fail(errc::limit_exceeded, "brute-force count guarded at p <= 31");
    const uint64_t target = m * p - a;
    std::vector<mpz_class> triples(3 * (p - 1) + 1, 0);
    for (uint64_t x = 0; x < p; ++x)
        for (uint64_t y = 0; y < p; ++y)
            for (uint64_t z = 0; z < p; ++z) triples[x + y + z] += 1;
    mpz_class total = 0;
    for (uint64_t s = 0; s < triples.size(); ++s)
        if (target >= s && target - s < triples.size()) total += triples[s] * triples[target - s];
    return CountResult{a, m, total};
}

// Lemma 2.3 parts (i)-(iv): all counts vanish mod p, and the m = 1..3 column
// sums take their stated rational multiples of p mod p^2. Stated for any
// prime, but the derivation divides by 5!; p = 5 is a genuine counterexample
// (C_5^(1) = 1), so the check requires p >= 7.
inline CongruenceReport check_lemma_Cam(uint64_t p) {
    if (!is_prime(p) || p <= 5)
        fail(errc::precondition_violated, "check_lemma_Cam requires a prime p >= 7 (at p = 5, C_5^(1) = 1)");
    CongruenceReport rep;
    rep.theorem_id = "lemmaCam";
    rep.p = p;
    rep.pass = true;

    ResidueContext ctx2 = ctx_new(p, 2);
    mpz_class counts[6][6];
    for (unsigned a = 1; a <= 5; ++a)
        for (unsigned m = 1; m <= 5; ++m) counts[a][m] = count_C_exact(a, m, p).value;

    std::ostringstream failures;
    for (unsigned a = 1; a <= 5 && rep.pass; ++a)
        for (unsigned m = 1; m <= 5; ++m)
            if (counts[a][m] % p != 0) {
                rep.pass = false;
                rep.lhs = detail::mpz_to_residue(counts[a][m], p);
                rep.rhs = 0;
                failures << "part (i) fails at a=" << a << " m=" << m;
                break;
            }

    // (ii)-(iv): per m, the pairs (C_1+C_5, C_2+C_4, C_3) against their p-multiples
    static const long frac_num[4][3] = {{2, -1, 1}, {-8, 2, -2}, {12, -3, 1}};
    static const long frac_den[4][3] = {{5, 10, 30}, {5, 5, 15}, {5, 5, 5}};
    for (unsigned m = 1; m <= 3 && rep.pass; ++m) {
        mpz_class sums[3] = {counts[1][m] + counts[5][m], counts[2][m] + counts[4][m], counts[3][m]};
        for (unsigned j = 0; j < 3; ++j) {
            uint64_t lhs = detail::mpz_to_residue(sums[j], ctx2.modulus);
            Rational target = Rational(frac_num[m - 1][j], frac_den[m - 1][j]) * Rational(mpz_class(p));
            uint64_t rhs = residue_of_rational(target, ctx2).value();
            if (lhs != rhs) {
                rep.pass = false;
                rep.lhs = lhs;
                rep.rhs = rhs;
                failures << "part (" << (m == 1 ? "ii" : m == 2 ? "iii" : "iv") << ") fails at column " << j;
                break;
            }
        }
    }
    rep.modulus = ctx2.modulus;
    rep.note = rep.pass ? "parts (i)-(iv): 25 mod-p classes and 9 mod-p^2 identities hold" : failures.str();
    return rep;
}

} // namespace mhslab
