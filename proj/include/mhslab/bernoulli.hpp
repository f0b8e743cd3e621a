#pragma once

// Bernoulli numbers two independent ways: exact rationals by the defining
// recurrence, and residues mod p by inverting the power series of
// (e^x - 1)/x over Z/p. Each route serves as the other's oracle.

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "mhslab/modring.hpp"

namespace mhslab {

inline constexpr unsigned kBernoulliExactCap = 64;

namespace detail {

inline std::vector<Rational> build_exact_bernoulli() {
    // sum_{j=0}^{n} C(n+1, j) B_j = 0, B_0 = 1
    std::vector<Rational> b;
    b.reserve(kBernoulliExactCap + 1);
    b.emplace_back(1);
    for (unsigned n = 1; n <= kBernoulliExactCap; ++n) {
        Rational acc(0);
        mpz_class binom;
        for (unsigned j = 0; j < n; ++j) {
            mpz_bin_uiui(binom.get_mpz_t(), n + 1, j);
            acc = acc + Rational(binom) * b[j];
        }
        b.push_back(-acc / Rational(static_cast<long>(n) + 1));
    }
    return b;
}

} // namespace detail

// Exact B_n for 0 <= n <= 64 (desk-scale guard).
inline Rational bernoulli_exact(unsigned n) {
    if (n > kBernoulliExactCap) fail(errc::limit_exceeded, "bernoulli_exact capped at n = 64");
    static const std::vector<Rational> table = detail::build_exact_bernoulli();
    return table[n];
}

// B_j mod p for 0 <= j <= p-3. Every such index dodges the (p-1) | j pole,
// so the von Staudt-Clausen denominator is coprime to p.
class BernoulliTable {
public:
    uint64_t p() const { return p_; }
    size_t size() const { return values_.size(); }
    uint64_t at(size_t j) const {
        if (j >= values_.size()) fail(errc::precondition_violated, "Bernoulli index beyond p-3");
        return values_[j];
    }

    friend BernoulliTable bernoulli_mod_p(uint64_t p);

private:
    uint64_t p_ = 0;
    std::vector<uint64_t> values_;
};

// Invert A(x) = sum_{i>=0} x^i/(i+1)! modulo x^{p-2} over Z/p by direct long
// division, then scale coefficient j by j!.
inline BernoulliTable bernoulli_mod_p(uint64_t p) {
    if (!is_prime(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
    if (p < 7) fail(errc::precondition_violated, "bernoulli_mod_p requires p >= 7");

    const size_t terms = static_cast<size_t>(p - 2); // degrees 0 .. p-3
    std::vector<uint64_t> fact(terms + 1);
    fact[0] = 1;
    for (size_t i = 1; i <= terms; ++i) fact[i] = (fact[i - 1] * (i % p)) % p;
    std::vector<uint64_t> a(terms); // a_i = 1/(i+1)!
    for (size_t i = 0; i < terms; ++i) a[i] = detail::invmod_unit(fact[i + 1], p);

    std::vector<uint64_t> b(terms); // series inverse
    b[0] = 1;
    for (size_t j = 1; j < terms; ++j) {
        uint64_t acc = 0;
        for (size_t i = 1; i <= j; ++i) acc = (acc + a[i] * b[j - i]) % p;
        b[j] = acc == 0 ? 0 : p - acc;
    }

    BernoulliTable t;
    t.p_ = p;
    t.values_.resize(terms);
    for (size_t j = 0; j < terms; ++j) t.values_[j] = (b[j] * fact[j]) % p;
    return t;
}

// Shared per-prime tables; immutable once built, safe to hand across threads.
inline const BernoulliTable& bernoulli_table(uint64_t p) {
    static std::mutex mu;
    static std::unordered_map<uint64_t, std::unique_ptr<BernoulliTable>> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(p);
    if (it == memo.end())
        it = memo.emplace(p, std::make_unique<BernoulliTable>(bernoulli_mod_p(p))).first;
    return *it->second;
}

// One additive term coeff * prod_j B_{p - offsets[j]} of a congruence RHS.
struct BernoulliTerm {
    Rational coeff;
    std::vector<unsigned> offsets;
};

// Residue mod p^k of p^e * sum_t coeff_t * prod_j B_{p - a_j}, for claims with
// k <= e+1 (a mod-p Bernoulli value lifted through the p^e prefactor is then
// exact). Small primes go through exact rationals, formed fully and reduced
// once, which also covers p = 5 and coefficients with p in the denominator.
inline uint64_t bernoulli_rhs_residue(uint64_t p, unsigned k, unsigned e,
                                      const std::vector<BernoulliTerm>& terms) {
    if (k > e + 1) fail(errc::precondition_violated, "modulus exponent exceeds prefactor precision");
    ResidueContext ctx = ctx_new(p, k);
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, e);

    bool exact_ok = true;
    for (const auto& t : terms)
        for (unsigned a : t.offsets)
            if (a > p || p - a > kBernoulliExactCap) exact_ok = false;
    if (exact_ok) {
        Rational total(0);
        for (const auto& t : terms) {
            Rational term = t.coeff;
            for (unsigned a : t.offsets) term = term * bernoulli_exact(static_cast<unsigned>(p - a));
            total = total + term;
        }
        return residue_of_rational(total * Rational(pe), ctx).value();
    }

    const BernoulliTable& table = bernoulli_table(p);
    Residue acc(ctx, 0);
    for (const auto& t : terms) {
        Residue term = residue_of_rational(t.coeff, ctx);
        for (unsigned a : t.offsets) term = term * Residue(ctx, table.at(static_cast<size_t>(p - a)));
        acc = acc + term;
    }
    return (acc * residue_of_rational(Rational(pe), ctx)).value();
}

} // namespace mhslab
