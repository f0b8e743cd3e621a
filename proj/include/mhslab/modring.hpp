#pragma once

// Exact arithmetic in Z/p^k plus the number-theoretic utilities every other
// module consumes: deterministic 64-bit primality, modular inverses, CRT
// accumulation and rational reconstruction. Moduli are capped at 2^31 so a
// product of two canonical residues always fits in a uint64_t.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mhslab/errors.hpp"

namespace mhslab {

inline constexpr uint64_t kModulusCap = uint64_t(1) << 31;

// ---------------------------------------------------------------------------
// primality
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t acc = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) acc = mulmod_u64(acc, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return acc;
}

} // namespace detail

// Deterministic Miller-Rabin; the witness set below is exact for all 64-bit n.
inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// residue contexts
// ---------------------------------------------------------------------------

struct ResidueContext {
    uint64_t p = 0;
    unsigned k = 0;
    uint64_t modulus = 0;

    bool operator==(const ResidueContext&) const = default;
};

inline ResidueContext ctx_new(uint64_t p, unsigned k) {
    if (k < 1) fail(errc::bad_exponent, "exponent k must be >= 1");
    if (!is_prime(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
    uint64_t m = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (m > kModulusCap / p) fail(errc::limit_exceeded, "p^k exceeds 2^31");
        m *= p;
    }
    if (m >= kModulusCap) fail(errc::limit_exceeded, "p^k exceeds 2^31");
    return ResidueContext{p, k, m};
}

namespace detail {

// inverse of a unit mod m by extended Euclid; m need not be prime
inline uint64_t invmod_unit(uint64_t a, uint64_t m) {
    int64_t r0 = static_cast<int64_t>(m), r1 = static_cast<int64_t>(a % m);
    int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        r0 -= q * r1; std::swap(r0, r1);
        t0 -= q * t1; std::swap(t0, t1);
    }
    if (r0 != 1) fail(errc::not_a_unit, std::to_string(a) + " is not a unit mod " + std::to_string(m));
    return static_cast<uint64_t>(t0 < 0 ? t0 + static_cast<int64_t>(m) : t0);
}

inline uint64_t mpz_to_residue(const mpz_class& v, uint64_t m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mpz_class(m).get_mpz_t());
    return r.get_ui();
}

} // namespace detail

class Residue {
public:
    Residue() = default;
    Residue(const ResidueContext& ctx, uint64_t value) : ctx_(ctx), v_(value % ctx.modulus) {}

    uint64_t value() const { return v_; }
    const ResidueContext& ctx() const { return ctx_; }

    friend Residue operator+(const Residue& a, const Residue& b) {
        check_same(a, b);
        uint64_t s = a.v_ + b.v_;
        if (s >= a.ctx_.modulus) s -= a.ctx_.modulus;
        return Residue(a.ctx_, s, 0);
    }
    friend Residue operator-(const Residue& a, const Residue& b) {
        check_same(a, b);
        uint64_t s = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.ctx_.modulus - b.v_;
        return Residue(a.ctx_, s, 0);
    }
    friend Residue operator*(const Residue& a, const Residue& b) {
        check_same(a, b);
        return Residue(a.ctx_, (a.v_ * b.v_) % a.ctx_.modulus, 0);
    }
    Residue pow(uint64_t e) const { return Residue(ctx_, detail::powmod_u64(v_ % ctx_.modulus, e, ctx_.modulus), 0); }

    bool operator==(const Residue& o) const { return ctx_ == o.ctx_ && v_ == o.v_; }

private:
    Residue(const ResidueContext& ctx, uint64_t canonical, int) : ctx_(ctx), v_(canonical) {}
    static void check_same(const Residue& a, const Residue& b) {
        if (!(a.ctx_ == b.ctx_)) fail(errc::context_mismatch, "operands bound to different contexts");
    }

    ResidueContext ctx_{};
    uint64_t v_ = 0;
};

inline Residue inv(const Residue& u) {
    if (u.value() % u.ctx().p == 0)
        fail(errc::not_a_unit, std::to_string(u.value()) + " is divisible by p");
    return Residue(u.ctx(), detail::invmod_unit(u.value(), u.ctx().modulus));
}

// ---------------------------------------------------------------------------
// exact rationals
// ---------------------------------------------------------------------------

// Canonical fraction: gcd(|num|, den) = 1, den > 0, zero is 0/1.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(const mpz_class& n) : q_(n) {}
    Rational(long n, long d) : Rational(mpz_class(n), mpz_class(d)) {}
    Rational(const mpz_class& n, const mpz_class& d) {
        if (d == 0) fail(errc::precondition_violated, "zero denominator");
        q_ = mpq_class(n, d);
        q_.canonicalize();
    }

    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }
    bool is_zero() const { return q_ == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.q_ + b.q_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.q_ - b.q_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.q_ * b.q_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) fail(errc::precondition_violated, "division by zero rational");
        return Rational(a.q_ / b.q_);
    }
    Rational operator-() const { return Rational(mpq_class(-q_)); }
    bool operator==(const Rational& o) const { return q_ == o.q_; }
    bool operator!=(const Rational& o) const { return q_ != o.q_; }

    std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

private:
    explicit Rational(const mpq_class& q) : q_(q) {}
    mpq_class q_;
};

inline Residue residue_of_rational(const Rational& q, const ResidueContext& ctx) {
    mpz_class den = q.den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), ctx.p))
        fail(errc::denominator_not_unit, "denominator " + den.get_str() + " not a unit mod " + std::to_string(ctx.modulus));
    uint64_t n = detail::mpz_to_residue(q.num(), ctx.modulus);
    uint64_t d = detail::mpz_to_residue(den, ctx.modulus);
    return Residue(ctx, (n * detail::invmod_unit(d, ctx.modulus)) % ctx.modulus);
}

// ---------------------------------------------------------------------------
// CRT and rational reconstruction
// ---------------------------------------------------------------------------

// Combines (residue, modulus) pairs with pairwise coprime moduli into the
// unique residue modulo the product. Arbitrary-precision accumulation.
inline std::pair<mpz_class, mpz_class> crt_combine(const std::vector<std::pair<mpz_class, mpz_class>>& pairs) {
    mpz_class x = 0, m = 1;
    for (const auto& [r, q] : pairs) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), q.get_mpz_t());
        if (g != 1) fail(errc::moduli_not_coprime, "gcd(" + m.get_str() + ", " + q.get_str() + ") = " + g.get_str());
        // x' = x + m * ((r - x) / m mod q)
        mpz_class minv, t;
        mpz_invert(minv.get_mpz_t(), m.get_mpz_t(), q.get_mpz_t());
        t = ((r - x) * minv) % q;
        if (t < 0) t += q;
        x += m * t;
        m *= q;
    }
    return {x, m};
}

// Wang-style reconstruction: run Euclid on (M, x), stop at the first remainder
// <= bound, validate the candidate. Unique whenever 2*bound^2 < M.
inline Rational rational_reconstruct(const mpz_class& x, const mpz_class& M, const mpz_class& bound) {
    if (x < 0 || x >= M || bound < 1) fail(errc::precondition_violated, "need 0 <= x < M and bound >= 1");
    mpz_class r0 = M, r1 = x, t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        mpz_class t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    // r1 = t1 * x (mod M); candidate num/den = (±r1)/|t1|
    mpz_class den = abs(t1);
    mpz_class num = t1 < 0 ? mpz_class(-r1) : r1;
    if (den == 0 || den > bound)
        fail(errc::not_found, "no fraction with |num|, den <= " + bound.get_str());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), den.get_mpz_t());
    if (g != 1) fail(errc::not_found, "candidate not in lowest terms");
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), M.get_mpz_t());
    if (g != 1) fail(errc::not_found, "candidate denominator shares a factor with the modulus");
    return Rational(num, den);
}

} // namespace mhslab
