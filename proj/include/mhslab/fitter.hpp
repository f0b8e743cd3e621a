#pragma once

// Recovers the unknown rational constants in congruences of the shape
//
//   S_n(p^r) == p^e * sum_i c_i * prod_j B_{p - a_{ij}}  (mod p^{e+1})
//
// from per-prime residue data: CRT plus rational reconstruction when there is
// one unknown, LLL lattice reduction for several. Hypotheses whose constants
// exceed a reconstruction bound come back Refuted-at-bound; in particular a
// prefactor violation at a prime p forces p into any candidate denominator,
// and enough of those force the denominator past any desk-scale bound.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mhslab/bernoulli.hpp"
#include "mhslab/compsum.hpp"
#include "mhslab/lll.hpp"
#include "mhslab/modring.hpp"

namespace mhslab {

enum class PowerConvention { PrefactorRm1, PrefactorR }; // p^{r-1} (the default shape) or p^r
enum class ModulusExp { R, RPlus1 };

struct Hypothesis {
    int n = 0;
    std::vector<std::vector<unsigned>> basis; // partitions; parts odd, >= 3
    PowerConvention power = PowerConvention::PrefactorRm1;
    ModulusExp modexp = ModulusExp::R;

    unsigned prefactor_exp(unsigned r) const { return power == PowerConvention::PrefactorRm1 ? r - 1 : r; }
    unsigned modulus_exp(unsigned r) const { return modexp == ModulusExp::R ? r : r + 1; }
};

// All multisets of odd integers >= 3 summing to n, parts ascending,
// partitions in lexicographic order.
inline std::vector<std::vector<unsigned>> odd_partitions(int n) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, int remaining, unsigned min_part) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (unsigned a = min_part; static_cast<int>(a) <= remaining; a += 2) {
            cur.push_back(a);
            self(self, remaining - static_cast<int>(a), a);
            cur.pop_back();
        }
    };
    if (n >= 1) rec(rec, n, 3);
    return out;
}

inline Hypothesis conjecture_hypothesis(int n) {
    return Hypothesis{n, odd_partitions(n), PowerConvention::PrefactorRm1, ModulusExp::R};
}

enum class FitStatus { Fitted, RefutedAtBound, Inconclusive };

inline const char* fit_status_name(FitStatus s) {
    switch (s) {
    case FitStatus::Fitted: return "Fitted";
    case FitStatus::RefutedAtBound: return "Refuted-at-bound";
    case FitStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct FitResult {
    int n = 0;
    int r = 0;
    std::vector<std::vector<unsigned>> basis;
    std::vector<Rational> coefficients;
    std::vector<uint64_t> primes_used;
    std::vector<uint64_t> holdout_primes;
    bool holdout_verified = false;
    FitStatus status = FitStatus::Inconclusive;
    std::string note;
};

struct PrimeData {
    uint64_t p = 0;
    bool prefactor_ok = true;
    uint64_t s = 0;                // (s_raw / p^e) mod p, valid when prefactor_ok
    unsigned forced_den_exp = 0;   // e - v_p(s_raw) when the prefactor fails
    std::vector<uint64_t> basis_vals; // prod B_{p-a} mod p, one per basis term
};

namespace detail {

inline void validate_hypothesis(const Hypothesis& hyp) {
    if (hyp.n < 1) fail(errc::precondition_violated, "hypothesis needs n >= 1");
    for (const auto& part : hyp.basis)
        for (unsigned a : part)
            if (a < 3 || a % 2 == 0) fail(errc::precondition_violated, "basis parts must be odd and >= 3");
    // The standard shape ties basis weight to n; custom (refutation) bases may
    // deviate on purpose, so weight is not enforced here.
    if (hyp.modulus_exp(2) != hyp.prefactor_exp(2) + 1)
        fail(errc::precondition_violated, "modulus exponent must exceed the prefactor exponent by one");
}

inline void check_admissible(const Hypothesis& hyp, uint64_t p) {
    if (!is_prime(p) || p < 11) fail(errc::prime_inadmissible, std::to_string(p) + ": fitter requires primes >= 11");
    for (const auto& part : hyp.basis)
        for (unsigned a : part)
            if (p < a + 3)
                fail(errc::prime_inadmissible,
                     std::to_string(p) + " does not admit Bernoulli index p-" + std::to_string(a));
}

inline PrimeData collect_one(const Hypothesis& hyp, unsigned r, uint64_t p, bool strict) {
    check_admissible(hyp, p);
    const unsigned e = hyp.prefactor_exp(r);
    const unsigned k = hyp.modulus_exp(r);
    PrimeData out;
    out.p = p;

    uint64_t s_raw = comp_sum_S(static_cast<unsigned>(hyp.n), 1, p, r, k).value();
    unsigned v = 0;
    uint64_t rest = s_raw;
    while (v < k && rest % p == 0 && rest != 0) { rest /= p; ++v; }
    if (s_raw == 0) v = k;
    if (v >= e) {
        uint64_t pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p;
        out.s = (s_raw / pe) % p;
    } else {
        if (strict)
            fail(errc::prefactor_mismatch, "S residue at p=" + std::to_string(p) + " has p-valuation " +
                                               std::to_string(v) + " < required " + std::to_string(e));
        out.prefactor_ok = false;
        out.forced_den_exp = e - v;
    }

    const BernoulliTable& table = bernoulli_table(p);
    for (const auto& part : hyp.basis) {
        uint64_t val = 1;
        for (unsigned a : part) val = (val * table.at(static_cast<size_t>(p - a))) % p;
        out.basis_vals.push_back(val);
    }
    return out;
}

inline std::vector<PrimeData> collect_all(const Hypothesis& hyp, unsigned r, const std::vector<uint64_t>& primes,
                                          bool strict, unsigned jobs) {
    std::vector<PrimeData> data(primes.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < primes.size(); ++i) data[i] = collect_one(hyp, r, primes[i], strict);
        return data;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= primes.size()) break;
            try {
                data[i] = collect_one(hyp, r, primes[i], strict);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return data;
}

// num/den * basis_val == s (mod p), skipping primes dividing den
inline bool coefficients_match(const std::vector<Rational>& coeffs, const PrimeData& d, bool& verifiable) {
    uint64_t p = d.p;
    uint64_t acc = 0;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        mpz_class den = coeffs[i].den();
        if (mpz_divisible_ui_p(den.get_mpz_t(), p)) { verifiable = false; return false; }
        uint64_t num = mpz_to_residue(coeffs[i].num(), p);
        uint64_t dv = mpz_to_residue(den, p);
        acc = (acc + num * invmod_unit(dv, p) % p * d.basis_vals[i]) % p;
    }
    verifiable = true;
    return acc == d.s;
}

} // namespace detail

// Per-prime residue data for a hypothesis: s_p reduced by the p-power
// prefactor plus the Bernoulli basis values mod p. Hard errors on prefactor
// violations; the refutation path collects them leniently instead.
inline std::vector<PrimeData> collect_residues(const Hypothesis& hyp, unsigned r, const std::vector<uint64_t>& primes,
                                               unsigned jobs = 1) {
    detail::validate_hypothesis(hyp);
    return detail::collect_all(hyp, r, primes, /*strict=*/true, jobs);
}

namespace detail {

struct FitOptions {
    mpz_class bound = 1000000;
    unsigned holdout = 2;
    unsigned jobs = 1;
    bool refute_mode = false;          // holdout failure refutes instead of Inconclusive
    size_t max_lattice_primes = 16;    // fit_multi: lattice stays small, the rest verify
};

inline FitResult fit_from_data(const Hypothesis& hyp, unsigned r, const std::vector<PrimeData>& data,
                               const FitOptions& opt);

} // namespace detail

// One unknown: per prime c == s_p / basis_p (mod p), CRT-combined and
// rationally reconstructed, then verified on held-out primes.
inline FitResult fit_single(const Hypothesis& hyp, unsigned r, std::vector<uint64_t> primes,
                            const mpz_class& bound, unsigned holdout = 2, unsigned jobs = 1) {
    detail::validate_hypothesis(hyp);
    if (hyp.basis.size() != 1) fail(errc::precondition_violated, "fit_single takes a one-term basis");
    if (primes.size() < 3) fail(errc::precondition_violated, "fit_single needs at least 3 primes");
    std::sort(primes.begin(), primes.end());
    auto data = detail::collect_all(hyp, r, primes, true, jobs);
    detail::FitOptions opt;
    opt.bound = bound;
    opt.holdout = holdout;
    opt.jobs = jobs;
    return detail::fit_from_data(hyp, r, data, opt);
}

// Several unknowns: short-vector search in the scaled congruence lattice.
inline FitResult fit_multi(const Hypothesis& hyp, unsigned r, std::vector<uint64_t> primes,
                           const mpz_class& bound, unsigned holdout = 2, unsigned jobs = 1) {
    detail::validate_hypothesis(hyp);
    if (hyp.basis.size() < 2) fail(errc::precondition_violated, "fit_multi takes at least two basis terms");
    if (primes.size() < hyp.basis.size() + 3)
        fail(errc::precondition_violated, "fit_multi needs at least t + 3 primes");
    std::sort(primes.begin(), primes.end());
    auto data = detail::collect_all(hyp, r, primes, true, jobs);
    detail::FitOptions opt;
    opt.bound = bound;
    opt.holdout = holdout;
    opt.jobs = jobs;
    return detail::fit_from_data(hyp, r, data, opt);
}

// Fit with lenient collection: prefactor violations become forced denominator
// factors, and a candidate that fails holdout refutes the shape at the bound.
inline FitResult refute_hypothesis(const Hypothesis& hyp, unsigned r, std::vector<uint64_t> primes,
                                   const mpz_class& bound, unsigned holdout = 2, unsigned jobs = 1) {
    detail::validate_hypothesis(hyp);
    if (primes.empty()) fail(errc::precondition_violated, "refute_hypothesis needs primes");
    std::sort(primes.begin(), primes.end());

    FitResult res;
    res.n = hyp.n;
    res.r = static_cast<int>(r);
    res.basis = hyp.basis;
    if (hyp.basis.empty()) {
        res.status = FitStatus::Inconclusive;
        res.note = "no odd partitions of n, empty basis";
        return res;
    }
    auto data = detail::collect_all(hyp, r, primes, /*strict=*/false, jobs);

    // Valuation argument: num * p^e * B == den * s (mod p^{e+1}) with
    // v_p(s) < e forces p^{e - v_p(s)} | den. Aggregate over all primes.
    mpz_class forced = 1;
    size_t violations = 0;
    for (const auto& d : data)
        if (!d.prefactor_ok) {
            ++violations;
            mpz_class pe;
            mpz_ui_pow_ui(pe.get_mpz_t(), d.p, d.forced_den_exp);
            forced *= pe;
        }
    if (violations > 0) {
        std::ostringstream note;
        note << "prefactor fails at " << violations << "/" << data.size()
             << " primes; any denominator must be divisible by a forced factor with "
             << mpz_sizeinbase(forced.get_mpz_t(), 10) << " digits";
        if (forced > bound) {
            res.status = FitStatus::RefutedAtBound;
            res.note = note.str() + "; exceeds bound " + bound.get_str();
            return res;
        }
        res.status = FitStatus::Inconclusive;
        res.note = note.str() + "; within bound " + bound.get_str() + ", shape not decided";
        return res;
    }

    detail::FitOptions opt;
    opt.bound = bound;
    opt.holdout = holdout;
    opt.jobs = jobs;
    opt.refute_mode = true;
    return detail::fit_from_data(hyp, r, data, opt);
}

namespace detail {

inline FitResult fit_from_data(const Hypothesis& hyp, unsigned r, const std::vector<PrimeData>& data,
                               const FitOptions& opt) {
    FitResult res;
    res.n = hyp.n;
    res.r = static_cast<int>(r);
    res.basis = hyp.basis;
    const size_t t = hyp.basis.size();

    if (data.size() <= opt.holdout)
        fail(errc::precondition_violated, "not enough primes to hold out " + std::to_string(opt.holdout));
    std::vector<PrimeData> fitting(data.begin(), data.end() - opt.holdout);
    std::vector<PrimeData> held(data.end() - opt.holdout, data.end());
    for (const auto& d : held) res.holdout_primes.push_back(d.p);

    std::ostringstream note;
    std::vector<const PrimeData*> usable;
    for (const auto& d : fitting) {
        bool all_zero = std::all_of(d.basis_vals.begin(), d.basis_vals.end(),
                                    [](uint64_t v) { return v == 0; });
        if (all_zero) {
            note << "p=" << d.p << " skipped (basis values all 0 mod p); ";
            continue;
        }
        usable.push_back(&d);
    }

    if (t == 1) {
        std::vector<std::pair<mpz_class, mpz_class>> congruences;
        for (const PrimeData* d : usable) {
            if (d->basis_vals[0] == 0) { note << "p=" << d->p << " skipped (basis value 0 mod p); "; continue; }
            uint64_t c = d->s * invmod_unit(d->basis_vals[0], d->p) % d->p;
            congruences.emplace_back(mpz_class(c), mpz_class(d->p));
            res.primes_used.push_back(d->p);
        }
        if (congruences.size() < 1) fail(errc::precondition_violated, "no usable fitting primes");
        auto [x, M] = crt_combine(congruences);
        if (2 * opt.bound * opt.bound >= M)
            fail(errc::precondition_violated, "2*bound^2 must stay below the prime product");
        Rational c(0);
        try {
            c = rational_reconstruct(x, M, opt.bound);
        } catch (const Error& e) {
            if (e.code() != errc::not_found) throw;
            res.status = FitStatus::RefutedAtBound;
            res.note = note.str() + "no rational with |num|, den <= " + opt.bound.get_str() +
                       " matches the residue data";
            return res;
        }
        res.coefficients = {c};
    } else {
        // Unknowns (u_1..u_t, v) with u.A_j == v s_j (mod p_j): embed each
        // congruence as a column scaled by W = prod p_j, with the prime
        // moduli as extra basis vectors. A tail of zeros in a reduced row
        // means the congruences hold exactly.
        std::vector<const PrimeData*> lattice_primes(
            usable.begin(), usable.begin() + std::min(opt.max_lattice_primes, usable.size()));
        const size_t J = lattice_primes.size();
        if (J < t + 1) fail(errc::precondition_violated, "not enough usable primes for the lattice");
        mpz_class W = 1;
        for (const PrimeData* d : lattice_primes) {
            W *= static_cast<unsigned long>(d->p);
            res.primes_used.push_back(d->p);
        }
        const size_t dim = t + 1 + J;
        IntMatrix basis(dim, std::vector<mpz_class>(dim, 0));
        for (size_t i = 0; i < t + 1; ++i) basis[i][i] = 1;
        for (size_t j = 0; j < J; ++j) {
            const PrimeData* d = lattice_primes[j];
            for (size_t i = 0; i < t; ++i) basis[i][t + 1 + j] = W * static_cast<unsigned long>(d->basis_vals[i]);
            basis[t][t + 1 + j] = -(W * static_cast<unsigned long>(d->s));
            basis[t + 1 + j][t + 1 + j] = W * static_cast<unsigned long>(d->p);
        }
        IntMatrix reduced = lll_reduce(std::move(basis));

        bool found = false;
        for (const auto& row : reduced) {
            bool tail_zero = true;
            for (size_t j = 0; j < J; ++j)
                if (row[t + 1 + j] != 0) { tail_zero = false; break; }
            if (!tail_zero || row[t] == 0) continue;
            mpz_class v = row[t];
            bool within = abs(v) <= opt.bound;
            std::vector<Rational> coeffs;
            for (size_t i = 0; i < t; ++i) {
                if (abs(row[i]) > opt.bound) within = false;
                coeffs.emplace_back(row[i], v);
            }
            if (!within) continue;
            res.coefficients = std::move(coeffs);
            found = true;
            break;
        }
        if (!found) {
            res.status = FitStatus::RefutedAtBound;
            res.note = note.str() + "no relation with coefficients within " + opt.bound.get_str() +
                       " in the reduced lattice";
            return res;
        }
        // remaining usable primes double as extra verification
        for (size_t i = J; i < usable.size(); ++i) {
            bool verifiable = false;
            if (!coefficients_match(res.coefficients, *usable[i], verifiable) && verifiable) {
                res.status = opt.refute_mode ? FitStatus::RefutedAtBound : FitStatus::Inconclusive;
                res.note = note.str() + "candidate fails at fitting prime p=" + std::to_string(usable[i]->p);
                return res;
            }
        }
    }

    size_t verified = 0;
    for (const auto& d : held) {
        bool all_zero = std::all_of(d.basis_vals.begin(), d.basis_vals.end(),
                                    [](uint64_t v) { return v == 0; });
        if (all_zero) { note << "holdout p=" << d.p << " unverifiable (basis 0); "; continue; }
        bool verifiable = false;
        bool ok = coefficients_match(res.coefficients, d, verifiable);
        if (!verifiable) { note << "holdout p=" << d.p << " unverifiable (denominator); "; continue; }
        if (!ok) {
            res.status = opt.refute_mode ? FitStatus::RefutedAtBound : FitStatus::Inconclusive;
            res.note = note.str() + (opt.refute_mode
                           ? "candidate within bound fails holdout at p=" + std::to_string(d.p)
                           : "holdout mismatch at p=" + std::to_string(d.p));
            return res;
        }
        ++verified;
    }
    if (verified < 2) {
        res.status = FitStatus::Inconclusive;
        res.note = note.str() + "fewer than 2 verifiable holdout primes";
        return res;
    }
    res.holdout_verified = true;
    res.status = FitStatus::Fitted;
    std::ostringstream fitted;
    fitted << note.str() << "verified on " << verified << " holdout primes";
    res.note = fitted.str();
    return res;
}

} // namespace detail

inline nlohmann::ordered_json fit_result_to_json(const FitResult& res) {
    nlohmann::ordered_json j;
    j["n"] = res.n;
    j["r"] = res.r;
    j["basis"] = res.basis;
    j["coefficients"] = nlohmann::ordered_json::array();
    for (const auto& c : res.coefficients) {
        nlohmann::ordered_json cj;
        mpz_class num = c.num(), den = c.den();
        if (num.fits_slong_p()) cj["num"] = num.get_si();
        else cj["num"] = num.get_str();
        if (den.fits_slong_p()) cj["den"] = den.get_si();
        else cj["den"] = den.get_str();
        j["coefficients"].push_back(cj);
    }
    j["primes_used"] = res.primes_used;
    j["holdout"] = res.holdout_primes;
    j["holdout_verified"] = res.holdout_verified;
    j["status"] = fit_status_name(res.status);
    j["note"] = res.note;
    return j;
}

} // namespace mhslab
