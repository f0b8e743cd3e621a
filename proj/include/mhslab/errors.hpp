#pragma once

#include <stdexcept>
#include <string>

namespace mhslab {

enum class errc {
    not_prime,
    limit_exceeded,
    bad_exponent,
    context_mismatch,
    not_a_unit,
    denominator_not_unit,
    moduli_not_coprime,
    not_found,
    precondition_violated,
    unknown_theorem,
    prime_inadmissible,
    prefactor_mismatch,
    no_relation_found,
    inconsistent_holdout,
    dependent_rows,
    corrupt_cache,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::limit_exceeded: return "LimitExceeded";
    case errc::bad_exponent: return "BadExponent";
    case errc::context_mismatch: return "ContextMismatch";
    case errc::not_a_unit: return "NotAUnit";
    case errc::denominator_not_unit: return "DenominatorNotUnit";
    case errc::moduli_not_coprime: return "ModuliNotCoprime";
    case errc::not_found: return "NotFound";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::unknown_theorem: return "UnknownTheorem";
    case errc::prime_inadmissible: return "PrimeInadmissible";
    case errc::prefactor_mismatch: return "PrefactorMismatch";
    case errc::no_relation_found: return "NoRelationFound";
    case errc::inconsistent_holdout: return "InconsistentHoldout";
    case errc::dependent_rows: return "DependentRows";
    case errc::corrupt_cache: return "CorruptCache";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace mhslab
