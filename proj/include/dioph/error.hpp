#pragma once

// Error vocabulary shared by every module. All failures are reported by
// throwing dioph::Error; the kind tells callers (and the CLI) what happened.

#include <stdexcept>
#include <string>
#include <string_view>

namespace dioph {

enum class Errc {
    InvalidInput,              // zero, negative or unparsable scalar
    NotDivisible,              // exact_div on a non-multiple
    NotPerfectPower,           // nth_root_exact on a non-power
    PreconditionViolated,      // decomposition hypothesis does not hold
    InvalidParams,             // parameter tuple breaks a gcd side condition
    NotASolution,              // tuple does not satisfy the equation
    NotCoprime,                // general-k extraction needs gcd(x, y) = 1
    InternalContractViolation, // an exactness step failed on a genuine solution
    BoundTooLarge,             // enumeration would exceed the safety cap
};

constexpr std::string_view to_string(Errc e) noexcept {
    switch (e) {
        case Errc::InvalidInput: return "InvalidInput";
        case Errc::NotDivisible: return "NotDivisible";
        case Errc::NotPerfectPower: return "NotPerfectPower";
        case Errc::PreconditionViolated: return "PreconditionViolated";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::NotASolution: return "NotASolution";
        case Errc::NotCoprime: return "NotCoprime";
        case Errc::InternalContractViolation: return "InternalContractViolation";
        case Errc::BoundTooLarge: return "BoundTooLarge";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace dioph
