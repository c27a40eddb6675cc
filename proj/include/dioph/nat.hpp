#pragma once

// Nat: arbitrary-precision strictly positive integer.
//
// Every scalar accepted or produced by the library is a Nat. Construction
// from anything < 1 throws Errc::InvalidInput, so downstream gcd / quotient /
// root steps never see zero. Only operations that preserve positivity are
// exposed directly (multiplication, powers, comparison); division goes
// through exact_div in arithmetic.hpp.

#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "dioph/error.hpp"

namespace dioph {

using BigInt = boost::multiprecision::cpp_int;

class Nat {
public:
    Nat() : v_(1) {}

    template <std::integral T>
    Nat(T v) { // NOLINT: implicit from literals is intended
        if constexpr (std::is_signed_v<T>) {
            if (v < 1) {
                throw Error(Errc::InvalidInput, "value must be >= 1, got " + std::to_string(v));
            }
        }
        v_ = v;
        check();
    }

    explicit Nat(BigInt v) : v_(std::move(v)) { check(); }

    /// Parses a decimal string of digits only (no sign, no whitespace).
    static Nat parse(std::string_view s) {
        if (s.empty() || s.size() > 100000) {
            throw Error(Errc::InvalidInput, "expected a positive decimal integer, got '" + std::string(s) + "'");
        }
        for (char c : s) {
            if (c < '0' || c > '9') {
                throw Error(Errc::InvalidInput, "expected a positive decimal integer, got '" + std::string(s) + "'");
            }
        }
        BigInt v{std::string(s)};
        if (v < 1) {
            throw Error(Errc::InvalidInput, "value must be >= 1, got '" + std::string(s) + "'");
        }
        return Nat(std::move(v));
    }

    const BigInt& value() const noexcept { return v_; }

    std::string str() const { return v_.str(); }

    bool is_one() const noexcept { return v_ == 1; }

    bool fits_u64() const noexcept { return v_ <= std::numeric_limits<std::uint64_t>::max(); }

    std::uint64_t to_u64() const {
        if (!fits_u64()) {
            throw Error(Errc::InvalidInput, "value " + str() + " does not fit in 64 bits");
        }
        return v_.convert_to<std::uint64_t>();
    }

    Nat& operator*=(const Nat& o) {
        v_ *= o.v_;
        return *this;
    }

    friend Nat operator*(Nat a, const Nat& b) {
        a *= b;
        return a;
    }

    friend bool operator==(const Nat& a, const Nat& b) noexcept { return a.v_ == b.v_; }

    friend std::strong_ordering operator<=>(const Nat& a, const Nat& b) noexcept {
        int c = a.v_.compare(b.v_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Nat& n) { return os << n.v_; }

private:
    void check() const {
        if (v_ < 1) {
            throw Error(Errc::InvalidInput, "value must be >= 1, got " + v_.str());
        }
    }

    BigInt v_;
};

inline Nat pow(const Nat& base, unsigned exponent) {
    return Nat(boost::multiprecision::pow(base.value(), exponent));
}

} // namespace dioph
