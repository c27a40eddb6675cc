#pragma once

// Exact integer kernel: gcd, exact division and exact n-th roots over Nat.
// Everything above this layer is built from these primitives only.

#include <optional>
#include <string>

#include <boost/multiprecision/integer.hpp>

#include "dioph/error.hpp"
#include "dioph/nat.hpp"

namespace dioph {

inline Nat gcd(const Nat& a, const Nat& b) {
    return Nat(boost::multiprecision::gcd(a.value(), b.value()));
}

inline bool coprime(const Nat& a, const Nat& b) { return gcd(a, b).is_one(); }

/// True when b divides a.
inline bool divides(const Nat& b, const Nat& a) { return a.value() % b.value() == 0; }

/// Returns q with q * b == a; throws NotDivisible otherwise.
inline Nat exact_div(const Nat& a, const Nat& b) {
    BigInt q;
    BigInt r;
    boost::multiprecision::divide_qr(a.value(), b.value(), q, r);
    if (r != 0) {
        throw Error(Errc::NotDivisible, b.str() + " does not divide " + a.str());
    }
    return Nat(std::move(q));
}

/// Largest r >= 1 with r^n <= a, found by bisection on r.
inline Nat floor_root(const Nat& a, unsigned n) {
    if (n == 0) {
        throw Error(Errc::InvalidInput, "root index must be >= 1");
    }
    if (n == 1 || a.is_one()) {
        return a;
    }
    // 2^b <= a < 2^(b+1) gives r < 2^(b/n + 1).
    const unsigned bits = boost::multiprecision::msb(a.value());
    BigInt lo = 1;
    BigInt hi = BigInt(1) << (bits / n + 1); // hi^n > a
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) >> 1;
        if (boost::multiprecision::pow(mid, n) <= a.value()) {
            lo = std::move(mid);
        } else {
            hi = std::move(mid);
        }
    }
    return Nat(std::move(lo));
}

/// r with r^n == a, or nullopt when a is not a perfect n-th power.
inline std::optional<Nat> try_nth_root(const Nat& a, unsigned n) {
    Nat r = floor_root(a, n);
    if (pow(r, n) == a) {
        return r;
    }
    return std::nullopt;
}

inline Nat nth_root_exact(const Nat& a, unsigned n) {
    if (auto r = try_nth_root(a, n)) {
        return *std::move(r);
    }
    throw Error(Errc::NotPerfectPower, a.str() + " is not a perfect " + std::to_string(n) + "-th power");
}

inline bool is_perfect_power(const Nat& a, unsigned n) { return try_nth_root(a, n).has_value(); }

} // namespace dioph
