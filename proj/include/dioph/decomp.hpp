#pragma once

// Constructive decompositions behind every parametrization.
//
// Each procedure runs the gcd chain in a fixed order (gcd first, then exact
// quotients, then exact roots). gcds are unique, so every result is fully
// determined by its input. Hypotheses are always checked at runtime and a
// violation throws PreconditionViolated.

#include <string>

#include "dioph/arithmetic.hpp"

namespace dioph {

/// Coprime factors whose n-th powers multiply to c^n.
struct Lemma3Result {
    Nat a1;
    Nat b1;

    friend bool operator==(const Lemma3Result&, const Lemma3Result&) = default;
};

/// a = d * a1^n, b = K * b1^n, c = a1 * b1, d * K = k.
struct Prop1Result {
    Nat d;
    Nat K;
    Nat a1;
    Nat b1;

    friend bool operator==(const Prop1Result&, const Prop1Result&) = default;
};

/// Reduction of x*y = z^n to the system
///   d^2 * X * Y = Z^n * w^(n-2),  w^(n-2) = v * d^2
/// with x = delta*X, y = delta*Y, z = w*Z, delta = w*d.
struct PowerReduction {
    Nat delta;
    Nat X;
    Nat Y;
    Nat w;
    Nat d;
    Nat Z;
    Nat v;

    friend bool operator==(const PowerReduction&, const PowerReduction&) = default;
};

/// Reduction of x*y*z = w^n to the system
///   d^(n-2) = D * v^2,  X * Y * z = W^n * D
/// with x = delta*X, y = delta*Y, w = W*d, delta = d*v.
struct BoxReduction {
    Nat delta;
    Nat X;
    Nat Y;
    Nat d;
    Nat W;
    Nat v;
    Nat D;

    friend bool operator==(const BoxReduction&, const BoxReduction&) = default;
};

namespace detail {

inline void require_exponent(unsigned n, unsigned min) {
    if (n < min) {
        throw Error(Errc::InvalidInput, "exponent must be >= " + std::to_string(min) + ", got " + std::to_string(n));
    }
}

inline void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(Errc::PreconditionViolated, what);
    }
}

} // namespace detail

inline Lemma3Result lemma3_decompose(const Nat& a, const Nat& b, const Nat& c, unsigned n) {
    detail::require_exponent(n, 1);
    detail::require(a * b == pow(c, n), "a*b != c^n");
    detail::require(coprime(a, b), "gcd(a, b) != 1");
    Lemma3Result r{nth_root_exact(a, n), nth_root_exact(b, n)};
    return r;
}

inline Prop1Result prop1_decompose(const Nat& a, const Nat& b, const Nat& k, const Nat& c, unsigned n) {
    detail::require_exponent(n, 1);
    detail::require(a * b == k * pow(c, n), "a*b != k*c^n");
    detail::require(coprime(a, b), "gcd(a, b) != 1");
    Nat d = gcd(a, k);
    Nat A = exact_div(a, d);
    Nat K = exact_div(k, d);
    Nat B = exact_div(b, K);
    return Prop1Result{std::move(d), std::move(K), nth_root_exact(A, n), nth_root_exact(B, n)};
}

inline PowerReduction prop2_reduce(const Nat& x, const Nat& y, const Nat& z, unsigned n) {
    detail::require_exponent(n, 2);
    detail::require(x * y == pow(z, n), "x*y != z^n");
    Nat delta = gcd(x, y);
    Nat X = exact_div(x, delta);
    Nat Y = exact_div(y, delta);
    Nat w = gcd(z, delta);
    Nat d = exact_div(delta, w);
    Nat Z = exact_div(z, w);
    // d^2 | w^(n-2) because gcd(Z, d) = 1 and d^2 * X * Y = Z^n * w^(n-2).
    Nat v = exact_div(pow(w, n - 2), d * d);
    return PowerReduction{std::move(delta), std::move(X), std::move(Y), std::move(w),
                          std::move(d),     std::move(Z), std::move(v)};
}

inline BoxReduction prop3_reduce(const Nat& x, const Nat& y, const Nat& z, const Nat& w, unsigned n) {
    detail::require_exponent(n, 2);
    detail::require(x * y * z == pow(w, n), "x*y*z != w^n");
    Nat delta = gcd(x, y);
    Nat X = exact_div(x, delta);
    Nat Y = exact_div(y, delta);
    Nat d = gcd(w, delta);
    Nat W = exact_div(w, d);
    Nat v = exact_div(delta, d);
    Nat D = exact_div(pow(d, n - 2), v * v);
    return BoxReduction{std::move(delta), std::move(X), std::move(Y), std::move(d),
                        std::move(W),     std::move(v), std::move(D)};
}

} // namespace dioph
