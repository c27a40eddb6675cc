#pragma once

// Parametric solution families and their canonical extractors.
//
//   x*y = z^n, n = 2..6        construct_power / extract_power
//   x*y = k*z^n                construct_general / extract_general
//   x*y*z = w^2                construct_box / extract_box
//   x*y = v^2, y*z = w^2       construct_system / extract_system
//
// construct_* maps a parameter tuple satisfying its gcd side conditions to a
// solution. extract_* runs the constructive gcd chain on a solution and
// returns the parameters it lands on (the "canonical" ones) together with a
// trace of every intermediate, so construct(extract(s)) == s. The maps are
// not injective; nothing here assumes they are.
//
// Known defects in the published formulas and how they are handled:
//  * x*y = z^2: the family is x = delta*p1^2, y = delta*p2^2, z = delta*p1*p2
//    (squares on p1, p2; without them x*y != z^2).
//  * xy = k z^n: the family only covers solutions with gcd(x, y) = 1, e.g.
//    (2, 2, 2) with k = 1, n = 2 has no preimage. extract_general refuses
//    non-coprime input with NotCoprime.
//  * system: v = c*e^2*f*h^2*i*j^3*r. The factor r is missing from the
//    published statement; SystemV::without_r reproduces it for comparison.

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dioph/decomp.hpp"
#include "dioph/equation.hpp"

namespace dioph {

struct NamedValue {
    std::string name;
    Nat value;

    friend bool operator==(const NamedValue&, const NamedValue&) = default;
};

/// Ordered ledger of the intermediates produced by an extraction.
class ExtractionTrace {
public:
    void record(std::string symbol, Nat value) { entries_.push_back({std::move(symbol), std::move(value)}); }

    const Nat& at(std::string_view symbol) const {
        auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const NamedValue& e) { return e.name == symbol; });
        if (it == entries_.end()) {
            throw Error(Errc::InvalidInput, "trace has no symbol '" + std::string(symbol) + "'");
        }
        return it->value;
    }

    const std::vector<NamedValue>& entries() const noexcept { return entries_; }

    friend bool operator==(const ExtractionTrace&, const ExtractionTrace&) = default;

private:
    std::vector<NamedValue> entries_;
};

struct Triple {
    Nat x, y, z;
    Tuple tuple() const { return {x, y, z}; }
    friend bool operator==(const Triple&, const Triple&) = default;
};

struct BoxSolution {
    Nat x, y, z, w;
    Tuple tuple() const { return {x, y, z, w}; }
    friend bool operator==(const BoxSolution&, const BoxSolution&) = default;
};

struct SystemSolution {
    Nat x, y, z, v, w;
    Tuple tuple() const { return {x, y, z, v, w}; }
    friend bool operator==(const SystemSolution&, const SystemSolution&) = default;
};

// ---------------------------------------------------------------------------
// Parameter tuples
// ---------------------------------------------------------------------------

struct Pow2Params {
    Nat delta, p1, p2;
    static constexpr unsigned exponent = 2;
    std::vector<NamedValue> fields() const { return {{"delta", delta}, {"p1", p1}, {"p2", p2}}; }
    friend bool operator==(const Pow2Params&, const Pow2Params&) = default;
};

struct Pow3Params {
    Nat d, v1, v2, m, l;
    static constexpr unsigned exponent = 3;
    std::vector<NamedValue> fields() const { return {{"d", d}, {"v1", v1}, {"v2", v2}, {"m", m}, {"l", l}}; }
    friend bool operator==(const Pow3Params&, const Pow3Params&) = default;
};

struct Pow4Params {
    Nat d, t1, t2, f, g;
    static constexpr unsigned exponent = 4;
    std::vector<NamedValue> fields() const { return {{"d", d}, {"t1", t1}, {"t2", t2}, {"f", f}, {"g", g}}; }
    friend bool operator==(const Pow4Params&, const Pow4Params&) = default;
};

struct Pow5Params {
    Nat q, e1, e2, r1, r2, i1, i2;
    static constexpr unsigned exponent = 5;
    std::vector<NamedValue> fields() const {
        return {{"q", q}, {"e1", e1}, {"e2", e2}, {"r1", r1}, {"r2", r2}, {"i1", i1}, {"i2", i2}};
    }
    friend bool operator==(const Pow5Params&, const Pow5Params&) = default;
};

struct Pow6Params {
    Nat p, e1, e2, n1, n2, j1, j2;
    static constexpr unsigned exponent = 6;
    std::vector<NamedValue> fields() const {
        return {{"p", p}, {"e1", e1}, {"e2", e2}, {"n1", n1}, {"n2", n2}, {"j1", j1}, {"j2", j2}};
    }
    friend bool operator==(const Pow6Params&, const Pow6Params&) = default;
};

using PowerParams = std::variant<Pow2Params, Pow3Params, Pow4Params, Pow5Params, Pow6Params>;

inline unsigned exponent_of(const PowerParams& p) {
    return std::visit([](const auto& q) { return std::decay_t<decltype(q)>::exponent; }, p);
}

inline std::vector<NamedValue> fields_of(const PowerParams& p) {
    return std::visit([](const auto& q) { return q.fields(); }, p);
}

struct GeneralParams {
    Nat k1, k2, t1, t2;
    unsigned n = 1;
    Nat k;
    std::vector<NamedValue> fields() const {
        return {{"k1", k1}, {"k2", k2}, {"t1", t1}, {"t2", t2}, {"n", Nat(n)}, {"k", k}};
    }
    friend bool operator==(const GeneralParams&, const GeneralParams&) = default;
};

struct BoxParams {
    Nat d, r1, r2, t, u1, u2;
    std::vector<NamedValue> fields() const {
        return {{"d", d}, {"r1", r1}, {"r2", r2}, {"t", t}, {"u1", u1}, {"u2", u2}};
    }
    friend bool operator==(const BoxParams&, const BoxParams&) = default;
};

struct SystemParams {
    Nat c, h, i, j, e, f, r, t;
    std::vector<NamedValue> fields() const {
        return {{"c", c}, {"h", h}, {"i", i}, {"j", j}, {"e", e}, {"f", f}, {"r", r}, {"t", t}};
    }
    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Parameter field names in the order used by fields() and the CLI.
inline std::vector<std::string_view> param_names(Equation e) {
    switch (e) {
        case Equation::pow2: return {"delta", "p1", "p2"};
        case Equation::pow3: return {"d", "v1", "v2", "m", "l"};
        case Equation::pow4: return {"d", "t1", "t2", "f", "g"};
        case Equation::pow5: return {"q", "e1", "e2", "r1", "r2", "i1", "i2"};
        case Equation::pow6: return {"p", "e1", "e2", "n1", "n2", "j1", "j2"};
        case Equation::box: return {"d", "r1", "r2", "t", "u1", "u2"};
        case Equation::system: return {"c", "h", "i", "j", "e", "f", "r", "t"};
        case Equation::general_k: return {"k1", "k2", "t1", "t2"};
    }
    return {};
}

/// Builds power parameters from values listed in param_names() order.
inline PowerParams make_power_params(unsigned n, std::span<const Nat> v) {
    const Equation eq = power_equation(n);
    if (v.size() != param_names(eq).size()) {
        throw Error(Errc::InvalidInput, std::string(to_string(eq)) + " takes " +
                                            std::to_string(param_names(eq).size()) + " parameters");
    }
    switch (n) {
        case 2: return Pow2Params{v[0], v[1], v[2]};
        case 3: return Pow3Params{v[0], v[1], v[2], v[3], v[4]};
        case 4: return Pow4Params{v[0], v[1], v[2], v[3], v[4]};
        case 5: return Pow5Params{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
        default: return Pow6Params{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    }
}

// ---------------------------------------------------------------------------
// Side conditions
// ---------------------------------------------------------------------------

namespace detail {

inline void require_coprime(const Nat& a, const Nat& b, std::string_view an, std::string_view bn) {
    if (!coprime(a, b)) {
        throw Error(Errc::InvalidParams, "gcd(" + std::string(an) + ", " + std::string(bn) + ") = " +
                                             gcd(a, b).str() + ", must be 1");
    }
}

} // namespace detail

inline void validate(const PowerParams& params) {
    using detail::require_coprime;
    std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Pow2Params>) {
                require_coprime(p.p1, p.p2, "p1", "p2");
            } else if constexpr (std::is_same_v<P, Pow3Params>) {
                require_coprime(p.v1, p.v2, "v1", "v2");
                require_coprime(p.m, p.l, "m", "l");
            } else if constexpr (std::is_same_v<P, Pow4Params>) {
                require_coprime(p.t1, p.t2, "t1", "t2");
                require_coprime(p.f, p.g, "f", "g");
            } else if constexpr (std::is_same_v<P, Pow5Params>) {
                require_coprime(p.e1, p.e2, "e1", "e2");
                require_coprime(p.r1, p.r2, "r1", "r2");
                require_coprime(p.i1, p.i2, "i1", "i2");
            } else {
                require_coprime(p.e1, p.e2, "e1", "e2");
                require_coprime(p.n1, p.n2, "n1", "n2");
                require_coprime(p.j1, p.j2, "j1", "j2");
            }
        },
        params);
}

inline void validate(const GeneralParams& p) {
    if (p.n < 1) {
        throw Error(Errc::InvalidParams, "n must be >= 1");
    }
    detail::require_coprime(p.t1, p.t2, "t1", "t2");
    detail::require_coprime(p.k1, p.k2, "k1", "k2");
    if (p.k1 * p.k2 != p.k) {
        throw Error(Errc::InvalidParams, "k1*k2 = " + (p.k1 * p.k2).str() + ", must equal k = " + p.k.str());
    }
}

inline void validate(const BoxParams& p) {
    detail::require_coprime(p.r1, p.r2, "r1", "r2");
    detail::require_coprime(p.u1, p.u2, "u1", "u2");
    detail::require_coprime(p.t, p.r1 * p.r2, "t", "r1*r2");
}

inline void validate(const SystemParams& p) {
    detail::require_coprime(p.i, p.j, "i", "j");
    detail::require_coprime(p.e, p.f, "e", "f");
}

// ---------------------------------------------------------------------------
// Forward construction
// ---------------------------------------------------------------------------

inline Triple construct_power(const PowerParams& params) {
    validate(params);
    return std::visit(
        [](const auto& p) -> Triple {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Pow2Params>) {
                return {p.delta * pow(p.p1, 2), p.delta * pow(p.p2, 2), p.delta * p.p1 * p.p2};
            } else if constexpr (std::is_same_v<P, Pow3Params>) {
                const Nat d3 = pow(p.d, 3);
                return {d3 * pow(p.v1, 2) * p.v2 * pow(p.m, 3), d3 * p.v1 * pow(p.v2, 2) * pow(p.l, 3),
                        pow(p.d, 2) * p.v1 * p.v2 * p.m * p.l};
            } else if constexpr (std::is_same_v<P, Pow4Params>) {
                const Nat d2 = pow(p.d, 2);
                return {d2 * pow(p.t1, 3) * p.t2 * pow(p.f, 4), d2 * p.t1 * pow(p.t2, 3) * pow(p.g, 4),
                        p.d * p.t1 * p.t2 * p.f * p.g};
            } else if constexpr (std::is_same_v<P, Pow5Params>) {
                const Nat q5 = pow(p.q, 5);
                return {q5 * pow(p.e1, 3) * pow(p.e2, 2) * pow(p.r1, 4) * p.r2 * pow(p.i1, 5),
                        q5 * pow(p.e1, 2) * pow(p.e2, 3) * p.r1 * pow(p.r2, 4) * pow(p.i2, 5),
                        pow(p.q, 2) * p.e1 * p.e2 * p.r1 * p.r2 * p.i1 * p.i2};
            } else {
                const Nat p3 = pow(p.p, 3);
                return {p3 * pow(p.e1, 4) * pow(p.e2, 2) * pow(p.n1, 5) * p.n2 * pow(p.j1, 6),
                        p3 * pow(p.e1, 2) * pow(p.e2, 4) * p.n1 * pow(p.n2, 5) * pow(p.j2, 6),
                        p.p * p.e1 * p.e2 * p.n1 * p.n2 * p.j1 * p.j2};
            }
        },
        params);
}

inline Triple construct_general(const GeneralParams& p) {
    validate(p);
    return {p.k1 * pow(p.t1, p.n), p.k2 * pow(p.t2, p.n), p.t1 * p.t2};
}

inline BoxSolution construct_box(const BoxParams& p) {
    validate(p);
    return {p.d * pow(p.r1, 2) * p.u1, p.d * pow(p.r2, 2) * p.u2, pow(p.t, 2) * p.u1 * p.u2,
            p.d * p.r1 * p.r2 * p.t * p.u1 * p.u2};
}

/// Which v formula construct_system uses. without_r omits the factor r and
/// is wrong whenever r > 1; it exists only to reproduce that defect.
enum class SystemV { corrected, without_r };

inline SystemSolution construct_system(const SystemParams& p, SystemV formula = SystemV::corrected) {
    validate(p);
    Nat v = p.c * pow(p.e, 2) * p.f * pow(p.h, 2) * p.i * pow(p.j, 3);
    if (formula == SystemV::corrected) {
        v *= p.r;
    }
    return {p.c * p.h * pow(p.e, 2) * pow(p.j, 2) * pow(p.r, 2),
            p.c * pow(p.h, 3) * pow(p.e, 2) * pow(p.j, 4) * pow(p.i, 2) * pow(p.f, 2),
            p.c * p.h * pow(p.i, 2) * pow(p.t, 2),
            std::move(v),
            p.c * p.e * p.f * p.t * pow(p.h, 2) * pow(p.i, 2) * pow(p.j, 2)};
}

// ---------------------------------------------------------------------------
// Canonical extraction
// ---------------------------------------------------------------------------

struct PowerExtraction {
    PowerParams params;
    ExtractionTrace trace;
};

struct BoxExtraction {
    BoxParams params;
    ExtractionTrace trace;
};

struct SystemExtraction {
    SystemParams params;
    ExtractionTrace trace;
};

namespace detail {

// Exactness failures inside an extraction chain on a verified solution mean
// the chain itself is wrong, not the input.
template <class F>
auto run_chain(std::string_view family, F&& chain) {
    try {
        return chain();
    } catch (const Error& e) {
        if (e.code() == Errc::NotDivisible || e.code() == Errc::NotPerfectPower ||
            e.code() == Errc::PreconditionViolated || e.code() == Errc::InvalidParams) {
            throw Error(Errc::InternalContractViolation, std::string(family) + " extraction: " + e.what());
        }
        throw;
    }
}

inline void record(ExtractionTrace& tr, const PowerReduction& r) {
    tr.record("delta", r.delta);
    tr.record("X", r.X);
    tr.record("Y", r.Y);
    tr.record("w", r.w);
    tr.record("d", r.d);
    tr.record("Z", r.Z);
    tr.record("v", r.v);
}

inline PowerExtraction extract_pow2(const Nat& x, const Nat& y, const Nat& z) {
    ExtractionTrace tr;
    const PowerReduction r = prop2_reduce(x, y, z, 2);
    record(tr, r);
    // n = 2 forces v = d = 1, leaving X*Y = Z^2 with gcd(X, Y) = 1.
    const Lemma3Result sq = lemma3_decompose(r.X, r.Y, r.Z, 2);
    tr.record("p1", sq.a1);
    tr.record("p2", sq.b1);
    return {Pow2Params{r.delta, sq.a1, sq.b1}, std::move(tr)};
}

inline PowerExtraction extract_pow3(const Nat& x, const Nat& y, const Nat& z) {
    ExtractionTrace tr;
    const PowerReduction r = prop2_reduce(x, y, z, 3);
    record(tr, r);
    // X*Y = v*Z^3
    const Prop1Result s = prop1_decompose(r.X, r.Y, r.v, r.Z, 3);
    tr.record("v1", s.d);
    tr.record("v2", s.K);
    tr.record("m", s.a1);
    tr.record("l", s.b1);
    return {Pow3Params{r.d, s.d, s.K, s.a1, s.b1}, std::move(tr)};
}

inline PowerExtraction extract_pow4(const Nat& x, const Nat& y, const Nat& z) {
    ExtractionTrace tr;
    const PowerReduction r = prop2_reduce(x, y, z, 4);
    record(tr, r);
    // w^2 = v*d^2 makes d | w.
    const Nat t = exact_div(r.w, r.d);
    tr.record("t", t);
    // X*Y = (Z^2 * t)^2
    const Lemma3Result sq = lemma3_decompose(r.X, r.Y, pow(r.Z, 2) * t, 2);
    tr.record("F", sq.a1);
    tr.record("G", sq.b1);
    // F*G = t*Z^2
    const Prop1Result s = prop1_decompose(sq.a1, sq.b1, t, r.Z, 2);
    tr.record("t1", s.d);
    tr.record("t2", s.K);
    tr.record("f", s.a1);
    tr.record("g", s.b1);
    return {Pow4Params{r.d, s.d, s.K, s.a1, s.b1}, std::move(tr)};
}

inline PowerExtraction extract_pow5(const Nat& x, const Nat& y, const Nat& z) {
    ExtractionTrace tr;
    const PowerReduction r = prop2_reduce(x, y, z, 5);
    record(tr, r);
    // X*Y = v*Z^5
    const Prop1Result s = prop1_decompose(r.X, r.Y, r.v, r.Z, 5);
    tr.record("v1", s.d);
    tr.record("v2", s.K);
    tr.record("i1", s.a1);
    tr.record("i2", s.b1);
    // w = D*r, d = D*q with gcd(r, q) = 1; then D*r^3 = v*q^2 forces q^2 | D.
    const Nat D = gcd(r.w, r.d);
    const Nat rr = exact_div(r.w, D);
    const Nat q = exact_div(r.d, D);
    const Nat e = exact_div(D, pow(q, 2));
    tr.record("D", D);
    tr.record("r", rr);
    tr.record("q", q);
    tr.record("e", e);
    // v1*v2 = e*r^3
    const Prop1Result u = prop1_decompose(s.d, s.K, e, rr, 3);
    tr.record("e1", u.d);
    tr.record("e2", u.K);
    tr.record("r1", u.a1);
    tr.record("r2", u.b1);
    return {Pow5Params{q, u.d, u.K, u.a1, u.b1, s.a1, s.b1}, std::move(tr)};
}

inline PowerExtraction extract_pow6(const Nat& x, const Nat& y, const Nat& z) {
    ExtractionTrace tr;
    const PowerReduction r = prop2_reduce(x, y, z, 6);
    record(tr, r);
    // w^4 = v*d^2 gives d | w^2; t = w^2/d and v = t^2.
    const Nat t = exact_div(pow(r.w, 2), r.d);
    tr.record("t", t);
    // X*Y = v*Z^6
    const Prop1Result s = prop1_decompose(r.X, r.Y, r.v, r.Z, 6);
    tr.record("M1", s.d);
    tr.record("M2", s.K);
    tr.record("j1", s.a1);
    tr.record("j2", s.b1);
    // M1*M2 = t^2
    const Lemma3Result m = lemma3_decompose(s.d, s.K, t, 2);
    tr.record("m1", m.a1);
    tr.record("m2", m.b1);
    // d = p*D, w = D*N with gcd(p, N) = 1; D*N^2 = t*p forces p | D.
    const Nat D = gcd(r.d, r.w);
    const Nat p = exact_div(r.d, D);
    const Nat N = exact_div(r.w, D);
    const Nat e = exact_div(D, p);
    tr.record("D", D);
    tr.record("p", p);
    tr.record("N", N);
    tr.record("e", e);
    // e*N^2 = m1*m2
    const Prop1Result u = prop1_decompose(m.a1, m.b1, e, N, 2);
    tr.record("e1", u.d);
    tr.record("e2", u.K);
    tr.record("n1", u.a1);
    tr.record("n2", u.b1);
    return {Pow6Params{p, u.d, u.K, u.a1, u.b1, s.a1, s.b1}, std::move(tr)};
}

} // namespace detail

inline PowerExtraction extract_power(unsigned n, const Nat& x, const Nat& y, const Nat& z) {
    const Equation eq = power_equation(n);
    if (x * y != pow(z, n)) {
        throw Error(Errc::NotASolution, "x*y != z^" + std::to_string(n));
    }
    return detail::run_chain(to_string(eq), [&] {
        switch (n) {
            case 2: return detail::extract_pow2(x, y, z);
            case 3: return detail::extract_pow3(x, y, z);
            case 4: return detail::extract_pow4(x, y, z);
            case 5: return detail::extract_pow5(x, y, z);
            default: return detail::extract_pow6(x, y, z);
        }
    });
}

inline GeneralParams extract_general(const Nat& k, unsigned n, const Nat& x, const Nat& y, const Nat& z) {
    if (n < 1) {
        throw Error(Errc::InvalidInput, "n must be >= 1");
    }
    if (x * y != k * pow(z, n)) {
        throw Error(Errc::NotASolution, "x*y != k*z^n");
    }
    if (!coprime(x, y)) {
        throw Error(Errc::NotCoprime,
                    "gcd(x, y) = " + gcd(x, y).str() +
                        "; the x = k1*t1^n, y = k2*t2^n family only reaches coprime (x, y). "
                        "Counterexample: (2, 2, 2) with k = 1, n = 2 solves x*y = z^2 but 2 = t1^2 has no solution; "
                        "the pow2..pow6 families cover non-coprime solutions");
    }
    return detail::run_chain("general-k", [&] {
        const Prop1Result s = prop1_decompose(x, y, k, z, n);
        return GeneralParams{s.d, s.K, s.a1, s.b1, n, k};
    });
}

inline BoxExtraction extract_box(const Nat& x, const Nat& y, const Nat& z, const Nat& w) {
    if (x * y * z != pow(w, 2)) {
        throw Error(Errc::NotASolution, "x*y*z != w^2");
    }
    return detail::run_chain("box", [&] {
        ExtractionTrace tr;
        const BoxReduction b = prop3_reduce(x, y, z, w, 2);
        tr.record("delta", b.delta);
        tr.record("X", b.X);
        tr.record("Y", b.Y);
        tr.record("d", b.d);
        tr.record("W", b.W);
        tr.record("v", b.v);
        tr.record("D", b.D);
        // n = 2: D = v = 1, so X*Y*z = W^2.
        const Nat p = gcd(z, b.W);
        const Nat t = exact_div(z, p);
        const Nat r = exact_div(b.W, p);
        // X*Y*t = r^2*p with gcd(t, r) = 1, so t | p.
        const Nat u = exact_div(p, t);
        tr.record("p", p);
        tr.record("t", t);
        tr.record("r", r);
        tr.record("u", u);
        // X*Y = u*r^2
        const Prop1Result s = prop1_decompose(b.X, b.Y, u, r, 2);
        tr.record("u1", s.d);
        tr.record("u2", s.K);
        tr.record("r1", s.a1);
        tr.record("r2", s.b1);
        return BoxExtraction{BoxParams{b.delta, s.a1, s.b1, t, s.d, s.K}, std::move(tr)};
    });
}

inline SystemExtraction extract_system(const Nat& x, const Nat& y, const Nat& z, const Nat& v, const Nat& w) {
    if (x * y != pow(v, 2) || y * z != pow(w, 2)) {
        throw Error(Errc::NotASolution, "x*y != v^2 or y*z != w^2");
    }
    return detail::run_chain("system", [&] {
        ExtractionTrace tr;
        // x*y = v^2: x = a*r^2, y = a*R^2
        const Nat a = gcd(x, y);
        const Nat r = nth_root_exact(exact_div(x, a), 2);
        const Nat R = nth_root_exact(exact_div(y, a), 2);
        // y*z = w^2: z = b*t^2, y = b*T^2
        const Nat b = gcd(y, z);
        const Nat T = nth_root_exact(exact_div(y, b), 2);
        const Nat t = nth_root_exact(exact_div(z, b), 2);
        tr.record("a", a);
        tr.record("r", r);
        tr.record("R", R);
        tr.record("b", b);
        tr.record("T", T);
        tr.record("t", t);
        // a1*R^2 = b1*T^2 with gcd(a1, b1) = 1
        const Nat c = gcd(a, b);
        const Nat a1 = exact_div(a, c);
        const Nat b1 = exact_div(b, c);
        const Nat k = exact_div(pow(T, 2), a1);
        tr.record("c", c);
        tr.record("a1", a1);
        tr.record("b1", b1);
        tr.record("k", k);
        // a1*k = T^2: a1 = d*e^2, k = d*f^2
        const Nat d = gcd(a1, k);
        const Nat e = nth_root_exact(exact_div(a1, d), 2);
        const Nat f = nth_root_exact(exact_div(k, d), 2);
        // R^2 = b1*d*f^2
        const Nat g = exact_div(R, f);
        tr.record("d", d);
        tr.record("e", e);
        tr.record("f", f);
        tr.record("g", g);
        // g^2 = b1*d: b1 = h*i^2, d = h*j^2
        const Nat h = gcd(b1, d);
        const Nat i = nth_root_exact(exact_div(b1, h), 2);
        const Nat j = nth_root_exact(exact_div(d, h), 2);
        tr.record("h", h);
        tr.record("i", i);
        tr.record("j", j);
        return SystemExtraction{SystemParams{c, h, i, j, e, f, r, t}, std::move(tr)};
    });
}

// ---------------------------------------------------------------------------
// Trace replay
//
// Recomposes a trace from its leaf symbols upward, checking every recorded
// intermediate against the recomposed value. Returns the solution the chain
// started from; a mismatch throws InternalContractViolation.
// ---------------------------------------------------------------------------

namespace detail {

class Replay {
public:
    explicit Replay(const ExtractionTrace& tr) : tr_(tr) {}

    const Nat& leaf(std::string_view s) const { return tr_.at(s); }

    Nat derive(std::string_view s, Nat value) const {
        if (tr_.at(s) != value) {
            throw Error(Errc::InternalContractViolation, "trace symbol '" + std::string(s) + "' is " +
                                                             tr_.at(s).str() + ", recomposes to " + value.str());
        }
        return value;
    }

private:
    const ExtractionTrace& tr_;
};

} // namespace detail

inline Triple replay_power(unsigned n, const ExtractionTrace& trace) {
    const detail::Replay t(trace);
    Nat X, Y, Z;
    switch (power_equation(n)) {
        case Equation::pow2: {
            X = t.derive("X", pow(t.leaf("p1"), 2));
            Y = t.derive("Y", pow(t.leaf("p2"), 2));
            Z = t.derive("Z", t.leaf("p1") * t.leaf("p2"));
            t.derive("d", 1);
            t.derive("v", 1);
            break;
        }
        case Equation::pow3: {
            const Nat& v1 = t.leaf("v1");
            const Nat& v2 = t.leaf("v2");
            const Nat v = t.derive("v", v1 * v2);
            X = t.derive("X", v1 * pow(t.leaf("m"), 3));
            Y = t.derive("Y", v2 * pow(t.leaf("l"), 3));
            Z = t.derive("Z", t.leaf("m") * t.leaf("l"));
            t.derive("w", v * pow(t.leaf("d"), 2));
            break;
        }
        case Equation::pow4: {
            const Nat tt = t.derive("t", t.leaf("t1") * t.leaf("t2"));
            const Nat F = t.derive("F", t.leaf("t1") * pow(t.leaf("f"), 2));
            const Nat G = t.derive("G", t.leaf("t2") * pow(t.leaf("g"), 2));
            Z = t.derive("Z", t.leaf("f") * t.leaf("g"));
            X = t.derive("X", pow(F, 2));
            Y = t.derive("Y", pow(G, 2));
            t.derive("v", pow(tt, 2));
            t.derive("w", tt * t.leaf("d"));
            break;
        }
        case Equation::pow5: {
            const Nat e = t.derive("e", t.leaf("e1") * t.leaf("e2"));
            const Nat r = t.derive("r", t.leaf("r1") * t.leaf("r2"));
            const Nat v1 = t.derive("v1", t.leaf("e1") * pow(t.leaf("r1"), 3));
            const Nat v2 = t.derive("v2", t.leaf("e2") * pow(t.leaf("r2"), 3));
            t.derive("v", v1 * v2);
            const Nat D = t.derive("D", pow(t.leaf("q"), 2) * e);
            t.derive("d", D * t.leaf("q"));
            t.derive("w", D * r);
            X = t.derive("X", v1 * pow(t.leaf("i1"), 5));
            Y = t.derive("Y", v2 * pow(t.leaf("i2"), 5));
            Z = t.derive("Z", t.leaf("i1") * t.leaf("i2"));
            break;
        }
        default: {
            const Nat e = t.derive("e", t.leaf("e1") * t.leaf("e2"));
            const Nat N = t.derive("N", t.leaf("n1") * t.leaf("n2"));
            const Nat m1 = t.derive("m1", t.leaf("e1") * pow(t.leaf("n1"), 2));
            const Nat m2 = t.derive("m2", t.leaf("e2") * pow(t.leaf("n2"), 2));
            const Nat tt = t.derive("t", m1 * m2);
            const Nat M1 = t.derive("M1", pow(m1, 2));
            const Nat M2 = t.derive("M2", pow(m2, 2));
            t.derive("v", pow(tt, 2));
            const Nat D = t.derive("D", t.leaf("p") * e);
            t.derive("d", t.leaf("p") * D);
            t.derive("w", D * N);
            X = t.derive("X", M1 * pow(t.leaf("j1"), 6));
            Y = t.derive("Y", M2 * pow(t.leaf("j2"), 6));
            Z = t.derive("Z", t.leaf("j1") * t.leaf("j2"));
            break;
        }
    }
    const Nat delta = t.derive("delta", t.leaf("w") * t.leaf("d"));
    return {delta * X, delta * Y, t.leaf("w") * Z};
}

inline BoxSolution replay_box(const ExtractionTrace& trace) {
    const detail::Replay t(trace);
    t.derive("D", 1);
    t.derive("v", 1);
    const Nat u = t.derive("u", t.leaf("u1") * t.leaf("u2"));
    const Nat r = t.derive("r", t.leaf("r1") * t.leaf("r2"));
    const Nat X = t.derive("X", t.leaf("u1") * pow(t.leaf("r1"), 2));
    const Nat Y = t.derive("Y", t.leaf("u2") * pow(t.leaf("r2"), 2));
    const Nat p = t.derive("p", t.leaf("t") * u);
    const Nat W = t.derive("W", r * p);
    const Nat delta = t.derive("delta", t.leaf("d") * t.leaf("v"));
    return {delta * X, delta * Y, t.leaf("t") * p, W * t.leaf("d")};
}

inline SystemSolution replay_system(const ExtractionTrace& trace) {
    const detail::Replay t(trace);
    const Nat& h = t.leaf("h");
    const Nat& i = t.leaf("i");
    const Nat& j = t.leaf("j");
    const Nat& e = t.leaf("e");
    const Nat& f = t.leaf("f");
    const Nat b1 = t.derive("b1", h * pow(i, 2));
    const Nat d = t.derive("d", h * pow(j, 2));
    const Nat g = t.derive("g", h * i * j);
    const Nat R = t.derive("R", f * g);
    t.derive("k", d * pow(f, 2));
    const Nat a1 = t.derive("a1", d * pow(e, 2));
    const Nat T = t.derive("T", d * e * f);
    const Nat a = t.derive("a", t.leaf("c") * a1);
    const Nat b = t.derive("b", t.leaf("c") * b1);
    const Nat y = a * R * R;
    if (y != b * T * T) {
        throw Error(Errc::InternalContractViolation, "trace gives a*R^2 != b*T^2");
    }
    const Nat& r = t.leaf("r");
    const Nat& tt = t.leaf("t");
    return {a * pow(r, 2), y, b * pow(tt, 2), a * r * R, b * T * tt};
}

} // namespace dioph
