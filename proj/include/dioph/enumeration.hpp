#pragma once

// Exhaustive solution sets at desk scale, computed two independent ways.
//
// Method::brute is the oracle: it never touches the parametric formulas.
//   powN   every ordered divisor pair (x, z^n / x) for z <= bound
//   box    every ordered triple (x, y, w^2/(x*y)) over divisors, w <= bound
//   system every (x, y, z) <= bound with x*y and y*z perfect squares
// Method::parametric sweeps parameter tuples in lexicographic order, pruned
// by the bounded coordinate, and pushes each through construct_*.
//
// Both return the set sorted and de-duplicated (the parametric maps are not
// injective). verify_equivalence compares them and certifies the result.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dioph/digest.hpp"
#include "dioph/families.hpp"

namespace dioph {

enum class Method { brute, parametric };

constexpr std::string_view to_string(Method m) noexcept { return m == Method::brute ? "brute" : "parametric"; }

inline constexpr std::uint64_t default_cap = 10'000'000;

struct EnumerationOptions {
    unsigned jobs = 1;
    std::uint64_t cap = default_cap; // maximum number of emitted solutions
};

struct SolutionSet {
    Equation equation = Equation::pow2;
    Nat bound;
    BoundKind bound_kind = BoundKind::z_max;
    std::vector<Tuple> solutions; // strictly increasing, lexicographic by value

    friend bool operator==(const SolutionSet&, const SolutionSet&) = default;
};

enum class Status { equal, mismatch };

constexpr std::string_view to_string(Status s) noexcept { return s == Status::equal ? "equal" : "mismatch"; }

struct Certificate {
    Equation equation = Equation::pow2;
    Nat bound;
    BoundKind bound_kind = BoundKind::z_max;
    std::string method_a = "brute";
    std::string method_b = "parametric";
    std::uint64_t count_a = 0;
    std::uint64_t count_b = 0;
    std::string digest;
    Status status = Status::equal;
    std::optional<Tuple> first_discrepancy;
};

namespace detail {

struct Factor {
    std::uint64_t prime;
    unsigned exponent;
};

inline std::vector<Factor> factorize(std::uint64_t m) {
    std::vector<Factor> out;
    for (std::uint64_t p = 2; p <= m / p; ++p) {
        if (m % p != 0) continue;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (m > 1) out.push_back({m, 1});
    return out;
}

/// All divisors of m in increasing order, by trial division up to sqrt(m).
inline std::vector<Nat> divisors(const Nat& m) {
    std::vector<Nat> low;
    std::vector<Nat> high;
    if (m.fits_u64()) {
        const std::uint64_t v = m.to_u64();
        for (std::uint64_t i = 1; i <= v / i; ++i) {
            if (v % i != 0) continue;
            low.emplace_back(i);
            if (i != v / i) high.emplace_back(v / i);
        }
    } else {
        const BigInt& v = m.value();
        for (BigInt i = 1; i * i <= v; ++i) {
            if (v % i != 0) continue;
            BigInt q = v / i;
            low.emplace_back(i);
            if (q != i) high.emplace_back(std::move(q));
        }
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    return low;
}

/// Runs work(item, out) for item in [1, last], items dealt round-robin over
/// `jobs` threads; returns the union sorted and de-duplicated, so the result
/// does not depend on the number of jobs.
inline std::vector<Tuple> collect(std::uint64_t last, unsigned jobs,
                                  const std::function<void(std::uint64_t, std::vector<Tuple>&)>& work) {
    jobs = std::max(1u, jobs);
    std::vector<std::vector<Tuple>> parts(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    auto run = [&](unsigned j) {
        try {
            for (std::uint64_t item = 1 + j; item <= last; item += jobs) {
                work(item, parts[j]);
            }
        } catch (...) {
            errors[j] = std::current_exception();
        }
    };
    if (jobs == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(run, j);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<Tuple> all;
    for (auto& p : parts) {
        all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

/// Visits every tuple (a_1..a_m), first entry fixed to `first`, with
/// prod a_i^exps[i] <= bound, in lexicographic order.
inline void bounded_tuples(std::span<const unsigned> exps, std::uint64_t first, std::uint64_t bound,
                           const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
    std::vector<std::uint64_t> cur(exps.size(), 1);
    // rem = floor(bound / prod of chosen terms); a^e <= rem keeps the product in bound.
    auto power_le = [](std::uint64_t a, unsigned e, std::uint64_t rem) -> std::optional<std::uint64_t> {
        std::uint64_t p = 1;
        for (unsigned i = 0; i < e; ++i) {
            if (p > rem / a) return std::nullopt;
            p *= a;
        }
        return p;
    };
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t idx, std::uint64_t rem) {
        if (idx == exps.size()) {
            visit(cur);
            return;
        }
        const std::uint64_t lo = idx == 0 ? first : 1;
        const std::uint64_t hi = idx == 0 ? first : rem;
        for (std::uint64_t a = lo; a <= hi; ++a) {
            auto p = power_le(a, exps[idx], rem);
            if (!p) break;
            cur[idx] = a;
            rec(idx + 1, rem / *p);
        }
    };
    rec(0, bound);
}

inline std::uint64_t bound_u64(const Nat& bound, const EnumerationOptions& opt) {
    // Every equation has at least one solution per anchor value, so a bound
    // above the cap can be rejected without further work.
    if (!bound.fits_u64() || bound.to_u64() > opt.cap) {
        throw Error(Errc::BoundTooLarge, "bound " + bound.str() + " exceeds the safety cap of " +
                                             std::to_string(opt.cap) + " solutions");
    }
    return bound.to_u64();
}

inline std::uint64_t squarefree_part(std::uint64_t y) {
    std::uint64_t s = 1;
    for (const Factor& f : factorize(y)) {
        if (f.exponent % 2 == 1) s *= f.prime;
    }
    return s;
}

inline std::uint64_t isqrt_u64(std::uint64_t v) {
    std::uint64_t r = 0;
    while ((r + 1) <= v / (r + 1)) ++r;
    return r;
}

} // namespace detail

/// Number of solutions at a single anchor: tau(anchor^n) pairs (x, y) for
/// powN, tau_3(anchor^2) triples (x, y, z) for box. Computed from the prime
/// factorization of the anchor.
inline Nat count_for_anchor(Equation eq, const Nat& anchor) {
    if (!anchor.fits_u64()) {
        throw Error(Errc::InvalidInput, "anchor too large for trial-division factorization");
    }
    BigInt count = 1;
    for (const detail::Factor& f : detail::factorize(anchor.to_u64())) {
        if (is_power(eq)) {
            count *= power_exponent(eq) * f.exponent + 1;
        } else if (eq == Equation::box) {
            const unsigned e = 2 * f.exponent;
            count *= (e + 2) * (e + 1) / 2;
        } else {
            throw Error(Errc::InvalidInput, "no anchor count for " + std::string(to_string(eq)));
        }
    }
    return Nat(std::move(count));
}

/// Exact size of the solution set below `bound`, or BoundTooLarge as soon as
/// the running total passes the cap.
inline std::uint64_t projected_count(Equation eq, const Nat& bound, const EnumerationOptions& opt = {}) {
    const std::uint64_t b = detail::bound_u64(bound, opt);
    std::uint64_t total = 0;
    auto add = [&](std::uint64_t c) {
        total += c;
        if (total > opt.cap) {
            throw Error(Errc::BoundTooLarge, std::string(to_string(eq)) + " with bound " + bound.str() +
                                                 " exceeds the safety cap of " + std::to_string(opt.cap) +
                                                 " solutions");
        }
    };
    if (eq == Equation::system) {
        // For fixed y, x*y is a square iff x = s(y)*m^2, s = squarefree part.
        for (std::uint64_t y = 1; y <= b; ++y) {
            const std::uint64_t per_y = detail::isqrt_u64(b / detail::squarefree_part(y));
            if (per_y > 0 && per_y > opt.cap / per_y) add(opt.cap + 1);
            add(per_y * per_y);
        }
        return total;
    }
    if (!is_power(eq) && eq != Equation::box) {
        throw Error(Errc::InvalidInput, std::string(to_string(eq)) + " has no finite enumeration");
    }
    for (std::uint64_t a = 1; a <= b; ++a) {
        const Nat c = count_for_anchor(eq, Nat(a));
        add(c.fits_u64() ? c.to_u64() : opt.cap + 1);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Enumerators
// ---------------------------------------------------------------------------

inline SolutionSet enumerate_power(unsigned n, const Nat& z_max, Method method, const EnumerationOptions& opt = {}) {
    const Equation eq = power_equation(n);
    projected_count(eq, z_max, opt);
    const std::uint64_t b = z_max.to_u64();
    SolutionSet set{eq, z_max, BoundKind::z_max, {}};

    if (method == Method::brute) {
        set.solutions = detail::collect(b, opt.jobs, [n](std::uint64_t z, std::vector<Tuple>& out) {
            const Nat zz(z);
            const Nat zn = pow(zz, n);
            for (const Nat& x : detail::divisors(zn)) {
                out.push_back({x, exact_div(zn, x), zz});
            }
        });
        return set;
    }

    // z-exponents of each parameter, in param_names() order, and the index
    // pairs that must be coprime.
    std::vector<unsigned> exps;
    std::vector<std::pair<std::size_t, std::size_t>> coprime_pairs;
    switch (n) {
        case 2: exps = {1, 1, 1}; coprime_pairs = {{1, 2}}; break;
        case 3: exps = {2, 1, 1, 1, 1}; coprime_pairs = {{1, 2}, {3, 4}}; break;
        case 4: exps = {1, 1, 1, 1, 1}; coprime_pairs = {{1, 2}, {3, 4}}; break;
        case 5: exps = {2, 1, 1, 1, 1, 1, 1}; coprime_pairs = {{1, 2}, {3, 4}, {5, 6}}; break;
        default: exps = {1, 1, 1, 1, 1, 1, 1}; coprime_pairs = {{1, 2}, {3, 4}, {5, 6}}; break;
    }
    set.solutions = detail::collect(b, opt.jobs, [&](std::uint64_t first, std::vector<Tuple>& out) {
        detail::bounded_tuples(exps, first, b, [&](const std::vector<std::uint64_t>& t) {
            for (auto [i, j] : coprime_pairs) {
                if (std::gcd(t[i], t[j]) != 1) return;
            }
            const std::vector<Nat> vals(t.begin(), t.end());
            out.push_back(construct_power(make_power_params(n, vals)).tuple());
        });
    });
    return set;
}

inline SolutionSet enumerate_box(const Nat& w_max, Method method, const EnumerationOptions& opt = {}) {
    projected_count(Equation::box, w_max, opt);
    const std::uint64_t b = w_max.to_u64();
    SolutionSet set{Equation::box, w_max, BoundKind::w_max, {}};

    if (method == Method::brute) {
        set.solutions = detail::collect(b, opt.jobs, [](std::uint64_t w, std::vector<Tuple>& out) {
            const Nat ww(w);
            const Nat sq = pow(ww, 2);
            for (const Nat& x : detail::divisors(sq)) {
                const Nat rest = exact_div(sq, x);
                for (const Nat& y : detail::divisors(rest)) {
                    out.push_back({x, y, exact_div(rest, y), ww});
                }
            }
        });
        return set;
    }

    // w = d*r1*r2*t*u1*u2
    static constexpr std::array<unsigned, 6> exps{1, 1, 1, 1, 1, 1};
    set.solutions = detail::collect(b, opt.jobs, [&](std::uint64_t first, std::vector<Tuple>& out) {
        detail::bounded_tuples(exps, first, b, [&](const std::vector<std::uint64_t>& t) {
            if (std::gcd(t[1], t[2]) != 1 || std::gcd(t[4], t[5]) != 1 || std::gcd(t[3], t[1] * t[2]) != 1) {
                return;
            }
            out.push_back(construct_box(BoxParams{t[0], t[1], t[2], t[3], t[4], t[5]}).tuple());
        });
    });
    return set;
}

inline SolutionSet enumerate_system(const Nat& coord_max, Method method, const EnumerationOptions& opt = {}) {
    projected_count(Equation::system, coord_max, opt);
    const std::uint64_t N = coord_max.to_u64();
    SolutionSet set{Equation::system, coord_max, BoundKind::coordinate_max, {}};

    if (method == Method::brute) {
        set.solutions = detail::collect(N, opt.jobs, [N](std::uint64_t y, std::vector<Tuple>& out) {
            const Nat yy(y);
            // x*y square and y*z square are the same test on x and z.
            std::vector<std::pair<Nat, Nat>> partners; // (x, sqrt(x*y))
            for (std::uint64_t x = 1; x <= N; ++x) {
                const Nat xx(x);
                if (auto root = try_nth_root(xx * yy, 2)) partners.emplace_back(xx, *root);
            }
            for (const auto& [x, v] : partners) {
                for (const auto& [z, w] : partners) {
                    out.push_back({x, yy, z, v, w});
                }
            }
        });
        return set;
    }

    // x = c*h*e^2*j^2*r^2, y = c*h^3*e^2*j^4*i^2*f^2, z = c*h*i^2*t^2, all <= N.
    set.solutions = detail::collect(N, opt.jobs, [N](std::uint64_t c, std::vector<Tuple>& out) {
        for (std::uint64_t h = 1; c * h <= N; ++h) {
            const std::uint64_t ch = c * h;
            for (std::uint64_t e = 1; ch * e * e <= N; ++e) {
                for (std::uint64_t j = 1; ch * e * e * j * j <= N; ++j) {
                    const std::uint64_t x0 = ch * e * e * j * j;
                    // y >= c*h^3*e^2*j^4
                    if (static_cast<unsigned __int128>(x0) * h * h * j * j > N) break;
                    for (std::uint64_t r = 1; x0 * r * r <= N; ++r) {
                        const std::uint64_t y0 = x0 * h * h * j * j;
                        for (std::uint64_t i = 1; y0 * i * i <= N; ++i) {
                            if (std::gcd(i, j) != 1) continue;
                            for (std::uint64_t f = 1; y0 * i * i * f * f <= N; ++f) {
                                if (std::gcd(e, f) != 1) continue;
                                for (std::uint64_t t = 1; ch * i * i * t * t <= N; ++t) {
                                    out.push_back(construct_system(SystemParams{c, h, i, j, e, f, r, t}).tuple());
                                }
                            }
                        }
                    }
                }
            }
        }
    });
    return set;
}

inline SolutionSet enumerate(Equation eq, const Nat& bound, Method method, const EnumerationOptions& opt = {}) {
    if (is_power(eq)) return enumerate_power(power_exponent(eq), bound, method, opt);
    if (eq == Equation::box) return enumerate_box(bound, method, opt);
    if (eq == Equation::system) return enumerate_system(bound, method, opt);
    throw Error(Errc::InvalidInput, "general-k has no finite enumeration; use check/extract/construct");
}

// ---------------------------------------------------------------------------
// Canonical serialization and certification
// ---------------------------------------------------------------------------

/// One solution per line, fields space-separated, newline-terminated.
inline std::string canonical_serialization(const SolutionSet& set) {
    std::string out;
    for (const Tuple& t : set.solutions) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) out += ' ';
            out += t[i].str();
        }
        out += '\n';
    }
    return out;
}

inline std::string digest(const SolutionSet& set) { return sha256_hex(canonical_serialization(set)); }

/// Extracts canonical parameters from `t`, checks their side conditions,
/// rebuilds the solution and replays the trace. Throws on any failure.
inline void check_round_trip(Equation eq, const Tuple& t) {
    auto fail = [&](const std::string& what) {
        throw Error(Errc::InternalContractViolation, std::string(to_string(eq)) + " round trip: " + what);
    };
    if (is_power(eq)) {
        const unsigned n = power_exponent(eq);
        const PowerExtraction ex = extract_power(n, t[0], t[1], t[2]);
        validate(ex.params);
        if (construct_power(ex.params).tuple() != t) fail("construct(extract(s)) != s");
        if (replay_power(n, ex.trace).tuple() != t) fail("trace replay != s");
    } else if (eq == Equation::box) {
        const BoxExtraction ex = extract_box(t[0], t[1], t[2], t[3]);
        validate(ex.params);
        if (construct_box(ex.params).tuple() != t) fail("construct(extract(s)) != s");
        if (replay_box(ex.trace).tuple() != t) fail("trace replay != s");
    } else if (eq == Equation::system) {
        const SystemExtraction ex = extract_system(t[0], t[1], t[2], t[3], t[4]);
        validate(ex.params);
        if (construct_system(ex.params).tuple() != t) fail("construct(extract(s)) != s");
        if (replay_system(ex.trace).tuple() != t) fail("trace replay != s");
    } else {
        throw Error(Errc::InvalidInput, "general-k round trip needs k and n");
    }
}

namespace detail {

/// First element (in canonical order) present in exactly one of a, b.
inline std::optional<Tuple> first_difference(const std::vector<Tuple>& a, const std::vector<Tuple>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) {
            ++ia;
            ++ib;
        } else {
            return *ia < *ib ? *ia : *ib;
        }
    }
    if (ia != a.end()) return *ia;
    if (ib != b.end()) return *ib;
    return std::nullopt;
}

/// Index of the first solution failing check_round_trip, or size() if none.
inline std::size_t first_round_trip_failure(Equation eq, const std::vector<Tuple>& sols, unsigned jobs) {
    jobs = std::max(1u, jobs);
    std::vector<std::size_t> first(jobs, sols.size());
    auto run = [&](unsigned j) {
        for (std::size_t i = j; i < sols.size(); i += jobs) {
            try {
                check_round_trip(eq, sols[i]);
            } catch (const Error&) {
                first[j] = i;
                return;
            }
        }
    };
    if (jobs == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(run, j);
    }
    return *std::min_element(first.begin(), first.end());
}

} // namespace detail

/// Runs both enumerators, compares the sets and round-trips every brute
/// solution through extract/construct. The digest covers the brute set.
inline Certificate verify_equivalence(Equation eq, const Nat& bound, const EnumerationOptions& opt = {}) {
    const SolutionSet a = enumerate(eq, bound, Method::brute, opt);
    const SolutionSet b = enumerate(eq, bound, Method::parametric, opt);

    Certificate cert;
    cert.equation = eq;
    cert.bound = bound;
    cert.bound_kind = bound_kind(eq);
    cert.count_a = a.solutions.size();
    cert.count_b = b.solutions.size();
    cert.digest = digest(a);
    cert.first_discrepancy = detail::first_difference(a.solutions, b.solutions);
    if (!cert.first_discrepancy) {
        const std::size_t bad = detail::first_round_trip_failure(eq, a.solutions, opt.jobs);
        if (bad < a.solutions.size()) cert.first_discrepancy = a.solutions[bad];
    }
    cert.status = cert.first_discrepancy ? Status::mismatch : Status::equal;
    return cert;
}

} // namespace dioph
