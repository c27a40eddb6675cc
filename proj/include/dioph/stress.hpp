#pragma once

// Seeded random soundness checks for every family.
//
// For each family, `count` parameter tuples are drawn with entries in
// [1, max_param] (rejection sampling enforces the gcd side conditions),
// constructed, checked against the equation exactly and round-tripped
// through the extractor. Results depend only on the options.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dioph/enumeration.hpp"

namespace dioph {

struct StressOptions {
    std::uint64_t seed = 0;
    std::uint64_t count = 1000;
    std::uint64_t max_param = 50;
    SystemV system_v = SystemV::corrected;
};

struct FamilyReport {
    Equation family = Equation::pow2;
    std::uint64_t samples = 0;
    std::uint64_t passed = 0;
    // system only: split by whether the sampled r is 1
    std::uint64_t samples_r1 = 0;
    std::uint64_t failures_r1 = 0;
    std::uint64_t samples_r_gt1 = 0;
    std::uint64_t failures_r_gt1 = 0;
    std::optional<std::string> first_failure;

    bool ok() const noexcept { return passed == samples; }
};

namespace detail {

class Sampler {
public:
    Sampler(std::uint64_t seed, std::uint64_t stream, std::uint64_t max_param) : max_(max_param) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream)};
        rng_.seed(seq);
    }

    std::uint64_t value() { return rng_() % max_ + 1; }

    std::uint64_t in_range(std::uint64_t lo, std::uint64_t hi) { return lo + rng_() % (hi - lo + 1); }

    /// A pair (a, b) with gcd(a, b) = 1.
    std::pair<std::uint64_t, std::uint64_t> coprime_pair() {
        for (;;) {
            const std::uint64_t a = value();
            const std::uint64_t b = value();
            if (std::gcd(a, b) == 1) return {a, b};
        }
    }

private:
    std::mt19937_64 rng_;
    std::uint64_t max_;
};

inline std::string describe(const std::vector<NamedValue>& fields) {
    std::string s;
    for (const auto& f : fields) {
        if (!s.empty()) s += ' ';
        s += f.name + "=" + f.value.str();
    }
    return s;
}

inline PowerParams sample_power(unsigned n, Sampler& s) {
    auto [a1, a2] = s.coprime_pair();
    auto [b1, b2] = s.coprime_pair();
    switch (n) {
        case 2: return Pow2Params{s.value(), a1, a2};
        case 3: return Pow3Params{s.value(), a1, a2, b1, b2};
        case 4: return Pow4Params{s.value(), a1, a2, b1, b2};
        default: {
            auto [c1, c2] = s.coprime_pair();
            if (n == 5) return Pow5Params{s.value(), a1, a2, b1, b2, c1, c2};
            return Pow6Params{s.value(), a1, a2, b1, b2, c1, c2};
        }
    }
}

inline BoxParams sample_box(Sampler& s) {
    for (;;) {
        auto [r1, r2] = s.coprime_pair();
        auto [u1, u2] = s.coprime_pair();
        const std::uint64_t t = s.value();
        if (std::gcd(t, r1 * r2) == 1) return BoxParams{s.value(), r1, r2, t, u1, u2};
    }
}

inline SystemParams sample_system(Sampler& s) {
    const std::uint64_t c = s.value();
    const std::uint64_t h = s.value();
    auto [i, j] = s.coprime_pair();
    auto [e, f] = s.coprime_pair();
    const std::uint64_t r = s.value();
    return SystemParams{c, h, i, j, e, f, r, s.value()};
}

inline GeneralParams sample_general(Sampler& s) {
    auto [k1, k2] = s.coprime_pair();
    auto [t1, t2] = s.coprime_pair();
    const auto n = static_cast<unsigned>(s.in_range(1, 6));
    return GeneralParams{k1, k2, t1, t2, n, Nat(k1) * Nat(k2)};
}

/// Returns an empty string on success, otherwise what went wrong.
inline std::string stress_one(Equation family, Sampler& s, const StressOptions& opt, FamilyReport& rep) {
    try {
        if (is_power(family)) {
            const unsigned n = power_exponent(family);
            const PowerParams p = sample_power(n, s);
            const Triple sol = construct_power(p);
            if (!is_solution(family, sol.tuple())) return "x*y != z^n for " + describe(fields_of(p));
            check_round_trip(family, sol.tuple());
        } else if (family == Equation::box) {
            const BoxParams p = sample_box(s);
            const BoxSolution sol = construct_box(p);
            if (!is_solution(family, sol.tuple())) return "x*y*z != w^2 for " + describe(p.fields());
            check_round_trip(family, sol.tuple());
        } else if (family == Equation::system) {
            const SystemParams p = sample_system(s);
            const bool r1 = p.r.is_one();
            ++(r1 ? rep.samples_r1 : rep.samples_r_gt1);
            const SystemSolution sol = construct_system(p, opt.system_v);
            if (!is_solution(family, sol.tuple())) {
                ++(r1 ? rep.failures_r1 : rep.failures_r_gt1);
                return "x*y != v^2 or y*z != w^2 for " + describe(p.fields());
            }
            check_round_trip(family, sol.tuple());
        } else {
            const GeneralParams p = sample_general(s);
            const Triple sol = construct_general(p);
            if (!is_solution(family, sol.tuple(), p.k, p.n)) return "x*y != k*z^n for " + describe(p.fields());
            if (coprime(sol.x, sol.y)) {
                const GeneralParams back = extract_general(p.k, p.n, sol.x, sol.y, sol.z);
                if (construct_general(back) != sol) return "round trip failed for " + describe(p.fields());
            } else {
                // Non-coprime images are outside the extractor's domain; it must decline.
                try {
                    extract_general(p.k, p.n, sol.x, sol.y, sol.z);
                    return "extract_general accepted non-coprime image of " + describe(p.fields());
                } catch (const Error& e) {
                    if (e.code() != Errc::NotCoprime) throw;
                }
            }
        }
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace detail

inline FamilyReport stress_family(Equation family, const StressOptions& opt) {
    FamilyReport rep;
    rep.family = family;
    detail::Sampler sampler(opt.seed, static_cast<std::uint64_t>(family), opt.max_param);
    for (std::uint64_t i = 0; i < opt.count; ++i) {
        ++rep.samples;
        std::string err = detail::stress_one(family, sampler, opt, rep);
        if (err.empty()) {
            ++rep.passed;
        } else if (!rep.first_failure) {
            rep.first_failure = std::move(err);
        }
    }
    return rep;
}

inline std::vector<FamilyReport> run_stress(const StressOptions& opt) {
    if (opt.max_param < 1) {
        throw Error(Errc::InvalidInput, "parameter limit must be >= 1");
    }
    std::vector<FamilyReport> out;
    for (Equation e : all_equations) out.push_back(stress_family(e, opt));
    return out;
}

} // namespace dioph
