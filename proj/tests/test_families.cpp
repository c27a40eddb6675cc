#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "dioph/families.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dioph;

namespace {

std::vector<std::string> symbols(const ExtractionTrace& t) {
    std::vector<std::string> out;
    for (const auto& e : t.entries()) out.push_back(e.name);
    return out;
}

// Calls f on every tuple in [1, hi]^arity.
void for_each_tuple(std::size_t arity, std::uint64_t hi, const std::function<void(const std::vector<Nat>&)>& f) {
    std::vector<std::uint64_t> cur(arity, 1);
    for (;;) {
        f(std::vector<Nat>(cur.begin(), cur.end()));
        std::size_t i = 0;
        while (i < arity && cur[i] == hi) cur[i++] = 1;
        if (i == arity) return;
        ++cur[i];
    }
}

bool valid_power(unsigned n, const std::vector<Nat>& v) {
    try {
        validate(make_power_params(n, v));
        return true;
    } catch (const Error&) {
        return false;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// construct_power / extract_power
// ---------------------------------------------------------------------------

TEST(ConstructPower, Examples) {
    EXPECT_EQ(construct_power(Pow2Params{3, 2, 1}), (Triple{12, 3, 6}));
    EXPECT_EQ(construct_power(Pow3Params{1, 1, 1, 1, 1}), (Triple{1, 1, 1}));
    EXPECT_EQ(construct_power(Pow3Params{1, 2, 1, 1, 1}), (Triple{4, 2, 2}));
}

TEST(ConstructPower, RejectsBrokenSideConditions) {
    EXPECT_EQ(code_of([] { construct_power(Pow2Params{1, 2, 4}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_power(Pow3Params{1, 1, 1, 2, 2}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_power(Pow4Params{1, 3, 6, 1, 1}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_power(Pow5Params{1, 1, 1, 1, 1, 5, 10}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_power(Pow6Params{1, 1, 1, 7, 7, 1, 1}); }), Errc::InvalidParams);
}

TEST(ConstructPower, SoundOnAllTuplesUpTo3) {
    for (unsigned n = 2; n <= 6; ++n) {
        const std::size_t arity = param_names(power_equation(n)).size();
        int built = 0;
        for_each_tuple(arity, 3, [&](const std::vector<Nat>& v) {
            if (!valid_power(n, v)) return;
            const Triple s = construct_power(make_power_params(n, v));
            ASSERT_EQ(s.x * s.y, pow(s.z, n));
            ++built;
        });
        EXPECT_GT(built, 0);
    }
}

TEST(ConstructPower, SoundOnRandomTuples) {
    std::mt19937_64 rng(2024);
    for (unsigned n = 2; n <= 6; ++n) {
        const std::size_t arity = param_names(power_equation(n)).size();
        int built = 0;
        while (built < 10000) {
            std::vector<Nat> v;
            for (std::size_t i = 0; i < arity; ++i) v.emplace_back(rng() % 50 + 1);
            if (!valid_power(n, v)) continue;
            const Triple s = construct_power(make_power_params(n, v));
            ASSERT_EQ(s.x * s.y, pow(s.z, n));
            ++built;
        }
    }
}

TEST(ExtractPower, Examples) {
    EXPECT_EQ(std::get<Pow2Params>(extract_power(2, 4, 9, 6).params), (Pow2Params{1, 2, 3}));
    EXPECT_EQ(std::get<Pow3Params>(extract_power(3, 4, 2, 2).params), (Pow3Params{1, 2, 1, 1, 1}));
    EXPECT_EQ(std::get<Pow2Params>(extract_power(2, 1, 1, 1).params), (Pow2Params{1, 1, 1}));
}

TEST(ExtractPower, Errors) {
    EXPECT_EQ(code_of([] { extract_power(2, 2, 3, 4); }), Errc::NotASolution);
    EXPECT_EQ(code_of([] { extract_power(7, 1, 1, 1); }), Errc::InvalidInput);
    EXPECT_EQ(code_of([] { extract_power(1, 2, 3, 6); }), Errc::InvalidInput);
}

TEST(ExtractPower, TraceSymbolsFollowTheProofChain) {
    const std::vector<std::string> prefix{"delta", "X", "Y", "w", "d", "Z", "v"};
    auto with = [&](std::vector<std::string> tail) {
        auto all = prefix;
        all.insert(all.end(), tail.begin(), tail.end());
        return all;
    };
    EXPECT_EQ(symbols(extract_power(2, 4, 9, 6).trace), with({"p1", "p2"}));
    EXPECT_EQ(symbols(extract_power(3, 4, 2, 2).trace), with({"v1", "v2", "m", "l"}));
    EXPECT_EQ(symbols(extract_power(4, 1, 1, 1).trace), with({"t", "F", "G", "t1", "t2", "f", "g"}));
    EXPECT_EQ(symbols(extract_power(5, 1, 1, 1).trace),
              with({"v1", "v2", "i1", "i2", "D", "r", "q", "e", "e1", "e2", "r1", "r2"}));
    EXPECT_EQ(symbols(extract_power(6, 1, 1, 1).trace),
              with({"t", "M1", "M2", "j1", "j2", "m1", "m2", "D", "p", "N", "e", "e1", "e2", "n1", "n2"}));
}

// Round trip on every solution with small z, plus determinism and replay.
TEST(ExtractPower, RoundTripOnAllSmallSolutions) {
    const std::uint64_t bounds[] = {0, 0, 60, 40, 25, 15, 12};
    for (unsigned n = 2; n <= 6; ++n) {
        for (std::uint64_t z = 1; z <= bounds[n]; ++z) {
            const std::uint64_t zn = oracle::ipow(z, n);
            for (std::uint64_t x : oracle::divisor_list(zn)) {
                const Triple s{x, zn / x, z};
                const PowerExtraction ex = extract_power(n, s.x, s.y, s.z);
                ASSERT_NO_THROW(validate(ex.params));
                ASSERT_EQ(exponent_of(ex.params), n);
                ASSERT_EQ(construct_power(ex.params), s);
                ASSERT_EQ(replay_power(n, ex.trace), s);
                const PowerExtraction again = extract_power(n, s.x, s.y, s.z);
                ASSERT_EQ(again.params, ex.params);
                ASSERT_EQ(again.trace, ex.trace);
            }
        }
    }
}

TEST(ExtractPower, ArbitraryPrecisionInputs) {
    const Nat big = Nat::parse("340282366920938463463374607431768211507"); // > 2^128
    const Pow5Params p{big, 3, 7, 2, 5, 11, 13};
    const Triple s = construct_power(p);
    const PowerExtraction ex = extract_power(5, s.x, s.y, s.z);
    EXPECT_EQ(construct_power(ex.params), s);
    EXPECT_EQ(replay_power(5, ex.trace), s);
}

TEST(ReplayPower, DetectsTamperedTrace) {
    const PowerExtraction ex = extract_power(3, 4, 2, 2);
    ExtractionTrace bad;
    for (const auto& e : ex.trace.entries()) bad.record(e.name, e.name == "v" ? Nat(3) : e.value);
    EXPECT_EQ(code_of([&] { replay_power(3, bad); }), Errc::InternalContractViolation);
}

// ---------------------------------------------------------------------------
// general-k
// ---------------------------------------------------------------------------

TEST(ConstructGeneral, Examples) {
    EXPECT_EQ(construct_general(GeneralParams{3, 2, 1, 5, 2, 6}), (Triple{3, 50, 5}));
    EXPECT_EQ(construct_general(GeneralParams{1, 1, 1, 1, 1, 1}), (Triple{1, 1, 1}));
    EXPECT_EQ(construct_general(GeneralParams{1, 1, 2, 3, 3, 1}), (Triple{8, 27, 6}));
}

TEST(ConstructGeneral, RejectsBrokenSideConditions) {
    EXPECT_EQ(code_of([] { construct_general(GeneralParams{2, 2, 1, 1, 2, 4}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_general(GeneralParams{1, 1, 2, 4, 2, 1}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_general(GeneralParams{2, 3, 1, 1, 2, 5}); }), Errc::InvalidParams);
}

TEST(ExtractGeneral, Examples) {
    EXPECT_EQ(extract_general(6, 2, 3, 50, 5), (GeneralParams{3, 2, 1, 5, 2, 6}));
    EXPECT_EQ(extract_general(1, 2, 4, 9, 6), (GeneralParams{1, 1, 2, 3, 2, 1}));
    EXPECT_EQ(code_of([] { extract_general(1, 2, 2, 2, 2); }), Errc::NotCoprime);
    EXPECT_EQ(code_of([] { extract_general(1, 2, 2, 3, 2); }), Errc::NotASolution);
}

// (2, 2, 2) solves x*y = 1*z^2, yet no parameter tuple reaches it.
TEST(ExtractGeneral, CounterexampleHasNoPreimage) {
    int valid = 0;
    for_each_tuple(4, 2, [&](const std::vector<Nat>& v) {
        const GeneralParams p{v[0], v[1], v[2], v[3], 2, v[0] * v[1]};
        try {
            validate(p);
        } catch (const Error&) {
            return;
        }
        ++valid;
        if (p.k == Nat(1)) {
            EXPECT_NE(construct_general(p), (Triple{2, 2, 2}));
        }
    });
    EXPECT_GT(valid, 0);
}

TEST(ExtractGeneral, RoundTripOnCoprimeSolutions) {
    for (unsigned n = 1; n <= 4; ++n) {
        for (std::uint64_t k = 1; k <= 10; ++k) {
            for (std::uint64_t z = 1; z <= 12; ++z) {
                const std::uint64_t total = k * oracle::ipow(z, n);
                for (std::uint64_t x : oracle::divisor_list(total)) {
                    const std::uint64_t y = total / x;
                    if (oracle::gcd(x, y) != 1) {
                        ASSERT_EQ(code_of([&] { extract_general(k, n, x, y, z); }), Errc::NotCoprime);
                        continue;
                    }
                    const GeneralParams p = extract_general(k, n, x, y, z);
                    ASSERT_EQ(construct_general(p), (Triple{x, y, z}));
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// box
// ---------------------------------------------------------------------------

TEST(ConstructBox, Examples) {
    EXPECT_EQ(construct_box(BoxParams{1, 1, 1, 1, 2, 3}), (BoxSolution{2, 3, 6, 6}));
    EXPECT_EQ(construct_box(BoxParams{1, 1, 1, 1, 1, 1}), (BoxSolution{1, 1, 1, 1}));
    EXPECT_EQ(construct_box(BoxParams{2, 1, 1, 1, 1, 1}), (BoxSolution{2, 2, 1, 2}));
    // gcd(t, r1*r2) = 1 is enforced
    EXPECT_EQ(code_of([] { construct_box(BoxParams{1, 2, 3, 3, 1, 1}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_box(BoxParams{1, 2, 4, 1, 1, 1}); }), Errc::InvalidParams);
}

TEST(ConstructBox, SoundOnAllTuplesUpTo3AndRandom) {
    auto check = [](const std::vector<Nat>& v) {
        const BoxParams p{v[0], v[1], v[2], v[3], v[4], v[5]};
        try {
            validate(p);
        } catch (const Error&) {
            return false;
        }
        const BoxSolution s = construct_box(p);
        EXPECT_EQ(s.x * s.y * s.z, pow(s.w, 2));
        return true;
    };
    for_each_tuple(6, 3, check);
    std::mt19937_64 rng(99);
    for (int built = 0; built < 10000;) {
        std::vector<Nat> v;
        for (int i = 0; i < 6; ++i) v.emplace_back(rng() % 50 + 1);
        if (check(v)) ++built;
    }
}

TEST(ExtractBox, Examples) {
    EXPECT_EQ(extract_box(2, 3, 6, 6).params, (BoxParams{1, 1, 1, 1, 2, 3}));
    EXPECT_EQ(extract_box(1, 1, 1, 1).params, (BoxParams{1, 1, 1, 1, 1, 1}));
    EXPECT_EQ(extract_box(2, 2, 1, 2).params, (BoxParams{2, 1, 1, 1, 1, 1}));
    EXPECT_EQ(code_of([] { extract_box(1, 2, 3, 4); }), Errc::NotASolution);
    EXPECT_EQ(symbols(extract_box(2, 3, 6, 6).trace),
              (std::vector<std::string>{"delta", "X", "Y", "d", "W", "v", "D", "p", "t", "r", "u", "u1", "u2", "r1",
                                        "r2"}));
}

TEST(ExtractBox, RoundTripOnAllSmallSolutions) {
    for (std::uint64_t w = 1; w <= 40; ++w) {
        const std::uint64_t sq = w * w;
        for (std::uint64_t x : oracle::divisor_list(sq)) {
            for (std::uint64_t y : oracle::divisor_list(sq / x)) {
                const BoxSolution s{x, y, sq / x / y, w};
                const BoxExtraction ex = extract_box(s.x, s.y, s.z, s.w);
                ASSERT_NO_THROW(validate(ex.params));
                ASSERT_EQ(construct_box(ex.params), s);
                ASSERT_EQ(replay_box(ex.trace), s);
                ASSERT_EQ(extract_box(s.x, s.y, s.z, s.w).params, ex.params);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// system
// ---------------------------------------------------------------------------

TEST(ConstructSystem, Examples) {
    EXPECT_EQ(construct_system(SystemParams{1, 1, 1, 1, 1, 2, 1, 1}), (SystemSolution{1, 4, 1, 2, 2}));
    EXPECT_EQ(construct_system(SystemParams{1, 1, 1, 1, 1, 1, 1, 1}), (SystemSolution{1, 1, 1, 1, 1}));
    EXPECT_EQ(construct_system(SystemParams{1, 1, 1, 1, 1, 1, 2, 1}), (SystemSolution{4, 1, 1, 2, 1}));
    EXPECT_EQ(code_of([] { construct_system(SystemParams{1, 1, 2, 2, 1, 1, 1, 1}); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { construct_system(SystemParams{1, 1, 1, 1, 3, 3, 1, 1}); }), Errc::InvalidParams);
}

TEST(ConstructSystem, VWithoutRFailsExactlyWhenRExceedsOne) {
    const SystemParams witness{1, 1, 1, 1, 1, 1, 2, 1};
    const SystemSolution no_r = construct_system(witness, SystemV::without_r);
    EXPECT_EQ(no_r.v, Nat(1));
    EXPECT_EQ(no_r.x * no_r.y, Nat(4));
    EXPECT_NE(no_r.x * no_r.y, pow(no_r.v, 2));

    for_each_tuple(8, 3, [](const std::vector<Nat>& v) {
        const SystemParams p{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
        try {
            validate(p);
        } catch (const Error&) {
            return;
        }
        const SystemSolution good = construct_system(p);
        const SystemSolution bad = construct_system(p, SystemV::without_r);
        ASSERT_EQ(good.x * good.y, pow(good.v, 2));
        ASSERT_EQ(good.y * good.z, pow(good.w, 2));
        if (p.r.is_one()) {
            ASSERT_EQ(bad, good);
        } else {
            ASSERT_NE(bad.x * bad.y, pow(bad.v, 2));
        }
    });
}

TEST(ConstructSystem, SoundOnRandomTuples) {
    std::mt19937_64 rng(5);
    for (int built = 0; built < 10000;) {
        std::vector<Nat> v;
        for (int i = 0; i < 8; ++i) v.emplace_back(rng() % 50 + 1);
        const SystemParams p{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
        if (!coprime(p.i, p.j) || !coprime(p.e, p.f)) continue;
        const SystemSolution s = construct_system(p);
        ASSERT_EQ(s.x * s.y, pow(s.v, 2));
        ASSERT_EQ(s.y * s.z, pow(s.w, 2));
        ++built;
    }
}

TEST(ExtractSystem, Examples) {
    EXPECT_EQ(extract_system(1, 4, 1, 2, 2).params, (SystemParams{1, 1, 1, 1, 1, 2, 1, 1}));
    EXPECT_EQ(extract_system(1, 1, 1, 1, 1).params, (SystemParams{1, 1, 1, 1, 1, 1, 1, 1}));
    EXPECT_EQ(extract_system(2, 2, 2, 2, 2).params, (SystemParams{2, 1, 1, 1, 1, 1, 1, 1}));
    EXPECT_EQ(code_of([] { extract_system(1, 4, 1, 2, 3); }), Errc::NotASolution);
    EXPECT_EQ(symbols(extract_system(1, 4, 1, 2, 2).trace),
              (std::vector<std::string>{"a", "r", "R", "b", "T", "t", "c", "a1", "b1", "k", "d", "e", "f", "g", "h",
                                        "i", "j"}));
}

TEST(ExtractSystem, RoundTripOnAllSmallSolutions) {
    const std::uint64_t N = 40;
    for (std::uint64_t y = 1; y <= N; ++y) {
        for (std::uint64_t x = 1; x <= N; ++x) {
            const std::uint64_t v = oracle::floor_root(x * y, 2);
            if (v * v != x * y) continue;
            for (std::uint64_t z = 1; z <= N; ++z) {
                const std::uint64_t w = oracle::floor_root(y * z, 2);
                if (w * w != y * z) continue;
                const SystemSolution s{x, y, z, v, w};
                const SystemExtraction ex = extract_system(x, y, z, v, w);
                ASSERT_NO_THROW(validate(ex.params));
                ASSERT_EQ(construct_system(ex.params), s);
                ASSERT_EQ(replay_system(ex.trace), s);
            }
        }
    }
}
