// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && pass) {
            pass = false;
            detail = what;
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::size_t round_trip_failures(Equation eq, const std::vector<Tuple>& sols, std::string& first) {
    std::size_t bad = 0;
    for (const Tuple& t : sols) {
        try {
            check_round_trip(eq, t);
        } catch (const Error& e) {
            if (!bad++) first = e.what();
        }
    }
    return bad;
}

std::size_t count_anchor(const std::vector<Tuple>& sols, std::size_t index, std::uint64_t v) {
    const Nat a(v);
    return std::count_if(sols.begin(), sols.end(), [&](const Tuple& t) { return t[index] == a; });
}

struct CliResult {
    int code;
    std::string out;
};

CliResult cli_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// 1. Round trip for every brute-force solution of x*y = z^n.
Outcome power_round_trip() {
    Outcome o;
    const auto t0 = Clock::now();
    const std::uint64_t bounds[] = {0, 0, 200, 100, 60, 40, 30};
    std::size_t total = 0;
    for (unsigned n = 2; n <= 6; ++n) {
        const Equation eq = power_equation(n);
        const SolutionSet s = enumerate(eq, bounds[n], Method::brute);
        std::string first;
        const std::size_t bad = round_trip_failures(eq, s.solutions, first);
        o.require(bad == 0, std::string(to_string(eq)) + ": " + std::to_string(bad) + " failures, first: " + first);
        const Certificate c = verify_equivalence(eq, bounds[n]);
        o.require(c.status == Status::equal, std::string(to_string(eq)) + ": brute and parametric sets differ");
        total += s.solutions.size();
    }
    const double secs = seconds_since(t0);
    o.require(secs <= 60.0, "took " + std::to_string(secs) + " s");
    if (o.pass) o.detail = std::to_string(total) + " solutions, " + std::to_string(secs) + " s";
    return o;
}

// 2. Per-anchor counts against tau(z^n).
Outcome divisor_counts() {
    Outcome o;
    std::size_t anchors = 0;
    for (unsigned n = 2; n <= 6; ++n) {
        const SolutionSet s = enumerate(power_equation(n), 100, Method::brute);
        for (std::uint64_t z = 1; z <= 100; ++z, ++anchors) {
            const std::size_t got = count_anchor(s.solutions, 2, z);
            const std::uint64_t want = oracle::tau(oracle::ipow(z, n));
            o.require(got == want, "z=" + std::to_string(z) + " n=" + std::to_string(n) + ": " +
                                       std::to_string(got) + " != " + std::to_string(want));
        }
    }
    const std::size_t spot = count_anchor(enumerate(Equation::pow2, 6, Method::brute).solutions, 2, 6);
    o.require(spot == 9, "z=6, n=2 gave " + std::to_string(spot));
    if (o.pass) o.detail = std::to_string(anchors) + " anchors; z=6, n=2 -> 9";
    return o;
}

// 3. x*y*z = w^2: counts against tau_3(w^2), round trip.
Outcome box_completeness() {
    Outcome o;
    const auto t0 = Clock::now();
    const SolutionSet s = enumerate(Equation::box, 100, Method::brute);
    for (std::uint64_t w = 1; w <= 100; ++w) {
        const std::size_t got = count_anchor(s.solutions, 3, w);
        const std::uint64_t want = oracle::tau3(w * w);
        o.require(got == want, "w=" + std::to_string(w) + ": " + std::to_string(got) + " != " + std::to_string(want));
    }
    o.require(count_anchor(s.solutions, 3, 2) == 6, "w=2 spot value");
    std::string first;
    const std::size_t bad = round_trip_failures(Equation::box, s.solutions, first);
    o.require(bad == 0, std::to_string(bad) + " round-trip failures, first: " + first);
    o.require(verify_equivalence(Equation::box, 100).status == Status::equal, "brute and parametric sets differ");
    const double secs = seconds_since(t0);
    o.require(secs <= 60.0, "took " + std::to_string(secs) + " s");
    if (o.pass) o.detail = std::to_string(s.solutions.size()) + " solutions; w=2 -> 6; " + std::to_string(secs) + " s";
    return o;
}

// 4. The system {x*y = v^2, y*z = w^2} with coordinates up to 100.
Outcome system_completeness() {
    Outcome o;
    const SolutionSet a = enumerate(Equation::system, 100, Method::brute);
    const SolutionSet b = enumerate(Equation::system, 100, Method::parametric);
    o.require(a == b, "brute and parametric sets differ");

    // independent count by direct scan
    std::size_t direct = 0;
    for (std::uint64_t x = 1; x <= 100; ++x)
        for (std::uint64_t y = 1; y <= 100; ++y) {
            const auto v = oracle::floor_root(x * y, 2);
            if (v * v != x * y) continue;
            for (std::uint64_t z = 1; z <= 100; ++z) {
                const auto w = oracle::floor_root(y * z, 2);
                if (w * w == y * z) ++direct;
            }
        }
    o.require(direct == a.solutions.size(), "direct scan found " + std::to_string(direct));

    std::string first;
    const std::size_t bad = round_trip_failures(Equation::system, a.solutions, first);
    o.require(bad == 0, std::to_string(bad) + " round-trip failures, first: " + first);

    const std::vector<Tuple> small{{1, 1, 1, 1, 1}, {2, 2, 2, 2, 2}};
    o.require(enumerate(Equation::system, 2, Method::brute).solutions == small, "coordinates <= 2 spot value");
    o.require(enumerate(Equation::system, 2, Method::parametric).solutions == small, "coordinates <= 2 parametric");
    if (o.pass) o.detail = std::to_string(a.solutions.size()) + " solutions";
    return o;
}

// 5. 10,000 seeded samples per family, twice.
Outcome soundness_stress() {
    Outcome o;
    const StressOptions opt{.seed = 20240601, .count = 10000};
    const auto first = run_stress(opt);
    const auto second = run_stress(opt);
    o.require(first.size() == 8, "expected 8 families");
    for (std::size_t i = 0; i < first.size(); ++i) {
        const FamilyReport& r = first[i];
        o.require(r.samples == 10000 && r.ok(), std::string(to_string(r.family)) + ": " + std::to_string(r.passed) +
                                                    "/" + std::to_string(r.samples) + " " +
                                                    r.first_failure.value_or(""));
        o.require(second[i].passed == r.passed && second[i].samples_r1 == r.samples_r1,
                  std::string(to_string(r.family)) + ": second run differs");
    }
    const auto a = cli_run({"stress", "--seed", "11", "--count", "2000"});
    const auto b = cli_run({"stress", "--seed", "11", "--count", "2000"});
    o.require(a.code == 0 && a.out == b.out, "CLI stress output not reproducible");
    if (o.pass) o.detail = "8 families x 10000 samples, all pass";
    return o;
}

// 6. v without the factor r.
Outcome system_v_without_r() {
    Outcome o;
    const SystemParams witness{1, 1, 1, 1, 1, 1, 2, 1};
    const SystemSolution good = construct_system(witness);
    const SystemSolution bad = construct_system(witness, SystemV::without_r);
    o.require(good.v == Nat(2) && good.x * good.y == Nat(4) && pow(good.v, 2) == Nat(4), "corrected v");
    o.require(bad.v == Nat(1) && bad.x * bad.y != pow(bad.v, 2), "v without r should be 1 and fail");

    const FamilyReport r =
        stress_family(Equation::system, {.seed = 7, .count = 10000, .system_v = SystemV::without_r});
    o.require(r.samples_r_gt1 > 0 && r.samples_r1 > 0, "sample split degenerate");
    o.require(r.failures_r_gt1 == r.samples_r_gt1, "not every r > 1 sample failed");
    o.require(r.failures_r1 == 0, "an r = 1 sample failed");

    const auto cli = cli_run({"stress", "--seed", "7", "--count", "1000", "--equation", "system", "--paper-v"});
    const FamilyReport c =
        stress_family(Equation::system, {.seed = 7, .count = 1000, .system_v = SystemV::without_r});
    const std::string expect = "(v without r: " + std::to_string(c.samples_r_gt1) + "/" +
                               std::to_string(c.samples_r_gt1) + " fail with r > 1, 0/" +
                               std::to_string(c.samples_r1) + " fail with r = 1)";
    o.require(cli.code == 1, "stress --paper-v should exit 1");
    o.require(cli.out.find(expect) != std::string::npos, "stress --paper-v report: " + cli.out);
    if (o.pass) {
        o.detail = "witness v=2 vs v=1 without r; " + std::to_string(r.failures_r_gt1) + "/" +
                   std::to_string(r.samples_r_gt1) + " fail with r > 1, 0/" + std::to_string(r.samples_r1) +
                   " with r = 1";
    }
    return o;
}

// 7. (2, 2, 2) with k = 1, n = 2 has no coprime split.
Outcome general_k_coprimality() {
    Outcome o;
    try {
        extract_general(1, 2, 2, 2, 2);
        o.require(false, "extract_general accepted (2, 2, 2)");
    } catch (const Error& e) {
        o.require(e.code() == Errc::NotCoprime, std::string("wrong error: ") + e.what());
    }
    const auto cli = cli_run({"extract", "general-k", "--k", "1", "--n", "2", "2", "2", "2"});
    o.require(cli.code == 1, "CLI exit code");

    std::size_t scanned = 0;
    for (unsigned n = 1; n <= 2; ++n)
        for (int k = 1; k <= 2; ++k)
            for (int k1 = 1; k1 <= 2; ++k1)
                for (int k2 = 1; k2 <= 2; ++k2)
                    for (int t1 = 1; t1 <= 2; ++t1)
                        for (int t2 = 1; t2 <= 2; ++t2) {
                            const GeneralParams p{k1, k2, t1, t2, n, k};
                            try {
                                validate(p);
                            } catch (const Error&) {
                                continue;
                            }
                            ++scanned;
                            const bool hit = n == 2 && k == 1 && construct_general(p) == Triple{2, 2, 2};
                            o.require(!hit, "a parameter tuple reproduces (2, 2, 2)");
                        }
    if (o.pass) o.detail = "NotCoprime; " + std::to_string(scanned) + " valid tuples scanned, none reach (2, 2, 2)";
    return o;
}

// 8. gcd(x, y) | z for x*y = z^2, gcd(x, y) | w for x*y*z = w^2.
Outcome collapse_invariants() {
    Outcome o;
    std::size_t checked = 0;
    for (const Tuple& t : enumerate(Equation::pow2, 200, Method::brute).solutions) {
        const std::uint64_t g = oracle::gcd(t[0].to_u64(), t[1].to_u64());
        o.require(t[2].to_u64() % g == 0, "pow2 violation");
        const PowerReduction r = prop2_reduce(t[0], t[1], t[2], 2);
        o.require(r.d.is_one() && r.v.is_one(), "pow2 reduction did not collapse");
        ++checked;
    }
    for (const Tuple& t : enumerate(Equation::box, 100, Method::brute).solutions) {
        const std::uint64_t g = oracle::gcd(t[0].to_u64(), t[1].to_u64());
        o.require(t[3].to_u64() % g == 0, "box violation");
        const BoxReduction r = prop3_reduce(t[0], t[1], t[2], t[3], 2);
        o.require(r.D.is_one() && r.v.is_one(), "box reduction did not collapse");
        ++checked;
    }
    if (o.pass) o.detail = std::to_string(checked) + " solutions, 0 violations";
    return o;
}

// 9. Certificates from --jobs 1 and --jobs 4 are byte-identical.
Outcome certificate_determinism() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path();
    const auto p1 = dir / "dioph_acceptance_cert_j1.json";
    const auto p4 = dir / "dioph_acceptance_cert_j4.json";
    const auto a = cli_run({"verify", "--equation", "pow3", "--bound", "60", "--jobs", "1", "--out", p1.string()});
    const auto b = cli_run({"verify", "--equation", "pow3", "--bound", "60", "--jobs", "4", "--out", p4.string()});
    o.require(a.code == 0 && b.code == 0, "verify failed");
    const std::string c1 = slurp(p1);
    const std::string c4 = slurp(p4);
    o.require(!c1.empty() && c1 == c4, "certificates differ");
    std::filesystem::remove(p1);
    std::filesystem::remove(p4);
    if (o.pass) o.detail = std::to_string(c1.size()) + " bytes, digest " + ordered_json::parse(c1)["digest"].get<std::string>();
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"power round trip", power_round_trip},
        {"divisor counts", divisor_counts},
        {"box completeness", box_completeness},
        {"system completeness", system_completeness},
        {"soundness stress", soundness_stress},
        {"system v formula without r", system_v_without_r},
        {"general-k coprimality", general_k_coprimality},
        {"collapse invariants", collapse_invariants},
        {"certificate determinism", certificate_determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
