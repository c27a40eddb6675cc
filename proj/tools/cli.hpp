#pragma once

// dioph command-line front end.
//
// Exit codes: 0 success, 1 mathematical negative (not a solution, mismatch,
// stress failure, NotCoprime), 2 usage error, 3 safety cap exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dioph/dioph.hpp"

namespace dioph::cli {

enum ExitCode : int { ok = 0, negative = 1, usage = 2, resource = 3 };

namespace detail {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int exit_for(Errc e) {
    switch (e) {
        case Errc::InvalidInput:
        case Errc::InvalidParams: return usage;
        case Errc::BoundTooLarge: return resource;
        default: return negative;
    }
}

struct TupleArgs {
    std::optional<std::string> equation_flag;
    std::vector<std::string> positional;
    std::optional<std::string> k;
    std::optional<unsigned> n;
};

struct Parsed {
    Equation equation;
    std::vector<Nat> values;
    Nat k;
    unsigned n = 1;
};

inline Equation equation_from(const std::string& s) {
    if (auto e = parse_equation(s)) return *e;
    throw Usage("unknown equation '" + s + "' (expected pow2..pow6, box, system, general-k)");
}

// check/extract/construct accept the equation either positionally
// (`check pow2 4 9 6`) or via --equation.
inline Parsed resolve(const TupleArgs& a) {
    Parsed p{};
    std::size_t first = 0;
    if (a.equation_flag) {
        p.equation = equation_from(*a.equation_flag);
    } else {
        if (a.positional.empty()) throw Usage("missing equation");
        p.equation = equation_from(a.positional[0]);
        first = 1;
    }
    const bool general = p.equation == Equation::general_k;
    if (general) {
        if (!a.k || !a.n) throw Usage("general-k requires --k and --n");
        p.k = Nat::parse(*a.k);
        p.n = *a.n;
        if (p.n < 1) throw Usage("--n must be >= 1");
    } else if (a.k || a.n) {
        throw Usage("--k and --n apply to general-k only");
    }
    for (std::size_t i = first; i < a.positional.size(); ++i) p.values.push_back(Nat::parse(a.positional[i]));
    return p;
}

inline void require_arity(const Parsed& p, std::size_t arity, std::string_view what) {
    if (p.values.size() != arity) {
        throw Usage(std::string(to_string(p.equation)) + " " + std::string(what) + " takes " +
                    std::to_string(arity) + " values, got " + std::to_string(p.values.size()));
    }
}

inline void add_tuple_args(CLI::App* sub, TupleArgs& a) {
    sub->add_option("args", a.positional, "[equation] followed by the values");
    sub->add_option("--equation", a.equation_flag, "pow2..pow6, box, system, general-k");
    sub->add_option("--k", a.k, "k for general-k");
    sub->add_option("--n", a.n, "n for general-k");
}

inline void write_line(std::ostream& out, const ordered_json& j) { out << j.dump() << '\n'; }

inline int cmd_check(const TupleArgs& a, std::ostream& out) {
    const Parsed p = resolve(a);
    require_arity(p, field_names(p.equation).size(), "check");
    const bool yes = is_solution(p.equation, p.values, p.k, p.n);
    out << (yes ? "solution" : "not-a-solution") << '\n';
    return yes ? ok : negative;
}

inline int cmd_extract(const TupleArgs& a, bool with_trace, std::ostream& out) {
    const Parsed p = resolve(a);
    const auto& v = p.values;
    require_arity(p, field_names(p.equation).size(), "extract");
    if (is_power(p.equation)) {
        const PowerExtraction ex = extract_power(power_exponent(p.equation), v[0], v[1], v[2]);
        write_line(out, to_json(fields_of(ex.params)));
        if (with_trace) write_line(out, ordered_json{{"trace", trace_json(ex.trace)}});
    } else if (p.equation == Equation::box) {
        const BoxExtraction ex = extract_box(v[0], v[1], v[2], v[3]);
        write_line(out, to_json(ex.params.fields()));
        if (with_trace) write_line(out, ordered_json{{"trace", trace_json(ex.trace)}});
    } else if (p.equation == Equation::system) {
        const SystemExtraction ex = extract_system(v[0], v[1], v[2], v[3], v[4]);
        write_line(out, to_json(ex.params.fields()));
        if (with_trace) write_line(out, ordered_json{{"trace", trace_json(ex.trace)}});
    } else {
        if (with_trace) throw Usage("--trace is not available for general-k (a single decomposition step)");
        write_line(out, to_json(extract_general(p.k, p.n, v[0], v[1], v[2]).fields()));
    }
    return ok;
}

inline void emit(std::ostream& out, Equation eq, const std::vector<Tuple>& sols, bool csv) {
    if (csv) {
        out << csv_header(field_names(eq));
        for (const Tuple& t : sols) out << csv_solution(t);
    } else {
        for (const Tuple& t : sols) out << solution_json(eq, t).dump() << '\n';
    }
}

inline int cmd_construct(const TupleArgs& a, bool csv, std::ostream& out) {
    const Parsed p = resolve(a);
    const auto& v = p.values;
    require_arity(p, param_names(p.equation).size(), "construct");
    Tuple sol;
    if (is_power(p.equation)) {
        sol = construct_power(make_power_params(power_exponent(p.equation), v)).tuple();
    } else if (p.equation == Equation::box) {
        sol = construct_box(BoxParams{v[0], v[1], v[2], v[3], v[4], v[5]}).tuple();
    } else if (p.equation == Equation::system) {
        sol = construct_system(SystemParams{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]}).tuple();
    } else {
        sol = construct_general(GeneralParams{v[0], v[1], v[2], v[3], p.n, p.k}).tuple();
    }
    emit(out, p.equation, {sol}, csv);
    return ok;
}

struct RunConfig {
    std::string equation;
    std::string bound;
    std::string method;
    std::string format = "jsonl";
    std::optional<std::string> out_path;
    unsigned jobs = 1;
    std::uint64_t cap = default_cap;
};

// Streams go to --out when given, otherwise to the caller's stdout.
class Sink {
public:
    Sink(const std::optional<std::string>& path, std::ostream& fallback) : os_(&fallback) {
        if (path) {
            file_ = std::make_unique<std::ofstream>(*path, std::ios::binary);
            if (!*file_) throw Usage("cannot open '" + *path + "' for writing");
            os_ = file_.get();
        }
    }
    std::ostream& get() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

inline Equation enumerable(const std::string& s) {
    const Equation eq = equation_from(s);
    if (eq == Equation::general_k) throw Usage("general-k has no finite enumeration");
    return eq;
}

inline int cmd_enumerate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Equation eq = enumerable(c.equation);
    const Nat bound = Nat::parse(c.bound);
    const EnumerationOptions opt{c.jobs, c.cap};
    const std::string method = c.method.empty() ? "brute" : c.method;

    SolutionSet set;
    if (method == "both") {
        set = enumerate(eq, bound, Method::brute, opt);
        const SolutionSet other = enumerate(eq, bound, Method::parametric, opt);
        if (set != other) {
            err << "brute and parametric sets differ (" << set.solutions.size() << " vs "
                << other.solutions.size() << ")\n";
            return negative;
        }
    } else {
        set = enumerate(eq, bound, method == "brute" ? Method::brute : Method::parametric, opt);
    }
    Sink sink(c.out_path, out);
    emit(sink.get(), eq, set.solutions, c.format == "csv");
    err << to_string(eq) << ": " << set.solutions.size() << ' ' << shape_label(eq) << " solutions with "
        << to_string(bound_kind(eq)) << ' ' << bound << " (" << method << ")\n";
    return ok;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Equation eq = enumerable(c.equation);
    if (!c.method.empty() && c.method != "both") throw Usage("verify compares both methods; use --method both");
    const Certificate cert = verify_equivalence(eq, Nat::parse(c.bound), EnumerationOptions{c.jobs, c.cap});
    Sink sink(c.out_path, out);
    sink.get() << certificate_json(cert).dump(2) << '\n';
    if (cert.status == Status::mismatch) {
        err << "mismatch; first discrepancy: " << solution_json(eq, *cert.first_discrepancy).dump() << '\n';
        return negative;
    }
    err << to_string(eq) << ": " << cert.count_a << ' ' << shape_label(eq) << " solutions agree, digest "
        << cert.digest << '\n';
    return ok;
}

struct StressConfig {
    std::uint64_t seed = 0;
    std::uint64_t count = 1000;
    std::uint64_t max_param = 50;
    bool omit_r = false;
    std::optional<std::string> equation;
};

inline int cmd_stress(const StressConfig& c, std::ostream& out, std::ostream& err) {
    const StressOptions opt{c.seed, c.count, c.max_param, c.omit_r ? SystemV::without_r : SystemV::corrected};
    std::vector<FamilyReport> reports;
    if (c.equation) {
        reports.push_back(stress_family(equation_from(*c.equation), opt));
    } else {
        reports = run_stress(opt);
    }
    bool all_ok = true;
    for (const FamilyReport& r : reports) {
        out << to_string(r.family) << ": " << r.passed << '/' << r.samples << " pass";
        if (r.family == Equation::system && c.omit_r) {
            out << " (v without r: " << r.failures_r_gt1 << '/' << r.samples_r_gt1 << " fail with r > 1, "
                << r.failures_r1 << '/' << r.samples_r1 << " fail with r = 1)";
        }
        out << '\n';
        if (!r.ok()) {
            all_ok = false;
            err << to_string(r.family) << ": first failure: " << *r.first_failure << '\n';
        }
    }
    return all_ok ? ok : negative;
}

} // namespace detail

/// Runs the tool on `args` (without the program name).
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Parametric families of x*y = z^n, x*y*z = w^2 and {x*y = v^2, y*z = w^2}", "dioph"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    TupleArgs tuple_args;
    bool with_trace = false;
    std::string tuple_format = "jsonl";

    auto* check = app.add_subcommand("check", "Test whether a tuple solves an equation");
    add_tuple_args(check, tuple_args);

    auto* extract = app.add_subcommand("extract", "Canonical parameters of a solution");
    add_tuple_args(extract, tuple_args);
    extract->add_flag("--trace", with_trace, "Also print every intermediate of the extraction");

    auto* construct = app.add_subcommand("construct", "Build a solution from family parameters");
    add_tuple_args(construct, tuple_args);
    construct->add_option("--format", tuple_format)->check(CLI::IsMember({"jsonl", "csv"}));

    RunConfig run_cfg;
    auto add_run = [&](CLI::App* sub, bool with_format) {
        sub->add_option("--equation", run_cfg.equation, "pow2..pow6, box, system")->required();
        sub->add_option("--bound", run_cfg.bound, "z-max (powN), w-max (box) or coordinate max (system)")
            ->required();
        sub->add_option("--method", run_cfg.method)->check(CLI::IsMember({"brute", "parametric", "both"}));
        if (with_format) sub->add_option("--format", run_cfg.format)->check(CLI::IsMember({"jsonl", "csv"}));
        sub->add_option("--out", run_cfg.out_path, "Write to this file instead of stdout");
        sub->add_option("--jobs", run_cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--cap", run_cfg.cap, "Maximum number of solutions")->check(CLI::PositiveNumber);
    };
    auto* enumerate_cmd = app.add_subcommand("enumerate", "List every solution up to a bound");
    add_run(enumerate_cmd, true);
    auto* verify = app.add_subcommand("verify", "Certify brute force and parametric enumeration agree");
    add_run(verify, false);

    StressConfig stress_cfg;
    auto* stress = app.add_subcommand("stress", "Seeded random soundness and round-trip checks");
    stress->add_option("--seed", stress_cfg.seed);
    stress->add_option("--count", stress_cfg.count, "Samples per family");
    stress->add_option("--max-param", stress_cfg.max_param, "Largest sampled parameter value")
        ->check(CLI::PositiveNumber);
    stress->add_option("--equation", stress_cfg.equation, "Restrict to one family");
    stress->add_flag("--paper-v", stress_cfg.omit_r, "Build system solutions with the v formula that omits r");
    stress->add_option("--jobs", run_cfg.jobs)->check(CLI::PositiveNumber);

    std::vector<const char*> argv{"dioph"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForVersion& e) {
        out << tool_version << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return usage;
    }

    try {
        if (*check) return cmd_check(tuple_args, out);
        if (*extract) return cmd_extract(tuple_args, with_trace, out);
        if (*construct) return cmd_construct(tuple_args, tuple_format == "csv", out);
        if (*enumerate_cmd) return cmd_enumerate(run_cfg, out, err);
        if (*verify) return cmd_verify(run_cfg, out, err);
        if (*stress) return cmd_stress(stress_cfg, out, err);
    } catch (const Usage& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_for(e.code());
    }
    return usage;
}

} // namespace dioph::cli
