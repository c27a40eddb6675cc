#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dioph/nat.hpp"

namespace dioph {

enum class Equation { pow2, pow3, pow4, pow5, pow6, box, system, general_k };

inline constexpr std::array<Equation, 8> all_equations{
    Equation::pow2, Equation::pow3, Equation::pow4,   Equation::pow5,
    Equation::pow6, Equation::box,  Equation::system, Equation::general_k,
};

enum class BoundKind { z_max, w_max, coordinate_max };

/// One solution, fields in tuple order: (x,y,z), (x,y,z,w) or (x,y,z,v,w).
using Tuple = std::vector<Nat>;

constexpr std::string_view to_string(Equation e) noexcept {
    switch (e) {
        case Equation::pow2: return "pow2";
        case Equation::pow3: return "pow3";
        case Equation::pow4: return "pow4";
        case Equation::pow5: return "pow5";
        case Equation::pow6: return "pow6";
        case Equation::box: return "box";
        case Equation::system: return "system";
        case Equation::general_k: return "general-k";
    }
    return "?";
}

constexpr std::string_view to_string(BoundKind k) noexcept {
    switch (k) {
        case BoundKind::z_max: return "z-max";
        case BoundKind::w_max: return "w-max";
        case BoundKind::coordinate_max: return "coordinate-max";
    }
    return "?";
}

inline std::optional<Equation> parse_equation(std::string_view s) noexcept {
    for (Equation e : all_equations) {
        if (to_string(e) == s) return e;
    }
    return std::nullopt;
}

constexpr bool is_power(Equation e) noexcept {
    return e == Equation::pow2 || e == Equation::pow3 || e == Equation::pow4 || e == Equation::pow5 ||
           e == Equation::pow6;
}

/// Exponent n of x*y = z^n; only meaningful when is_power(e).
constexpr unsigned power_exponent(Equation e) noexcept {
    switch (e) {
        case Equation::pow2: return 2;
        case Equation::pow3: return 3;
        case Equation::pow4: return 4;
        case Equation::pow5: return 5;
        case Equation::pow6: return 6;
        default: return 0;
    }
}

inline Equation power_equation(unsigned n) {
    switch (n) {
        case 2: return Equation::pow2;
        case 3: return Equation::pow3;
        case 4: return Equation::pow4;
        case 5: return Equation::pow5;
        case 6: return Equation::pow6;
        default: throw Error(Errc::InvalidInput, "n must be in 2..6, got " + std::to_string(n));
    }
}

constexpr BoundKind bound_kind(Equation e) noexcept {
    if (e == Equation::box) return BoundKind::w_max;
    if (e == Equation::system) return BoundKind::coordinate_max;
    return BoundKind::z_max;
}

inline std::span<const std::string_view> field_names(Equation e) noexcept {
    static constexpr std::array<std::string_view, 3> xyz{"x", "y", "z"};
    static constexpr std::array<std::string_view, 4> xyzw{"x", "y", "z", "w"};
    static constexpr std::array<std::string_view, 5> xyzvw{"x", "y", "z", "v", "w"};
    if (e == Equation::box) return xyzw;
    if (e == Equation::system) return xyzvw;
    return xyz;
}

/// Exact membership test. general-k needs k and n; other equations ignore them.
inline bool is_solution(Equation e, std::span<const Nat> t, const Nat& k = Nat{}, unsigned n = 1) {
    if (t.size() != field_names(e).size()) {
        throw Error(Errc::InvalidInput, std::string(to_string(e)) + " expects " +
                                            std::to_string(field_names(e).size()) + " values, got " +
                                            std::to_string(t.size()));
    }
    switch (e) {
        case Equation::box: return t[0] * t[1] * t[2] == pow(t[3], 2);
        case Equation::system: return t[0] * t[1] == pow(t[3], 2) && t[1] * t[2] == pow(t[4], 2);
        case Equation::general_k: return t[0] * t[1] == k * pow(t[2], n);
        default: return t[0] * t[1] == pow(t[2], power_exponent(e));
    }
}

/// Label used in human-facing output: x*y = z^n counts rectangles with
/// n-th power area, x*y*z = w^2 counts boxes with square volume.
constexpr std::string_view shape_label(Equation e) noexcept {
    if (e == Equation::box) return "box";
    if (e == Equation::system) return "box with square faces";
    return "rectangle";
}

} // namespace dioph
