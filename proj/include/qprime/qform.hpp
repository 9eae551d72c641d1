#pragma once
// Binary quadratic form core: invariants, admissibility, evaluation,
// unimodular action, and the local root count rho_f.

#include <array>
#include <numeric>
#include <string>

#include "qprime/common.hpp"
#include "qprime/modroots.hpp"

namespace qprime {

enum class FormKind { PositiveDefinite, NegativeDefinite, Indefinite, DegenerateSquareDisc };

struct FormClassification {
    FormKind kind;
    bool irreducible;
    bool primitive;
    bool admissible;
};

struct QuadForm {
    i64 f2, f1, f0; // f(x,y) = f2 x^2 + f1 xy + f0 y^2

    QuadForm(i64 a2, i64 a1, i64 a0) : f2(a2), f1(a1), f0(a0) {
        if (a2 == 0 && a1 == 0 && a0 == 0)
            throw qprime_error("QuadForm: zero form");
        auto big = [](i64 v) { return v > (i64(1) << 62) || v < -(i64(1) << 62); };
        if (big(a2) || big(a1) || big(a0))
            throw qprime_error("QuadForm: coefficient exceeds 63-bit cap");
        i128 d = (i128)a1 * a1 - (i128)4 * a2 * a0;
        if (d > (i128)INT64_MAX || d < (i128)INT64_MIN)
            throw qprime_error("QuadForm: discriminant overflow");
    }

    bool operator==(const QuadForm& o) const {
        return f2 == o.f2 && f1 == o.f1 && f0 == o.f0;
    }
    std::string str() const {
        return std::to_string(f2) + "," + std::to_string(f1) + "," + std::to_string(f0);
    }
};

inline i64 discriminant(const QuadForm& F) { return F.f1 * F.f1 - 4 * F.f2 * F.f0; }

inline FormClassification classify(const QuadForm& F) {
    FormClassification c{};
    i64 d = discriminant(F);
    i64 root;
    bool square = d >= 0 && is_perfect_square(d, &root);
    if (square) {
        c.kind = FormKind::DegenerateSquareDisc;
    } else if (d < 0) {
        c.kind = F.f2 > 0 ? FormKind::PositiveDefinite : FormKind::NegativeDefinite;
    } else {
        c.kind = FormKind::Indefinite;
    }
    c.irreducible = !square;
    c.primitive = std::gcd(std::gcd(std::abs(F.f2), std::abs(F.f1)), std::abs(F.f0)) == 1;
    // f(x,1) == x(x+1) mod 2 iff f2 odd, f1 odd, f0 even
    bool bad_mod2 = (F.f2 & 1) && (F.f1 & 1) && !(F.f0 & 1);
    c.admissible = c.irreducible && c.primitive && !bad_mod2;
    return c;
}

inline i64 evaluate(const QuadForm& F, i64 x, i64 y) {
    if (std::abs(x) > (i64(1) << 62) || std::abs(y) > (i64(1) << 62))
        throw qprime_error("evaluate: argument too large");
    i128 v = (i128)F.f2 * x * x + (i128)F.f1 * x * y + (i128)F.f0 * y * y;
    if (v > (i128)INT64_MAX || v < (i128)INT64_MIN)
        throw qprime_error("evaluate: overflow");
    return (i64)v;
}

// F o M, M = [[a,b],[c,d]]: substitute (x,y) -> (ax+by, cx+dy).
inline QuadForm transform(const QuadForm& F, i64 a, i64 b, i64 c, i64 d) {
    if (a * d - b * c == 0) throw qprime_error("transform: singular matrix");
    i64 g2 = evaluate(F, a, c);
    i64 g0 = evaluate(F, b, d);
    i128 mid = (i128)2 * F.f2 * a * b + (i128)F.f1 * ((i128)a * d + (i128)b * c) + (i128)2 * F.f0 * c * d;
    if (mid > (i128)INT64_MAX || mid < (i128)INT64_MIN)
        throw qprime_error("transform: overflow");
    return QuadForm(g2, (i64)mid, g0);
}

inline RootSet roots_mod(const QuadForm& F, u64 d) {
    return roots_mod_poly(F.f2, F.f1, F.f0, d);
}

// rho_f(d) = #{x mod d : f(x,1) == 0 mod d}
inline u64 rho(const QuadForm& F, u64 d) {
    if (d == 0) throw qprime_error("rho: d must be >= 1");
    if (!classify(F).admissible) throw qprime_error("rho: form not admissible");
    if (d == 1) return 1;
    u64 count = 1;
    for (auto& [p, e] : factorize(d))
        count *= roots_mod_prime_power(F.f2, F.f1, F.f0, p, (unsigned)e).roots.size();
    return count;
}

inline double large_sieve_ratio(const QuadForm& F, u64 D, u64 N,
                                const std::vector<std::complex<double>>& alpha) {
    if (classify(F).kind == FormKind::DegenerateSquareDisc)
        throw qprime_error("large_sieve_ratio: degenerate form");
    return large_sieve_ratio_poly(F.f2, F.f1, F.f0, D, N, alpha);
}

// Parse "f2,f1,f0"
inline QuadForm parse_form(const std::string& s) {
    size_t a = s.find(','), b = s.rfind(',');
    if (a == std::string::npos || b == a)
        throw qprime_error("parse_form: expected 'f2,f1,f0'");
    return QuadForm(std::stoll(s.substr(0, a)), std::stoll(s.substr(a + 1, b - a - 1)),
                    std::stoll(s.substr(b + 1)));
}

} // namespace qprime
