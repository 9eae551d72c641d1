#pragma once
// Theorem constants: the singular series nu_f, the archimedean areas
// Sigma_f and Sigma'_f, and interval areas mu_f(I).

#include <cmath>
#include <functional>

#include "qprime/qform.hpp"
#include "qprime/sieve.hpp"

namespace qprime {

struct DensityResult {
    double value = 0.0;
    double tail_bound = 0.0;
    double truncation = 0.0; // p_max or X_probe actually used
    double value_secondary = 0.0; // second probe (indefinite cases)
};

enum class NuVariant { AsPrinted, RhoAtRamified };

namespace detail {

// Adaptive Simpson quadrature, absolute tolerance.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-8) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace detail

// measure{x : f(x,y) <= B} for f2 > 0 (an interval, possibly empty)
inline double section_len_leq(const QuadForm& F, double y, double B) {
    double disc = (double)discriminant(F);
    double arg = disc * y * y + 4.0 * (double)F.f2 * B;
    if (arg <= 0) return 0.0;
    return std::sqrt(arg) / (double)F.f2;
}

// measure{x : lo < f(x,y) <= hi}
inline double section_len(const QuadForm& F, double y, double lo, double hi) {
    if (F.f2 <= 0) throw qprime_error("section_len: requires f2 > 0");
    return section_len_leq(F, y, hi) - section_len_leq(F, y, lo);
}

// c_f = sup_{f(x,y) <= 1} y for definite f, 1 for indefinite (per convention).
inline double c_f(const QuadForm& F) {
    auto cls = classify(F);
    if (cls.kind == FormKind::PositiveDefinite)
        return 2.0 * std::sqrt((double)F.f2 / (double)(-discriminant(F)));
    if (cls.kind == FormKind::Indefinite) return 1.0;
    throw qprime_error("c_f: unsupported form kind");
}

// Singular series nu_f as an Euler product over p <= p_max.
inline DensityResult nu_f(const QuadForm& F, u64 p_max, NuVariant variant) {
    if (!classify(F).admissible) throw qprime_error("nu_f: form not admissible");
    if (p_max < 100) throw qprime_error("nu_f: p_max >= 100 required");
    i64 Delta = discriminant(F);

    // Exact-rho primes: p | 2*Delta*f2. Beyond those, rho(p) = 1 + (Delta|p).
    auto exact_rho_needed = [&](u64 p) {
        return p == 2 || Delta % (i64)p == 0 || F.f2 % (i64)p == 0;
    };

    double logsum = parallel_sum_chunked(0, (i64)p_max + 1, [&](i64 lo, i64 hi) {
        PrimeTable pt((u64)std::max<i64>(lo, 2), (u64)hi);
        Kahan acc;
        pt.for_each_prime([&](u64 p) {
            double fac;
            bool ramified = (Delta % (i64)p == 0);
            double rho_p;
            if (exact_rho_needed(p))
                rho_p = (double)roots_mod_prime_power(F.f2, F.f1, F.f0, p, 1).roots.size();
            else
                rho_p = 1.0 + (double)kronecker(Delta, (i64)p);
            if (ramified && variant == NuVariant::AsPrinted)
                fac = 1.0 / (1.0 - 1.0 / (double)p);
            else
                fac = (1.0 - rho_p / (double)p) / (1.0 - 1.0 / (double)p);
            if (fac <= 0.0)
                throw qprime_error("nu_f: local factor vanished (obstructed form)");
            acc.add(std::log(fac));
        });
        return acc.value();
    }, 1 << 20);

    DensityResult r;
    r.value = std::exp(logsum);
    // Tail: the generic log-factor is -chi(p)/p + O(1/p^2).  The 1/p^2 part
    // sums to < 3/p_max; the character part is estimated by partial summation
    // with an empirical character-sum constant (not a proven bound).
    r.tail_bound = 3.0 / (double)p_max + 2.0 * std::log((double)p_max) / std::sqrt((double)p_max);
    r.truncation = (double)p_max;
    return r;
}

// Local product governing the all-ell count: averaging rho over the ell
// classes mod p replaces the factor (1 - rho/p)/(1 - 1/p) by 1 - (rho-1)/p.
inline DensityResult nu_f_ell_averaged(const QuadForm& F, u64 p_max) {
    if (!classify(F).admissible) throw qprime_error("nu_f_ell_averaged: form not admissible");
    if (p_max < 100) throw qprime_error("nu_f_ell_averaged: p_max >= 100 required");
    i64 Delta = discriminant(F);
    double logsum = parallel_sum_chunked(0, (i64)p_max + 1, [&](i64 lo, i64 hi) {
        PrimeTable pt((u64)std::max<i64>(lo, 2), (u64)hi);
        Kahan acc;
        pt.for_each_prime([&](u64 p) {
            double rho_p;
            if (p == 2 || Delta % (i64)p == 0 || F.f2 % (i64)p == 0)
                rho_p = (double)roots_mod_prime_power(F.f2, F.f1, F.f0, p, 1).roots.size();
            else
                rho_p = 1.0 + (double)kronecker(Delta, (i64)p);
            double fac = 1.0 - (rho_p - 1.0) / (double)p;
            if (fac <= 0.0) throw qprime_error("nu_f_ell_averaged: local factor vanished");
            acc.add(std::log(fac));
        });
        return acc.value();
    }, 1 << 20);
    DensityResult r;
    r.value = std::exp(logsum);
    r.tail_bound = 3.0 / (double)p_max + 2.0 * std::log((double)p_max) / std::sqrt((double)p_max);
    r.truncation = (double)p_max;
    return r;
}

// Archimedean density Sigma_f: definite — Area{f(x,y^2) <= 1}; indefinite —
// Area{0 < f(x,y^2) < X, 0 < y <= X^{1/4}}/X^{3/4} probed at X and 16X.
inline DensityResult sigma_f(const QuadForm& F, double X_probe = 1e6) {
    auto cls = classify(F);
    if (!cls.irreducible) throw qprime_error("sigma_f: degenerate form");
    DensityResult r;
    if (cls.kind == FormKind::PositiveDefinite) {
        double T = std::pow(4.0 * (double)F.f2 / (double)(-discriminant(F)), 0.25);
        r.value = 2.0 * detail::integrate(
                           [&](double t) { return section_len_leq(F, t * t, 1.0); }, 0.0, T);
        r.tail_bound = 1e-6;
        r.truncation = 0;
        return r;
    }
    if (cls.kind != FormKind::Indefinite) throw qprime_error("sigma_f: unsupported kind");
    auto probe = [&](double X) {
        return detail::integrate(
                   [&](double y) { return section_len(F, y * y, 0.0, X); }, 0.0,
                   std::pow(X, 0.25), 1e-8 * X) /
               std::pow(X, 0.75);
    };
    double v1 = probe(X_probe), v2 = probe(16.0 * X_probe);
    r.value = v2;
    r.value_secondary = v1;
    r.tail_bound = std::abs(v2 - v1);
    r.truncation = 16.0 * X_probe;
    return r;
}

// Sigma'_f: definite — Area{f <= 1} = 2*pi/sqrt(-Delta); indefinite —
// Area{0 < f < X, 0 < y < sqrt(X)}/X probed at X and 16X.
inline DensityResult sigma_f_prime(const QuadForm& F, double X_probe = 1e6) {
    auto cls = classify(F);
    if (!cls.irreducible) throw qprime_error("sigma_f_prime: degenerate form");
    DensityResult r;
    if (cls.kind == FormKind::PositiveDefinite) {
        r.value = 2.0 * M_PI / std::sqrt((double)(-discriminant(F)));
        // cross-check by quadrature over y
        double ymax = c_f(F);
        double quad = 2.0 * detail::integrate(
                               [&](double y) { return section_len_leq(F, y, 1.0); }, 0.0, ymax);
        r.tail_bound = std::abs(quad - r.value);
        return r;
    }
    if (cls.kind != FormKind::Indefinite) throw qprime_error("sigma_f_prime: unsupported kind");
    auto probe = [&](double X) {
        return detail::integrate(
                   [&](double y) { return section_len(F, y, 0.0, X); }, 0.0, std::sqrt(X),
                   1e-8 * X) /
               X;
    };
    double v1 = probe(X_probe), v2 = probe(16.0 * X_probe);
    r.value = v2;
    r.value_secondary = v1;
    r.tail_bound = std::abs(v2 - v1);
    r.truncation = 16.0 * X_probe;
    return r;
}

// mu_f(I) = Area{0 < f(x,y) < X, y in I}, I = (a,b]
inline double mu_f_interval(const QuadForm& F, double a, double b, double X) {
    if (a > b) throw qprime_error("mu_f_interval: empty interval bounds reversed");
    double cap = c_f(F) * std::sqrt(X) * (1.0 + 1e-12);
    if (a < 0 || b > cap) throw qprime_error("mu_f_interval: I outside (0, c_f sqrt X]");
    return detail::integrate([&](double y) { return section_len(F, y, 0.0, X); }, a, b,
                             1e-10 * X);
}

} // namespace qprime
