#pragma once
// Roots of a quadratic congruence c2 x^2 + c1 x + c0 == 0 (mod d):
// Tonelli-Shanks square roots, Hensel lifting, CRT combination, and the
// empirical large-sieve ratio over root sets.

#include <algorithm>
#include <complex>
#include <optional>
#include <vector>

#include "qprime/common.hpp"
#include "qprime/sieve.hpp"

namespace qprime {

struct RootSet {
    u64 modulus = 1;
    std::vector<u64> roots; // sorted residues in [0, modulus)
};

// Square root of a mod odd prime p. Canonical root min(r, p-r).
inline std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
    if (!is_prime_u64(p)) throw qprime_error("sqrt_mod_prime: p not prime");
    a %= p;
    if (p == 2) return a;
    if (a == 0) return 0;
    if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
    u64 r;
    if (p % 4 == 3) {
        r = powmod(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks
        u64 q = p - 1;
        int s = 0;
        while ((q & 1) == 0) { q >>= 1; ++s; }
        u64 z = 2;
        while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
        u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), rr = powmod(a, (q + 1) / 2, p);
        while (t != 1) {
            u64 t2 = t;
            u64 i = 0;
            while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
            u64 b = powmod(c, 1ull << (m - i - 1), p);
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            rr = mulmod(rr, b, p);
        }
        r = rr;
    }
    return std::min(r, p - r);
}

namespace detail {

inline i64 eval_poly_mod(i64 c2, i64 c1, i64 c0, u64 x, u64 m) {
    u64 r = (mulmod(mulmod(x, x, m), (u64)(((c2 % (i64)m) + (i64)m) % (i64)m), m) +
             mulmod(x, (u64)(((c1 % (i64)m) + (i64)m) % (i64)m), m) +
             (u64)(((c0 % (i64)m) + (i64)m) % (i64)m)) % m;
    return (i64)r;
}

// Roots mod p^k for singular primes (p | 2*disc): lift layer by layer,
// brute-forcing each layer. Provably correct, cost O(p * rho) per layer.
inline std::vector<u64> roots_singular(i64 c2, i64 c1, i64 c0, u64 p, unsigned k) {
    std::vector<u64> cur;
    u64 m = p;
    if (m <= 65536) {
        for (u64 x = 0; x < m; ++x)
            if (eval_poly_mod(c2, c1, c0, x, m) == 0) cur.push_back(x);
    } else {
        throw qprime_error("roots_singular: singular prime too large");
    }
    for (unsigned j = 2; j <= k; ++j) {
        u64 mm = m * p;
        std::vector<u64> next;
        for (u64 r : cur)
            for (u64 t = 0; t < p; ++t) {
                u64 x = r + t * m;
                if (eval_poly_mod(c2, c1, c0, x, mm) == 0) next.push_back(x);
            }
        cur = std::move(next);
        m = mm;
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

} // namespace detail

// All roots of c2 x^2 + c1 x + c0 == 0 mod p^k.
inline RootSet roots_mod_prime_power(i64 c2, i64 c1, i64 c0, u64 p, unsigned k) {
    if (!is_prime_u64(p)) throw qprime_error("roots_mod_prime_power: p not prime");
    u64 pk = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (pk > (1ull << 62) / p) throw qprime_error("roots_mod_prime_power: p^k too large");
        pk *= p;
    }
    RootSet rs;
    rs.modulus = pk;
    i64 disc = c1 * c1 - 4 * c2 * c0;
    bool singular = (p == 2) || (disc % (i64)p == 0) || (c2 % (i64)p == 0);
    if (singular) {
        if (pk <= 65536 || p <= 65536) {
            rs.roots = detail::roots_singular(c2, c1, c0, p, k);
        } else {
            throw qprime_error("roots_mod_prime_power: singular prime too large");
        }
        return rs;
    }
    // Nonsingular odd p: solve via the quadratic formula mod p, Hensel-lift.
    u64 dm = (u64)(((disc % (i64)p) + (i64)p) % (i64)p);
    auto sq = sqrt_mod_prime(dm, p);
    if (!sq) return rs;
    u64 inv2a = powmod((u64)((((2 * c2) % (i64)p) + (i64)p) % (i64)p), p - 2, p);
    std::vector<u64> cur;
    u64 nb = (u64)((((-c1) % (i64)p) + (i64)p) % (i64)p);
    cur.push_back(mulmod((nb + *sq) % p, inv2a, p));
    if (*sq != 0) cur.push_back(mulmod((nb + p - *sq) % p, inv2a, p));
    u64 m = p;
    while (m < pk) {
        u64 mm = m * p;
        std::vector<u64> next;
        for (u64 r : cur) {
            // Hensel: x' = x - f(x)/f'(x) mod mm ; f'(x) invertible mod p
            u64 fx = (u64)detail::eval_poly_mod(c2, c1, c0, r, mm);
            u64 fp = (mulmod(2 * (u64)(((c2 % (i64)p) + (i64)p) % (i64)p) % p, r % p, p) +
                      (u64)(((c1 % (i64)p) + (i64)p) % (i64)p)) % p;
            u64 inv = powmod(fp, p - 2, p);
            u64 corr = mulmod(fx % mm / m % p, inv, p); // f(x) = m * (f(x)/m)
            u64 x = (r + mm - mulmod(corr, 1, p) * m % mm) % mm;
            // direct check & fix (defensive)
            if (detail::eval_poly_mod(c2, c1, c0, x, mm) != 0) {
                bool found = false;
                for (u64 t = 0; t < p; ++t) {
                    u64 cand = r + t * m;
                    if (detail::eval_poly_mod(c2, c1, c0, cand, mm) == 0) { x = cand; found = true; break; }
                }
                if (!found) throw qprime_error("roots_mod_prime_power: lift failed");
            }
            next.push_back(x);
        }
        cur = std::move(next);
        m = mm;
    }
    std::sort(cur.begin(), cur.end());
    rs.roots = std::move(cur);
    return rs;
}

// All roots mod d via CRT over the prime powers of d.
inline RootSet roots_mod_poly(i64 c2, i64 c1, i64 c0, u64 d) {
    if (d == 0) throw qprime_error("roots_mod: d must be >= 1");
    RootSet acc;
    acc.modulus = 1;
    acc.roots = {0};
    if (d == 1) return acc;
    for (auto& [p, e] : factorize(d)) {
        RootSet part = roots_mod_prime_power(c2, c1, c0, p, (unsigned)e);
        std::vector<u64> comb;
        // CRT: x == a mod M, x == b mod m
        u64 M = acc.modulus, m = part.modulus;
        u64 Minv = powmod(M % m, // M and m coprime; use Euler with phi(m)? m is p^e
                          (m / p) * (p - 1) - 1, m);
        for (u64 a : acc.roots)
            for (u64 b : part.roots) {
                u64 diff = (b + m - a % m) % m;
                u64 t = mulmod(diff, Minv, m);
                comb.push_back(a + t * M);
            }
        acc.modulus = M * m;
        acc.roots = std::move(comb);
        if (acc.roots.empty()) break;
    }
    std::sort(acc.roots.begin(), acc.roots.end());
    return acc;
}

// LHS/RHS of the large-sieve inequality for the root set of
// c2 + c1 v + c0 v^2 == 0 (mod d), d in [D, 2D]:
//   LHS = sum_d sum_roots |sum_{n<=N} alpha_n e(v n / d)|^2,  RHS = (D+N) sum |alpha|^2.
inline double large_sieve_ratio_poly(i64 c2, i64 c1, i64 c0, u64 D, u64 N,
                                     const std::vector<std::complex<double>>& alpha) {
    if (alpha.size() != N) throw qprime_error("large_sieve_ratio: |alpha| must equal N");
    double norm2 = 0;
    for (auto& a : alpha) norm2 += std::norm(a);
    if (norm2 == 0) return 0.0;
    Kahan lhs;
    const double TWO_PI = 6.283185307179586476925286766559;
    for (u64 d = D; d <= 2 * D; ++d) {
        RootSet rs = roots_mod_poly(c0, c1, c2, d); // roots of F(1,v) in v
        for (u64 v : rs.roots) {
            // incremental rotation, re-synced periodically
            double theta = TWO_PI * (double)v / (double)d;
            std::complex<double> w(std::cos(theta), std::sin(theta));
            std::complex<double> ph = w;
            std::complex<double> s(0, 0);
            for (u64 n = 1; n <= N; ++n) {
                s += alpha[n - 1] * ph;
                if (n % 256 == 0) {
                    double t = theta * (double)(n + 1);
                    ph = {std::cos(t), std::sin(t)};
                } else {
                    ph *= w;
                }
            }
            lhs.add(std::norm(s));
        }
    }
    return lhs.value() / ((double)(D + N) * norm2);
}

} // namespace qprime
