#pragma once
// Prime infrastructure: segmented sieve with arithmetic-function layers,
// deterministic 64-bit primality, factorization, and Vaughan's identity.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "qprime/common.hpp"

namespace qprime {

// ---------------------------------------------------------------------------
// Deterministic Miller-Rabin, complete for n < 2^64 with this witness set.
// ---------------------------------------------------------------------------
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Simple sieve for base primes (shared, built on demand).
// ---------------------------------------------------------------------------
inline const std::vector<u64>& small_primes(u64 limit = 1000000) {
    static std::vector<u64> primes;
    static u64 built = 0;
    if (built < limit) {
        primes.clear();
        std::vector<bool> comp(limit + 1, false);
        for (u64 i = 2; i <= limit; ++i) {
            if (!comp[i]) {
                primes.push_back(i);
                for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
            }
        }
        built = limit;
    }
    return primes;
}

// ---------------------------------------------------------------------------
// Factorization: trial division then Pollard rho (Brent variant).
// ---------------------------------------------------------------------------
namespace detail {

inline u64 pollard_brent(u64 n) {
    // n composite, odd, no factor <= trial bound reached by caller
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ n);
    while (true) {
        u64 y = rng() % (n - 2) + 1, c = rng() % (n - 1) + 1, m = 128;
        u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
            for (u64 k = 0; k < r && g == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

inline void factor_rec(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) { out[n]++; return; }
    u64 d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace detail

// prime -> exponent, ascending
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    if (n == 0) throw qprime_error("factorize: n must be >= 1");
    std::vector<std::pair<u64, int>> fs;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (p * p > n) break;
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            fs.push_back({p, e});
        }
    }
    if (n > 1 && !is_prime_u64(n)) {
        // trial division to 1e6, Pollard for what survives
        for (u64 p : small_primes()) {
            if (p < 17) continue;
            if (p * p > n) break;
            if (n % p == 0) {
                int e = 0;
                while (n % p == 0) { n /= p; ++e; }
                fs.push_back({p, e});
                if (is_prime_u64(n)) break;
            }
        }
    }
    if (n > 1) {
        if (is_prime_u64(n)) {
            fs.push_back({n, 1});
        } else {
            std::map<u64, int> big;
            detail::factor_rec(n, big);
            for (auto& [p, e] : big) fs.push_back({p, e});
        }
    }
    std::sort(fs.begin(), fs.end());
    return fs;
}

inline std::vector<u64> divisors(u64 n) {
    auto fs = factorize(n);
    std::vector<u64> ds{1};
    for (auto& [p, e] : fs) {
        size_t sz = ds.size();
        u64 pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

enum class ArithFn { Lambda, Mu, Tau, Phi };

// Standard multiplicative-function evaluation from the factorization.
// Lambda returns a double (natural log); others are exact integers.
inline double arith(u64 n, ArithFn which) {
    if (n == 0) throw qprime_error("arith: n must be >= 1");
    auto fs = factorize(n);
    switch (which) {
        case ArithFn::Lambda:
            return (fs.size() == 1) ? std::log((double)fs[0].first) : 0.0;
        case ArithFn::Mu: {
            for (auto& [p, e] : fs)
                if (e >= 2) return 0.0;
            return (fs.size() % 2 == 0) ? 1.0 : -1.0;
        }
        case ArithFn::Tau: {
            double t = 1;
            for (auto& [p, e] : fs) t *= (e + 1);
            return t;
        }
        case ArithFn::Phi: {
            u64 r = n;
            for (auto& [p, e] : fs) r = r / p * (p - 1);
            return (double)r;
        }
    }
    return 0.0;
}

// Fast von Mangoldt for hot loops: one primality test plus perfect-power checks.
inline double lambda_vm_fast(u64 n) {
    if (n < 2) return 0.0;
    if (is_prime_u64(n)) return std::log((double)n);
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull,
                  37ull, 41ull, 43ull, 47ull, 53ull, 59ull, 61ull}) {
        if (n % p == 0) {
            u64 m = n;
            while (m % p == 0) m /= p;
            return m == 1 ? std::log((double)p) : 0.0;
        }
    }
    // no factor <= 61 and composite: n = p^k needs k >= 2, p > 61
    for (unsigned k = 2; ; ++k) {
        u64 r = iroot(n, k);
        if (r <= 61) break;
        u128 pw = 1;
        for (unsigned i = 0; i < k; ++i) pw *= r;
        if (pw == n && is_prime_u64(r)) return std::log((double)r);
    }
    return 0.0;
}

// prime indicator
inline double lambda_pi(u64 n) { return is_prime_u64(n) ? 1.0 : 0.0; }

// ---------------------------------------------------------------------------
// PrimeTable: segmented Eratosthenes over [lo, hi) with optional layers.
// ---------------------------------------------------------------------------
class PrimeTable {
public:
    PrimeTable(u64 lo, u64 hi) : lo_(lo), hi_(hi) {
        if (lo >= hi) throw qprime_error("prime_table: need lo < hi");
        if (hi - lo > (1ull << 31)) throw qprime_error("prime_table: range too large");
        if (hi > (1ull << 63)) throw qprime_error("prime_table: hi too large");
        build();
    }

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }

    bool is_prime(u64 n) const {
        check(n);
        return bits_[n - lo_];
    }

    template <typename Fn>
    void for_each_prime(Fn&& fn) const {
        for (u64 n = lo_; n < hi_; ++n)
            if (bits_[n - lo_]) fn(n);
    }

    std::vector<u64> primes() const {
        std::vector<u64> out;
        for_each_prime([&](u64 p) { out.push_back(p); });
        return out;
    }

    // Arithmetic-function layers, built on demand from a division sieve.
    double lambda_vm(u64 n) {
        ensure_layers();
        check(n);
        return lambda_[n - lo_];
    }
    int mu(u64 n) {
        ensure_layers();
        check(n);
        return mu_[n - lo_];
    }
    i64 tau(u64 n) {
        ensure_layers();
        check(n);
        return tau_[n - lo_];
    }
    u64 phi(u64 n) {
        ensure_layers();
        check(n);
        return phi_[n - lo_];
    }

private:
    void check(u64 n) const {
        if (n < lo_ || n >= hi_) throw qprime_error("prime_table: index out of range");
    }

    void build() {
        u64 len = hi_ - lo_;
        bits_.assign(len, true);
        for (u64 n = lo_; n < std::min(hi_, (u64)2); ++n) bits_[n - lo_] = false;
        u64 root = isqrt64(hi_ - 1);
        const auto& base = small_primes(std::max<u64>(root, 1000));
        for (u64 p : base) {
            if (p > root) break;
            u64 start = std::max(p * p, ((lo_ + p - 1) / p) * p);
            for (u64 m = start; m < hi_; m += p) bits_[m - lo_] = false;
        }
    }

    void ensure_layers() {
        if (!lambda_.empty()) return;
        u64 len = hi_ - lo_;
        lambda_.assign(len, 0.0);
        mu_.assign(len, 1);
        tau_.assign(len, 1);
        phi_.assign(len, 0);
        std::vector<u64> rem(len);
        std::vector<u64> ph(len, 1);
        std::vector<u64> firstp(len, 0);
        std::vector<int> ndist(len, 0);
        for (u64 n = lo_; n < hi_; ++n) rem[n - lo_] = n;
        u64 root = isqrt64(hi_ - 1);
        const auto& base = small_primes(std::max<u64>(root, 1000));
        for (u64 p : base) {
            if (p > root) break;
            u64 start = ((lo_ + p - 1) / p) * p;
            if (start < p) start = p;
            for (u64 m = std::max(start, p); m < hi_; m += p) {
                u64 i = m - lo_;
                int e = 0;
                u64 pk = 1;
                while (rem[i] % p == 0) { rem[i] /= p; ++e; pk *= p; }
                if (e == 0) continue;
                tau_[i] *= (e + 1);
                mu_[i] = (e >= 2) ? 0 : -mu_[i];
                ph[i] *= (pk / p) * (p - 1);
                if (ndist[i] == 0) firstp[i] = p;
                ndist[i] += 1;
            }
        }
        for (u64 n = lo_; n < hi_; ++n) {
            u64 i = n - lo_;
            if (rem[i] > 1) { // one leftover prime factor > root, exponent 1
                tau_[i] *= 2;
                mu_[i] = -mu_[i];
                ph[i] *= rem[i] - 1;
                ndist[i] += 1;
            }
            phi_[i] = (n == 0) ? 0 : ph[i];
            if (n >= 2 && ndist[i] == 1) {
                u64 p = (rem[i] > 1) ? rem[i] : firstp[i];
                lambda_[i] = std::log((double)p);
            }
            if (n < 2) { mu_[i] = 0; tau_[i] = 0; phi_[i] = (n == 1) ? 1 : 0; }
            if (n == 1) { mu_[i] = 1; tau_[i] = 1; }
        }
    }

    u64 lo_, hi_;
    std::vector<bool> bits_;
    std::vector<double> lambda_;
    std::vector<int> mu_;
    std::vector<i64> tau_;
    std::vector<u64> phi_;
};

inline PrimeTable prime_table(u64 lo, u64 hi) { return PrimeTable(lo, hi); }

// ---------------------------------------------------------------------------
// Vaughan's identity, right-hand side:
//   sum_{m|n, m<=Y} mu(m) log(n/m)
//   - sum_{mc|n, m<=Y, c<=Z} mu(m) Lambda(c)
//   + sum_{mc|n, m>Y, c>Z} mu(m) Lambda(c)
// Equals Lambda(n) for n > Z and 0 for n <= Z.
// ---------------------------------------------------------------------------
inline double vaughan_check(u64 n, double Y, double Z) {
    if (n < 1) throw qprime_error("vaughan_check: n >= 1 required");
    if (n > 10000000ull) throw qprime_error("vaughan_check: n exceeds divisor budget");
    if (Y < 1 || Z < 1) throw qprime_error("vaughan_check: Y,Z >= 1 required");
    auto ds = divisors(n);
    std::vector<double> muv(ds.size()), lamv(ds.size());
    for (size_t i = 0; i < ds.size(); ++i) {
        muv[i] = arith(ds[i], ArithFn::Mu);
        lamv[i] = arith(ds[i], ArithFn::Lambda);
    }
    Kahan acc;
    for (size_t i = 0; i < ds.size(); ++i) {
        u64 m = ds[i];
        if (muv[i] != 0.0 && (double)m <= Y)
            acc.add(muv[i] * std::log((double)n / (double)m));
    }
    // pairs (m, c) with m*c | n
    for (size_t i = 0; i < ds.size(); ++i) {
        u64 m = ds[i];
        if (muv[i] == 0.0) continue;
        u64 q = n / m; // c must divide n/m
        for (size_t j = 0; j < ds.size(); ++j) {
            u64 c = ds[j];
            if (c > q || q % c != 0 || lamv[j] == 0.0) continue;
            if ((double)m <= Y && (double)c <= Z) acc.add(-muv[i] * lamv[j]);
            if ((double)m > Y && (double)c > Z) acc.add(muv[i] * lamv[j]);
        }
    }
    return acc.value();
}

} // namespace qprime
