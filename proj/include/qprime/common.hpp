#pragma once
// Shared low-level helpers: 128-bit arithmetic, integer roots, modular
// exponentiation, compensated summation, and a small deterministic
// parallel-for built on std::thread.

#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qprime {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u128)a * b % m; }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = m > 1 ? 1 % m : 0;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// floor(sqrt(n)) exact for all u64
inline u64 isqrt64(u64 n) {
    if (n == 0) return 0;
    u64 r = (u64)std::sqrt((double)n);
    while (r > 0 && r * (u128)r > n) --r;
    while ((r + 1) * (u128)(r + 1) <= n) ++r;
    return r;
}

// floor(n^(1/k)) exact; k >= 1
inline u64 iroot(u64 n, unsigned k) {
    if (k == 1) return n;
    if (n == 0) return 0;
    u64 r = (u64)std::pow((double)n, 1.0 / k);
    auto pw = [&](u64 b) -> u128 {
        u128 p = 1;
        for (unsigned i = 0; i < k; ++i) {
            p *= b;
            if (p > (u128)1 << 100) return (u128)1 << 100;
        }
        return p;
    };
    while (r > 0 && pw(r) > n) --r;
    while (pw(r + 1) <= n) ++r;
    return r;
}

inline bool is_perfect_square(i64 n, i64* root = nullptr) {
    if (n < 0) return false;
    u64 r = isqrt64((u64)n);
    if ((i64)(r * r) != n) return false;
    if (root) *root = (i64)r;
    return true;
}

// Kahan-Babuska compensated accumulator.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

inline unsigned thread_count() {
    if (const char* e = std::getenv("QPRIME_THREADS")) {
        long v = std::atol(e);
        if (v >= 1 && v <= 256) return (unsigned)v;
    }
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

// Splits [lo, hi) into fixed chunks, maps each chunk to a double, and reduces
// in chunk order so results do not depend on thread scheduling.
inline double parallel_sum_chunked(i64 lo, i64 hi,
                                   const std::function<double(i64, i64)>& chunk_fn,
                                   i64 chunk = 1 << 16) {
    if (hi <= lo) return 0.0;
    unsigned nt = thread_count();
    i64 nchunks = (hi - lo + chunk - 1) / chunk;
    std::vector<double> partial((size_t)nchunks, 0.0);
    if (nt <= 1 || nchunks == 1) {
        for (i64 c = 0; c < nchunks; ++c) {
            i64 a = lo + c * chunk;
            partial[(size_t)c] = chunk_fn(a, std::min(hi, a + chunk));
        }
    } else {
        std::vector<std::thread> ths;
        for (unsigned t = 0; t < nt; ++t) {
            ths.emplace_back([&, t]() {
                for (i64 c = (i64)t; c < nchunks; c += nt) {
                    i64 a = lo + c * chunk;
                    partial[(size_t)c] = chunk_fn(a, std::min(hi, a + chunk));
                }
            });
        }
        for (auto& th : ths) th.join();
    }
    Kahan k;
    for (double v : partial) k.add(v);
    return k.value();
}

// Kronecker symbol (a|n), full generality including n <= 0 and even n.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int v = 0;
    while ((n & 1) == 0) { n >>= 1; ++v; }
    if (v & 1) {
        i64 am = ((a % 8) + 8) % 8;
        if (am % 2 == 0) return 0;
        if (am == 3 || am == 5) sign = -sign;
    }
    a %= n;
    if (a < 0) a += n;
    // Jacobi on odd positive n
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            i64 nm = n % 8;
            if (nm == 3 || nm == 5) sign = -sign;
        }
        std::swap(a, n);
        if ((a % 4) == 3 && (n % 4) == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

struct qprime_error : std::runtime_error {
    explicit qprime_error(const std::string& m) : std::runtime_error(m) {}
};

} // namespace qprime
