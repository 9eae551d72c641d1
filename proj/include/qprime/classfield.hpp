#pragma once
// Quadratic field arithmetic: class groups of binary quadratic forms,
// fundamental units, ideal-number lattices with composition bilinear forms,
// L0 normalization and representation enumeration.

#include "qprime/qform.hpp"
#include "qprime/modroots.hpp"
#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace qprime {

using bigint = boost::multiprecision::cpp_int;
using rat    = boost::multiprecision::cpp_rational;

// element a + b*sqrt(D) of Q(sqrt(D)); D carried externally
struct QElem {
    rat a, b;
};

inline QElem qe_add(const QElem& x, const QElem& y) { return {x.a + y.a, x.b + y.b}; }
inline QElem qe_sub(const QElem& x, const QElem& y) { return {x.a - y.a, x.b - y.b}; }
inline QElem qe_mul(const QElem& x, const QElem& y, i64 D) {
    return {x.a * y.a + x.b * y.b * D, x.a * y.b + x.b * y.a};
}
inline QElem qe_conj(const QElem& x) { return {x.a, -x.b}; }
inline rat   qe_norm(const QElem& x, i64 D) { return x.a * x.a - x.b * x.b * D; }
inline rat   qe_trace(const QElem& x) { return 2 * x.a; }
inline bool  qe_zero(const QElem& x) { return x.a == 0 && x.b == 0; }
inline QElem qe_scale(const rat& s, const QElem& x) { return {s * x.a, s * x.b}; }
inline QElem qe_div(const QElem& x, const QElem& y, i64 D) {
    rat n = qe_norm(y, D);
    if (n == 0) throw qprime_error("qe_div: division by zero-norm element");
    QElem t = qe_mul(x, qe_conj(y), D);
    return {t.a / n, t.b / n};
}
// sign of a + b*sqrt(D) for D > 0 (exact)
inline int qe_sign(const QElem& x, i64 D) {
    if (x.a == 0 && x.b == 0) return 0;
    int sa = x.a == 0 ? 0 : (x.a > 0 ? 1 : -1);
    int sb = x.b == 0 ? 0 : (x.b > 0 ? 1 : -1);
    if (sa == 0) return sb;
    if (sb == 0 || sa == sb) return sa;
    // opposite signs: compare a^2 vs b^2 D
    rat d = x.a * x.a - x.b * x.b * D;
    int sd = d == 0 ? 0 : (d > 0 ? 1 : -1);
    return sd == 0 ? 0 : sd * sa;
}

struct IdealClassRep {
    int index = 0;
    QuadForm form{1, 0, 1};
    QElem w1, w2;            // Z-basis of the representative ideal
};

// bilinear composition data for one ordered class pair
struct PairData {
    int target = 0;          // class index of A*B
    i64 R[2][2] = {{0, 0}, {0, 0}};  // coefficients of x_i y_j
    i64 Q[2][2] = {{0, 0}, {0, 0}};
    QElem mu;                // a_A a_B = (mu) a_C, N(mu) = aA*aB/aC > 0
    bool have_bilinear = false;
};

struct FieldData {
    i64 disc_form = 0, disc_fund = 0, conductor = 1;
    int h = 0;
    std::vector<int> generators;     // h_j with prod = h
    bool has_unit = false;
    i64 unit_a = 0, unit_b = 0;      // eps0 = (a + b sqrt(disc_fund))/2
};

struct IdealNumber {
    int class_index = 0;
    i64 x1 = 0, x2 = 0;
};

// ---------------------------------------------------------------- reduction

inline QuadForm reduce_definite(QuadForm F) {
    i64 a = F.f2, b = F.f1, c = F.f0;
    if (a < 0) { a = -a; b = -b; c = -c; }  // positive definite rep
    for (int it = 0; it < 20000; ++it) {
        // normalize b into (-a, a]
        if (b > a || b <= -a) {
            i64 k = (b >= 0) ? (b + a - 1) / (2 * a) : -((-b + a) / (2 * a));
            // want b - 2ak in (-a, a]
            i64 nb = b - 2 * a * k;
            while (nb > a) { nb -= 2 * a; ++k; }
            while (nb <= -a) { nb += 2 * a; --k; }
            c = c - b * k + a * k * k;
            b = nb;
        }
        if (a > c) { std::swap(a, c); b = -b; continue; }
        if (a == c && b < 0) { b = -b; }
        if (b == -a) b = a;  // unreachable after normalize, defensive
        break;
    }
    return QuadForm(a, b, c);
}

// one rho-step for an indefinite form (disc > 0 non-square)
inline QuadForm rho_step(const QuadForm& F) {
    i64 D = discriminant(F);
    i64 s = isqrt64((u64)D);
    i64 c = F.f0;
    i64 ac = std::abs(c);
    if (ac == 0) throw qprime_error("rho_step: degenerate form");
    // r = -b mod 2|c|, with s+1-2|c| <= r <= s  (|c| < sqrt(D) case),
    // else -|c| < r <= |c|
    i64 m = 2 * ac;
    i64 r = ((-F.f1) % m + m) % m;
    i64 lo = (ac <= s) ? (s + 1 - m) : (-ac + 1);
    while (r < lo) r += m;
    while (r - m >= lo) r -= m;
    i64 nc = (i64)(((i128)r * r - D) / (4 * c));
    return QuadForm(c, r, nc);
}

inline bool is_reduced_indef(const QuadForm& F, i64 s /* floor sqrt disc */) {
    if (F.f1 <= 0 || F.f1 > s) return false;
    i64 t = 2 * std::abs(F.f2);
    // sqrt(D) - b < 2|a| < sqrt(D) + b, integer-safe with non-square D:
    // left: (s+1) - b <= 2|a| works since sqrt(D) not integer
    return (s - F.f1 < t) && (t <= s + F.f1);
}

// full reduction cycle of an indefinite form; returns canonical (min) member
inline std::vector<QuadForm> indef_cycle(QuadForm F) {
    i64 D = discriminant(F);
    i64 s = isqrt64((u64)D);
    for (int it = 0; it < 4000 && !is_reduced_indef(F, s); ++it) F = rho_step(F);
    if (!is_reduced_indef(F, s)) throw qprime_error("indefinite reduction failed");
    std::vector<QuadForm> cyc;
    QuadForm G = F;
    for (int it = 0; it < 20000; ++it) {
        cyc.push_back(G);
        G = rho_step(G);
        if (G.f2 == F.f2 && G.f1 == F.f1 && G.f0 == F.f0) return cyc;
    }
    throw qprime_error("indefinite cycle did not close");
}

inline std::array<i64, 3> form_key(const QuadForm& F) { return {F.f2, F.f1, F.f0}; }

inline std::array<i64, 3> canonical_indef(const QuadForm& F) {
    auto cyc = indef_cycle(F);
    std::array<i64, 3> best = form_key(cyc[0]);
    for (auto& G : cyc) best = std::min(best, form_key(G));
    return best;
}

// ------------------------------------------------------------- class group

inline bool is_fundamental_disc(i64 d) {
    if (d == 0 || d == 1) return false;
    auto sqfree = [](i64 n) {
        n = std::abs(n);
        for (i64 p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) return false;
        return true;
    };
    i64 m = ((d % 4) + 4) % 4;
    if (m == 1) return sqfree(d);
    if (m != 0) return false;
    i64 q = d / 4;
    i64 qm = ((q % 4) + 4) % 4;
    return (qm == 2 || qm == 3) && sqfree(q);
}

// largest c with disc = c^2 * fundamental
inline std::pair<i64, i64> fundamental_part(i64 disc) {
    for (i64 c = (i64)isqrt64((u64)std::abs(disc)); c >= 1; --c)
        if (disc % (c * c) == 0 && is_fundamental_disc(disc / (c * c)))
            return {disc / (c * c), c};
    throw qprime_error("no fundamental part (disc is a square?)");
}

inline std::vector<QuadForm> reduced_forms(i64 disc) {
    std::vector<QuadForm> out;
    if (disc < 0) {
        for (i64 a = 1; 3 * a * a <= -disc + 3; ++a) {
            for (i64 b = -a + 1; b <= a; ++b) {
                if (((b - disc) % 2 + 2) % 2 != 0) continue;
                i64 num = b * b - disc;
                if (num % (4 * a) != 0) continue;
                i64 c = num / (4 * a);
                if (c < a) continue;
                if (a == c && b < 0) continue;
                if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
                out.push_back(QuadForm(a, b, c));
            }
        }
    } else {
        i64 s = isqrt64((u64)disc);
        for (i64 b = 1; b <= s; ++b) {
            if (((b - disc) % 2 + 2) % 2 != 0) continue;
            for (i64 t = s - b + 1; t <= s + b; ++t) {  // t = 2|a|
                if (t <= 0 || t % 2) continue;
                i64 a = t / 2;
                i64 num = b * b - disc;  // = 4ac', negative
                for (int sign = 0; sign < 2; ++sign) {
                    i64 aa = sign ? -a : a;
                    if (num % (4 * aa) != 0) continue;
                    i64 c = num / (4 * aa);
                    if (std::gcd(std::gcd(std::abs(aa), b), std::abs(c)) != 1) continue;
                    out.push_back(QuadForm(aa, b, c));
                }
            }
        }
    }
    return out;
}

class ClassGroup {
public:
    FieldData field;
    std::vector<IdealClassRep> classes;
    int principal = 0;

    explicit ClassGroup(i64 disc) {
        if (!is_fundamental_disc(disc))
            throw qprime_error("class_group: discriminant is not fundamental");
        if (std::abs(disc) > 1000000) throw qprime_error("class_group: |disc| too large");
        field.disc_form = field.disc_fund = disc;
        field.conductor = 1;
        auto forms = reduced_forms(disc);
        if (disc < 0) {
            std::sort(forms.begin(), forms.end(), [](auto& x, auto& y) { return form_key(x) < form_key(y); });
            for (auto& F : forms) add_class(F);
        } else {
            std::map<std::array<i64, 3>, int> seen;
            for (auto& F : forms) {
                auto key = canonical_indef(F);
                if (seen.count(key)) continue;
                seen[key] = (int)classes.size();
                // representative with positive leading coefficient, so the class
                // norm form value equals the field norm (N > 0 convention)
                auto cyc = indef_cycle(F);
                std::array<i64, 3> rep{0, 0, 0};
                for (auto& G : cyc)
                    if (G.f2 > 0 && (rep[0] == 0 || form_key(G) < rep)) rep = form_key(G);
                add_class(QuadForm(rep[0], rep[1], rep[2]));
            }
        }
        field.h = (int)classes.size();
        {
            i64 b0 = ((disc % 2) + 2) % 2;
            QuadForm P(1, b0, (b0 * b0 - disc) / 4);
            principal = class_of(P);
        }
        table_.assign(field.h, std::vector<PairData>(field.h));
        for (int i = 0; i < field.h; ++i)
            for (int j = 0; j < field.h; ++j)
                table_[i][j].target = class_of(compose_forms(classes[i].form, classes[j].form));
        if (disc > 0) compute_unit();
        compute_generators();
    }

    i64 disc() const { return field.disc_fund; }

    // class index of an arbitrary form of this discriminant
    int class_of(const QuadForm& F) const {
        if (discriminant(F) != field.disc_fund)
            throw qprime_error("class_of: discriminant mismatch");
        if (field.disc_fund < 0) {
            QuadForm R = reduce_definite(F);
            for (auto& c : classes)
                if (form_key(c.form) == form_key(R)) return c.index;
        } else {
            auto key = canonical_indef(F);
            for (auto& c : classes)
                if (canonical_indef(c.form) == key) return c.index;
        }
        throw qprime_error("class_of: form not matched (imprimitive?)");
    }

    int mul_class(int a, int b) const { return table_[a][b].target; }
    int inv_class(int a) const {
        for (int b = 0; b < field.h; ++b)
            if (mul_class(a, b) == principal) return b;
        throw qprime_error("no inverse class");
    }

    const PairData& pair(int a, int b) const {
        auto& pd = table_[a][b];
        if (!pd.have_bilinear) build_bilinear(a, b);
        return pd;
    }

    QElem unit() const {
        if (!field.has_unit) throw qprime_error("no fundamental unit (imaginary field)");
        return {rat(field.unit_a) / 2, rat(field.unit_b) / 2};
    }

    // torsion units acting on ideal numbers
    std::vector<QElem> torsion_units() const {
        std::vector<QElem> W = {{1, 0}, {-1, 0}};
        if (field.disc_fund == -4) { W.push_back({0, rat(1, 2)}); W.push_back({0, rat(-1, 2)}); }
        if (field.disc_fund == -3) {
            for (int sa : {1, -1})
                for (int sb : {1, -1})
                    W.push_back({rat(sa, 2), rat(sb, 2)});
        }
        return W;
    }

    QElem embed(const IdealNumber& g) const {
        auto& c = classes[g.class_index];
        return qe_add(qe_scale(g.x1, c.w1), qe_scale(g.x2, c.w2));
    }

    // coordinates of an element known to lie in the class module; throws if not
    IdealNumber coords(int cls, const QElem& g) const {
        auto& c = classes[cls];
        rat det = c.w1.a * c.w2.b - c.w1.b * c.w2.a;
        rat x1 = (g.a * c.w2.b - g.b * c.w2.a) / det;
        rat x2 = (c.w1.a * g.b - c.w1.b * g.a) / det;
        if (boost::multiprecision::denominator(x1) != 1 || boost::multiprecision::denominator(x2) != 1)
            throw qprime_error("coords: element not in class module");
        bigint n1 = boost::multiprecision::numerator(x1), n2 = boost::multiprecision::numerator(x2);
        if (boost::multiprecision::abs(n1) > bigint("4611686018427387904") ||
            boost::multiprecision::abs(n2) > bigint("4611686018427387904"))
            throw qprime_error("coords: coordinate overflow");
        return {cls, n1.convert_to<i64>(), n2.convert_to<i64>()};
    }

    std::pair<QElem, QElem> dual_basis(int cls) const {
        // wt_j with Tr(w_i wt_j) = delta_ij
        auto& c = classes[cls];
        i64 D = field.disc_fund;
        // Tr((a+b sqrt D)(x+y sqrt D)) = 2(ax + byD)
        rat a1 = c.w1.a, b1 = c.w1.b, a2 = c.w2.a, b2 = c.w2.b;
        rat det = 4 * (a1 * b2 * D - a2 * b1 * D) / (2 * D);  // det of [[2a1,2b1 D],[2a2,2b2 D]] / (2D)...
        // solve directly: wt1 = (x,y) with 2(a1 x + b1 y D)=1, 2(a2 x + b2 y D)=0
        rat dd = a1 * b2 * D - a2 * b1 * D;
        QElem wt1{b2 * D / (2 * dd), -a2 / (2 * dd)};
        QElem wt2{-b1 * D / (2 * dd), a1 / (2 * dd)};
        (void)det;
        return {wt1, wt2};
    }

private:
    mutable std::vector<std::vector<PairData>> table_;

    void add_class(const QuadForm& F) {
        IdealClassRep rep;
        rep.index = (int)classes.size();
        rep.form = F;
        // ideal (a, (b + sqrt(disc))/2): norm form a x^2 + b xy + c y^2
        rep.w1 = {rat(F.f2), 0};
        rep.w2 = {rat(F.f1) / 2, rat(1) / 2};
        classes.push_back(rep);
    }

    QuadForm compose_forms(const QuadForm& F1, const QuadForm& F2) const {
        i64 D = field.disc_fund;
        // find g ~ F2 with leading coefficient coprime to F1.f2 (concordant setup)
        for (i64 bound = 2; bound <= 64; bound *= 2) {
            for (i64 x = -bound; x <= bound; ++x) {
                for (i64 y = -bound; y <= bound; ++y) {
                    if (std::gcd(x, y) != 1) continue;
                    i64 v = (i64)evaluate(F2, x, y);
                    if (v == 0 || std::gcd(std::abs(v), std::abs(F1.f2)) != 1) continue;
                    // extend (x,y) to SL2: x*t - y*s = 1
                    i64 s, t;
                    {
                        i64 g = ext_gcd(x, y, t, s);
                        (void)g;
                        s = -s;
                    }
                    QuadForm g2 = transform(F2, x, s, y, t);
                    if (g2.f2 != v) continue;
                    i64 a1 = F1.f2, a2 = g2.f2;
                    // B == F1.f1 mod 2a1, B == g2.f1 mod 2a2
                    i64 m1 = 2 * std::abs(a1), m2 = 2 * std::abs(a2);
                    i64 diff = g2.f1 - F1.f1;
                    // F1.f1 + 2 a1 k == g2.f1 mod 2 a2 -> a1 k == diff/2 mod a2
                    if (diff % 2) continue;  // impossible: both == D mod 2
                    i64 aa2 = std::abs(a2);
                    i64 ai = inv_mod_safe(((a1 % aa2) + aa2) % aa2, aa2);
                    if (ai < 0) continue;
                    i64 k = (i64)(((i128)ai * ((((diff / 2) % aa2) + aa2) % aa2)) % aa2);
                    i128 B = (i128)F1.f1 + (i128)2 * a1 * k;
                    i128 mod = (i128)m1 / 2 * m2;  // lcm(2a1,2a2) divides 2 a1 a2
                    B %= mod;
                    i64 Bi = (i64)B;
                    i128 num = (i128)Bi * Bi - D;
                    i128 den = (i128)4 * a1 * a2;
                    if (num % den != 0) continue;
                    return QuadForm(a1 * a2, Bi, (i64)(num / den));
                }
            }
        }
        throw qprime_error("compose_forms: concordant form search failed");
    }

    static i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
        if (b == 0) { x = (a >= 0) ? 1 : -1; y = 0; return std::abs(a); }
        i64 x1, y1;
        i64 g = ext_gcd(b, a % b, x1, y1);
        x = y1;
        y = x1 - (a / b) * y1;
        return g;
    }

    static i64 inv_mod_safe(i64 a, i64 m) {
        if (m == 1) return 0;
        i64 x, y;
        i64 g = ext_gcd(a, m, x, y);
        if (g != 1) return -1;
        return ((x % m) + m) % m;
    }

    void compute_unit() {
        i64 D = field.disc_fund;
        // continued fraction of sqrt(d), d = D or D/4
        i64 d = (D % 4 == 0) ? D / 4 : D;
        i64 a0 = isqrt64((u64)d);
        i64 P = 0, Q = 1, a = a0;
        bigint h0 = 1, h1 = a0, k0 = 0, k1 = 1;
        int parity = 1;  // (-1)^period
        for (int it = 0; it < 100000; ++it) {
            P = a * Q - P;
            Q = (d - P * P) / Q;
            a = (a0 + P) / Q;
            parity = -parity;
            if (Q == 1) break;
            bigint h2 = a * h1 + h0, k2 = a * k1 + k0;
            h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        }
        // eta = h1 + k1 sqrt(d), N(eta) = parity
        bigint x = h1, y = k1;
        if (2 * x > bigint("4611686018427387904") || y > bigint("4611686018427387904"))
            throw qprime_error("fundamental_unit: convergent overflow (regulator too large)");
        if (D % 4 == 0) {
            // eps0 = x + y sqrt(d) = (2x + y sqrt(D))/2
            field.unit_a = bigint(2 * x).convert_to<i64>();
            field.unit_b = y.convert_to<i64>();
        } else {
            // maybe eta = eps0^3 with eps0 = (A + B sqrt(D))/2 half-integral
            bool found = false;
            double eta = x.convert_to<double>() + y.convert_to<double>() * std::sqrt((double)d);
            double th = std::cbrt(eta);
            for (int sg : {1, -1}) {
                double Ad = th + sg / th;
                i64 A = (i64)std::llround(Ad);
                for (i64 AA = A - 1; AA <= A + 1 && !found; ++AA) {
                    if (AA <= 0) continue;
                    i64 num = AA * AA - 4 * sg;
                    if (num <= 0 || num % D != 0) continue;
                    i64 B2 = num / D;
                    i64 B = isqrt64((u64)B2);
                    if (B * B != B2) continue;
                    // verify ((A + B sqrt D)/2)^3 == x + y sqrt d exactly
                    QElem e{rat(AA) / 2, rat(B) / 2};
                    QElem c = qe_mul(qe_mul(e, e, D), e, D);
                    if (c.a == rat(x) && c.b == rat(y)) {
                        field.unit_a = AA;
                        field.unit_b = B;
                        found = true;
                    }
                }
                if (found) break;
            }
            if (!found) {
                // eta = x + y sqrt(D) = (2x + 2y sqrt(D))/2
                field.unit_a = bigint(2 * x).convert_to<i64>();
                field.unit_b = bigint(2 * y).convert_to<i64>();
            }
        }
        field.has_unit = true;
    }

    void compute_generators() {
        int h = field.h;
        // invariant-factor style list by repeated max-order elements
        std::vector<int> elems(h);
        for (int i = 0; i < h; ++i) elems[i] = i;
        std::vector<int> gens;
        // subgroup closure bookkeeping over coset structure
        std::vector<char> insub(h, 0);
        insub[principal] = 1;
        int subsize = 1;
        while (subsize < h) {
            int best = -1, bestord = 0;
            for (int g = 0; g < h; ++g) {
                if (insub[g]) continue;
                // order of g modulo current subgroup
                int x = g, ord = 1;
                while (!insub[x] && ord <= h + 1) { x = mul_class(x, g); ++ord; }
                if (ord > h + 1) throw qprime_error("compute_generators: not a group");
                if (ord > bestord) { bestord = ord; best = g; }
            }
            gens.push_back(bestord);
            // close subgroup under best
            std::vector<int> cur;
            for (int i = 0; i < h; ++i)
                if (insub[i]) cur.push_back(i);
            int x = best;
            std::vector<int> pows;
            while (true) {
                pows.push_back(x);
                if (x == principal) break;
                x = mul_class(x, best);
            }
            for (int c : cur)
                for (int p : pows) insub[mul_class(c, p)] = 1;
            subsize = 0;
            for (int i = 0; i < h; ++i) subsize += insub[i];
        }
        if (gens.empty()) gens.push_back(1);
        std::sort(gens.rbegin(), gens.rend());
        field.generators = gens;
    }

    // Hermite basis (m1, m2) of the Z-span of vs, coordinates over (1, sqrt D)
    // scaled by 4 to clear denominators
    static std::pair<std::pair<bigint, bigint>, std::pair<bigint, bigint>>
    hnf_of(std::vector<std::pair<bigint, bigint>> vs) {
        // rows (x, y); bring to m1 = (s, 0), m2 = (t, g) with g > 0, 0 <= t < s
        while (true) {
            int pivot = -1;
            for (size_t i = 0; i < vs.size(); ++i) {
                if (vs[i].second == 0) continue;
                if (pivot < 0 || boost::multiprecision::abs(vs[i].second) <
                                     boost::multiprecision::abs(vs[pivot].second))
                    pivot = (int)i;
            }
            if (pivot < 0) break;
            bool done = true;
            for (size_t j = 0; j < vs.size(); ++j) {
                if ((int)j == pivot || vs[j].second == 0) continue;
                bigint q = vs[j].second / vs[pivot].second;
                vs[j].first -= q * vs[pivot].first;
                vs[j].second -= q * vs[pivot].second;
                if (vs[j].second != 0) done = false;
            }
            if (done) {
                if (pivot != 0) std::swap(vs[0], vs[pivot]);
                break;
            }
        }
        std::pair<bigint, bigint> row2{0, 0};
        bigint s = 0;
        for (auto& v : vs) {
            if (v.second != 0) row2 = v;
            else s = boost::multiprecision::gcd(s, v.first);
        }
        if (s < 0) s = -s;
        if (row2.second < 0) { row2.first = -row2.first; row2.second = -row2.second; }
        bigint t = row2.first;
        if (s != 0) t = ((t % s) + s) % s;
        return {{s, bigint(0)}, {t, row2.second}};
    }

    void build_bilinear(int A, int B) const {
        i64 D = field.disc_fund;
        auto& pd = table_[A][B];
        int C = pd.target;
        auto& cA = classes[A];
        auto& cB = classes[B];
        auto& cC = classes[C];
        QElem p[2][2];
        std::vector<std::pair<bigint, bigint>> vs;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                p[i][j] = qe_mul(i ? cA.w2 : cA.w1, j ? cB.w2 : cB.w1, D);
                rat xa = 4 * p[i][j].a, xb = 4 * p[i][j].b;
                vs.push_back({bigint(boost::multiprecision::numerator(xa)),
                              bigint(boost::multiprecision::numerator(xb))});
            }
        auto hb = hnf_of(vs);
        QElem m1{rat(hb.first.first) / 4, 0};
        QElem m2{rat(hb.second.first) / 4, rat(hb.second.second) / 4};
        rat target_norm = rat(cA.form.f2) * cB.form.f2 / cC.form.f2;
        // mu lives in M * aC^{-1} = M * conj(aC) / N(aC); build that lattice
        {
            std::vector<QElem> gens;
            for (auto* mm : {&m1, &m2})
                for (auto* w : {&cC.w1, &cC.w2})
                    gens.push_back(qe_scale(rat(1, cC.form.f2), qe_mul(*mm, qe_conj(*w), D)));
            bigint L = 1;
            for (auto& g : gens) {
                L = boost::multiprecision::lcm(L, bigint(boost::multiprecision::denominator(g.a)));
                L = boost::multiprecision::lcm(L, bigint(boost::multiprecision::denominator(g.b)));
            }
            std::vector<std::pair<bigint, bigint>> ws;
            for (auto& g : gens)
                ws.push_back({bigint(boost::multiprecision::numerator(g.a * rat(L))),
                              bigint(boost::multiprecision::numerator(g.b * rat(L)))});
            auto hb2 = hnf_of(ws);
            rat Lr(L);
            m1 = QElem{rat(hb2.first.first) / Lr, 0};
            m2 = QElem{rat(hb2.second.first) / Lr, rat(hb2.second.second) / Lr};
        }
        // search mu = s*m1 + t*m2 with N(mu) = +- target, mu * aC == lattice
        QElem mu;
        bool found = false;
        bool neg_ok = field.disc_fund > 0;
        for (i64 radius = 4; radius <= 4096 && !found; radius *= 4) {
            for (i64 s = -radius; s <= radius && !found; ++s) {
                for (i64 t = -radius; t <= radius && !found; ++t) {
                    if (std::abs(s) < radius / 4 && std::abs(t) < radius / 4) continue;
                    QElem cand = qe_add(qe_scale(s, m1), qe_scale(t, m2));
                    rat nn = qe_norm(cand, D);
                    if (nn != target_norm && !(neg_ok && nn == -target_norm)) continue;
                    if (!lattice_equal(cand, cC, hb, D)) continue;
                    mu = cand;
                    found = true;
                }
            }
        }
        if (!found) throw qprime_error("composition: mu search failed");
        // canonical unit multiple, so tables are deterministic (and mu = 1 when
        // 1 generates the product lattice)
        if (D < 0) {
            std::vector<QElem> W = {{1, 0}, {-1, 0}};
            if (D == -4) { W.push_back({0, rat(1, 2)}); W.push_back({0, rat(-1, 2)}); }
            if (D == -3)
                for (int sa : {1, -1})
                    for (int sb : {1, -1}) W.push_back({rat(sa, 2), rat(sb, 2)});
            QElem best = mu;
            bool havebest = false;
            for (auto& u : W) {
                QElem cand = qe_mul(mu, u, D);
                bool upper = cand.b > 0 || (cand.b == 0 && cand.a > 0);
                if (!upper) continue;
                if (!havebest) { best = cand; havebest = true; continue; }
                rat cr = cand.a * best.b - best.a * cand.b;
                if (cr > 0 || (cr == 0 && cand.a > best.a)) best = cand;
            }
            if (havebest) mu = best;
        } else if (qe_norm(mu, D) > 0) {
            // slide into the positive window with the norm-preserving unit step
            QElem u{rat(field.unit_a) / 2, rat(field.unit_b) / 2};
            QElem step = qe_norm(u, D) == -1 ? qe_mul(u, u, D) : u;
            if (qe_sign(mu, D) < 0) mu = qe_scale(-1, mu);
            rat N = qe_norm(mu, D);
            for (int it = 0; it < 20000; ++it) {
                QElem g2 = qe_mul(mu, mu, D);
                if (qe_sign(qe_sub(g2, qe_scale(N, step)), D) > 0) { mu = qe_div(mu, step, D); continue; }
                if (qe_sign(qe_sub(qe_mul(g2, step, D), QElem{N, 0}), D) <= 0) { mu = qe_mul(mu, step, D); continue; }
                break;
            }
        }
        if (qe_norm(mu, D) < 0) {
            // fix sign with a norm -1 unit if available
            QElem u{rat(field.unit_a) / 2, rat(field.unit_b) / 2};
            if (!field.has_unit || qe_norm(u, D) != -1)
                throw qprime_error("composition: cannot fix mu norm sign");
            mu = qe_mul(mu, u, D);
            if (!lattice_equal(mu, cC, hb, D)) throw qprime_error("composition: unit fix broke lattice");
        }
        pd.mu = mu;
        // coefficients: p_ij = mu (w1C r + w2C q)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                QElem q = qe_div(p[i][j], mu, D);
                // q = r w1C + t w2C
                rat det = cC.w1.a * cC.w2.b - cC.w1.b * cC.w2.a;
                rat r = (q.a * cC.w2.b - q.b * cC.w2.a) / det;
                rat t = (cC.w1.a * q.b - cC.w1.b * q.a) / det;
                if (boost::multiprecision::denominator(r) != 1 || boost::multiprecision::denominator(t) != 1)
                    throw qprime_error("composition: non-integral bilinear coefficients");
                pd.R[i][j] = boost::multiprecision::numerator(r).convert_to<i64>();
                pd.Q[i][j] = boost::multiprecision::numerator(t).convert_to<i64>();
            }
        pd.have_bilinear = true;
    }

    static bool lattice_equal(const QElem& mu, const IdealClassRep& cC,
                              const std::pair<std::pair<bigint, bigint>, std::pair<bigint, bigint>>& hb, i64 D) {
        std::vector<std::pair<bigint, bigint>> vs;
        for (auto* w : {&cC.w1, &cC.w2}) {
            QElem q = qe_mul(mu, *w, D);
            rat xa = 4 * q.a, xb = 4 * q.b;
            if (boost::multiprecision::denominator(xa) != 1 || boost::multiprecision::denominator(xb) != 1)
                return false;
            vs.push_back({bigint(boost::multiprecision::numerator(xa)),
                          bigint(boost::multiprecision::numerator(xb))});
        }
        auto hb2 = hnf_of(vs);
        return hb2 == hb;
    }
};

inline ClassGroup class_group(i64 disc) { return ClassGroup(disc); }

// fundamental unit as a QElem, for positive fundamental disc
inline QElem fundamental_unit(i64 disc) {
    if (disc <= 0) throw qprime_error("fundamental_unit: disc must be positive");
    ClassGroup G(disc);
    return G.unit();
}

// ------------------------------------------------------- ideal number ops

inline IdealNumber multiply(const ClassGroup& G, const IdealNumber& a, const IdealNumber& b) {
    auto& pd = G.pair(a.class_index, b.class_index);
    i64 x[2] = {a.x1, a.x2}, y[2] = {b.x1, b.x2};
    i128 r = 0, q = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            r += (i128)pd.R[i][j] * x[i] * y[j];
            q += (i128)pd.Q[i][j] * x[i] * y[j];
        }
    return {pd.target, (i64)r, (i64)q};
}

inline i64 norm_form_value(const ClassGroup& G, const IdealNumber& g) {
    return (i64)evaluate(G.classes[g.class_index].form, g.x1, g.x2);
}

inline IdealNumber normalize_L0(const ClassGroup& G, const IdealNumber& g0) {
    if (g0.x1 == 0 && g0.x2 == 0) throw qprime_error("normalize_L0: zero input");
    i64 D = G.disc();
    if (D < 0) {
        // finite orbit; smallest argument in the closed upper half-plane,
        // embedding (a, b sqrt|D|) for gamma = a + b sqrt(D)
        auto W = G.torsion_units();
        std::optional<IdealNumber> best;
        QElem beste;
        for (auto& u : W) {
            QElem ge = qe_mul(G.embed(g0), u, D);
            IdealNumber cand = G.coords(g0.class_index, ge);
            bool upper = ge.b > 0 || (ge.b == 0 && ge.a > 0);
            if (!upper) continue;
            if (!best) { best = cand; beste = ge; continue; }
            // arg(ge) < arg(beste)  <=>  cross(ge, beste) > 0 ... for args in [0,pi):
            // cross(x, y) = x.a * y.b - y.a * x.b (common sqrt|D| factor dropped)
            rat cr = ge.a * beste.b - beste.a * ge.b;
            if (cr > 0 || (cr == 0 && ge.a > beste.a)) { best = cand; beste = ge; }
        }
        if (!best) throw qprime_error("normalize_L0: no upper half-plane representative");
        return *best;
    }
    // real case
    QElem ge = G.embed(g0);
    rat N = qe_norm(ge, D);
    if (N <= 0) throw qprime_error("normalize_L0: nonpositive norm out of scope");
    if (qe_sign(ge, D) < 0) ge = qe_scale(-1, ge);
    QElem u = G.unit();
    if (qe_norm(u, D) == -1) u = qe_mul(u, u, D);  // orbit step preserving norm sign
    // window gamma/sqrt(N) in (step^{-1/2}, step^{1/2}]: compare gamma^2 vs N*step^{+-1}
    for (int it = 0; it < 20000; ++it) {
        QElem g2 = qe_mul(ge, ge, D);
        QElem hi = qe_sub(g2, qe_scale(N, u));                      // gamma^2 - N*u  <= 0 required
        QElem lo = qe_sub(qe_mul(g2, u, D), QElem{N, 0});           // gamma^2 u - N  >  0 required
        if (qe_sign(hi, D) > 0) { ge = qe_div(ge, u, D); continue; }
        if (qe_sign(lo, D) <= 0) { ge = qe_mul(ge, u, D); continue; }
        break;
    }
    return G.coords(g0.class_index, ge);
}

// ------------------------------------------------------- representations

struct Interval {
    double lo = 0, hi = 0;  // open-closed (lo, hi]
    bool contains(double x) const { return x > lo && x <= hi; }
};

inline std::vector<std::pair<i64, i64>>
representations(const QuadForm& F, i64 n, const std::optional<Interval>& I = std::nullopt,
                bool primitive_only = false) {
    if (n <= 0 || n > (i64)1000000000000LL) throw qprime_error("representations: n out of range");
    i64 D = discriminant(F);
    std::vector<std::pair<i64, i64>> out;
    i64 lo, hi;
    if (D < 0) {
        // |u2| <= sqrt(4 f2 n / -D) for f2 > 0
        i64 a = F.f2 > 0 ? F.f2 : -F.f2;
        i64 B = (i64)isqrt64((u64)((i128)4 * a * n / (-D))) + 1;
        lo = -B; hi = B;
    } else {
        if (!I) {
            // bound via unit window: |u2| = |(g - gbar)/sqrt(D)| with g L0-bounded
            ClassGroup G(fundamental_part(D).first);
            double e0 = boost::multiprecision::numerator(G.unit().a).convert_to<double>() / 2.0 +
                        boost::multiprecision::numerator(G.unit().b).convert_to<double>() *
                            std::sqrt((double)G.disc()) / 2.0;
            double bb = 2.0 * std::sqrt((double)std::abs(F.f2) * (double)n) * (e0 + 1.0) /
                        std::sqrt((double)D);
            if (bb > 2e9) throw qprime_error("representations: search budget exceeded");
            lo = -(i64)bb - 2; hi = (i64)bb + 2;
        } else {
            lo = (i64)std::floor(I->lo); hi = (i64)std::ceil(I->hi);
            if ((double)hi - (double)lo > 4e9) throw qprime_error("representations: interval too wide");
        }
    }
    for (i64 u2 = lo; u2 <= hi; ++u2) {
        if (I && !I->contains((double)u2)) continue;
        // f2 u1^2 + f1 u1 u2 + f0 u2^2 = n
        i128 disc_q = (i128)D * u2 * u2 + (i128)4 * F.f2 * n;
        if (disc_q < 0) continue;
        u64 sq = isqrt64((u64)(disc_q > (i128)UINT64_MAX ? 0 : (u64)disc_q));
        if (disc_q > (i128)UINT64_MAX) {
            // wide case: Newton on i128 (rare)
            i128 x = (i128)std::sqrt((double)disc_q);
            while (x * x > disc_q) --x;
            while ((x + 1) * (x + 1) <= disc_q) ++x;
            sq = (u64)x;
        }
        if ((i128)sq * sq != disc_q) continue;
        for (int sg : {1, -1}) {
            i128 num = -(i128)F.f1 * u2 + sg * (i128)sq;
            if (num % (2 * F.f2) != 0) continue;
            i64 u1 = (i64)(num / (2 * F.f2));
            if (sg == -1 && sq == 0) continue;  // avoid double count
            if (primitive_only && std::gcd(std::abs(u1), std::abs(u2)) != 1) continue;
            if (evaluate(F, u1, u2) != (i128)n) continue;
            out.push_back({u1, u2});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// distinct L0-normalized ideal numbers of norm-form value m in class cls
inline std::vector<IdealNumber> normalized_of_norm(const ClassGroup& G, int cls, i64 m) {
    auto& F = G.classes[cls].form;
    std::vector<std::pair<i64, i64>> reps;
    if (G.disc() < 0) {
        reps = representations(F, m);
    } else {
        // bounded window large enough to contain one representative per orbit
        double e0;
        {
            QElem u = G.unit();
            e0 = u.a.convert_to<double>() + u.b.convert_to<double>() * std::sqrt((double)G.disc());
        }
        double bb = 2.0 * std::sqrt((double)std::abs(F.f2) * (double)m) * (e0 * e0 + 1.0) /
                    std::sqrt((double)G.disc());
        Interval I{-bb - 2, bb + 2};
        reps = representations(F, m, I);
    }
    std::vector<IdealNumber> out;
    std::vector<std::pair<i64, i64>> seen;
    for (auto& [u1, u2] : reps) {
        IdealNumber g{cls, u1, u2};
        IdealNumber n = normalize_L0(G, g);
        if (std::find(seen.begin(), seen.end(), std::make_pair(n.x1, n.x2)) == seen.end()) {
            seen.push_back({n.x1, n.x2});
            out.push_back(n);
        }
    }
    return out;
}

// ---------------------------------------------------- key decomposition

struct KeyDecompResult {
    double lhs = 0, rhs = 0;
    bool equal = false;
};

// c_{mn} = sum over class pairs A.B = Cl f of normalized pairs with norm (m, n),
// weight applied to the second composition coordinate.
// Requires gcd(m, n) = 1: the split of a norm-mn ideal into norm-m and norm-n
// parts is then unique, which is what makes the identity exact.
inline KeyDecompResult verify_key_decomp(const ClassGroup& G, const QuadForm& F, i64 m, i64 n,
                                         const Interval& I,
                                         const std::function<double(i64)>& weight) {
    if (m < 1 || n < 1 || (i128)m * n > 100000000) throw qprime_error("verify_key_decomp: range");
    if (std::gcd(m, n) != 1)
        throw qprime_error("verify_key_decomp: m, n must be coprime for exactness");
    int clF = G.class_of(F);
    double lhs = 0;
    for (auto& [u1, u2] : representations(F, m * n, I)) lhs += weight(u2);

    i64 D = G.disc();
    double rhs = 0;
    for (int A = 0; A < G.field.h; ++A) {
        int B = -1;
        for (int b = 0; b < G.field.h; ++b)
            if (G.mul_class(A, b) == clF) { B = b; break; }
        if (B < 0) continue;
        auto ms = normalized_of_norm(G, A, m);
        auto ns = normalized_of_norm(G, B, n);
        for (auto& ma : ms)
            for (auto& nb : ns) {
                IdealNumber prod = multiply(G, ma, nb);
                // iterate the unit orbit of the product, filter Q-coordinate into I
                if (D < 0) {
                    for (auto& u : G.torsion_units()) {
                        QElem ge = qe_mul(G.embed(prod), u, D);
                        IdealNumber c = G.coords(clF, ge);
                        if (I.contains((double)c.x2)) rhs += weight(c.x2);
                    }
                } else {
                    QElem step = G.unit();
                    if (qe_norm(step, D) == -1) step = qe_mul(step, step, D);
                    QElem base = G.embed(prod);
                    double cap = 64.0 * (std::abs(I.lo) + std::abs(I.hi) +
                                         std::sqrt((double)m * (double)n) + 4);
                    for (int sign = 0; sign < 2; ++sign) {
                        QElem g0 = sign ? qe_scale(-1, base) : base;
                        // walk both unit directions until coordinates leave the window
                        for (int dir = 0; dir < 2; ++dir) {
                            QElem g = dir ? qe_div(g0, step, D) : g0;
                            double prev = 1e300;
                            for (int it = 0; it < 4000; ++it) {
                                IdealNumber c = G.coords(clF, g);
                                if (I.contains((double)c.x2)) rhs += weight(c.x2);
                                double mag = std::abs((double)c.x1) + std::abs((double)c.x2);
                                if (mag > cap && mag >= prev) break;  // moving away from window
                                prev = mag;
                                g = dir ? qe_div(g, step, D) : qe_mul(g, step, D);
                            }
                        }
                    }
                }
            }
    }
    KeyDecompResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.equal = std::abs(lhs - rhs) <= 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return r;
}

// ---------------------------------------------------- delta congruence

struct DeltaCongruence {
    i64 delta = 0;
    bool holds = false;
    std::optional<std::pair<i64, i64>> w;
};

inline DeltaCongruence delta_congruence(std::pair<i64, i64> z, std::pair<i64, i64> y, i64 q1, i64 q2) {
    i64 delta = y.first * z.second - y.second * z.first;
    if (delta == 0) throw qprime_error("delta_congruence: degenerate lattice");
    DeltaCongruence r;
    r.delta = delta;
    i64 n1 = q1 * z.second - q2 * y.second;   // delta * w1
    i64 n2 = q2 * y.first - q1 * z.first;     // delta * w2
    r.holds = (n1 % delta == 0) && (n2 % delta == 0);
    if (r.holds) r.w = std::make_pair(n1 / delta, n2 / delta);
    return r;
}

}  // namespace qprime
