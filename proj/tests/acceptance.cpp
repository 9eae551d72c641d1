// Acceptance harness: one pass/fail line per criterion, pinned tolerances.
// Exit code is the number of failed criteria.  --write-baselines regenerates
// the stored regression data from the current build.

#include "qprime/charsum.hpp"
#include "qprime/experiments.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <random>

using namespace qprime;

namespace {

std::string g_data_dir = "data";

// pinned tolerances
constexpr double TOL_MT0 = 0.15;        // criterion 3
constexpr double TOL_VARIANT = 0.05;    // criterion 3 variant report
constexpr double TOL_MT2 = 0.15;        // criterion 4
constexpr double TOL_MT2_DRIFT = 0.10;  // criterion 4 indefinite stability
constexpr double TOL_MT_BAND = 0.20;    // criterion 5
constexpr double TOL_MT_MODEL = 0.10;   // criterion 5 vs pointwise model
constexpr double TOL_TYPE1 = 0.05;      // criterion 6
constexpr double TOL_OSC = 0.10;        // criterion 7 regression
constexpr double LS_HEADROOM = 2.0;     // criterion 8
const double MT0_CONST = 1.1128;        // 2 Gamma(1/4)^2 / (3 pi sqrt(2 pi))

struct Line {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

void print(int idx, const char* name, const Line& L) {
    std::printf("CRITERION %d (%s): %s%s%s\n", idx, name, L.ok ? "PASS" : "FAIL",
                L.detail.empty() ? "" : " — ", L.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

QuadForm random_admissible(std::mt19937_64& rng) {
    while (true) {
        i64 a = (i64)(rng() % 39) - 19, b = (i64)(rng() % 39) - 19, c = (i64)(rng() % 39) - 19;
        if (a == 0 && b == 0 && c == 0) continue;
        QuadForm F(a, b, c);
        if (classify(F).admissible) return F;
    }
}

// ---------------------------------------------------------- criterion 1

Line criterion1() {
    Line L;

    // rho multiplicativity, 50 random admissible forms, moduli up to 10^4
    std::mt19937_64 rng(20250826);
    for (int i = 0; i < 50; ++i) {
        QuadForm F = random_admissible(rng);
        for (int j = 0; j < 60; ++j) {
            u64 d1 = 1 + rng() % 100, d2 = 1 + rng() % 100;
            if (std::gcd(d1, d2) != 1 || d1 * d2 > 10000) continue;
            if (rho(F, d1 * d2) != rho(F, d1) * rho(F, d2)) {
                L.fail(fmt("rho not multiplicative at %g*%g", (double)d1, (double)d2));
                return L;
            }
        }
    }

    // roots_mod vs brute force, all d <= 2000, three forms
    for (const QuadForm& F : {QuadForm(1, 0, 1), QuadForm(1, 1, -1), QuadForm(3, 1, 5)}) {
        for (u64 d = 1; d <= 2000; ++d) {
            u64 brute = 0;
            for (u64 x = 0; x < d; ++x) {
                u64 v = (mulmod(mulmod(x, x, d), ((F.f2 % (i64)d) + (i64)d) % (i64)d, d) +
                         mulmod(x, ((F.f1 % (i64)d) + (i64)d) % (i64)d, d) +
                         (u64)(((F.f0 % (i64)d) + (i64)d) % (i64)d)) % d;
                if (v == 0) ++brute;
            }
            if (d == 1) brute = 1;
            auto rs = roots_mod_poly(F.f2, F.f1, F.f0, d);
            if (rs.roots.size() != brute) {
                L.fail(fmt("roots_mod mismatch at d=%g", (double)d));
                return L;
            }
        }
    }

    // Vaughan identity, all n <= 10^5
    for (u64 n = 1; n <= 100000; ++n) {
        double Y = std::ceil(std::cbrt((double)n));
        double expect = (double)n > Y ? arith(n, ArithFn::Lambda) : 0.0;
        if (std::abs(vaughan_check(n, Y, Y) - expect) > 1e-9) {
            L.fail(fmt("Vaughan fails at n=%g", (double)n));
            return L;
        }
    }

    // Buchstab + S2 decomposition, X = 1e5 and 1e6, all four sequence kinds
    for (double X : {1e5, 1e6})
        for (SeqKind k : {SeqKind::A, SeqKind::B, SeqKind::Aspade, SeqKind::Bspade}) {
            SequenceSpec s;
            s.kind = k;
            s.form = QuadForm(1, 0, 1);
            s.X = X;
            auto f = sieve_functionals(s);
            if (!f.buchstab_ok || !f.s2_ok) {
                L.fail(fmt("sieve identity fails at X=%g kind=%g", X, (double)(int)k));
                return L;
            }
        }

    // delta_congruence round trip, 1e5 trials
    {
        std::mt19937_64 r2(12);
        std::uniform_int_distribution<i64> coef(-1000, 1000);
        int done = 0;
        while (done < 100000) {
            i64 w1 = coef(r2), w2 = coef(r2), y1 = coef(r2), y2 = coef(r2), z1 = coef(r2),
                z2 = coef(r2);
            if (y1 * z2 - y2 * z1 == 0) continue;
            auto r = delta_congruence({z1, z2}, {y1, y2}, w1 * y1 + w2 * y2, w1 * z1 + w2 * z2);
            if (!r.holds || r.w->first != w1 || r.w->second != w2) {
                L.fail("delta_congruence round-trip failed");
                return L;
            }
            ++done;
        }
    }

    // xi pair sums: closed form vs direct, applicable pairs with q <= 1e4
    {
        i64 budget = 2000000000;  // total q^2 work cap
        int tested = 0;
        for (i64 disc : {-4, -20, -35}) {
            ClassGroup G(disc);
            auto ctx = make_symbol_context(G, 0, (int)G.classes.size() - 1);
            std::vector<std::pair<i64, i64>> vs;
            for (i64 a = -4; a <= 4; ++a)
                for (i64 b = -4; b <= 4; ++b)
                    if ((a || b) && std::gcd(std::abs(a), std::abs(b)) == 1) vs.push_back({a, b});
            for (size_t i = 0; i < vs.size() && budget > 0; ++i)
                for (size_t j = i + 1; j < vs.size() && budget > 0; ++j) {
                    auto w = vs[i], v = vs[j];
                    i64 gw = evaluate(ctx.g, w.first, w.second),
                        gv = evaluate(ctx.g, v.first, v.second);
                    if (gw == 0 || gv == 0 || (gw & 1) == 0 || (gv & 1) == 0) continue;
                    i64 q = std::abs(gw * gv);
                    if (q > 10000 || q * q > budget) continue;
                    if (!xi_pair_closed_applicable(ctx, w, v)) continue;
                    budget -= q * q;
                    ++tested;
                    i64 direct = xi_pair_sum(ctx, w, v);
                    i64 closed = xi_pair_closed(ctx, w, v);
                    if (direct != closed) {
                        L.fail(fmt("xi pair sum mismatch q=%g", (double)q));
                        return L;
                    }
                }
        }
        L.note(fmt("xi pairs tested: %g", (double)tested));
    }

    // key decomposition, five fields, all coprime (m, n) with mn <= 1e4
    for (i64 d : {-4, -20, -23, 5, 8}) {
        ClassGroup G(d);
        for (auto& c : G.classes)
            for (i64 m = 1; m * m <= 10000; ++m)
                for (i64 n = m + 1; m * n <= 10000; ++n) {
                    if (std::gcd(m, n) != 1) continue;
                    Interval I = d < 0 ? Interval{0, 1e18}
                                       : Interval{0, 40.0 * std::sqrt((double)(m * n))};
                    auto r = verify_key_decomp(G, c.form, m, n, I, [](i64) { return 1.0; });
                    if (!r.equal) {
                        L.fail(fmt("key decomp fails: disc=%g m=%g n=%g", (double)d, (double)m,
                                   (double)n));
                        return L;
                    }
                }
    }
    return L;
}

// ---------------------------------------------------------- criterion 2

int brute_h_definite(i64 disc) {
    int h = 0;
    for (i64 a = 1; a * a <= -disc; ++a)
        for (i64 b = -a; b <= a; ++b) {
            i64 num = b * b - disc;
            if (num % (4 * a)) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (b == -a || (a == c && b < 0)) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            ++h;
        }
    return h;
}

// narrow class number of a real quadratic field by cycles of reduced forms
int brute_h_indefinite(i64 D) {
    double sq = std::sqrt((double)D);
    auto reduced = [&](i64 a, i64 b, i64 /*c*/) {
        return b > 0 && (double)b < sq && std::abs(sq - (double)b) < 2.0 * std::abs((double)a) &&
               2.0 * std::abs((double)a) < sq + (double)b;
    };
    std::vector<std::array<i64, 3>> forms;
    for (i64 b = 1; (double)b < sq; ++b) {
        if ((b * b - D) % 4 || b * b >= D) continue;
        i64 prod = (b * b - D) / 4;  // a * c
        for (i64 a = 1; a * a <= std::abs(prod); ++a) {
            if (prod % a) continue;
            for (i64 aa : {a, std::abs(prod) / a})
                for (i64 sa : {aa, -aa}) {
                    i64 cc = prod / sa;
                    if (!reduced(sa, b, cc)) continue;
                    if (std::gcd(std::gcd(std::abs(sa), b), std::abs(cc)) != 1) continue;
                    forms.push_back({sa, b, cc});
                }
        }
    }
    std::sort(forms.begin(), forms.end());
    forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
    // reduction step rho(a, b, c) = (c, b', *) with b' = -b mod 2c maximal < sqrt D
    auto step = [&](std::array<i64, 3> f) {
        i64 c = f[2];
        i64 t = 2 * std::abs(c);
        i64 b = ((-f[1]) % t + t) % t;
        while ((double)b < sq - (double)t) b += t;
        while ((double)b >= sq) b -= t;  // largest b' < sqrt D in the class
        while (b <= 0) b += t;
        std::array<i64, 3> g{c, b, (b * b - D) / (4 * c)};
        return g;
    };
    std::map<std::array<i64, 3>, int> cyc;
    int ncyc = 0;
    for (auto& f : forms) {
        if (cyc.count(f)) continue;
        ++ncyc;
        auto g = f;
        do {
            cyc[g] = ncyc;
            g = step(g);
        } while (!cyc.count(g));
    }
    return ncyc;
}

Line criterion2() {
    Line L;
    int checked = 0, axioms = 0;
    for (i64 d = -500; d <= 500; ++d) {
        if (d == 0 || !is_fundamental_disc(d)) continue;
        auto G = class_group(d);
        int oracle = d < 0 ? brute_h_definite(d) : brute_h_indefinite(d);
        ++checked;
        if (G.field.h != oracle) {
            L.fail(fmt("h mismatch at disc=%g: %g vs oracle %g", (double)d, (double)G.field.h,
                       (double)oracle));
            return L;
        }
        if (G.field.h > 10) continue;
        ++axioms;
        int h = G.field.h, e = G.principal;
        for (int a = 0; a < h; ++a) {
            if (G.mul_class(a, e) != a || G.mul_class(G.inv_class(a), a) != e) {
                L.fail(fmt("axiom failure at disc=%g", (double)d));
                return L;
            }
            for (int b = 0; b < h; ++b) {
                if (G.mul_class(a, b) != G.mul_class(b, a)) {
                    L.fail(fmt("commutativity failure at disc=%g", (double)d));
                    return L;
                }
                for (int c = 0; c < h; ++c)
                    if (G.mul_class(G.mul_class(a, b), c) != G.mul_class(a, G.mul_class(b, c))) {
                        L.fail(fmt("associativity failure at disc=%g", (double)d));
                        return L;
                    }
            }
        }
    }
    L.note(fmt("%g fundamental discriminants, axioms on %g", (double)checked, (double)axioms));
    return L;
}

// ---------------------------------------------------------- criterion 3

Line criterion3() {
    Line L;
    QuadForm F(1, 0, 1);
    auto row = count_theorem(F, 1e10, TheoremKind::MT0);
    // one-quadrant normalization: the full count covers both signs of m and ell
    double norm = row.empirical / 4.0 / (std::pow(1e10, 0.75) / std::log(1e10));
    if (std::abs(norm - MT0_CONST) > TOL_MT0 * MT0_CONST)
        L.fail(fmt("normalized count %.4f vs %.4f", norm, MT0_CONST));
    else
        L.note(fmt("normalized count %.4f vs %.4f (%.1f%% off)", norm, MT0_CONST,
                   100.0 * std::abs(norm / MT0_CONST - 1.0)));

    // which local-product variant times Sigma_f matches the constant
    double sg = sigma_f(F).value;
    struct Cand {
        const char* name;
        double value;
    } cands[] = {
        {"ell-averaged", nu_f_ell_averaged(F, 2000000).value * sg / 4.0},
        {"rho-at-ramified", nu_f(F, 2000000, NuVariant::RhoAtRamified).value * sg / 4.0},
        {"as-printed", nu_f(F, 2000000, NuVariant::AsPrinted).value * sg / 4.0},
    };
    bool any = false;
    for (auto& c : cands) {
        double off = std::abs(c.value / MT0_CONST - 1.0);
        if (off <= TOL_VARIANT) {
            any = true;
            L.note(std::string(c.name) + fmt(" matches (%.2f%% off)", 100 * off));
        }
    }
    if (!any) L.fail("no local-product variant matches the constant within 5%");
    return L;
}

// ---------------------------------------------------------- criterion 4

Line criterion4() {
    Line L;
    for (const QuadForm& F : {QuadForm(1, 0, 1), QuadForm(1, 1, 1)}) {
        auto row = count_theorem(F, 1e8, TheoremKind::MT2);
        if (std::abs(row.ratio - 1.0) > TOL_MT2)
            L.fail(fmt("definite ratio %.4f at X=1e8", row.ratio));
        else
            L.note(fmt("ratio %.4f", row.ratio));
    }
    QuadForm P(1, 0, -2);
    auto a = count_theorem(P, 1e8, TheoremKind::MT2);
    auto b = count_theorem(P, 4e8, TheoremKind::MT2);
    double drift = std::abs(a.ratio / b.ratio - 1.0);
    if (drift > TOL_MT2_DRIFT)
        L.fail(fmt("indefinite drift %.3f between 1e8 and 4e8", drift));
    else
        L.note(fmt("indefinite ratios %.4f / %.4f, constant %.6g", a.ratio, b.ratio,
                   a.empirical / 1e8));
    return L;
}

// ---------------------------------------------------------- criterion 5

Line criterion5() {
    Line L;
    QuadForm F(1, 0, 1);
    std::vector<double> vals, model_gap;
    for (double X : {1e8, 1e9, 1e10}) {
        auto row = count_theorem(F, X, TheoremKind::MT);
        double v = row.empirical * std::pow(std::log(X), 2.0) / std::pow(X, 0.75);
        vals.push_back(v);
        model_gap.push_back(std::abs(row.empirical / row.model - 1.0));
    }
    double mn = *std::min_element(vals.begin(), vals.end());
    double mx = *std::max_element(vals.begin(), vals.end());
    if (mx / mn - 1.0 > TOL_MT_BAND)
        L.fail(fmt("band %.3f exceeds 20%%", mx / mn - 1.0));
    else
        L.note(fmt("normalized values %.3f..%.3f", mn, mx));
    for (size_t i = 0; i < model_gap.size(); ++i)
        if (model_gap[i] > TOL_MT_MODEL) L.fail(fmt("model gap %.3f at point %g", model_gap[i], (double)i));
    if (L.ok) L.note(fmt("max model gap %.4f", *std::max_element(model_gap.begin(), model_gap.end())));
    return L;
}

// ---------------------------------------------------------- criterion 6

Line criterion6() {
    Line L;
    double X = 1e7, D = std::sqrt(X);
    for (const QuadForm& F : {QuadForm(1, 0, 1), QuadForm(1, 1, 1), QuadForm(1, 0, -2)}) {
        for (int r : {1, 2}) {
            auto res = type1_scan(F, X, D, r);
            double rel = res.remainder_sum / res.main_total;
            if (rel > TOL_TYPE1) {
                L.fail(fmt("remainder ratio %.4f (form disc %g, r=%g)", rel,
                           (double)discriminant(F), (double)r));
                continue;
            }
            double half = 0;
            for (auto& row : res.rows)
                if ((double)row.d <= D / 2) half += std::abs(row.A_d - row.M_d);
            if (half >= res.remainder_sum && res.remainder_sum > 0)
                L.fail(fmt("remainder did not decrease at D/2 (disc %g, r=%g)",
                           (double)discriminant(F), (double)r));
        }
    }
    if (L.ok) L.note("remainder ratios <= 0.05 and shrink at D/2 for all six runs");
    return L;
}

// ---------------------------------------------------------- criterion 7

struct OscSpec {
    OscMode mode;
    std::vector<i64> grid;
    OscParams P;
};

std::vector<OscSpec> standard_grids() {
    std::vector<OscSpec> out;
    OscParams p;
    p.m = 3;
    out.push_back({OscMode::L_N, {30000, 100000, 300000}, p});
    OscParams q;
    q.c = 2;
    out.push_back({OscMode::PrimeTwisted, {30000, 100000}, q});
    out.push_back({OscMode::L_MN, {200, 600, 1200}, OscParams{}});
    return out;
}

std::string osc_baseline_path() { return g_data_dir + "/osc_baselines.csv"; }

Line criterion7(bool write_baselines) {
    Line L;
    ClassGroup G(-4);
    auto ctx = make_symbol_context(G, 0, 0);
    auto spec = HeckeCharSpec::trivial();

    std::map<std::pair<std::string, i64>, double> got;
    for (auto& os : standard_grids())
        for (auto& row : oscillation_suite(ctx, spec, os.grid, os.mode, os.P))
            got[{osc_mode_name(os.mode), row.scale}] = row.ratio;

    if (write_baselines) {
        std::ofstream f(osc_baseline_path());
        f << "# oscillation-ratio baselines, producer qprime-1\n";
        f << "mode,scale,ratio\n";
        char buf[128];
        for (auto& [k, v] : got) {
            std::snprintf(buf, sizeof buf, "%s,%lld,%.17g\n", k.first.c_str(),
                          (long long)k.second, v);
            f << buf;
        }
        L.note("baselines written");
    } else {
        std::ifstream f(osc_baseline_path());
        if (!f) {
            L.fail("missing " + osc_baseline_path() + " (run --write-baselines once)");
        } else {
            std::string line;
            int compared = 0;
            while (std::getline(f, line)) {
                if (line.empty() || line[0] == '#' || line.rfind("mode,", 0) == 0) continue;
                char mode[32];
                long long scale;
                double ratio;
                if (std::sscanf(line.c_str(), "%31[^,],%lld,%lf", mode, &scale, &ratio) != 3)
                    continue;
                auto it = got.find({mode, scale});
                if (it == got.end()) {
                    L.fail(std::string("baseline row not reproduced: ") + mode);
                    continue;
                }
                ++compared;
                if (std::abs(it->second - ratio) > TOL_OSC * std::max(std::abs(ratio), 1e-12))
                    L.fail(fmt("drift at scale %g: %.5f vs %.5f", (double)scale, it->second,
                               ratio));
            }
            if (compared == 0) L.fail("no baseline rows compared");
            else if (L.ok) L.note(fmt("%g oscillation ratios within 10%%", (double)compared));
        }
    }

    // multi-identity probe: constant eps per cell, hard failure with witness
    for (i64 d : {-4, -20, 5}) {
        ClassGroup Gd(d);
        for (int B = 0; B < Gd.field.h; ++B) {
            auto c = make_symbol_context(Gd, 0, B);
            auto pr = multi_identity_probe(c, d == -4 ? 14 : 10);
            if (!pr.ok)
                L.fail(fmt("probe disc=%g class=%g", (double)d, (double)B) +
                       fmt(" witness w=(%g,%g)", (double)pr.witness_a[0], (double)pr.witness_a[1]) +
                       fmt(" z=(%g,%g)", (double)pr.witness_b[0], (double)pr.witness_b[1]));
        }
    }
    if (L.ok) L.note("probe found constant eps on all cells (M0=8 with sign(R) in the key)");
    return L;
}

// ---------------------------------------------------------- criterion 8

std::string ls_baseline_path() { return g_data_dir + "/large_sieve.csv"; }

Line criterion8(bool write_baselines) {
    Line L;
    std::map<std::string, double> fitted;  // form -> max ratio
    std::map<std::string, double> got;
    for (const QuadForm& F : {QuadForm(1, 0, 1), QuadForm(1, 1, 1), QuadForm(1, 0, -2)}) {
        double mx = 0;
        for (u64 D = 64; D <= 4096; D *= 2)
            for (u64 N = 64; N <= 4096; N *= 2)
                for (u64 seed = 0; seed < 10; ++seed) {
                    std::mt19937_64 rng(0x5eedULL ^ (seed * 1000003) ^ (D << 20) ^ N);
                    std::vector<std::complex<double>> alpha(N);
                    for (auto& a : alpha) a = (rng() & 1) ? 1.0 : -1.0;
                    double r = large_sieve_ratio(F, D, N, alpha);
                    mx = std::max(mx, r);
                }
        got[F.str()] = mx;
    }

    if (write_baselines) {
        std::ofstream f(ls_baseline_path());
        f << "# fitted large-sieve ratio constants, producer qprime-1\n";
        f << "form,fitted\n";
        char buf[128];
        for (auto& [k, v] : got) {
            std::snprintf(buf, sizeof buf, "%s;%.17g\n", k.c_str(), v);
            f << buf;
        }
        L.note("baselines written");
        return L;
    }
    std::ifstream f(ls_baseline_path());
    if (!f) {
        L.fail("missing " + ls_baseline_path() + " (run --write-baselines once)");
        return L;
    }
    std::string line;
    int compared = 0;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("form,", 0) == 0) continue;
        auto semi = line.find_last_of(';');
        if (semi == std::string::npos) continue;
        std::string form = line.substr(0, semi);
        double base = std::atof(line.c_str() + semi + 1);
        auto it = got.find(form);
        if (it == got.end()) {
            L.fail("baseline form not reproduced: " + form);
            continue;
        }
        ++compared;
        if (it->second > LS_HEADROOM * base)
            L.fail(fmt("max ratio %.4f exceeds 2x fitted %.4f", it->second, base));
        else if (it->second > base + 1e-9)
            L.fail(fmt("max ratio %.4f exceeds fitted %.4f", it->second, base));
    }
    if (compared == 0) L.fail("no fitted constants compared");
    if (L.ok) {
        double worst = 0;
        for (auto& [k, v] : got) worst = std::max(worst, v);
        L.note(fmt("%g forms, max ratio %.4f, all within fitted constants", (double)compared,
                   worst));
    }
    return L;
}

}  // namespace

int main(int argc, char** argv) {
    bool write_baselines = false;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--data-dir") && i + 1 < argc) g_data_dir = argv[++i];
        if (!std::strcmp(argv[i], "--write-baselines")) write_baselines = true;
    }
    if (write_baselines) std::filesystem::create_directories(g_data_dir);

    int failures = 0;
    auto run = [&](int idx, const char* name, Line (*fn)()) {
        Line L = fn();
        print(idx, name, L);
        if (!L.ok) ++failures;
    };
    run(1, "exact identities", criterion1);
    run(2, "class-group oracle", criterion2);
    run(3, "square-argument prime count, x^2+y^2 at 1e10", criterion3);
    run(4, "double-Lambda count at 1e8", criterion4);
    run(5, "prime-square-argument stability", criterion5);
    run(6, "Type I remainder suite", criterion6);
    {
        Line L = criterion7(write_baselines);
        print(7, "character-sum regression and probe", L);
        if (!L.ok) ++failures;
    }
    {
        Line L = criterion8(write_baselines);
        print(8, "large-sieve boundedness", L);
        if (!L.ok) ++failures;
    }
    return failures;
}
