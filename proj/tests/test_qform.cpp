#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qprime/qform.hpp"

using namespace qprime;

// brute-force root count oracle
static u64 rho_brute(const QuadForm& F, u64 d) {
    u64 c = 0;
    for (u64 x = 0; x < d; ++x) {
        i64 v = (F.f2 % (i64)d * (i64)(x * x % d) + F.f1 % (i64)d * (i64)x + F.f0) % (i64)d;
        if (((v % (i64)d) + (i64)d) % (i64)d == 0) ++c;
    }
    return d == 1 ? 1 : c;
}

TEST_CASE("discriminant") {
    CHECK(discriminant(QuadForm(1, 0, 1)) == -4);
    CHECK(discriminant(QuadForm(1, 1, 1)) == -3);
    CHECK(discriminant(QuadForm(1, 0, -2)) == 8);
}

TEST_CASE("classify") {
    auto c1 = classify(QuadForm(1, 0, 1));
    CHECK(c1.kind == FormKind::PositiveDefinite);
    CHECK(c1.admissible);

    auto c2 = classify(QuadForm(1, 1, 2));
    CHECK(c2.kind == FormKind::PositiveDefinite);
    CHECK_FALSE(c2.admissible); // x^2+x+2 == x(x+1) mod 2

    auto c3 = classify(QuadForm(1, 3, 2));
    CHECK(c3.kind == FormKind::DegenerateSquareDisc);
    CHECK_FALSE(c3.irreducible);

    CHECK_FALSE(classify(QuadForm(2, 0, 2)).primitive);
    CHECK(classify(QuadForm(1, 0, -2)).kind == FormKind::Indefinite);
}

TEST_CASE("evaluate") {
    CHECK(evaluate(QuadForm(1, 0, 1), 3, 4) == 25);
    CHECK(evaluate(QuadForm(1, 1, 1), 0, 0) == 0);
    CHECK(evaluate(QuadForm(1, 1, 1), 2, 3) == 19);
}

TEST_CASE("transform basics") {
    QuadForm F(1, 0, 1);
    CHECK(transform(F, 1, 0, 0, 1) == F);
    CHECK(transform(F, 1, 1, 0, 1) == QuadForm(1, 2, 2));
    CHECK(discriminant(transform(QuadForm(2, 1, 3), 0, 1, -1, 0)) == -23);
    CHECK_THROWS(transform(F, 1, 1, 1, 1));
}

TEST_CASE("transform preserves discriminant for unimodular M") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        i64 a = (i64)(rng() % 21) - 10, b = (i64)(rng() % 21) - 10;
        i64 c = (i64)(rng() % 21) - 10, d = (i64)(rng() % 21) - 10;
        if (std::abs(a * d - b * c) != 1) continue;
        QuadForm F((i64)(rng() % 19) - 9, (i64)(rng() % 19) - 9, (i64)(rng() % 19) - 9);
        if (F.f2 == 0 && F.f1 == 0 && F.f0 == 0) continue;
        CHECK(discriminant(transform(F, a, b, c, d)) == discriminant(F));
    }
}

TEST_CASE("rho examples") {
    QuadForm F(1, 0, 1);
    CHECK(rho(F, 5) == 2);
    CHECK(rho(F, 1) == 1);
    CHECK(rho(F, 3) == 0);
}

static QuadForm random_admissible(std::mt19937_64& rng) {
    while (true) {
        i64 a = (i64)(rng() % 39) - 19, b = (i64)(rng() % 39) - 19, c = (i64)(rng() % 39) - 19;
        if (a == 0 && b == 0 && c == 0) continue;
        QuadForm F(a, b, c);
        if (classify(F).admissible) return F;
    }
}

TEST_CASE("rho equals brute force for all d <= 2000") {
    QuadForm F(1, 0, 1), G(1, 1, -1), H(3, 1, 5);
    for (u64 d = 1; d <= 2000; ++d) {
        CHECK(rho(F, d) == rho_brute(F, d));
        CHECK(rho(G, d) == rho_brute(G, d));
        CHECK(rho(H, d) == rho_brute(H, d));
    }
}

TEST_CASE("rho multiplicative over coprime moduli") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        QuadForm F = random_admissible(rng);
        for (int j = 0; j < 40; ++j) {
            u64 d1 = 1 + rng() % 100, d2 = 1 + rng() % 100;
            if (std::gcd(d1, d2) != 1 || d1 * d2 > 10000) continue;
            CHECK(rho(F, d1 * d2) == rho(F, d1) * rho(F, d2));
        }
    }
}

TEST_CASE("admissible forms have no totally-ramified small prime") {
    // admissible => for every p <= 100 some value f(x,y) is coprime to p
    std::mt19937_64 rng(29);
    for (int i = 0; i < 25; ++i) {
        QuadForm F = random_admissible(rng);
        for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull,
                      37ull, 41ull, 43ull, 47ull, 53ull, 59ull, 61ull, 67ull, 71ull, 73ull,
                      79ull, 83ull, 89ull, 97ull}) {
            bool found = false;
            for (i64 x = 0; x < (i64)p && !found; ++x)
                for (i64 y = 0; y < (i64)p && !found; ++y)
                    if ((((evaluate(F, x, y) % (i64)p) + (i64)p) % (i64)p) != 0) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("parse_form round trip") {
    CHECK(parse_form("1,0,1") == QuadForm(1, 0, 1));
    CHECK(parse_form("2,-1,3") == QuadForm(2, -1, 3));
    CHECK_THROWS(parse_form("1,2"));
}
