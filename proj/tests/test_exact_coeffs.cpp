#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bgw/dyadic_coeffs.hpp"

using namespace bgw;

namespace {

// Independent oracle: expand prod_{l=0}^{k} (x - 2^l) and normalize the
// constant term to 1. No elimination involved.
std::vector<Rational> coefficients_by_expansion(int k) {
    std::vector<Rational> poly{1};
    for (int l = 0; l <= k; ++l) {
        std::vector<Rational> next(poly.size() + 1);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * pow2_rational(l);
        }
        poly = std::move(next);
    }
    const Rational scale = Rational(1) / poly[0];
    for (auto& c : poly) c *= scale;
    return poly;
}

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 20);
    return Rational(num(rng), den(rng));
}

// Both sides of the identity evaluated directly from the displayed formulas,
// independent of the library's bookkeeping.
Rational naive_lhs(const DyadicCoefficients& c, const DyadicSequence& b_seq, int m) {
    Rational acc = 0;
    for (int l = -m; l <= m - 1; ++l)
        for (int j = 0; j <= c.k + 1; ++j) acc += c.a[j] * b_seq.at(j + l);
    return acc;
}

Rational naive_rhs(const DyadicCoefficients& c, const Rational& b, const DyadicSequence& b_seq,
                   int m) {
    Rational acc = 0;
    for (int l = m; l <= c.k + m; ++l) {
        Rational tail = 0;
        for (int j = l - m + 1; j <= c.k + 1; ++j) tail += c.a[j];
        acc += tail * b_seq.at(l);
    }
    for (int l = -m; l <= c.k - m; ++l) {
        Rational head = 0;
        for (int j = 0; j <= l + m; ++j) head += c.a[j];
        acc += head * (b_seq.at(l) - b);
    }
    return acc + c.a_combined * b;
}

}  // namespace

TEST_CASE("low orders match the hand-solved systems") {
    const DyadicCoefficients c0 = solve_dyadic_system(0);
    CHECK(c0.a == std::vector<Rational>{Rational(1), Rational(-1)});
    CHECK(c0.a_combined == Rational(1));

    const DyadicCoefficients c1 = solve_dyadic_system(1);
    CHECK(c1.a == std::vector<Rational>{Rational(1), Rational(-3, 2), Rational(1, 2)});
    CHECK(c1.a_combined == Rational(1, 2));

    const DyadicCoefficients c2 = solve_dyadic_system(2);
    CHECK(c2.a ==
          std::vector<Rational>{Rational(1), Rational(-7, 4), Rational(7, 8), Rational(-1, 8)});
    CHECK(c2.a_combined == Rational(3, 8));
}

TEST_CASE("elimination agrees with the factored-polynomial oracle up to k=8") {
    for (int k = 0; k <= 8; ++k) {
        const DyadicCoefficients solved = solve_dyadic_system(k);
        const std::vector<Rational> expanded = coefficients_by_expansion(k);
        REQUIRE(solved.a.size() == expanded.size());
        for (std::size_t j = 0; j < expanded.size(); ++j) CHECK(solved.a[j] == expanded[j]);
    }
}

TEST_CASE("system invariants hold exactly up to k=8") {
    for (int k = 0; k <= 8; ++k) {
        const DyadicCoefficients c = solve_dyadic_system(k);
        CHECK(c.a[0] == Rational(1));
        for (int l = 0; l <= k; ++l) {
            Rational residual = 0;
            for (int j = 0; j <= k + 1; ++j) residual += c.a[j] * pow2_rational(static_cast<long>(j) * l);
            CHECK(residual == 0);
        }
        CHECK(c.a_combined != 0);
        CHECK(c.a_combined == combined_coefficient_closed_form(k));

        Rational weighted = 0;
        for (int j = 1; j <= k + 1; ++j) weighted += Rational(j) * c.a[j];
        CHECK(c.a_combined == -weighted);

        for (int j = 0; j <= k; ++j) CHECK(c.a[j] * c.a[j + 1] < 0);
    }
}

TEST_CASE("closed form values") {
    CHECK(combined_coefficient_closed_form(0) == Rational(1));
    CHECK(combined_coefficient_closed_form(1) == Rational(1, 2));
    CHECK(combined_coefficient_closed_form(2) == Rational(3, 8));
}

TEST_CASE("k=0 telescoping is the pure first difference") {
    const DyadicCoefficients c = solve_dyadic_system(0);
    DyadicSequence seq{{-1, Rational(5, 3)}, {0, Rational(-2, 7)}, {1, Rational(9, 4)}};
    const TelescopingSides sides = telescoping_combine(c, Rational(11, 13), seq, 1);
    CHECK(sides.lhs == seq.at(-1) - seq.at(1));
    CHECK(sides.lhs == sides.rhs);
}

TEST_CASE("zero sequence telescopes to zero") {
    const DyadicCoefficients c = solve_dyadic_system(3);
    DyadicSequence seq;
    for (int l = -2; l <= 5; ++l) seq[l] = 0;
    const TelescopingSides sides = telescoping_combine(c, Rational(0), seq, 2);
    CHECK(sides.lhs == 0);
    CHECK(sides.rhs == 0);
}

TEST_CASE("k=2, m=3 random instance agrees with the naive evaluation of both sides") {
    std::mt19937_64 rng(42);
    const DyadicCoefficients c = solve_dyadic_system(2);
    for (int rep = 0; rep < 20; ++rep) {
        const Rational b = random_rational(rng);
        DyadicSequence seq;
        for (int l = -3; l <= 5; ++l) seq[l] = random_rational(rng);
        const TelescopingSides sides = telescoping_combine(c, b, seq, 3);
        CHECK(sides.lhs == naive_lhs(c, seq, 3));
        CHECK(sides.rhs == naive_rhs(c, b, seq, 3));
        CHECK(sides.lhs == sides.rhs);
    }
}

TEST_CASE("random instances: identity exact and triangle bound holds") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick_k(0, 5);
    std::uniform_int_distribution<int> pick_m(1, 8);
    for (int rep = 0; rep < 300; ++rep) {
        const int k = pick_k(rng);
        const int m = pick_m(rng);
        const DyadicCoefficients c = solve_dyadic_system(k);
        const Rational b = random_rational(rng);
        DyadicSequence seq;
        for (int l = -m; l <= k + m; ++l) seq[l] = random_rational(rng);
        const TelescopingSides sides = telescoping_combine(c, b, seq, m);
        CHECK(sides.lhs == sides.rhs);
        CHECK(triangle_bound(c, b, seq, m).holds);
    }
}

TEST_CASE("triangle bound with b = 0 is non-negative and holds") {
    std::mt19937_64 rng(11);
    const DyadicCoefficients c = solve_dyadic_system(1);
    DyadicSequence seq;
    for (int l = -2; l <= 3; ++l) seq[l] = random_rational(rng);
    const TriangleBound tb = triangle_bound(c, Rational(0), seq, 2);
    CHECK(tb.holds);
    CHECK(tb.bound_value >= 0);
}

TEST_CASE("triangle bound equality case: k=0, plateau then zero") {
    // b_l = b on [-m, k-m], 0 elsewhere; only the middle combination term
    // survives and equals |b|.
    const DyadicCoefficients c = solve_dyadic_system(0);
    const int m = 3;
    const Rational b(4, 9);
    DyadicSequence seq;
    for (int l = -m; l <= m; ++l) seq[l] = 0;
    seq[-m] = b;  // k - m = -m for k = 0
    const TriangleBound tb = triangle_bound(c, b, seq, m);
    CHECK(tb.bound_value == abs_rational(b));
    CHECK(tb.holds);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(solve_dyadic_system(-1), std::invalid_argument);
    CHECK_THROWS_AS(combined_coefficient_closed_form(-2), std::invalid_argument);
    const DyadicCoefficients c = solve_dyadic_system(1);
    DyadicSequence seq{{0, Rational(1)}};
    CHECK_THROWS_AS(telescoping_combine(c, Rational(1), seq, 1), std::out_of_range);
    DyadicSequence full;
    for (int l = -1; l <= 2; ++l) full[l] = Rational(1);
    CHECK_THROWS_AS(telescoping_combine(c, Rational(1), full, 0), std::invalid_argument);
}
