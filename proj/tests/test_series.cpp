#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "piprover/series.hpp"

using namespace pipr;

namespace {

// direct Pochhammer-product oracle for the term quotient
Rational pochhammer_ratio(int s, long n) {
    auto poch = [](const Rational& c, long k) -> Rational {
        Rational r = 1;
        for (long j = 1; j <= k; ++j) r *= c + Rational(j - 1);
        return r;
    };
    auto term = [&](long k) -> Rational {
        Rational f = poch(Rational(1), k);
        return poch(Rational(1, 2), k) * poch(Rational(1, s), k) *
               poch(Rational(s - 1, s), k) / (f * f * f);
    };
    Rational ratio = term(n + 1) / term(n);
    return ratio;
}

Rational naive_sum(int s, const Rational& z, const Rational& a, const Rational& b, long n_terms) {
    Rational sum = 0, t = 1;  // t = T_n z^n
    for (long n = 0; n < n_terms; ++n) {
        sum += t * (a + b * Rational(n));
        t *= term_ratio(s, n) * z;
    }
    return sum;
}

SeriesParams rational_params(const Rational& z, const Rational& a, const Rational& b) {
    SeriesParams sp;
    sp.s = 6;
    sp.level = 1;
    sp.d = 0;
    sp.z = z;
    sp.a = Surd{a, Integer(1)};
    sp.b = Surd{b, Integer(1)};
    return sp;
}

}  // namespace

TEST_CASE("term_ratio closed forms") {
    CHECK(term_ratio(6, 0) == Rational(5, 72));
    CHECK(term_ratio(2, 0) == Rational(1, 8));
    CHECK_THROWS_AS(term_ratio(5, 0), std::invalid_argument);
    for (int s : {2, 3, 4, 6})
        for (long n : {0L, 1L, 2L, 10L}) CHECK(term_ratio(s, n) == pochhammer_ratio(s, n));
}

TEST_CASE("eval_series zeroth term is a") {
    Precision p(60);
    SeriesParams sp = sample_positive_series(1);
    SeriesSum s = eval_series(sp, 1, p);
    CHECK(overlaps(s.value, sp.a.eval(p)));
    CHECK(s.rational_part == sp.a.coefficient);
}

TEST_CASE("binary splitting equals naive exact summation") {
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<long> c(-9, 9), d(2, 9);
    Precision p(50);
    for (int k = 0; k < 20; ++k) {
        Rational z(c(rng), 10 * d(rng));
        if (z == 0) z = Rational(1, 20);
        z.canonicalize();
        Rational a(c(rng), d(rng)), b(c(rng), d(rng));
        a.canonicalize();
        b.canonicalize();
        SeriesParams sp = rational_params(z, a, b);
        for (long n : {1L, 7L, 64L})
            CHECK(eval_series(sp, n, p).rational_part == naive_sum(6, z, a, b, n));
    }
}

TEST_CASE("split combination is associative and deterministic") {
    Rational z(-1, 5000);
    Integer A(13), B(7);
    std::mt19937_64 rng(42);
    SplitNode whole = split_range(6, z, A, B, 0, 97);
    for (int k = 0; k < 25; ++k) {
        long cut = 1 + static_cast<long>(rng() % 96);
        SplitNode merged = combine(split_range(6, z, A, B, 0, cut),
                                   split_range(6, z, A, B, cut, 97));
        CHECK(merged.P == whole.P);
        CHECK(merged.Q == whole.Q);
        CHECK(merged.T == whole.T);
    }
    SplitNode l = split_base(6, z, A, B, 1);
    SplitNode m = split_base(6, z, A, B, 2);
    SplitNode r = split_base(6, z, A, B, 3);
    SplitNode left = combine(combine(l, m), r);
    SplitNode right = combine(l, combine(m, r));
    CHECK(left.P == right.P);
    CHECK(left.Q == right.Q);
    CHECK(left.T == right.T);
}

TEST_CASE("divergence and misuse guards") {
    Precision p(50);
    CHECK_THROWS_AS(eval_series(rational_params(Rational(3, 2), Rational(1), Rational(1)), 5, p),
                    DivergentParameters);
    CHECK_THROWS_AS(eval_series(rational_params(Rational(0), Rational(1), Rational(1)), 5, p),
                    DivergentParameters);
    SeriesParams mixed = sample_positive_series(1);
    mixed.b.radicand = 7;
    CHECK_THROWS_AS(eval_series(mixed, 5, p), std::invalid_argument);
    CHECK_THROWS_AS(verify_against_pi(sample_positive_series(1), 10), std::invalid_argument);
}

TEST_CASE("digits_per_term") {
    SeriesParams chud = rational_params(Rational(-1, Integer(53360) * 53360 * 53360),
                                        Rational(1), Rational(1));
    CHECK(digits_per_term(chud) == doctest::Approx(14.18).epsilon(0.001));
    CHECK(digits_per_term(rational_params(Rational(1, 10), Rational(1), Rational(1))) ==
          doctest::Approx(1.0));
}

TEST_CASE("classical positive series verify against pi") {
    for (int k : {1, 2}) {
        VerificationReport v = verify_against_pi(sample_positive_series(k), 100);
        CHECK(v.digits_matched >= 100);
    }
}

TEST_CASE("digits matched grows with terms until saturation") {
    Precision p(120);
    SeriesParams sp = sample_positive_series(1);
    ComplexBall inv_pi = div(ComplexBall::one(p), pi_oracle(p), p);
    long prev = 0;
    for (long n : {5L, 10L, 20L, 40L, 80L}) {
        SeriesSum s = eval_series(sp, n, p);
        long matched = certified_zero_digits(sub(s.value, inv_pi, p));
        CHECK(matched >= prev);
        prev = matched;
    }
    CHECK(prev >= 100);  // saturated near working precision
}

TEST_CASE("a forged constant term is detected") {
    SeriesParams sp = sample_positive_series(1);
    Integer e20;
    mpz_ui_pow_ui(e20.get_mpz_t(), 10, 20);
    sp.a.coefficient += Rational(Integer(1), e20);
    VerificationReport v = verify_against_pi(sp, 100);
    CHECK(v.digits_matched >= 15);
    CHECK(v.digits_matched <= 25);
}

TEST_CASE("truncation estimate tracks the measured error slope") {
    Precision p(700);
    SeriesParams chud = rational_params(Rational(-1, Integer(53360) * 53360 * 53360),
                                        Rational(13591409, 426880), Rational(545140134, 426880));
    // z-rate only: consecutive tails differ by digits_per_term per term
    SeriesSum s1 = eval_series(chud, 10, p);
    SeriesSum s2 = eval_series(chud, 20, p);
    double slope = (s1.tail_log10 - s2.tail_log10) / 10.0;
    CHECK(slope == doctest::Approx(14.18).epsilon(0.01));
}
