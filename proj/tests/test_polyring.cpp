#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "piprover/polyring.hpp"
#include "piprover/prover.hpp"

using namespace pipr;

namespace {

std::string data_path(const std::string& name) {
    const char* env = std::getenv("PI_PROVER_DATA");
    return std::string(env ? env : "data") + "/" + name;
}

BivariatePoly random_even_poly(std::mt19937_64& rng, int max_terms = 12) {
    std::uniform_int_distribution<int> e(0, 8), c(-50, 50), n(1, max_terms);
    BivariatePoly poly;
    int terms = n(rng);
    for (int k = 0; k < terms; ++k) {
        int i = 2 * e(rng), j = 2 * e(rng);
        if (rng() & 1) {
            ++i;
            ++j;
        }
        poly.add_term(i, j, Integer(c(rng)));
    }
    return poly;
}

}  // namespace

TEST_CASE("parse_poly basics") {
    BivariatePoly p = parse_poly("1 18 0\n1 0 18\n17 16 10\n");
    CHECK(p.term_count() == 3);
    CHECK(p.coefficient(16, 10) == 17);
    CHECK(parse_poly("").is_zero());
    CHECK(parse_poly("3 2 2\n-3 2 2\n").is_zero());
    CHECK_THROWS_AS(parse_poly("1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_poly("x 2 2\n"), ParseError);
    CHECK_THROWS_AS(parse_poly("1 100 0\n"), ExponentOverflow);
}

TEST_CASE("serializer round trip is canonical") {
    BivariatePoly p = parse_poly("17 16 10\n1 0 18\n1 18 0\n-256 0 0\n");
    std::string s = serialize_poly(p);
    CHECK(parse_poly(s) == p);
    CHECK(serialize_poly(parse_poly(s)) == s);
    // graded-lex: the constant term comes first
    CHECK(s.substr(0, 8) == "-256 0 0");
}

TEST_CASE("partial derivatives") {
    BivariatePoly p = parse_poly("1 3 1\n");  // u^3 v
    BivariatePoly du = partial_derivative(p, 'u');
    CHECK(du.coefficient(2, 1) == 3);
    CHECK(du.term_count() == 1);

    BivariatePoly q = parse_poly("1 18 0\n1 0 18\n");
    BivariatePoly dv = partial_derivative(q, 'v');
    CHECK(dv.coefficient(0, 17) == 18);
    CHECK(dv.term_count() == 1);
}

TEST_CASE("mixed partials commute on 100 random polynomials") {
    std::mt19937_64 rng(321);
    for (int k = 0; k < 100; ++k) {
        BivariatePoly p = random_even_poly(rng);
        CHECK(partial_derivative(partial_derivative(p, 'u'), 'v') ==
              partial_derivative(partial_derivative(p, 'v'), 'u'));
    }
}

TEST_CASE("eval_poly agrees with the exact rational path") {
    Precision prec(50);
    BivariatePoly um = parse_poly("1 1 0\n-1 0 1\n");  // u - v
    ComplexBall three = ComplexBall::from_rational(Rational(3), prec);
    CHECK(contains_zero(eval_poly(um, three, three, prec)));

    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> c(-30, 30), d(1, 30);
    for (int k = 0; k < 300; ++k) {
        BivariatePoly p = random_even_poly(rng);
        Rational u(c(rng), d(rng)), v(c(rng), d(rng));
        u.canonicalize();
        v.canonicalize();
        Rational exact = eval_poly_exact(p, u, v);
        ComplexBall ball = eval_poly(p, ComplexBall::from_rational(u, prec),
                                     ComplexBall::from_rational(v, prec), prec);
        CHECK(contains_point(ball, exact, Rational(0)));
    }
}

TEST_CASE("parity_split matches the published Q/R split for degree 17") {
    PolyFile file = load_poly_file(data_path("weber_d17.poly"));
    PolySplit split = parity_split(file.poly);

    BivariatePoly q_expected = parse_poly(
        "1 18 0\n1 0 18\n"
        "17 16 10\n17 10 16\n"
        "119 12 6\n119 6 12\n"
        "272 8 2\n272 2 8\n");
    CHECK(split.q_part == q_expected);

    // r_part carries the opposite sign of the classical R normalization
    BivariatePoly r_classical = parse_poly(
        "-1 16 16\n-34 14 2\n-34 2 14\n34 12 12\n340 8 8\n544 4 4\n-256 0 0\n");
    BivariatePoly r_neg;
    for (const auto& [e, c] : r_classical.terms()) r_neg.set_term(e.first, e.second, -c);
    CHECK(split.r_part == r_neg);

    // reconstruction: phi = q_part - u v r_part
    BivariatePoly uv = parse_poly("1 1 1\n");
    BivariatePoly rebuilt = split.q_part;
    BivariatePoly uv_r = multiply(uv, split.r_part);
    for (const auto& [e, c] : uv_r.terms()) rebuilt.add_term(e.first, e.second, -c);
    CHECK(rebuilt == file.poly);
}

TEST_CASE("parity_split contract cases") {
    BivariatePoly even = parse_poly("1 2 2\n");
    PolySplit s = parity_split(even);
    CHECK(s.q_part == even);
    CHECK(s.r_part.is_zero());
    CHECK_THROWS_AS(parity_split(parse_poly("1 2 3\n")), MixedParity);
}

TEST_CASE("reconstruction holds for 100 random even-parity polynomials") {
    std::mt19937_64 rng(55);
    BivariatePoly uv = parse_poly("1 1 1\n");
    for (int k = 0; k < 100; ++k) {
        BivariatePoly p = random_even_poly(rng);
        PolySplit s = parity_split(p);
        BivariatePoly rebuilt = s.q_part;
        BivariatePoly uv_r = multiply(uv, s.r_part);
        for (const auto& [e, c] : uv_r.terms()) rebuilt.add_term(e.first, e.second, -c);
        CHECK(rebuilt == p);
    }
}

TEST_CASE("weber_transform hand example") {
    // phi = u^2 - u v: Qh = u, Rh = 1, so P = u^2 - u v again
    BivariatePoly phi = parse_poly("1 2 0\n-1 1 1\n");
    CHECK(weber_transform(phi) == phi);
}

TEST_CASE("transform identity P(s^2, t^2) = phi(s,t) (Q(s,t) + s t R(s,t))") {
    PolyFile file = load_poly_file(data_path("weber_d17.poly"));
    BivariatePoly P = weber_transform(file.poly);
    PolySplit split = parity_split(file.poly);

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> c(-12, 12), d(1, 12);
    for (int k = 0; k < 50; ++k) {
        Rational s(c(rng), d(rng)), t(c(rng), d(rng));
        s.canonicalize();
        t.canonicalize();
        Rational lhs = eval_poly_exact(P, s * s, t * t);
        Rational rhs = eval_poly_exact(file.poly, s, t) *
                       (eval_poly_exact(split.q_part, s, t) +
                        s * t * eval_poly_exact(split.r_part, s, t));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("transform preserves symmetry") {
    for (const char* name :
         {"weber_d05.poly", "weber_d07.poly", "weber_d11.poly", "weber_d17.poly",
          "weber_d41.poly"}) {
        PolyFile file = load_poly_file(data_path(name));
        CHECK(file.poly == file.poly.swapped_vars());
        BivariatePoly P = weber_transform(file.poly);
        CHECK(P == P.swapped_vars());
    }
}

TEST_CASE("data file headers and leading coefficients") {
    PolyFile f17 = load_poly_file(data_path("weber_d17.poly"));
    CHECK(f17.degree == 17);
    CHECK(f17.form == WMapForm::exp12);
    CHECK(f17.poly.coefficient(18, 0) == 1);

    PolyFile f7 = load_poly_file(data_path("weber_d07.poly"));
    CHECK(f7.degree == 7);
    CHECK(f7.form == WMapForm::exp24);
    CHECK(f7.poly.coefficient(8, 0) == 1);
    CHECK(f7.poly.coefficient(4, 4) == 7);
    CHECK(f7.poly.coefficient(1, 1) == -8);
}
