#include "piprover/series.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pipr {

namespace {

void check_s(int s) {
    if (s != 2 && s != 3 && s != 4 && s != 6)
        throw std::invalid_argument("series: s must be one of {2,3,4,6}");
}

// single multiplicative factor carrying term n-1 to term n (z included);
// factor(0) = 1
void step_factors(int s, const Rational& z, long n, Integer& num, Integer& den) {
    if (n == 0) {
        num = 1;
        den = 1;
        return;
    }
    long m = n - 1;
    Integer rn = Integer(2 * m + 1) * Integer((long)s * m + 1) * Integer((long)s * m + s - 1);
    Integer rd = Integer(2L * s * s) * Integer(m + 1) * Integer(m + 1) * Integer(m + 1);
    num = rn * z.get_num();
    den = rd * z.get_den();
}

}  // namespace

Rational term_ratio(int s, long n) {
    check_s(s);
    if (n < 0) throw std::invalid_argument("term_ratio: n must be >= 0");
    Rational r(Integer(2 * n + 1) * Integer((long)s * n + 1) * Integer((long)s * n + s - 1),
               Integer(2L * s * s) * Integer(n + 1) * Integer(n + 1) * Integer(n + 1));
    r.canonicalize();
    return r;
}

SplitNode combine(const SplitNode& l, const SplitNode& r) {
    return SplitNode{l.P * r.P, l.Q * r.Q, l.T * r.Q + l.P * r.T};
}

SplitNode split_base(int s, const Rational& z, const Integer& A, const Integer& B, long n) {
    check_s(s);
    SplitNode node;
    step_factors(s, z, n, node.P, node.Q);
    node.T = (A + B * Integer(n)) * node.P;
    return node;
}

SplitNode split_range(int s, const Rational& z, const Integer& A, const Integer& B, long n1,
                      long n2) {
    if (n1 >= n2) throw std::invalid_argument("split_range: empty range");
    if (n2 - n1 == 1) return split_base(s, z, A, B, n1);
    long mid = n1 + (n2 - n1) / 2;
    return combine(split_range(s, z, A, B, n1, mid), split_range(s, z, A, B, mid, n2));
}

SeriesSum eval_series(const SeriesParams& params, long n_terms, Precision p) {
    check_s(params.s);
    if (n_terms < 1) throw std::invalid_argument("eval_series: n_terms must be >= 1");
    if (abs(params.z) >= 1 || params.z == 0)
        throw DivergentParameters("eval_series: |z| must lie in (0, 1)");

    // a and b share one surd factor, pulled out of the exact accumulation
    Integer M;
    if (params.a.coefficient == 0)
        M = params.b.radicand;
    else if (params.b.coefficient == 0)
        M = params.a.radicand;
    else if (params.a.radicand == params.b.radicand)
        M = params.a.radicand;
    else
        throw std::invalid_argument("eval_series: a and b must share a radicand");

    Integer D;
    mpz_lcm(D.get_mpz_t(), params.a.coefficient.get_den_mpz_t(),
            params.b.coefficient.get_den_mpz_t());
    Rational ra = params.a.coefficient * Rational(D);
    Rational rb = params.b.coefficient * Rational(D);
    ra.canonicalize();
    rb.canonicalize();
    Integer A = ra.get_num();
    Integer B = rb.get_num();

    SplitNode node = split_range(params.s, params.z, A, B, 0, n_terms);

    SeriesSum out;
    out.terms = n_terms;
    out.radicand = M;
    out.rational_part = Rational(node.T, node.Q * D);
    out.rational_part.canonicalize();

    Precision pw(p.digits + 25);
    ComplexBall root = sqrt(ComplexBall::from_rational(Rational(M), pw), pw);
    out.value = mul_rational(root, out.rational_part, pw);

    double lt = 0;
    for (long n = 0; n < n_terms; ++n)
        lt += std::log10(std::fabs(term_ratio(params.s, n).get_d() * params.z.get_d()));
    Rational linear = params.a.coefficient + params.b.coefficient * Rational(n_terms);
    double coeff = std::fabs(linear.get_d()) *
                       std::sqrt(M.get_d()) +
                   1e-300;
    out.tail_log10 = lt + std::log10(coeff);
    return out;
}

double digits_per_term(const SeriesParams& params) {
    double az = std::fabs(params.z.get_d());
    if (az <= 0 || az >= 1)
        throw DivergentParameters("digits_per_term: |z| must lie in (0, 1)");
    return -std::log10(az);
}

VerificationReport verify_against_pi(const SeriesParams& params, long digits) {
    if (digits < 50) throw std::invalid_argument("verify_against_pi: digits must be >= 50");
    auto t0 = std::chrono::steady_clock::now();

    double dpt = digits_per_term(params);
    long n_terms = static_cast<long>(std::ceil(static_cast<double>(digits) / dpt * 1.1));
    if (n_terms < 5) n_terms = 5;

    Precision pw(digits + 25);
    SeriesSum sum = eval_series(params, n_terms, pw);
    ComplexBall inv_pi = div(ComplexBall::one(pw), pi_oracle(pw), pw);

    VerificationReport r;
    r.digits_requested = digits;
    r.terms_used = n_terms;
    r.residual = sub(sum.value, inv_pi, pw);
    long matched = certified_zero_digits(r.residual);
    r.digits_matched = matched < digits ? matched : digits;
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

SeriesParams sample_positive_series(int k) {
    SeriesParams sp;
    sp.s = 6;
    sp.level = 1;
    if (k == 1) {
        sp.d = 2;
        sp.z = Rational(4, 125);
        sp.a = Surd{Rational(2, 25), Integer(15)};
        sp.b = Surd{Rational(22, 25), Integer(15)};
    } else if (k == 2) {
        sp.d = 3;
        sp.z = Rational(64, 614125);  // (4/85)^3
        sp.a = Surd{Rational(144, 7225), Integer(255)};
        sp.b = Surd{Rational(2394, 7225), Integer(255)};
    } else {
        throw std::invalid_argument("sample_positive_series: k must be 1 or 2");
    }
    return sp;
}

}  // namespace pipr
