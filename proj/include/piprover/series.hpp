// Exact binary-splitting evaluation of level-1 Ramanujan-type series
// sum T_n (a + b n) z^n and certified comparison against 1/pi.

#ifndef PIPROVER_SERIES_HPP
#define PIPROVER_SERIES_HPP

#include "piprover/numcore.hpp"
#include "piprover/params.hpp"

namespace pipr {

struct DivergentParameters : std::runtime_error {
    explicit DivergentParameters(const std::string& what) : std::runtime_error(what) {}
};

// partial product/sum triple of a term range [n1, n2)
struct SplitNode {
    Integer P, Q, T;
};

// associative range merge: P = Pl*Pr, Q = Ql*Qr, T = Tl*Qr + Pl*Tr
SplitNode combine(const SplitNode& l, const SplitNode& r);

// single-index base node; the n = 0 factor is 1 by convention
SplitNode split_base(int s, const Rational& z, const Integer& A, const Integer& B, long n);

SplitNode split_range(int s, const Rational& z, const Integer& A, const Integer& B, long n1,
                      long n2);

// ratio of consecutive Pochhammer term bodies, z excluded:
// ((2n+1)(sn+1)(sn+s-1)) / (2 s^2 (n+1)^3)
Rational term_ratio(int s, long n);

struct SeriesSum {
    ComplexBall value;      // enclosure of the partial sum (surd applied once at the end)
    Rational rational_part; // exact sum with sqrt(radicand) factored out
    Integer radicand;
    double tail_log10 = 0;  // estimate of log10 |first omitted term|
    long terms = 0;
};

// Partial sum of n_terms terms; truncation remainder is NOT included in the
// ball — callers bound it with tail_log10.
SeriesSum eval_series(const SeriesParams& params, long n_terms, Precision p);

struct VerificationReport {
    long digits_requested = 0;
    long digits_matched = 0;
    ComplexBall residual;  // contains (partial sum - 1/pi)
    long terms_used = 0;
    double elapsed = 0;
};

VerificationReport verify_against_pi(const SeriesParams& params, long digits);

// asymptotic correct-digits-per-term rate, -log10 |z|
double digits_per_term(const SeriesParams& params);

// the two classical positive level-1 series shipped alongside the alternating
// catalog: k = 1 -> z = 4/125, (11n+1); k = 2 -> z = (4/85)^3, (133n+8)
SeriesParams sample_positive_series(int k);

}  // namespace pipr

#endif  // PIPROVER_SERIES_HPP
