// Arbitrary-precision complex ball arithmetic on top of GMP/MPFR, plus an
// arctan-based pi oracle independent of every hypergeometric series in the
// pipeline. Every operation returns an enclosure guaranteed to contain the
// exact image of the input balls.

#ifndef PIPROVER_NUMCORE_HPP
#define PIPROVER_NUMCORE_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace pipr {

using Rational = mpq_class;
using Integer = mpz_class;

// Thrown when an input ball straddles a pole or branch cut; the caller is
// expected to retry at higher precision.
struct DomainStraddle : std::runtime_error {
    explicit DomainStraddle(const std::string& what) : std::runtime_error(what) {}
};

struct Precision {
    long digits;

    explicit Precision(long d) : digits(d) {
        if (d < 10) throw std::invalid_argument("Precision: digits must be >= 10");
    }
    mpfr_prec_t bits() const {
        return static_cast<mpfr_prec_t>(digits * 3.3219280948873626 + 0.5) + 96;
    }
    Precision doubled() const { return Precision(digits * 2); }
};

// Midpoint-radius enclosure of a complex number. The radius is an absolute
// bound on |exact - midpoint| in the complex plane, so it also bounds each
// component. Immutable in practice: all operations build fresh balls.
class ComplexBall {
  public:
    ComplexBall();
    explicit ComplexBall(mpfr_prec_t prec);
    ComplexBall(const ComplexBall& o);
    ComplexBall(ComplexBall&& o) noexcept;
    ComplexBall& operator=(const ComplexBall& o);
    ComplexBall& operator=(ComplexBall&& o) noexcept;
    ~ComplexBall();

    mpfr_srcptr re() const { return re_; }
    mpfr_srcptr im() const { return im_; }
    mpfr_srcptr rad() const { return rad_; }
    mpfr_ptr re() { return re_; }
    mpfr_ptr im() { return im_; }
    mpfr_ptr rad() { return rad_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(re_); }

    bool is_exact_zero() const;

    std::string to_string(long digits = 30) const;

    static ComplexBall zero(Precision p);
    static ComplexBall one(Precision p);
    static ComplexBall i_unit(Precision p);
    static ComplexBall from_rational(const Rational& q, Precision p);
    static ComplexBall from_rational(const Rational& re, const Rational& im, Precision p);
    static ComplexBall from_long(long v, Precision p);

  private:
    mpfr_t re_, im_, rad_;
};

// --- elementary ball operations -------------------------------------------

ComplexBall add(const ComplexBall& x, const ComplexBall& y, Precision p);
ComplexBall sub(const ComplexBall& x, const ComplexBall& y, Precision p);
ComplexBall mul(const ComplexBall& x, const ComplexBall& y, Precision p);
ComplexBall div(const ComplexBall& x, const ComplexBall& y, Precision p);
ComplexBall neg(const ComplexBall& x);
ComplexBall conj(const ComplexBall& x);
ComplexBall sqrt(const ComplexBall& x, Precision p);   // principal branch
ComplexBall cbrt(const ComplexBall& x, Precision p);   // principal branch
ComplexBall exp(const ComplexBall& x, Precision p);
ComplexBall log(const ComplexBall& x, Precision p);    // principal branch
ComplexBall pow_int(const ComplexBall& x, long n, Precision p);

ComplexBall mul_rational(const ComplexBall& x, const Rational& q, Precision p);
ComplexBall add_rational(const ComplexBall& x, const Rational& q, Precision p);

enum class ElemOp { add, sub, mul, div, sqrt, cbrt, exp, log, pow_int };

// Uniform dispatcher used by the property suites. pow_int takes its exponent
// as a second argument ball holding an exact integer.
ComplexBall eval_elementary(ElemOp op, const std::vector<ComplexBall>& args, Precision p);

// --- predicates ------------------------------------------------------------

bool contains_zero(const ComplexBall& x);
bool is_certified_below(const ComplexBall& x, const Rational& bound);
// true iff the exact point re+im*i is provably inside the ball
bool contains_point(const ComplexBall& x, const Rational& re, const Rational& im);
// true iff the two enclosures share at least one point
bool overlaps(const ComplexBall& x, const ComplexBall& y);
// certified |im| == 0 up to the ball radius, with the radius below 10^-thresh
bool certifies_real(const ComplexBall& x, long thresh_digits);

// upper bound on |x| as a double exponent estimate; +inf safe
double mag_upper_log10(const ComplexBall& x);
// -log10(|mid| + rad), i.e. certified decimal zeros of the residual
long certified_zero_digits(const ComplexBall& x);

// --- pi oracle --------------------------------------------------------------

enum class PiFormula { machin, hutton };

// Real ball containing pi with radius <= 10^-p.digits, computed from a
// Machin-style arctan sum with exact rational binary-splitting accumulation.
ComplexBall pi_oracle(Precision p, PiFormula formula = PiFormula::machin);

}  // namespace pipr

#endif  // PIPROVER_NUMCORE_HPP
