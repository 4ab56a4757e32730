#include "piprover/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pipr {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

// rad += |v| * 2^(k - prec), rounded up. No-op for zero v.
void rad_add_scaled_abs(mpfr_ptr rad, mpfr_srcptr v, long k, mpfr_prec_t prec) {
    if (mpfr_zero_p(v)) return;
    mpfr_t t;
    mpfr_init2(t, kRadPrec);
    mpfr_abs(t, v, MPFR_RNDU);
    mpfr_mul_2si(t, t, k - prec, MPFR_RNDU);
    mpfr_add(rad, rad, t, MPFR_RNDU);
    mpfr_clear(t);
}

void hypot_up(mpfr_ptr out, mpfr_srcptr a, mpfr_srcptr b) {
    mpfr_hypot(out, a, b, MPFR_RNDU);
}

void hypot_down(mpfr_ptr out, mpfr_srcptr a, mpfr_srcptr b) {
    mpfr_hypot(out, a, b, MPFR_RNDD);
}

// |mid| upper bound of a ball's midpoint
struct Mag {
    mpfr_t v;
    Mag() { mpfr_init2(v, kRadPrec); }
    ~Mag() { mpfr_clear(v); }
    Mag(const Mag&) = delete;
    Mag& operator=(const Mag&) = delete;
};

// lower bound on |exact| over the whole ball; clamped at 0
void ball_mag_lower(mpfr_ptr out, const ComplexBall& x) {
    hypot_down(out, x.re(), x.im());
    mpfr_sub(out, out, x.rad(), MPFR_RNDD);
    if (mpfr_sgn(out) < 0) mpfr_set_zero(out, 1);
}

// true if the disk meets the closed ray {re <= 0, im = 0}; callers must have
// already excluded balls containing 0
bool touches_negative_real_axis(const ComplexBall& x) {
    if (mpfr_sgn(x.re()) >= 0) return false;
    mpfr_t t;
    mpfr_init2(t, kRadPrec);
    mpfr_abs(t, x.im(), MPFR_RNDD);
    bool straddles = mpfr_cmp(t, x.rad()) <= 0;
    mpfr_clear(t);
    return straddles;
}

}  // namespace

// --- ComplexBall lifecycle ---------------------------------------------------

ComplexBall::ComplexBall() : ComplexBall(64) {}

ComplexBall::ComplexBall(mpfr_prec_t prec) {
    mpfr_init2(re_, prec);
    mpfr_init2(im_, prec);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set_zero(re_, 1);
    mpfr_set_zero(im_, 1);
    mpfr_set_zero(rad_, 1);
}

ComplexBall::ComplexBall(const ComplexBall& o) {
    mpfr_init2(re_, mpfr_get_prec(o.re_));
    mpfr_init2(im_, mpfr_get_prec(o.im_));
    mpfr_init2(rad_, kRadPrec);
    mpfr_set(re_, o.re_, MPFR_RNDN);
    mpfr_set(im_, o.im_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

ComplexBall::ComplexBall(ComplexBall&& o) noexcept {
    mpfr_init2(re_, 64);
    mpfr_init2(im_, 64);
    mpfr_init2(rad_, kRadPrec);
    mpfr_swap(re_, o.re_);
    mpfr_swap(im_, o.im_);
    mpfr_swap(rad_, o.rad_);
}

ComplexBall& ComplexBall::operator=(const ComplexBall& o) {
    if (this == &o) return *this;
    mpfr_set_prec(re_, mpfr_get_prec(o.re_));
    mpfr_set_prec(im_, mpfr_get_prec(o.im_));
    mpfr_set(re_, o.re_, MPFR_RNDN);
    mpfr_set(im_, o.im_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
    return *this;
}

ComplexBall& ComplexBall::operator=(ComplexBall&& o) noexcept {
    mpfr_swap(re_, o.re_);
    mpfr_swap(im_, o.im_);
    mpfr_swap(rad_, o.rad_);
    return *this;
}

ComplexBall::~ComplexBall() {
    mpfr_clear(re_);
    mpfr_clear(im_);
    mpfr_clear(rad_);
}

bool ComplexBall::is_exact_zero() const {
    return mpfr_zero_p(re_) && mpfr_zero_p(im_) && mpfr_zero_p(rad_);
}

std::string ComplexBall::to_string(long digits) const {
    mpfr_exp_t e;
    auto fmt = [&](mpfr_srcptr v) {
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v, MPFR_RNDN);
        std::string out = s;
        mpfr_free_str(s);
        bool negv = !out.empty() && out[0] == '-';
        std::string mant = negv ? out.substr(1) : out;
        std::string res = (negv ? "-" : "") + ("0." + mant) + "e" + std::to_string(e);
        if (mpfr_zero_p(v)) res = "0";
        return res;
    };
    std::string s = fmt(re_);
    if (!mpfr_zero_p(im_)) s += " + " + fmt(im_) + "*i";
    if (!mpfr_zero_p(rad_)) {
        s += " +/- 2^" + std::to_string(mpfr_get_exp(rad_));
    }
    return s;
}

ComplexBall ComplexBall::zero(Precision p) { return ComplexBall(p.bits()); }

ComplexBall ComplexBall::one(Precision p) {
    ComplexBall r(p.bits());
    mpfr_set_ui(r.re(), 1, MPFR_RNDN);
    return r;
}

ComplexBall ComplexBall::i_unit(Precision p) {
    ComplexBall r(p.bits());
    mpfr_set_ui(r.im(), 1, MPFR_RNDN);
    return r;
}

ComplexBall ComplexBall::from_rational(const Rational& q, Precision p) {
    ComplexBall r(p.bits());
    int t = mpfr_set_q(r.re(), q.get_mpq_t(), MPFR_RNDN);
    if (t != 0) rad_add_scaled_abs(r.rad(), r.re(), 1, p.bits());
    return r;
}

ComplexBall ComplexBall::from_rational(const Rational& re, const Rational& im, Precision p) {
    ComplexBall r(p.bits());
    int t1 = mpfr_set_q(r.re(), re.get_mpq_t(), MPFR_RNDN);
    int t2 = mpfr_set_q(r.im(), im.get_mpq_t(), MPFR_RNDN);
    if (t1 != 0) rad_add_scaled_abs(r.rad(), r.re(), 1, p.bits());
    if (t2 != 0) rad_add_scaled_abs(r.rad(), r.im(), 1, p.bits());
    return r;
}

ComplexBall ComplexBall::from_long(long v, Precision p) {
    ComplexBall r(p.bits());
    mpfr_set_si(r.re(), v, MPFR_RNDN);
    return r;
}

// --- arithmetic --------------------------------------------------------------

ComplexBall add(const ComplexBall& x, const ComplexBall& y, Precision p) {
    const mpfr_prec_t P = p.bits();
    ComplexBall r(P);
    int tre = mpfr_add(r.re(), x.re(), y.re(), MPFR_RNDN);
    int tim = mpfr_add(r.im(), x.im(), y.im(), MPFR_RNDN);
    mpfr_add(r.rad(), x.rad(), y.rad(), MPFR_RNDU);
    if (tre != 0) rad_add_scaled_abs(r.rad(), r.re(), 1, P);
    if (tim != 0) rad_add_scaled_abs(r.rad(), r.im(), 1, P);
    return r;
}

ComplexBall sub(const ComplexBall& x, const ComplexBall& y, Precision p) {
    const mpfr_prec_t P = p.bits();
    ComplexBall r(P);
    int tre = mpfr_sub(r.re(), x.re(), y.re(), MPFR_RNDN);
    int tim = mpfr_sub(r.im(), x.im(), y.im(), MPFR_RNDN);
    mpfr_add(r.rad(), x.rad(), y.rad(), MPFR_RNDU);
    if (tre != 0) rad_add_scaled_abs(r.rad(), r.re(), 1, P);
    if (tim != 0) rad_add_scaled_abs(r.rad(), r.im(), 1, P);
    return r;
}

ComplexBall neg(const ComplexBall& x) {
    ComplexBall r(x);
    mpfr_neg(r.re(), r.re(), MPFR_RNDN);
    mpfr_neg(r.im(), r.im(), MPFR_RNDN);
    return r;
}

ComplexBall conj(const ComplexBall& x) {
    ComplexBall r(x);
    mpfr_neg(r.im(), r.im(), MPFR_RNDN);
    return r;
}

ComplexBall mul(const ComplexBall& x, const ComplexBall& y, Precision p) {
    const mpfr_prec_t P = p.bits();
    ComplexBall r(P);
    mpfr_t ac, bd, ad, bc;
    mpfr_inits2(P, ac, bd, ad, bc, static_cast<mpfr_ptr>(nullptr));
    mpfr_mul(ac, x.re(), y.re(), MPFR_RNDN);
    mpfr_mul(bd, x.im(), y.im(), MPFR_RNDN);
    mpfr_mul(ad, x.re(), y.im(), MPFR_RNDN);
    mpfr_mul(bc, x.im(), y.re(), MPFR_RNDN);
    mpfr_sub(r.re(), ac, bd, MPFR_RNDN);
    mpfr_add(r.im(), ad, bc, MPFR_RNDN);

    // rounding slack: every intermediate is correctly rounded at P bits
    rad_add_scaled_abs(r.rad(), ac, 2, P);
    rad_add_scaled_abs(r.rad(), bd, 2, P);
    rad_add_scaled_abs(r.rad(), ad, 2, P);
    rad_add_scaled_abs(r.rad(), bc, 2, P);
    rad_add_scaled_abs(r.rad(), r.re(), 2, P);
    rad_add_scaled_abs(r.rad(), r.im(), 2, P);

    // propagated radius: |x| ry + |y| rx + rx ry
    Mag mx, my;
    hypot_up(mx.v, x.re(), x.im());
    hypot_up(my.v, y.re(), y.im());
    mpfr_t t;
    mpfr_init2(t, kRadPrec);
    mpfr_mul(t, mx.v, y.rad(), MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), t, MPFR_RNDU);
    mpfr_mul(t, my.v, x.rad(), MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), t, MPFR_RNDU);
    mpfr_mul(t, x.rad(), y.rad(), MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), t, MPFR_RNDU);
    mpfr_clear(t);
    mpfr_clears(ac, bd, ad, bc, static_cast<mpfr_ptr>(nullptr));
    return r;
}

ComplexBall div(const ComplexBall& x, const ComplexBall& y, Precision p) {
    const mpfr_prec_t P = p.bits();
    Mag my_lb;
    hypot_down(my_lb.v, y.re(), y.im());
    if (mpfr_cmp(my_lb.v, y.rad()) <= 0) {
        throw DomainStraddle("div: divisor ball straddles 0");
    }
    ComplexBall r(P);
    mpfr_t D, t1, t2, nre, nim;
    mpfr_inits2(P, D, t1, t2, nre, nim, static_cast<mpfr_ptr>(nullptr));
    mpfr_mul(t1, y.re(), y.re(), MPFR_RNDN);
    mpfr_mul(t2, y.im(), y.im(), MPFR_RNDN);
    mpfr_add(D, t1, t2, MPFR_RNDN);
    mpfr_mul(t1, x.re(), y.re(), MPFR_RNDN);
    mpfr_mul(t2, x.im(), y.im(), MPFR_RNDN);
    mpfr_add(nre, t1, t2, MPFR_RNDN);
    mpfr_mul(t1, x.im(), y.re(), MPFR_RNDN);
    mpfr_mul(t2, x.re(), y.im(), MPFR_RNDN);
    mpfr_sub(nim, t1, t2, MPFR_RNDN);
    mpfr_div(r.re(), nre, D, MPFR_RNDN);
    mpfr_div(r.im(), nim, D, MPFR_RNDN);

    // mid rounding slack: bounded by (|x|/|y|) * 2^(6-P)
    Mag mx_ub, my_ub;
    hypot_up(mx_ub.v, x.re(), x.im());
    hypot_up(my_ub.v, y.re(), y.im());
    mpfr_t s;
    mpfr_init2(s, kRadPrec);
    mpfr_div(s, mx_ub.v, my_lb.v, MPFR_RNDU);
    mpfr_mul_2si(s, s, 6 - static_cast<long>(P), MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), s, MPFR_RNDU);

    // propagated: (rx |y| + ry |x|) / (|y| (|y| - ry))
    mpfr_t num, den;
    mpfr_init2(num, kRadPrec);
    mpfr_init2(den, kRadPrec);
    mpfr_mul(num, x.rad(), my_ub.v, MPFR_RNDU);
    mpfr_mul(s, y.rad(), mx_ub.v, MPFR_RNDU);
    mpfr_add(num, num, s, MPFR_RNDU);
    mpfr_sub(den, my_lb.v, y.rad(), MPFR_RNDD);
    mpfr_mul(den, den, my_lb.v, MPFR_RNDD);
    mpfr_div(num, num, den, MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), num, MPFR_RNDU);
    mpfr_clears(s, num, den, static_cast<mpfr_ptr>(nullptr));
    mpfr_clears(D, t1, t2, nre, nim, static_cast<mpfr_ptr>(nullptr));
    return r;
}

namespace {

// principal n-th root (n = 2 or 3) via the polar form; the polar route has no
// catastrophic cancellation, so the midpoint is accurate to a few ulps
ComplexBall root_principal(const ComplexBall& x, int n, Precision p, const char* name) {
    const mpfr_prec_t P = p.bits();
    if (x.is_exact_zero()) return ComplexBall(P);

    Mag lb;
    ball_mag_lower(lb.v, x);
    if (mpfr_zero_p(lb.v)) {
        // ball contains 0: every branch value has modulus <= (|m|+r)^(1/n)
        ComplexBall r(P);
        mpfr_t u;
        mpfr_init2(u, kRadPrec);
        hypot_up(u, x.re(), x.im());
        mpfr_add(u, u, x.rad(), MPFR_RNDU);
        if (n == 2) mpfr_sqrt(u, u, MPFR_RNDU);
        else mpfr_cbrt(u, u, MPFR_RNDU);
        mpfr_add(r.rad(), r.rad(), u, MPFR_RNDU);
        rad_add_scaled_abs(r.rad(), u, 2, kRadPrec);
        mpfr_clear(u);
        return r;
    }
    if (touches_negative_real_axis(x) && !(mpfr_zero_p(x.im()) && mpfr_zero_p(x.rad()))) {
        throw DomainStraddle(std::string(name) + ": ball straddles the branch cut");
    }

    ComplexBall r(P);
    mpfr_t h, th, rr, s, c;
    mpfr_inits2(P, h, th, rr, s, c, static_cast<mpfr_ptr>(nullptr));
    mpfr_hypot(h, x.re(), x.im(), MPFR_RNDN);
    mpfr_atan2(th, x.im(), x.re(), MPFR_RNDN);
    if (n == 2) mpfr_sqrt(rr, h, MPFR_RNDN);
    else mpfr_cbrt(rr, h, MPFR_RNDN);
    mpfr_div_ui(th, th, static_cast<unsigned>(n), MPFR_RNDN);
    mpfr_sin_cos(s, c, th, MPFR_RNDN);
    mpfr_mul(r.re(), rr, c, MPFR_RNDN);
    mpfr_mul(r.im(), rr, s, MPFR_RNDN);

    // midpoint slack: <= |result| * 2^(8-P)
    rad_add_scaled_abs(r.rad(), rr, 8, P);

    // propagated radius: derivative of the n-th root on the ball
    mpfr_t d;
    mpfr_init2(d, kRadPrec);
    if (n == 2) {
        mpfr_sqrt(d, lb.v, MPFR_RNDD);
        mpfr_mul_2si(d, d, 1, MPFR_RNDD);  // 2 sqrt(lb)
    } else {
        mpfr_t e;
        mpfr_init2(e, kRadPrec);
        mpfr_cbrt(e, lb.v, MPFR_RNDD);
        mpfr_mul(d, e, e, MPFR_RNDD);
        mpfr_mul_ui(d, d, 3, MPFR_RNDD);  // 3 lb^(2/3)
        mpfr_clear(e);
    }
    mpfr_t prop;
    mpfr_init2(prop, kRadPrec);
    mpfr_div(prop, x.rad(), d, MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), prop, MPFR_RNDU);
    mpfr_clears(d, prop, static_cast<mpfr_ptr>(nullptr));
    mpfr_clears(h, th, rr, s, c, static_cast<mpfr_ptr>(nullptr));
    return r;
}

}  // namespace

ComplexBall sqrt(const ComplexBall& x, Precision p) { return root_principal(x, 2, p, "sqrt"); }
ComplexBall cbrt(const ComplexBall& x, Precision p) { return root_principal(x, 3, p, "cbrt"); }

ComplexBall exp(const ComplexBall& x, Precision p) {
    const mpfr_prec_t P = p.bits();
    ComplexBall r(P);
    mpfr_t m, s, c;
    mpfr_inits2(P, m, s, c, static_cast<mpfr_ptr>(nullptr));
    mpfr_exp(m, x.re(), MPFR_RNDN);
    mpfr_sin_cos(s, c, x.im(), MPFR_RNDN);
    mpfr_mul(r.re(), m, c, MPFR_RNDN);
    mpfr_mul(r.im(), m, s, MPFR_RNDN);
    rad_add_scaled_abs(r.rad(), m, 8, P);

    // |e^x - e^m| <= |e^m| (e^r - 1)
    mpfr_t g;
    mpfr_init2(g, kRadPrec);
    mpfr_expm1(g, x.rad(), MPFR_RNDU);
    mpfr_t mu;
    mpfr_init2(mu, kRadPrec);
    mpfr_abs(mu, m, MPFR_RNDU);
    mpfr_mul(g, g, mu, MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), g, MPFR_RNDU);
    mpfr_clears(g, mu, static_cast<mpfr_ptr>(nullptr));
    mpfr_clears(m, s, c, static_cast<mpfr_ptr>(nullptr));
    return r;
}

ComplexBall log(const ComplexBall& x, Precision p) {
    const mpfr_prec_t P = p.bits();
    Mag lb;
    ball_mag_lower(lb.v, x);
    if (mpfr_zero_p(lb.v)) throw DomainStraddle("log: ball contains 0");
    if (touches_negative_real_axis(x) && !(mpfr_zero_p(x.im()) && mpfr_zero_p(x.rad()))) {
        throw DomainStraddle("log: ball straddles the branch cut");
    }
    ComplexBall r(P);
    mpfr_t h;
    mpfr_init2(h, P);
    mpfr_hypot(h, x.re(), x.im(), MPFR_RNDN);
    mpfr_log(r.re(), h, MPFR_RNDN);
    mpfr_atan2(r.im(), x.im(), x.re(), MPFR_RNDN);

    // absolute midpoint slack (log can be near 0)
    mpfr_t one;
    mpfr_init2(one, kRadPrec);
    mpfr_set_ui(one, 1, MPFR_RNDU);
    rad_add_scaled_abs(r.rad(), one, 8, P);
    rad_add_scaled_abs(r.rad(), r.re(), 8, P);
    rad_add_scaled_abs(r.rad(), r.im(), 8, P);

    mpfr_t prop;
    mpfr_init2(prop, kRadPrec);
    mpfr_div(prop, x.rad(), lb.v, MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), prop, MPFR_RNDU);
    mpfr_clears(one, prop, h, static_cast<mpfr_ptr>(nullptr));
    return r;
}

ComplexBall pow_int(const ComplexBall& x, long n, Precision p) {
    if (n == 0) return ComplexBall::one(p);
    bool inv = n < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    ComplexBall acc = ComplexBall::one(p);
    ComplexBall base = x;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base, p);
        e >>= 1;
        if (e > 0) base = mul(base, base, p);
    }
    if (inv) return div(ComplexBall::one(p), acc, p);
    return acc;
}

ComplexBall mul_rational(const ComplexBall& x, const Rational& q, Precision p) {
    return mul(x, ComplexBall::from_rational(q, p), p);
}

ComplexBall add_rational(const ComplexBall& x, const Rational& q, Precision p) {
    return add(x, ComplexBall::from_rational(q, p), p);
}

ComplexBall eval_elementary(ElemOp op, const std::vector<ComplexBall>& args, Precision p) {
    auto need = [&](size_t n) {
        if (args.size() != n) throw std::invalid_argument("eval_elementary: wrong arity");
    };
    switch (op) {
        case ElemOp::add: need(2); return add(args[0], args[1], p);
        case ElemOp::sub: need(2); return sub(args[0], args[1], p);
        case ElemOp::mul: need(2); return mul(args[0], args[1], p);
        case ElemOp::div: need(2); return div(args[0], args[1], p);
        case ElemOp::sqrt: need(1); return sqrt(args[0], p);
        case ElemOp::cbrt: need(1); return cbrt(args[0], p);
        case ElemOp::exp: need(1); return exp(args[0], p);
        case ElemOp::log: need(1); return log(args[0], p);
        case ElemOp::pow_int: {
            need(2);
            long n = mpfr_get_si(args[1].re(), MPFR_RNDN);
            return pow_int(args[0], n, p);
        }
    }
    throw std::logic_error("eval_elementary: unknown op");
}

// --- predicates --------------------------------------------------------------

bool contains_zero(const ComplexBall& x) {
    Mag lo;
    hypot_down(lo.v, x.re(), x.im());
    return mpfr_cmp(lo.v, x.rad()) <= 0;
}

bool is_certified_below(const ComplexBall& x, const Rational& bound) {
    Mag hi;
    hypot_up(hi.v, x.re(), x.im());
    mpfr_add(hi.v, hi.v, x.rad(), MPFR_RNDU);
    mpfr_t b;
    mpfr_init2(b, kRadPrec);
    mpfr_set_q(b, bound.get_mpq_t(), MPFR_RNDD);
    bool ok = mpfr_cmp(hi.v, b) < 0;
    mpfr_clear(b);
    return ok;
}

namespace {

Rational mpfr_to_rational(mpfr_srcptr v) {
    if (mpfr_zero_p(v)) return Rational(0);
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v);
    return q;
}

}  // namespace

// exact test: midpoints and radii are dyadic rationals
bool contains_point(const ComplexBall& x, const Rational& re, const Rational& im) {
    Rational dr = mpfr_to_rational(x.re()) - re;
    Rational di = mpfr_to_rational(x.im()) - im;
    Rational rad = mpfr_to_rational(x.rad());
    return dr * dr + di * di <= rad * rad;
}

bool overlaps(const ComplexBall& x, const ComplexBall& y) {
    Rational dr = mpfr_to_rational(x.re()) - mpfr_to_rational(y.re());
    Rational di = mpfr_to_rational(x.im()) - mpfr_to_rational(y.im());
    Rational rs = mpfr_to_rational(x.rad()) + mpfr_to_rational(y.rad());
    return dr * dr + di * di <= rs * rs;
}

bool certifies_real(const ComplexBall& x, long thresh_digits) {
    mpfr_t t, lim;
    mpfr_init2(t, kRadPrec);
    mpfr_init2(lim, kRadPrec);
    mpfr_abs(t, x.im(), MPFR_RNDD);
    bool contains0 = mpfr_cmp(t, x.rad()) <= 0;
    mpfr_abs(t, x.im(), MPFR_RNDU);
    mpfr_add(t, t, x.rad(), MPFR_RNDU);
    mpfr_set_si(lim, -thresh_digits, MPFR_RNDN);
    mpfr_exp10(lim, lim, MPFR_RNDD);
    bool small = mpfr_cmp(t, lim) < 0;
    mpfr_clears(t, lim, static_cast<mpfr_ptr>(nullptr));
    return contains0 && small;
}

double mag_upper_log10(const ComplexBall& x) {
    Mag hi;
    hypot_up(hi.v, x.re(), x.im());
    mpfr_add(hi.v, hi.v, x.rad(), MPFR_RNDU);
    if (mpfr_zero_p(hi.v)) return -std::numeric_limits<double>::infinity();
    mpfr_t l;
    mpfr_init2(l, kRadPrec);
    mpfr_log10(l, hi.v, MPFR_RNDU);
    double d = mpfr_get_d(l, MPFR_RNDU);
    mpfr_clear(l);
    return d;
}

long certified_zero_digits(const ComplexBall& x) {
    double l = mag_upper_log10(x);
    if (std::isinf(l)) return 1000000;
    return static_cast<long>(std::floor(-l));
}

// --- pi oracle ----------------------------------------------------------------

namespace {

// sum_{n=a}^{b-1} (-1)^n / ((2n+1) k^(2n+1)), exact, by divide and conquer
Rational atan_inv_sum(unsigned long k, long a, long b) {
    if (b - a == 1) {
        Integer kp;
        mpz_ui_pow_ui(kp.get_mpz_t(), k, static_cast<unsigned long>(2 * a + 1));
        Rational t(1, 1);
        t /= Rational(Integer(2 * a + 1) * kp);
        if (a % 2 == 1) t = -t;
        return t;
    }
    long m = a + (b - a) / 2;
    return atan_inv_sum(k, a, m) + atan_inv_sum(k, m, b);
}

struct AtanTerm {
    long mult;          // signed multiplier
    unsigned long inv;  // arctan(1/inv)
};

ComplexBall pi_from_terms(const std::vector<AtanTerm>& terms, Precision p) {
    Rational mid(0);
    Rational tail(0);
    for (const auto& t : terms) {
        long n = static_cast<long>((p.digits + 15) / (2.0 * std::log10(static_cast<double>(t.inv)))) + 3;
        mid += Rational(t.mult) * atan_inv_sum(t.inv, 0, n);
        Integer kp;
        mpz_ui_pow_ui(kp.get_mpz_t(), t.inv, static_cast<unsigned long>(2 * n + 1));
        Rational bound(std::abs(t.mult));
        bound /= Rational(Integer(2 * n + 1) * kp);
        tail += bound;
    }
    ComplexBall r = ComplexBall::from_rational(mid, p);
    mpfr_t tb;
    mpfr_init2(tb, 64);
    mpfr_set_q(tb, tail.get_mpq_t(), MPFR_RNDU);
    mpfr_add(r.rad(), r.rad(), tb, MPFR_RNDU);
    mpfr_clear(tb);
    return r;
}

}  // namespace

ComplexBall pi_oracle(Precision p, PiFormula formula) {
    switch (formula) {
        case PiFormula::machin:
            // pi = 16 arctan(1/5) - 4 arctan(1/239)
            return pi_from_terms({{16, 5}, {-4, 239}}, p);
        case PiFormula::hutton:
            // pi = 8 arctan(1/3) + 4 arctan(1/7)
            return pi_from_terms({{8, 3}, {4, 7}}, p);
    }
    throw std::logic_error("pi_oracle: unknown formula");
}

}  // namespace pipr
