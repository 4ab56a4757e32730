// Level-1 modular-equation layer: the rational w-maps linking the Weber
// variables to alpha/beta, root-branch extraction, and q-series machinery
// (modular invariant J, the x_l products, Weber f) used as an independent
// validation oracle.

#ifndef PIPROVER_MODEQ_HPP
#define PIPROVER_MODEQ_HPP

#include <string>

#include "piprover/numcore.hpp"
#include "piprover/polyring.hpp"

namespace pipr {

struct PoleStraddle : std::runtime_error {
    explicit PoleStraddle(const std::string& what) : std::runtime_error(what) {}
};

struct NomeTooLarge : std::runtime_error {
    explicit NomeTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// nome with a certified |q| < 1 bound
struct QPoint {
    ComplexBall value;
    std::string description;

    static QPoint make(ComplexBall v, std::string desc);
};

// nome of the alternating (z < 0) branch: -exp(-pi sqrt(4d - 1)) at level 1
QPoint nome_alternating(int d, Precision p);

// 432 x^e / (x^e - 16)^3 with e = 12 or 24
ComplexBall w_map(const ComplexBall& x, WMapForm form, Precision p);

// first and second derivative of the w-map at x
struct WDerivatives {
    ComplexBall w, wp, wpp;
};
WDerivatives w_map_derivatives(const ComplexBall& x, WMapForm form, Precision p);

enum class AlphaBranch { minus, plus };

// inverts alpha (1 - alpha) = w; minus gives 1 - 2 alpha = +sqrt(1 - 4w)
ComplexBall alpha_from_w(const ComplexBall& w, AlphaBranch branch, Precision p);

// modular invariant J(q) = 1/q + 744 + 196884 q + ... with a certified tail
// bound; requires |q| <= 1/10
ComplexBall j_invariant(const QPoint& q, Precision p);

// exact integer q-expansion coefficient of J at order n >= -1
Integer j_series_coefficient(long n);

// x_2, x_3, x_4 modular functions via their infinite products
ComplexBall x_level(const QPoint& q, int level, Precision p);

// level-wise rational expressions equal to J
ComplexBall j_from_x(const ComplexBall& x, int level, Precision p);

// Weber f on the imaginary axis: q^(-1/48) prod (1 + q^(n-1/2)), q = e^(-2 pi t)
ComplexBall weber_f(const Rational& t, Precision p);

struct ValidationReport {
    int degree = 0;
    Rational t;
    bool degenerate = false;
    bool pass_direct = false;
    bool pass_swapped = false;
    std::string residual_direct;
    std::string residual_swapped;
    long certified_digits_direct = 0;
    long certified_digits_swapped = 0;

    bool passed() const { return degenerate || pass_direct || pass_swapped; }
};

// Checks that phi vanishes at (f(t), f(d t)) or at the swapped pair with a
// certified residual below 10^(-p/2). A failure is a report, not an error.
ValidationReport validate_modular_polynomial(const BivariatePoly& phi, int d, const Rational& t,
                                             Precision p);

}  // namespace pipr

#endif  // PIPROVER_MODEQ_HPP
