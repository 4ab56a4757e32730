// Exact series constants shared between the derivation pipeline and the
// series evaluator.

#ifndef PIPROVER_PARAMS_HPP
#define PIPROVER_PARAMS_HPP

#include <string>

#include "piprover/numcore.hpp"

namespace pipr {

// value = coefficient * sqrt(radicand), radicand square-free
struct Surd {
    Rational coefficient;
    Integer radicand = 1;

    Rational squared() const { return coefficient * coefficient * Rational(radicand); }
    std::string to_string() const;
    ComplexBall eval(Precision p) const;

    bool operator==(const Surd& o) const {
        return coefficient == o.coefficient && radicand == o.radicand;
    }
};

// one Ramanujan-type series sum T_n (a + b n) z^n = 1/pi
struct SeriesParams {
    int s = 6;
    int level = 1;  // 4 sin^2(pi/s)
    int d = 0;
    Rational z;
    Surd a, b;

    bool alternating() const { return z < 0; }
};

int level_for_s(int s);

}  // namespace pipr

#endif  // PIPROVER_PARAMS_HPP
