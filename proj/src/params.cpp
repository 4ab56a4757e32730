#include "piprover/params.hpp"

#include <stdexcept>

namespace pipr {

std::string Surd::to_string() const {
    std::string s = coefficient.get_str();
    if (radicand != 1) s += "*sqrt(" + radicand.get_str() + ")";
    return s;
}

ComplexBall Surd::eval(Precision p) const {
    ComplexBall root = sqrt(ComplexBall::from_rational(Rational(radicand), p), p);
    return mul_rational(root, coefficient, p);
}

int level_for_s(int s) {
    // 4 sin^2(pi/s) for the s values with rational level
    switch (s) {
        case 6: return 1;
        case 4: return 2;
        case 3: return 3;
        case 2: return 4;
        default: throw std::invalid_argument("level_for_s: unsupported s=" + std::to_string(s));
    }
}

}  // namespace pipr
