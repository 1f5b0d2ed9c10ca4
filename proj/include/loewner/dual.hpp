#pragma once

#include <cmath>

// Forward-mode dual numbers: value + first derivative carried through the
// same arithmetic path as a plain double evaluation, so the value component
// of a dual evaluation is bit-identical to the scalar one.

namespace loewner {

struct Dual {
    double val = 0.0;
    double der = 0.0;

    static Dual variable(double t) { return {t, 1.0}; }
    static Dual constant(double c) { return {c, 0.0}; }
};

inline Dual operator+(Dual a, Dual b) { return {a.val + b.val, a.der + b.der}; }
inline Dual operator-(Dual a, Dual b) { return {a.val - b.val, a.der - b.der}; }
inline Dual operator-(Dual a) { return {-a.val, -a.der}; }

inline Dual operator*(Dual a, Dual b) {
    return {a.val * b.val, a.der * b.val + a.val * b.der};
}

inline Dual operator/(Dual a, Dual b) {
    return {a.val / b.val, (a.der * b.val - a.val * b.der) / (b.val * b.val)};
}

inline Dual exp(Dual a) {
    double e = std::exp(a.val);
    return {e, a.der * e};
}

inline Dual log(Dual a) { return {std::log(a.val), a.der / a.val}; }

inline Dual sqrt(Dual a) {
    double s = std::sqrt(a.val);
    return {s, a.der / (2.0 * s)};
}

// Power with a constant exponent, the only power the grammar admits.
inline Dual pow_const(Dual a, double p) {
    return {std::pow(a.val, p), p * std::pow(a.val, p - 1.0) * a.der};
}

} // namespace loewner
