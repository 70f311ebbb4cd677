#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nctorus/phase.hpp"

namespace nctorus {

using Complex = std::complex<double>;

/**
 * A formal sum  sum_p c_p * zeta^p  of exact roots of unity with complex
 * double weights.
 *
 * Cocycle phases multiply exactly (they only ever shift the keys), while
 * the analytic part (input coefficients, period-matrix powers) stays in the
 * weights. Two coefficients built along different association orders
 * carry identical keys whenever the underlying cocycle identity holds, so
 * they can be compared phase by phase.
 */
class Coefficient {
public:
    using Term = std::pair<Phase, Complex>;

    Coefficient() = default;
    Coefficient(Complex scalar);
    Coefficient(Phase phase, Complex scalar = 1.0);

    static Coefficient one() { return Coefficient(Complex(1.0)); }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Numeric value in C.
    Complex value() const;

    Coefficient& operator+=(const Coefficient& other);
    Coefficient& operator-=(const Coefficient& other);
    Coefficient operator-() const;
    Coefficient& operator*=(Complex s);
    /// Multiplies by zeta^p (shifts every key).
    Coefficient& operator*=(const Phase& p);

    friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
    friend Coefficient operator*(Coefficient a, Complex s) { return a *= s; }
    friend Coefficient operator*(Coefficient a, const Phase& p) { return a *= p; }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);

    /// Largest weight difference over the union of phase keys.
    friend double phasewise_distance(const Coefficient& a, const Coefficient& b);

    /// Exact when the weights are bitwise equal.
    friend bool operator==(const Coefficient&, const Coefficient&) = default;

    std::string to_string() const;

private:
    void add_term(const Phase& p, Complex c);
    std::vector<Term> terms_; // sorted by phase, no zero weights
};

/// z^k by repeated squaring; k may be negative.
Complex ipow(Complex z, std::int64_t k);

/// Compact rendering of a double-valued complex number: "2", "-1/2"-free decimal, "1+2i".
std::string format_complex(Complex c);

} // namespace nctorus
