#pragma once

#include <map>
#include <string>
#include <vector>

#include "nctorus/cocycle.hpp"
#include "nctorus/coefficient.hpp"
#include "nctorus/exponent.hpp"

namespace nctorus {

/// Finitely supported sum of monomials t^e with exact-phase coefficients.
class LaurentPoly {
public:
    using Terms = std::map<Exponent, Coefficient>;

    explicit LaurentPoly(int g = 0) : g_(g) {}
    LaurentPoly(int g, Terms terms);

    static LaurentPoly constant(int g, Coefficient c);
    static LaurentPoly monomial(const Exponent& e, Coefficient c = Coefficient::one());

    int dim() const noexcept { return g_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    Coefficient coefficient(const Exponent& e) const;

    void add_term(const Exponent& e, const Coefficient& c);
    LaurentPoly& operator+=(const LaurentPoly& other);
    LaurentPoly operator+(const LaurentPoly& other) const;
    LaurentPoly operator-(const LaurentPoly& other) const;
    LaurentPoly scaled(Complex s) const;

    /// Largest phasewise weight difference over the union of supports.
    friend double distance(const LaurentPoly& a, const LaurentPoly& b);
    /// Largest |value(a_t) - value(b_t)|.
    friend double numeric_distance(const LaurentPoly& a, const LaurentPoly& b);

    /// Lexicographic terms joined by " + ", e.g. "(ζ3)·t1*t2".
    std::string to_string() const;

private:
    int g_;
    Terms terms_;
};

/// Coefficient of t is sum_{t1+t2=t} lambda(t1,t2) a_{t1} b_{t2}.
LaurentPoly star_mul(const LaurentPoly& f, const LaurentPoly& h, const BilinearCocycle& lambda);
LaurentPoly star_mul(const LaurentPoly& f, const LaurentPoly& h, const Cochain2& lambda);

/// sum_t |a_t| w^t with w strictly positive.
double majorant_norm(const LaurentPoly& f, const std::vector<double>& w);

/// a_t -> a_t prod_i a_i^{-t_i}
LaurentPoly translate(const LaurentPoly& f, const std::vector<Complex>& a);

/// a_t -> alpha(t) a_t; throws OutOfWindow if the support leaves the window.
LaurentPoly coboundary_transform(const LaurentPoly& f, const CochainTable& alpha);

/// "t1^2*t3^-1"; "1" for the zero exponent.
std::string monomial_string(const Exponent& e, const char* var = "t");

} // namespace nctorus
