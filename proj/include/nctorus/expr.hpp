#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nctorus/coefficient.hpp"
#include "nctorus/laurent.hpp"
#include "nctorus/qweyl.hpp"

namespace nctorus {

// Thrown with the byte offset into the expression where parsing stopped.
class ExpressionError : public std::runtime_error {
public:
    ExpressionError(std::size_t position, const std::string& what)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

enum class Generator { t, g, th, gh };

struct Factor {
    Generator kind;
    int index; // 0-based
    std::int64_t exponent;
    std::size_t position; // offset in the source text
};

// coeff * f_1 * f_2 * ..., the factors kept in the order written
struct Term {
    Coefficient coeff;
    std::vector<Factor> factors;
};

/*
 * Grammar (whitespace ignored):
 *   expr   := ['-'] term (('+'|'-') term)*
 *   term   := atom (('*'|'·') atom)*
 *   atom   := number | '(' coeff-sum ')' | zeta | gen ['^' int]
 *   gen    := 't'k | 'g'k | 'th'k | 'gh'k
 *   number := digits ['.' digits] ['/' digits] ['i'] | 'i'
 *   zeta   := ('ζ'|'zeta') n ['^' int]
 * A coeff-sum is a signed sum of products of numbers and zetas, which is
 * what Coefficient::to_string prints.
 */
std::vector<Term> parse_expression(std::string_view text);

// Every factor must be a t; the monomials are commutative exponent vectors.
LaurentPoly parse_laurent(std::string_view text, int g);

// Factors are multiplied left to right in the crossed product of `side`
// (t/g names on the nc side, th/gh on the gerby side).
QPolynomial parse_qpolynomial(std::string_view text, const BilinearCocycle& lambda, const PeriodMatrix& q, CrossedSide side);

} // namespace nctorus
