#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nctorus {

/// A point of Z^g: exponent vector of a Laurent monomial.
using Exponent = std::vector<std::int64_t>;

Exponent operator+(const Exponent& a, const Exponent& b);
Exponent operator-(const Exponent& a, const Exponent& b);
Exponent operator-(const Exponent& a);
Exponent unit_vector(int g, int i);
std::string to_string(const Exponent& e);

/// Closed integer box prod_i [lo_i, hi_i] in Z^g.
class Box {
public:
    Box() = default;
    Box(Exponent lo, Exponent hi);
    /// [-r, r]^g
    static Box cube(int g, std::int64_t r);

    int dim() const noexcept { return static_cast<int>(lo_.size()); }
    const Exponent& lo() const noexcept { return lo_; }
    const Exponent& hi() const noexcept { return hi_; }

    bool contains(const Exponent& t) const;
    std::size_t size() const;
    /// All points in lexicographic order.
    std::vector<Exponent> points() const;

private:
    Exponent lo_, hi_;
};

} // namespace nctorus
