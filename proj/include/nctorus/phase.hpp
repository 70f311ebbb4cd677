#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace nctorus {

/**
 * An exact element of Q/Z, standing for the root of unity exp(2*pi*i*q).
 *
 * The representative is kept reduced with 0 <= num < den. Group operations
 * are exact; the complex value is only produced by embed().
 */
class Phase {
public:
    constexpr Phase() noexcept = default;
    Phase(std::int64_t num, std::int64_t den);

    /// zeta_n^k
    static Phase root(std::int64_t k, std::int64_t n) { return Phase(k, n); }
    static Phase zero() { return Phase(); }

    /// Parses "p/q" or "p".
    static Phase parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    /// Multiplicative order of the root of unity.
    std::int64_t order() const noexcept { return den_; }

    std::complex<double> embed() const;

    Phase operator+(const Phase& other) const;
    Phase operator-(const Phase& other) const;
    Phase operator-() const;
    Phase& operator+=(const Phase& other) { return *this = *this + other; }
    Phase& operator-=(const Phase& other) { return *this = *this - other; }
    Phase operator*(std::int64_t k) const;

    friend bool operator==(const Phase&, const Phase&) = default;
    friend auto operator<=>(const Phase& a, const Phase& b) noexcept {
        // numeric order of the representative in [0,1)
        const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        if (lhs != rhs) return lhs <=> rhs;
        return a.den_ <=> b.den_;
    }

    /// Lossless "p/q" form, used for serialization.
    std::string to_string() const;
    /// Human-readable root-of-unity notation: "1", "ζ3", "ζ4^3".
    std::string pretty() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Phase& p);

inline Phase operator*(std::int64_t k, const Phase& p) { return p * k; }

} // namespace nctorus

template <>
struct std::hash<nctorus::Phase> {
    std::size_t operator()(const nctorus::Phase& p) const noexcept {
        return std::hash<std::int64_t>{}(p.num()) * 1000003u ^ std::hash<std::int64_t>{}(p.den());
    }
};
