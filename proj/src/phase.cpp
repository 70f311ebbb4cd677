#include "nctorus/phase.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace nctorus {

namespace {

std::int64_t floor_mod(__int128 a, std::int64_t n) {
    __int128 r = a % n;
    if (r < 0) r += n;
    return static_cast<std::int64_t>(r);
}

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("malformed phase '" + std::string(s) + "'");
    return v;
}

} // namespace

Phase::Phase(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("phase with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t r = floor_mod(num, den);
    const std::int64_t g = std::gcd(r, den);
    num_ = r / g;
    den_ = den / g;
}

Phase Phase::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Phase(parse_int(text), 1);
    return Phase(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::complex<double> Phase::embed() const {
    // exact values on the quarter lattice keep small cases free of rounding noise
    switch (4 * num_ % den_ == 0 ? 4 * num_ / den_ : -1) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    case 3: return {0.0, -1.0};
    default: break;
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
    return {std::cos(angle), std::sin(angle)};
}

Phase Phase::operator+(const Phase& other) const {
    const std::int64_t g = std::gcd(den_, other.den_);
    const std::int64_t l = den_ / g * other.den_;
    const __int128 n = static_cast<__int128>(num_) * (l / den_) + static_cast<__int128>(other.num_) * (l / other.den_);
    return Phase(floor_mod(n, l), l);
}

Phase Phase::operator-() const { return Phase(-num_, den_); }

Phase Phase::operator-(const Phase& other) const { return *this + (-other); }

Phase Phase::operator*(std::int64_t k) const {
    return Phase(floor_mod(static_cast<__int128>(num_) * k, den_), den_);
}

std::string Phase::to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::string Phase::pretty() const {
    if (num_ == 0) return "1";
    std::string s = "ζ" + std::to_string(den_);
    if (num_ != 1) s += "^" + std::to_string(num_);
    return s;
}

std::ostream& operator<<(std::ostream& os, const Phase& p) { return os << p.to_string(); }

} // namespace nctorus
