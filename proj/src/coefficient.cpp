#include "nctorus/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace nctorus {

Coefficient::Coefficient(Complex scalar) {
    if (scalar != Complex(0.0)) terms_.emplace_back(Phase(), scalar);
}

Coefficient::Coefficient(Phase phase, Complex scalar) {
    if (scalar != Complex(0.0)) terms_.emplace_back(phase, scalar);
}

Complex Coefficient::value() const {
    Complex sum = 0.0;
    for (const auto& [p, c] : terms_) sum += c * p.embed();
    return sum;
}

void Coefficient::add_term(const Phase& p, Complex c) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                               [](const Term& t, const Phase& key) { return t.first < key; });
    if (it != terms_.end() && it->first == p) {
        it->second += c;
        if (it->second == Complex(0.0)) terms_.erase(it);
    } else if (c != Complex(0.0)) {
        terms_.insert(it, {p, c});
    }
}

Coefficient& Coefficient::operator+=(const Coefficient& other) {
    for (const auto& [p, c] : other.terms_) add_term(p, c);
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& other) {
    for (const auto& [p, c] : other.terms_) add_term(p, -c);
    return *this;
}

Coefficient Coefficient::operator-() const {
    Coefficient r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

Coefficient& Coefficient::operator*=(Complex s) {
    if (s == Complex(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= s;
    return *this;
}

Coefficient& Coefficient::operator*=(const Phase& p) {
    if (p.is_zero()) return *this;
    for (auto& t : terms_) t.first += p;
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    Coefficient r;
    for (const auto& [pa, ca] : a.terms_)
        for (const auto& [pb, cb] : b.terms_) r.add_term(pa + pb, ca * cb);
    return r;
}

double phasewise_distance(const Coefficient& a, const Coefficient& b) {
    std::map<Phase, Complex> diff;
    for (const auto& [p, c] : a.terms_) diff[p] += c;
    for (const auto& [p, c] : b.terms_) diff[p] -= c;
    double worst = 0.0;
    for (const auto& [p, c] : diff) worst = std::max(worst, std::abs(c));
    return worst;
}

Complex ipow(Complex z, std::int64_t k) {
    if (k < 0) {
        z = 1.0 / z;
        k = -k;
    }
    Complex r = 1.0;
    while (k) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

std::string format_complex(Complex c) {
    auto fmt = [](double x) {
        if (x == 0.0) x = 0.0; // drop negative zero
        const double r = std::round(x);
        char buf[40];
        if (std::abs(x - r) < 1e-12 && std::abs(r) < 1e15)
            std::snprintf(buf, sizeof buf, "%.0f", r);
        else
            std::snprintf(buf, sizeof buf, "%.12g", x);
        return std::string(buf);
    };
    const double re = std::abs(c.real()) < 1e-14 ? 0.0 : c.real();
    const double im = std::abs(c.imag()) < 1e-14 ? 0.0 : c.imag();
    if (im == 0.0) return fmt(re);
    std::string ims = std::abs(im - 1.0) < 1e-12 ? "" : std::abs(im + 1.0) < 1e-12 ? "-" : fmt(im);
    if (re == 0.0) return ims + "i";
    if (!ims.empty() && ims.front() == '-') return fmt(re) + ims + "i";
    return fmt(re) + "+" + ims + "i";
}

std::string Coefficient::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& [p, c] = terms_[i];
        std::string s;
        const std::string cs = format_complex(c);
        if (p.is_zero())
            s = cs;
        else if (cs == "1")
            s = p.pretty();
        else if (cs == "-1")
            s = "-" + p.pretty();
        else if (c.imag() != 0.0 && c.real() != 0.0)
            s = "(" + cs + ")·" + p.pretty();
        else
            s = cs + "·" + p.pretty();
        if (i > 0) out += (s.front() == '-') ? " - " + s.substr(1) : " + " + s;
        else out += s;
    }
    return out;
}

} // namespace nctorus
