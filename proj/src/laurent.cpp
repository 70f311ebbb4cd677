#include "nctorus/laurent.hpp"

#include <cmath>
#include <stdexcept>

namespace nctorus {

LaurentPoly::LaurentPoly(int g, Terms terms) : g_(g) {
    for (auto& [e, c] : terms) add_term(e, c);
}

LaurentPoly LaurentPoly::constant(int g, Coefficient c) {
    LaurentPoly p(g);
    p.add_term(Exponent(static_cast<std::size_t>(g), 0), c);
    return p;
}

LaurentPoly LaurentPoly::monomial(const Exponent& e, Coefficient c) {
    LaurentPoly p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
}

Coefficient LaurentPoly::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coefficient() : it->second;
}

void LaurentPoly::add_term(const Exponent& e, const Coefficient& c) {
    if (static_cast<int>(e.size()) != g_) throw std::invalid_argument("monomial dimension mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
    if (other.g_ != g_) throw std::invalid_argument("polynomial dimension mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& other) const {
    LaurentPoly r = *this;
    return r += other;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& other) const { return *this + other.scaled(-1.0); }

LaurentPoly LaurentPoly::scaled(Complex s) const {
    LaurentPoly r(g_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
}

double distance(const LaurentPoly& a, const LaurentPoly& b) {
    double worst = 0.0;
    for (const auto& [e, c] : a.terms_) worst = std::max(worst, phasewise_distance(c, b.coefficient(e)));
    for (const auto& [e, c] : b.terms_)
        if (!a.terms_.count(e)) worst = std::max(worst, phasewise_distance(Coefficient(), c));
    return worst;
}

double numeric_distance(const LaurentPoly& a, const LaurentPoly& b) {
    double worst = 0.0;
    for (const auto& [e, c] : a.terms_) worst = std::max(worst, std::abs(c.value() - b.coefficient(e).value()));
    for (const auto& [e, c] : b.terms_)
        if (!a.terms_.count(e)) worst = std::max(worst, std::abs(c.value()));
    return worst;
}

std::string monomial_string(const Exponent& e, const char* var) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += var + std::to_string(i + 1);
        if (e[i] != 1) s += "^" + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

namespace {

// Renders c * m so that the coefficient is visually separated from the monomial.
std::string term_string(const Coefficient& c, const std::string& m) {
    const bool unit = m == "1";
    if (c.terms().size() == 1) {
        const auto& [p, w] = c.terms().front();
        const std::string ws = format_complex(w);
        if (p.is_zero()) {
            if (unit) return ws;
            if (ws == "1") return m;
            if (ws == "-1") return "-" + m;
            if (w.real() != 0.0 && w.imag() != 0.0) return "(" + ws + ")*" + m;
            return ws + "*" + m;
        }
    }
    return unit ? "(" + c.to_string() + ")" : "(" + c.to_string() + ")·" + m;
}

} // namespace

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        const std::string t = term_string(c, monomial_string(e));
        if (out.empty()) out = t;
        else if (t.front() == '-') out += " - " + t.substr(1);
        else out += " + " + t;
    }
    return out;
}

LaurentPoly star_mul(const LaurentPoly& f, const LaurentPoly& h, const Cochain2& lambda) {
    if (f.dim() != h.dim() || f.dim() != lambda.dim()) throw std::invalid_argument("star product dimension mismatch");
    LaurentPoly r(f.dim());
    for (const auto& [s, a] : f.terms())
        for (const auto& [t, b] : h.terms()) r.add_term(s + t, a * b * lambda(s, t));
    return r;
}

LaurentPoly star_mul(const LaurentPoly& f, const LaurentPoly& h, const BilinearCocycle& lambda) {
    return star_mul(f, h, Cochain2(lambda));
}

double majorant_norm(const LaurentPoly& f, const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != f.dim()) throw std::invalid_argument("weight dimension mismatch");
    for (double x : w)
        if (!(x > 0.0)) throw std::invalid_argument("majorant weights must be strictly positive");
    double sum = 0.0;
    for (const auto& [e, c] : f.terms()) {
        double m = std::abs(c.value());
        for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(w[i], static_cast<double>(e[i]));
        sum += m;
    }
    return sum;
}

LaurentPoly translate(const LaurentPoly& f, const std::vector<Complex>& a) {
    if (static_cast<int>(a.size()) != f.dim()) throw std::invalid_argument("translation dimension mismatch");
    for (const auto& x : a)
        if (x == Complex(0.0)) throw std::invalid_argument("translation by a zero component");
    LaurentPoly r(f.dim());
    for (const auto& [e, c] : f.terms()) {
        Complex s = 1.0;
        for (std::size_t i = 0; i < e.size(); ++i) s *= ipow(a[i], -e[i]);
        r.add_term(e, c * s);
    }
    return r;
}

LaurentPoly coboundary_transform(const LaurentPoly& f, const CochainTable& alpha) {
    if (alpha.dim() != f.dim()) throw std::invalid_argument("cochain dimension mismatch");
    LaurentPoly r(f.dim());
    for (const auto& [e, c] : f.terms()) r.add_term(e, c * alpha(e));
    return r;
}

} // namespace nctorus
