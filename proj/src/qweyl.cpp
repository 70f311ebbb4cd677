#include "nctorus/qweyl.hpp"

#include <cmath>
#include <stdexcept>

#include "nctorus/laurent.hpp"

namespace nctorus {

PeriodMatrix::PeriodMatrix(Eigen::MatrixXcd q) : q_(std::move(q)) {
    if (q_.rows() != q_.cols()) throw std::invalid_argument("period matrix must be square");
    for (Eigen::Index i = 0; i < q_.size(); ++i)
        if (q_.data()[i] == Complex(0.0)) throw std::invalid_argument("period matrix entries must be nonzero");
}

PeriodMatrix PeriodMatrix::ones(int g) { return PeriodMatrix(Eigen::MatrixXcd::Ones(g, g)); }

bool PeriodMatrix::acts_freely() const {
    for (Eigen::Index j = 0; j < q_.cols(); ++j) {
        bool off = false;
        for (Eigen::Index i = 0; i < q_.rows(); ++i)
            if (std::abs(std::abs(q_(i, j)) - 1.0) > 1e-12) off = true;
        if (!off) return false;
    }
    return true;
}

namespace {

void check_index(int i, int g) {
    if (i < 0 || i >= g) throw std::out_of_range("generator index " + std::to_string(i + 1) + " out of range");
}

void check_dim(int a, int b) {
    if (a != b) throw std::invalid_argument("dimension mismatch");
}

template <class Terms>
void accumulate(Terms& terms, typename Terms::key_type key, const Coefficient& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms.try_emplace(std::move(key), c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

template <class Terms>
double terms_distance(const Terms& x, const Terms& y) {
    double worst = 0.0;
    for (const auto& [k, c] : x) {
        auto it = y.find(k);
        worst = std::max(worst, phasewise_distance(c, it == y.end() ? Coefficient() : it->second));
    }
    for (const auto& [k, c] : y)
        if (!x.count(k)) worst = std::max(worst, phasewise_distance(Coefficient(), c));
    return worst;
}

// prod_{i,j} q_{i,j}^{b_j c_i}: the scalar from moving gamma^b past t^c.
Complex nc_exchange(const Exponent& b, const Exponent& c, const PeriodMatrix& q) {
    Complex s = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] * c[i] != 0) s *= ipow(q(static_cast<int>(i), static_cast<int>(j)), b[j] * c[i]);
    return s;
}

} // namespace

QPolynomial QPolynomial::monomial(const Exponent& a, const Exponent& b, Coefficient c) {
    check_dim(static_cast<int>(a.size()), static_cast<int>(b.size()));
    QPolynomial p(static_cast<int>(a.size()));
    p.add_term(a, b, c);
    return p;
}

QPolynomial QPolynomial::t_monomial(const Exponent& a, Coefficient c) {
    return monomial(a, Exponent(a.size(), 0), std::move(c));
}

bool QPolynomial::is_pure_t() const {
    for (const auto& [k, c] : terms_)
        for (auto x : k.second)
            if (x != 0) return false;
    return true;
}

void QPolynomial::add_term(const Exponent& a, const Exponent& b, const Coefficient& c) {
    check_dim(static_cast<int>(a.size()), g_);
    check_dim(static_cast<int>(b.size()), g_);
    accumulate(terms_, Key{a, b}, c);
}

QPolynomial& QPolynomial::operator+=(const QPolynomial& other) {
    check_dim(other.g_, g_);
    for (const auto& [k, c] : other.terms_) accumulate(terms_, k, c);
    return *this;
}

QPolynomial QPolynomial::operator+(const QPolynomial& other) const {
    QPolynomial r = *this;
    return r += other;
}

QPolynomial QPolynomial::scaled(const Coefficient& c) const {
    QPolynomial r(g_);
    for (const auto& [k, v] : terms_) accumulate(r.terms_, k, v * c);
    return r;
}

double distance(const QPolynomial& x, const QPolynomial& y) { return terms_distance(x.terms_, y.terms_); }

std::string QPolynomial::to_string(CrossedSide side) const {
    if (terms_.empty()) return "0";
    const char* tv = side == CrossedSide::nc ? "t" : "th";
    const char* gv = side == CrossedSide::nc ? "g" : "gh";
    std::string out;
    for (const auto& [k, c] : terms_) {
        std::string m;
        const std::string ta = monomial_string(k.first, tv), gb = monomial_string(k.second, gv);
        if (ta != "1") m = ta;
        if (gb != "1") m += (m.empty() ? "" : "*") + gb;
        if (m.empty()) m = "1";
        std::string term;
        const bool plain = c.terms().size() == 1 && c.terms().front().first.is_zero();
        if (plain) {
            const Complex w = c.terms().front().second;
            const std::string ws = format_complex(w);
            if (m == "1") term = ws;
            else if (ws == "1") term = m;
            else if (ws == "-1") term = "-" + m;
            else if (w.real() != 0.0 && w.imag() != 0.0) term = "(" + ws + ")*" + m;
            else term = ws + "*" + m;
        } else {
            term = "(" + c.to_string() + ")" + (m == "1" ? "" : "·" + m);
        }
        if (out.empty()) out = term;
        else if (term.front() == '-') out += " - " + term.substr(1);
        else out += " + " + term;
    }
    return out;
}

Phase w_phase(const Exponent& a, const Exponent& c, const BilinearCocycle& lambda) {
    check_dim(static_cast<int>(a.size()), lambda.dim());
    check_dim(static_cast<int>(c.size()), lambda.dim());
    const IntMatrix anti = antisymmetrize(lambda);
    __int128 acc = 0;
    for (int i = 0; i < lambda.dim(); ++i)
        for (int j = 0; j < i; ++j) acc += static_cast<__int128>(a[i]) * c[j] * anti(i, j);
    return Phase(static_cast<std::int64_t>(acc % lambda.order()), lambda.order());
}

QPolynomial mul_W(const QPolynomial& f, const QPolynomial& h, const BilinearCocycle& lambda) {
    check_dim(f.dim(), lambda.dim());
    check_dim(h.dim(), lambda.dim());
    if (!f.is_pure_t() || !h.is_pure_t()) throw std::invalid_argument("mul_W expects elements without gamma part");
    QPolynomial r(f.dim());
    const Exponent zero(static_cast<std::size_t>(f.dim()), 0);
    for (const auto& [ka, a] : f.terms())
        for (const auto& [kc, c] : h.terms())
            r.add_term(ka.first + kc.first, zero, a * c * w_phase(ka.first, kc.first, lambda));
    return r;
}

QPolynomial mul_crossed(const QPolynomial& f, const QPolynomial& h, const BilinearCocycle& lambda,
                        const PeriodMatrix& q, CrossedSide side) {
    check_dim(f.dim(), lambda.dim());
    check_dim(h.dim(), lambda.dim());
    check_dim(q.dim(), lambda.dim());
    QPolynomial r(f.dim());
    for (const auto& [k1, x] : f.terms())
        for (const auto& [k2, y] : h.terms()) {
            const auto& [a, b] = k1;
            const auto& [c, d] = k2;
            Coefficient coeff = x * y;
            if (side == CrossedSide::nc) {
                // gamma_j t_i = q_{i,j} t_i gamma_j; t's carry the lambda relation
                coeff *= nc_exchange(b, c, q);
                coeff *= w_phase(a, c, lambda);
            } else {
                // gamma_hat_j t_hat_i = q_{j,i} t_hat_i gamma_hat_j; gamma_hat's carry lambda
                coeff *= nc_exchange(b, c, PeriodMatrix(q.matrix().transpose()));
                coeff *= w_phase(b, d, lambda);
            }
            r.add_term(a + c, b + d, coeff);
        }
    return r;
}

QPolynomial gamma_action(const QPolynomial& f, int j, const PeriodMatrix& q) {
    check_index(j, q.dim());
    check_dim(f.dim(), q.dim());
    if (!f.is_pure_t()) throw std::invalid_argument("gamma_action expects an element of W_lambda");
    QPolynomial r(f.dim());
    for (const auto& [k, c] : f.terms()) {
        Complex s = 1.0;
        for (int i = 0; i < f.dim(); ++i) s *= ipow(q(i, j), -k.first[static_cast<std::size_t>(i)]);
        r.add_term(k.first, k.second, c * s);
    }
    return r;
}

PModuleElement PModuleElement::basis(const Exponent& psi, const Exponent& phi, Coefficient c) {
    check_dim(static_cast<int>(psi.size()), static_cast<int>(phi.size()));
    PModuleElement v(static_cast<int>(psi.size()));
    v.add_term(psi, phi, c);
    return v;
}

void PModuleElement::add_term(const Exponent& psi, const Exponent& phi, const Coefficient& c) {
    check_dim(static_cast<int>(psi.size()), g_);
    check_dim(static_cast<int>(phi.size()), g_);
    accumulate(terms_, Key{psi, phi}, c);
}

PModuleElement PModuleElement::scaled(const Coefficient& c) const {
    PModuleElement r(g_);
    for (const auto& [k, v] : terms_) accumulate(r.terms_, k, v * c);
    return r;
}

double distance(const PModuleElement& x, const PModuleElement& y) { return terms_distance(x.terms_, y.terms_); }

std::string PModuleElement::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string() + ")·" + monomial_string(k.first, "th") + "⊗" + monomial_string(k.second, "t");
    }
    return out;
}

PModuleElement pmodule_act_gamma(const PModuleElement& v, int i, const PeriodMatrix& q) {
    check_index(i, v.dim());
    check_dim(q.dim(), v.dim());
    PModuleElement r(v.dim());
    const Exponent shift = unit_vector(v.dim(), i);
    for (const auto& [k, c] : v.terms()) {
        Complex s = 1.0;
        for (int m = 0; m < v.dim(); ++m) s *= ipow(q(m, i), -k.second[static_cast<std::size_t>(m)]);
        r.add_term(k.first - shift, k.second, c * s);
    }
    return r;
}

PModuleElement pmodule_act_gammahat(const PModuleElement& v, int i, const BilinearCocycle& lambda, const PeriodMatrix& q) {
    check_index(i, v.dim());
    check_dim(q.dim(), v.dim());
    check_dim(lambda.dim(), v.dim());
    PModuleElement r(v.dim());
    const Exponent ti = unit_vector(v.dim(), i);
    for (const auto& [k, c] : v.terms()) {
        Complex s = 1.0;
        for (int m = 0; m < v.dim(); ++m) s *= ipow(q(i, m), k.first[static_cast<std::size_t>(m)]);
        r.add_term(k.first, ti + k.second, c * s * w_phase(ti, k.second, lambda));
    }
    return r;
}

} // namespace nctorus
