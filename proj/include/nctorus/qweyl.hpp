#pragma once

#include <map>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "nctorus/cocycle.hpp"
#include "nctorus/coefficient.hpp"
#include "nctorus/exponent.hpp"

namespace nctorus {

/// Multiplicative period matrix; column j holds q_{1,j}, ..., q_{g,j}.
class PeriodMatrix {
public:
    explicit PeriodMatrix(Eigen::MatrixXcd q);
    static PeriodMatrix ones(int g);

    int dim() const noexcept { return static_cast<int>(q_.rows()); }
    Complex operator()(int i, int j) const { return q_(i, j); }
    const Eigen::MatrixXcd& matrix() const noexcept { return q_; }
    /// Every column has an entry off the unit circle, so Gamma acts freely.
    bool acts_freely() const;

private:
    Eigen::MatrixXcd q_;
};

/// Which crossed product a QPolynomial lives in.
enum class CrossedSide { nc, gerby };

/**
 * Element of a q-Weyl algebra or one of its crossed products, stored in
 * normal form t^a gamma^b (t before gamma). For the gerby algebra the pair
 * is read as (t_hat exponent, gamma_hat exponent).
 */
class QPolynomial {
public:
    using Key = std::pair<Exponent, Exponent>;
    using Terms = std::map<Key, Coefficient>;

    explicit QPolynomial(int g = 0) : g_(g) {}
    static QPolynomial monomial(const Exponent& a, const Exponent& b, Coefficient c = Coefficient::one());
    static QPolynomial t_monomial(const Exponent& a, Coefficient c = Coefficient::one());

    int dim() const noexcept { return g_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_pure_t() const;

    void add_term(const Exponent& a, const Exponent& b, const Coefficient& c);
    QPolynomial& operator+=(const QPolynomial& other);
    QPolynomial operator+(const QPolynomial& other) const;
    QPolynomial scaled(const Coefficient& c) const;

    friend double distance(const QPolynomial& x, const QPolynomial& y);
    /// Exact comparison of the phase keys and weights.
    friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

    /// Generator names t/g for the nc side and th/gh for the gerby side.
    std::string to_string(CrossedSide side = CrossedSide::nc) const;

private:
    int g_;
    Terms terms_;
};

/// The relation phase of t^a . t^c = phase * t^{a+c}: sum_{i>j} a_i c_j A_ij / N
/// where A is the antisymmetrization of lambda.
Phase w_phase(const Exponent& a, const Exponent& c, const BilinearCocycle& lambda);

QPolynomial mul_W(const QPolynomial& f, const QPolynomial& h, const BilinearCocycle& lambda);
QPolynomial mul_crossed(const QPolynomial& f, const QPolynomial& h, const BilinearCocycle& lambda,
                        const PeriodMatrix& q, CrossedSide side);

/// Right action t^a . gamma_j = prod_i q_{i,j}^{-a_i} t^a.
QPolynomial gamma_action(const QPolynomial& f, int j, const PeriodMatrix& q);

/// Element of P_lambda = C[Gamma_hat] (x) W_lambda: keys (t_hat exponent, t exponent).
class PModuleElement {
public:
    using Key = std::pair<Exponent, Exponent>;
    using Terms = std::map<Key, Coefficient>;

    explicit PModuleElement(int g = 0) : g_(g) {}
    static PModuleElement basis(const Exponent& psi, const Exponent& phi, Coefficient c = Coefficient::one());

    int dim() const noexcept { return g_; }
    const Terms& terms() const noexcept { return terms_; }
    void add_term(const Exponent& psi, const Exponent& phi, const Coefficient& c);
    PModuleElement scaled(const Coefficient& c) const;

    friend double distance(const PModuleElement& x, const PModuleElement& y);
    friend bool operator==(const PModuleElement&, const PModuleElement&) = default;
    std::string to_string() const;

private:
    int g_;
    Terms terms_;
};

/// (psi (x) phi) . gamma_i = psi t_hat_i^{-1} (x) phi(t_1 q_{1,i}^{-1}, ..., t_g q_{g,i}^{-1})
PModuleElement pmodule_act_gamma(const PModuleElement& v, int i, const PeriodMatrix& q);
/// gamma_hat_i . (psi (x) phi) = psi(t_hat_1 q_{i,1}, ...) (x) t_i phi
PModuleElement pmodule_act_gammahat(const PModuleElement& v, int i, const BilinearCocycle& lambda, const PeriodMatrix& q);

} // namespace nctorus
