#include "nctorus/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nctorus/cocycle.hpp"
#include "nctorus/equivariant.hpp"
#include "nctorus/finite_fm.hpp"
#include "nctorus/io.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/laurent.hpp"
#include "nctorus/qweyl.hpp"

namespace nctorus {

namespace {

constexpr double kTol = 1e-9;

// Accumulates cases into a PropertyResult; keeps the first counterexample.
class Property {
public:
    explicit Property(std::string name) { r_.name = std::move(name); }

    template <class Witness>
    void expect(bool pass, Witness&& witness) {
        ++r_.cases;
        if (!pass && r_.ok) {
            r_.ok = false;
            r_.witness = witness();
        }
    }

    template <class Witness>
    void within(double deviation, double tol, Witness&& witness) {
        if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
        r_.max_deviation = std::max(r_.max_deviation, deviation);
        expect(deviation <= tol, std::forward<Witness>(witness));
    }

    PropertyResult& result() { return r_; }
    PropertyResult take() { return std::move(r_); }

private:
    PropertyResult r_;
};

std::string str(const Exponent& e) { return to_string(e); }

template <class T>
T pick(std::mt19937_64& rng, T lo, T hi) {
    return std::uniform_int_distribution<T>(lo, hi)(rng);
}

Complex random_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng);
    const double im = u(rng);
    return {re, im};
}

Exponent random_exponent(int g, std::int64_t r, std::mt19937_64& rng) {
    Exponent e(static_cast<std::size_t>(g));
    for (auto& x : e) x = pick<std::int64_t>(rng, -r, r);
    return e;
}

BilinearCocycle random_bilinear(int g, std::int64_t n, std::mt19937_64& rng) {
    IntMatrix m(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) m(i, j) = pick<std::int64_t>(rng, 0, n - 1);
    return BilinearCocycle(g, n, m);
}

LaurentPoly random_laurent(int g, std::size_t max_terms, std::int64_t r, std::mt19937_64& rng) {
    LaurentPoly f(g);
    const auto n = pick<std::size_t>(rng, 1, max_terms);
    for (std::size_t i = 0; i < n; ++i) f.add_term(random_exponent(g, r, rng), Coefficient(random_complex(rng)));
    return f;
}

PeriodMatrix random_period_matrix(int g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> modulus(0.5, 2.0), angle(0.0, 2.0 * M_PI);
    Eigen::MatrixXcd q(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const double m = modulus(rng);
            q(i, j) = std::polar(m, angle(rng));
        }
    return PeriodMatrix(q);
}

// A normalized cocycle: a random bilinear form plus the coboundary of a random alpha with alpha(0) = 0.
GroupCochain random_group_cocycle(const FiniteAbelianGroup& grp, std::mt19937_64& rng) {
    const auto r = static_cast<std::size_t>(grp.rank());
    std::vector<std::vector<Phase>> m(r, std::vector<Phase>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const std::int64_t d = std::gcd(grp.factors()[i], grp.factors()[j]);
            m[i][j] = Phase(pick<std::int64_t>(rng, 0, d - 1), d);
        }
    std::vector<Phase> alpha(grp.order());
    for (std::size_t a = 1; a < alpha.size(); ++a) alpha[a] = Phase(pick<std::int64_t>(rng, 0, 23), 24);
    return GroupCochain::bilinear(grp, m).coboundary(alpha);
}

std::string element_string(const FiniteAbelianGroup& grp, std::size_t idx) { return to_string(grp.element(idx)); }

// ---------------------------------------------------------------- cocycle

SuiteReport cocycle_suite(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0x636f6379636c65ULL);
    const bool full = opt.grid == Grid::full;
    SuiteReport rep{"cocycle", {}};

    Property laws("phase_group_laws"), embed("phase_embedding_homomorphism");
    for (int i = 0; i < (full ? 2000 : 300); ++i) {
        const Phase a(pick<std::int64_t>(rng, -50, 50), pick<std::int64_t>(rng, 1, 12));
        const Phase b(pick<std::int64_t>(rng, -50, 50), pick<std::int64_t>(rng, 1, 12));
        const Phase c(pick<std::int64_t>(rng, -50, 50), pick<std::int64_t>(rng, 1, 12));
        laws.expect((a + b) + c == a + (b + c) && a + Phase::zero() == a && (a + (-a)).is_zero() && a + b == b + a,
                    [&] { return a.to_string() + ", " + b.to_string() + ", " + c.to_string(); });
        embed.within(std::abs((a + b).embed() - a.embed() * b.embed()), 1e-14, [&] { return a.to_string() + ", " + b.to_string(); });
    }
    rep.properties.push_back(laws.take());
    rep.properties.push_back(embed.take());

    Property oracle("bilinear_evaluation_oracle");
    for (int i = 0; i < (full ? 500 : 100); ++i) {
        const auto lam = random_bilinear(3, 6, rng);
        const Exponent s = random_exponent(3, 3, rng), t = random_exponent(3, 3, rng);
        Phase direct;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) direct += Phase(s[a] * lam.matrix()(a, b) * t[b], 6);
        oracle.expect(lam(s, t) == direct, [&] { return str(s) + ", " + str(t); });
    }
    rep.properties.push_back(oracle.take());

    Property bil("bilinear_is_cocycle");
    for (int i = 0; i < (full ? 400 : 60); ++i) {
        const int g = pick(rng, 1, full ? 4 : 3);
        const std::int64_t n = pick<std::int64_t>(rng, 1, 12);
        const auto lam = random_bilinear(g, n, rng);
        const auto sym = check_cocycle(lam);
        bil.expect(sym.ok, [&] { return "symbolic check failed for M = " + to_string(lam.matrix()); });
        for (int k = 0; k < 20; ++k) {
            const Exponent a = random_exponent(g, 3, rng), b = random_exponent(g, 3, rng), c = random_exponent(g, 3, rng);
            const Phase d = lam(b, c) - lam(a + b, c) + lam(a, b + c) - lam(a, b);
            bil.expect(d.is_zero(), [&] { return str(a) + ", " + str(b) + ", " + str(c); });
        }
    }
    rep.properties.push_back(bil.take());

    Property cob("coboundary_is_cocycle");
    for (int i = 0; i < (full ? 40 : 8); ++i) {
        const int g = pick(rng, 1, 2);
        const auto lam = random_bilinear(g, pick<std::int64_t>(rng, 2, 12), rng);
        const auto alpha = CochainTable::tabulate(Box::cube(g, 3), [&](const Exponent&) { return Phase(pick<std::int64_t>(rng, 0, 59), 60); });
        const auto check = check_cocycle(coboundary(alpha, Cochain2(lam)), Box::cube(g, 1));
        cob.expect(check.ok, [&] {
            const auto& w = *check.witness;
            return str(w[0]) + ", " + str(w[1]) + ", " + str(w[2]);
        });
    }
    rep.properties.push_back(cob.take());

    Property bound("bounding_cochain_coboundary");
    for (int i = 0; i < (full ? 200 : 40); ++i) {
        const int g = pick(rng, 1, 3);
        const std::int64_t n = pick<std::int64_t>(rng, 1, 6);
        IntMatrix s(g, g);
        for (int a = 0; a < g; ++a)
            for (int b = a; b < g; ++b) s(a, b) = s(b, a) = pick<std::int64_t>(rng, -5, 5);
        const auto alpha = bounding_cochain(s, n, Box::cube(g, 2));
        const auto lp = coboundary(alpha, Cochain2(BilinearCocycle::trivial(g, n)));
        for (const auto& x : Box::cube(g, 1).points())
            for (const auto& y : Box::cube(g, 1).points()) {
                std::int64_t q = 0;
                for (int a = 0; a < g; ++a)
                    for (int b = 0; b < g; ++b) q += x[a] * s(a, b) * y[b];
                bound.expect(lp(x, y) == Phase(-q, n) && lp(x, y) == lp(y, x), [&] { return "S = " + to_string(s) + " at " + str(x) + ", " + str(y); });
            }
    }
    rep.properties.push_back(bound.take());

    Property bad("non_cocycle_detected");
    for (int g = 1; g <= 3; ++g) {
        const Cochain2 c(g, [](const Exponent& s, const Exponent& t) { return Phase(s[0] * s[0] * t[0], 3); });
        const auto check = check_cocycle(c, Box::cube(g, 1));
        bad.expect(!check.ok && check.witness.has_value(), [&] { return "zeta_3^{s1^2 t1} passed in dimension " + std::to_string(g); });
    }
    rep.properties.push_back(bad.take());
    return rep;
}

// ---------------------------------------------------------------- qweyl

QPolynomial random_qpoly(int g, bool with_gamma, std::mt19937_64& rng) {
    QPolynomial f(g);
    const Exponent zero(static_cast<std::size_t>(g), 0);
    const int n = pick(rng, 1, 3);
    for (int i = 0; i < n; ++i)
        f.add_term(random_exponent(g, 2, rng), with_gamma ? random_exponent(g, 2, rng) : zero, Coefficient(random_complex(rng)));
    return f;
}

double scale_of(const QPolynomial& f) {
    double s = 1.0;
    for (const auto& [k, c] : f.terms()) s = std::max(s, std::abs(c.value()));
    return s;
}

// Monomial products must agree in the exact phase key and, relatively, in the scalar.
bool same_monomial(const QPolynomial& x, const QPolynomial& y, double& dev) {
    dev = 0.0;
    if (x.terms().size() != y.terms().size()) {
        dev = std::numeric_limits<double>::infinity();
        return false;
    }
    auto it = y.terms().begin();
    for (const auto& [k, c] : x.terms()) {
        if (k != it->first || c.terms().size() != it->second.terms().size()) {
            dev = std::numeric_limits<double>::infinity();
            return false;
        }
        for (std::size_t i = 0; i < c.terms().size(); ++i) {
            const auto& [p1, w1] = c.terms()[i];
            const auto& [p2, w2] = it->second.terms()[i];
            if (!(p1 == p2)) {
                dev = std::numeric_limits<double>::infinity();
                return false;
            }
            dev = std::max(dev, std::abs(w1 - w2) / std::max(1.0, std::abs(w1)));
        }
        ++it;
    }
    return dev <= kTol;
}

SuiteReport qweyl_suite(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0x7177657976ULL);
    const bool full = opt.grid == Grid::full;
    SuiteReport rep{"qweyl", {}};

    Property assoc("W_associativity");
    for (int i = 0; i < (full ? 300 : 60); ++i) {
        const int g = pick(rng, 1, 3);
        const auto lam = random_bilinear(g, pick<std::int64_t>(rng, 2, 12), rng);
        const auto f = random_qpoly(g, false, rng), h = random_qpoly(g, false, rng), k = random_qpoly(g, false, rng);
        const auto lhs = mul_W(mul_W(f, h, lam), k, lam), rhs = mul_W(f, mul_W(h, k, lam), lam);
        assoc.within(distance(lhs, rhs) / (scale_of(f) * scale_of(h) * scale_of(k)), kTol, [&] { return f.to_string() + " | " + h.to_string() + " | " + k.to_string(); });
    }
    rep.properties.push_back(assoc.take());

    for (const auto side : {CrossedSide::nc, CrossedSide::gerby}) {
        Property conf(side == CrossedSide::nc ? "crossed_confluence_nc" : "crossed_confluence_gerby");
        const auto check_triple = [&](const QPolynomial& a, const QPolynomial& b, const QPolynomial& c, const BilinearCocycle& lam, const PeriodMatrix& q) {
            const auto lhs = mul_crossed(mul_crossed(a, b, lam, q, side), c, lam, q, side);
            const auto rhs = mul_crossed(a, mul_crossed(b, c, lam, q, side), lam, q, side);
            double dev = 0.0;
            const bool same = same_monomial(lhs, rhs, dev);
            conf.within(same ? dev : std::numeric_limits<double>::infinity(), kTol,
                        [&] { return a.to_string(side) + " | " + b.to_string(side) + " | " + c.to_string(side); });
        };
        // g = 1: every triple of monomials in the [-2,2] window
        {
            const auto lam = random_bilinear(1, 6, rng);
            const auto q = random_period_matrix(1, rng);
            std::vector<QPolynomial> monos;
            for (const auto& p : Box::cube(2, 2).points()) monos.push_back(QPolynomial::monomial({p[0]}, {p[1]}));
            for (const auto& a : monos)
                for (const auto& b : monos)
                    for (const auto& c : monos) check_triple(a, b, c, lam, q);
        }
        // g = 2: exhaustive on [-1,1] (full grid), random on [-2,2]
        {
            const auto lam = random_bilinear(2, 12, rng);
            const auto q = random_period_matrix(2, rng);
            if (full) {
                std::vector<QPolynomial> monos;
                for (const auto& p : Box::cube(4, 1).points()) monos.push_back(QPolynomial::monomial({p[0], p[1]}, {p[2], p[3]}));
                for (const auto& a : monos)
                    for (const auto& b : monos)
                        for (const auto& c : monos) check_triple(a, b, c, lam, q);
            }
            for (int i = 0; i < (full ? 5000 : 1000); ++i) {
                const auto a = QPolynomial::monomial(random_exponent(2, 2, rng), random_exponent(2, 2, rng));
                const auto b = QPolynomial::monomial(random_exponent(2, 2, rng), random_exponent(2, 2, rng));
                const auto c = QPolynomial::monomial(random_exponent(2, 2, rng), random_exponent(2, 2, rng));
                check_triple(a, b, c, lam, q);
            }
        }
        // g = 3 and sums of monomials, random
        for (int i = 0; i < (full ? 300 : 60); ++i) {
            const int g = pick(rng, 1, 3);
            const auto lam = random_bilinear(g, pick<std::int64_t>(rng, 2, 12), rng);
            const auto q = random_period_matrix(g, rng);
            const auto a = random_qpoly(g, true, rng), b = random_qpoly(g, true, rng), c = random_qpoly(g, true, rng);
            const auto lhs = mul_crossed(mul_crossed(a, b, lam, q, side), c, lam, q, side);
            const auto rhs = mul_crossed(a, mul_crossed(b, c, lam, q, side), lam, q, side);
            conf.within(distance(lhs, rhs) / std::max({1.0, scale_of(lhs), scale_of(rhs)}), kTol,
                        [&] { return a.to_string(side) + " | " + b.to_string(side) + " | " + c.to_string(side); });
        }
        rep.properties.push_back(conf.take());
    }

    Property gam("gamma_action_automorphism");
    for (int i = 0; i < (full ? 300 : 60); ++i) {
        const int g = pick(rng, 1, 3);
        const auto lam = random_bilinear(g, pick<std::int64_t>(rng, 2, 12), rng);
        const auto q = random_period_matrix(g, rng);
        const auto f = random_qpoly(g, false, rng), h = random_qpoly(g, false, rng);
        const int j = pick(rng, 0, g - 1), k = pick(rng, 0, g - 1);
        const auto lhs = gamma_action(mul_W(f, h, lam), j, q);
        const auto rhs = mul_W(gamma_action(f, j, q), gamma_action(h, j, q), lam);
        const double s = std::max({1.0, scale_of(lhs), scale_of(rhs)});
        gam.within(distance(lhs, rhs) / s, kTol, [&] { return f.to_string() + " | " + h.to_string(); });
        const auto jk = gamma_action(gamma_action(f, j, q), k, q), kj = gamma_action(gamma_action(f, k, q), j, q);
        gam.within(distance(jk, kj) / std::max({1.0, scale_of(jk)}), kTol, [&] { return "commutation on " + f.to_string(); });
    }
    rep.properties.push_back(gam.take());

    Property rel("pmodule_gammahat_relation"), bim("pmodule_bimodule");
    for (int trial = 0; trial < (full ? 4 : 2); ++trial) {
        const int g = 2;
        const auto lam = random_bilinear(g, pick<std::int64_t>(rng, 2, 12), rng);
        const auto q = random_period_matrix(g, rng);
        const IntMatrix anti = antisymmetrize(lam);
        const std::int64_t r = full ? 2 : 1;
        for (const auto& p : Box::cube(2 * g, r).points()) {
            const Exponent psi{p[0], p[1]}, phi{p[2], p[3]};
            const auto v = PModuleElement::basis(psi, phi);
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) {
                    if (i == j) continue;
                    const auto ij = pmodule_act_gammahat(pmodule_act_gammahat(v, j, lam, q), i, lam, q);
                    const auto ji = pmodule_act_gammahat(pmodule_act_gammahat(v, i, lam, q), j, lam, q);
                    const auto expected = ji.scaled(Coefficient(Phase(anti(i, j), lam.order())));
                    rel.expect(ij == expected || distance(ij, expected) <= kTol * std::max(1.0, std::abs(ij.terms().begin()->second.value())),
                               [&] { return "gh" + std::to_string(i + 1) + " gh" + std::to_string(j + 1) + " on " + v.to_string(); });
                    const auto left_right = pmodule_act_gamma(pmodule_act_gammahat(v, i, lam, q), j, q);
                    const auto right_left = pmodule_act_gammahat(pmodule_act_gamma(v, j, q), i, lam, q);
                    bim.within(distance(left_right, right_left) / std::max(1.0, std::abs(left_right.terms().begin()->second.value())), kTol,
                               [&] { return "gh" + std::to_string(i + 1) + " and g" + std::to_string(j + 1) + " on " + v.to_string(); });
                }
        }
    }
    rep.properties.push_back(rel.take());
    rep.properties.push_back(bim.take());

    Property star("star_matches_normal_form");
    for (int i = 0; i < (full ? 500 : 100); ++i) {
        const int g = pick(rng, 1, 3);
        const std::int64_t n = pick<std::int64_t>(rng, 2, 12);
        IntMatrix m = IntMatrix::Zero(g, g);
        for (int a = 0; a < g; ++a)
            for (int b = 0; b < a; ++b) m(a, b) = pick<std::int64_t>(rng, 0, n - 1);
        const BilinearCocycle lam(g, n, m);
        const Exponent a = random_exponent(g, 3, rng), c = random_exponent(g, 3, rng);
        const auto st = star_mul(LaurentPoly::monomial(a), LaurentPoly::monomial(c), lam);
        const auto w = mul_W(QPolynomial::t_monomial(a), QPolynomial::t_monomial(c), lam);
        const Phase sp = st.terms().begin()->second.terms().front().first;
        const Phase wp = w.terms().begin()->second.terms().front().first;
        star.expect(sp == wp, [&] { return "M = " + to_string(m) + " at " + str(a) + ", " + str(c); });
    }
    rep.properties.push_back(star.take());
    return rep;
}

// ---------------------------------------------------------------- laurent-star

SuiteReport laurent_suite(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0x6c617572656e74ULL);
    const bool full = opt.grid == Grid::full;
    const int per_config = full ? 200 : 20;
    SuiteReport rep{"laurent-star", {}};

    Property assoc("star_associativity"), major("majorant_submultiplicative"), unit("star_unit");
    for (int g = 1; g <= 3; ++g)
        for (const std::int64_t n : {2, 3, 4, 6, 12}) {
            const auto lam = random_bilinear(g, n, rng);
            const auto one = LaurentPoly::constant(g, Coefficient::one());
            for (int i = 0; i < per_config; ++i) {
                const auto f = random_laurent(g, 8, 3, rng), h = random_laurent(g, 8, 3, rng), k = random_laurent(g, 8, 3, rng);
                const auto fh = star_mul(f, h, lam);
                assoc.within(distance(star_mul(fh, k, lam), star_mul(f, star_mul(h, k, lam), lam)), kTol,
                             [&] { return "N=" + std::to_string(n) + ": " + f.to_string() + " | " + h.to_string() + " | " + k.to_string(); });
                std::vector<double> w(static_cast<std::size_t>(g));
                for (auto& x : w) x = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
                const double lhs = majorant_norm(fh, w), rhs = majorant_norm(f, w) * majorant_norm(h, w);
                major.within(std::max(0.0, lhs - rhs), kTol, [&] { return f.to_string() + " | " + h.to_string(); });
                unit.within(std::max(distance(star_mul(one, f, lam), f), distance(star_mul(f, one, lam), f)), kTol, [&] { return f.to_string(); });
            }
        }
    rep.properties.push_back(assoc.take());
    rep.properties.push_back(major.take());
    rep.properties.push_back(unit.take());

    Property trans("translation_homomorphism"), cob("coboundary_intertwining"), hcomm("H_hat_commutative");
    for (int i = 0; i < (full ? 300 : 60); ++i) {
        const int g = pick(rng, 1, 3);
        const std::int64_t n = pick<std::int64_t>(rng, 2, 12);
        const auto lam = random_bilinear(g, n, rng);
        const auto f = random_laurent(g, 6, 2, rng), h = random_laurent(g, 6, 2, rng);
        std::vector<Complex> a(static_cast<std::size_t>(g));
        for (auto& x : a) x = std::polar(std::uniform_real_distribution<double>(0.5, 2.0)(rng), std::uniform_real_distribution<double>(0.0, 6.28)(rng));
        const auto lhs = translate(star_mul(f, h, lam), a), rhs = star_mul(translate(f, a), translate(h, a), lam);
        double s = 1.0;
        for (const auto& [e, c] : lhs.terms()) s = std::max(s, std::abs(c.value()));
        trans.within(distance(lhs, rhs) / s, kTol, [&] { return f.to_string() + " | " + h.to_string(); });

        IntMatrix sym(g, g);
        for (int x = 0; x < g; ++x)
            for (int y = x; y < g; ++y) sym(x, y) = sym(y, x) = pick<std::int64_t>(rng, 0, n - 1);
        const auto alpha = bounding_cochain(sym, n, Box::cube(g, 4));
        const Cochain2 lp = coboundary(alpha, Cochain2(lam));
        // a_t -> alpha(t) a_t carries the lambda' product to the lambda product
        const auto t1 = coboundary_transform(star_mul(f, h, lp), alpha);
        const auto t2 = star_mul(coboundary_transform(f, alpha), coboundary_transform(h, alpha), lam);
        cob.within(numeric_distance(t1, t2), kTol, [&] { return "S = " + to_string(sym) + ": " + f.to_string() + " | " + h.to_string(); });
        const auto back = coboundary_transform(coboundary_transform(f, alpha), alpha.inverse());
        cob.within(distance(back, f), kTol, [&] { return "inverse transform on " + f.to_string(); });

        const auto hb = compute_H_hat(antisymmetrize(lam), n).basis;
        for (int x = 0; x < g; ++x)
            for (int y = 0; y < g; ++y) {
                Exponent u(static_cast<std::size_t>(g)), v(static_cast<std::size_t>(g));
                const auto ru = pick<std::int64_t>(rng, -2, 2), rv = pick<std::int64_t>(rng, -2, 2);
                for (int z = 0; z < g; ++z) {
                    u[z] = hb(z, x) * ru + hb(z, y);
                    v[z] = hb(z, y) * rv + hb(z, x);
                }
                const auto mu = LaurentPoly::monomial(u), mv = LaurentPoly::monomial(v);
                hcomm.expect(star_mul(mu, mv, lam).to_string() == star_mul(mv, mu, lam).to_string(),
                             [&] { return "M = " + to_string(lam.matrix()) + " at " + str(u) + ", " + str(v); });
            }
    }
    rep.properties.push_back(trans.take());
    rep.properties.push_back(cob.take());
    rep.properties.push_back(hcomm.take());
    return rep;
}

// ---------------------------------------------------------------- lattice

// Every antisymmetric matrix mod n of size g, in lexicographic order of the upper entries.
std::vector<IntMatrix> all_alternating(int g, std::int64_t n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) slots.emplace_back(i, j);
    std::vector<IntMatrix> out;
    std::vector<std::int64_t> v(slots.size(), 0);
    for (;;) {
        IntMatrix m = IntMatrix::Zero(g, g);
        for (std::size_t s = 0; s < slots.size(); ++s) {
            m(slots[s].first, slots[s].second) = v[s];
            m(slots[s].second, slots[s].first) = floor_mod(-v[s], n);
        }
        out.push_back(m);
        std::size_t s = 0;
        while (s < v.size() && ++v[s] == n) v[s++] = 0;
        if (s == v.size()) break;
    }
    return out;
}

SuiteReport lattice_suite(const VerifyOptions& opt) {
    const bool full = opt.grid == Grid::full;
    SuiteReport rep{"lattice", {}};
    Property kernel("H_hat_bruteforce"), exact("exact_sequence_orders"), proj("projection_kernel"), desc("descent"),
        sharp("sharp_identity"), omega("omega_identity");
    for (int g = 1; g <= 3; ++g)
        for (std::int64_t n = 1; n <= (full ? 6 : 4); ++n)
            for (const auto& anti : all_alternating(g, n)) {
                const auto where = [&] { return "N=" + std::to_string(n) + " Lambda=" + to_string(anti); };
                const auto h = compute_H_hat(anti, n);
                const auto q = compute_K_hat(h);
                std::size_t radical = 0;
                for (const auto& t : Box(Exponent(static_cast<std::size_t>(g), 0), Exponent(static_cast<std::size_t>(g), n - 1)).points()) {
                    bool in = true;
                    for (int i = 0; i < g && in; ++i) {
                        std::int64_t acc = 0;
                        for (int j = 0; j < g; ++j) acc += anti(i, j) * t[j];
                        in = floor_mod(acc, n) == 0;
                    }
                    radical += in ? 1 : 0;
                    kernel.expect(h.contains(t) == in, [&] { return where() + " at " + str(t); });
                    const auto k = q.project(t);
                    proj.expect((q.group.index(k) == 0) == in, [&] { return where() + " at " + str(t); });
                }
                for (int i = 0; i < g; ++i) {
                    Exponent e(static_cast<std::size_t>(g), 0);
                    e[i] = n;
                    kernel.expect(h.contains(e), [&] { return where() + ": N e_" + std::to_string(i + 1) + " missing"; });
                }
                std::int64_t ng = 1;
                for (int i = 0; i < g; ++i) ng *= n;
                exact.expect(static_cast<std::int64_t>(q.group.order() * radical) == ng, [&] { return where(); });

                IntMatrix m = IntMatrix::Zero(g, g);
                for (int i = 0; i < g; ++i)
                    for (int j = i + 1; j < g; ++j) m(i, j) = anti(i, j);
                const BilinearCocycle lam(g, n, m);
                const auto lk = descend_cocycle(lam, q);
                desc.expect(descends_consistently(lam, q, lk) && lk.check_cocycle().ok, [&] { return where(); });
                const bool bij = sharp_is_bijective(lk);
                sharp.expect(bij, [&] { return where() + ": sharp not bijective"; });
                if (!bij) continue;
                const auto dp = lambda_sharp(lk);
                const auto& kh = q.group;
                for (std::size_t a = 0; a < kh.order(); ++a)
                    for (std::size_t b = 0; b < kh.order(); ++b) {
                        sharp.expect(kh.pairing(kh.element(dp.sharp[a]), kh.element(b)) == lk(a, b),
                                     [&] { return where() + " at " + element_string(kh, a) + ", " + element_string(kh, b); });
                        omega.expect(dp.omega(a, b) == lk(dp.flat[a], dp.flat[b]), [&] { return where(); });
                    }
            }
    for (auto* p : {&kernel, &exact, &proj, &desc, &sharp, &omega}) rep.properties.push_back(p->take());
    return rep;
}

// ---------------------------------------------------------------- twisted-equivariant

std::string triple_string(const FiniteAbelianGroup& grp, const std::array<std::size_t, 3>& w) {
    return element_string(grp, w[0]) + ", " + element_string(grp, w[1]) + ", " + element_string(grp, w[2]);
}

SuiteReport twisted_suite(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0x74776973746564ULL);
    const bool full = opt.grid == Grid::full;
    SuiteReport rep{"twisted-equivariant", {}};

    // (group, cocycle) pairs under test
    std::vector<GroupCochain> cocycles;
    Property valid("phi_is_cocycle");
    if (opt.phi) {
        const auto check = opt.phi->check_cocycle();
        valid.expect(check.ok, [&] {
            return "cocycle identity fails at (" + triple_string(opt.phi->group(), *check.witness) + ") with defect " + check.defect.to_string();
        });
        rep.properties.push_back(valid.take());
        if (!check.ok) return rep;
        cocycles.push_back(*opt.phi);
    } else {
        const int seeds = full ? 20 : 2;
        for (const auto& grp : abelian_groups_up_to(full ? 16 : 8))
            for (int s = 0; s < seeds; ++s) {
                auto phi = random_group_cocycle(grp, rng);
                const auto check = phi.check_cocycle();
                valid.expect(check.ok, [&] { return grp.to_string() + ": " + triple_string(grp, *check.witness); });
                cocycles.push_back(std::move(phi));
            }
        rep.properties.push_back(valid.take());
    }

    Property lin("free_linearization"), adj("hom_adjunction"), ret("retwist_roundtrip"), retdim("hom_retwist_invariant"),
        alg("twisted_algebra_associative"), round("algebra_module_roundtrip");
    for (const auto& phi : cocycles) {
        const auto& grp = phi.group();
        const std::size_t n = grp.order();
        const auto where = [&] { return grp.to_string() + " phi=" + to_json(phi)["phi"].dump(); };
        const GSet base = n <= 4 ? GSet::regular(grp) : GSet::trivial(grp, n <= 8 ? 2 : 1);
        DimVector a(base.size()), b(base.size());
        for (auto& x : a) x = pick<Eigen::Index>(rng, 0, n <= 8 ? 2 : 1);
        for (auto& x : b) x = pick<Eigen::Index>(rng, 0, 1);
        a[0] = std::max<Eigen::Index>(a[0], 1);
        b[0] = 1;
        const auto fa = free_object(base, a, phi);
        const auto lc = check_linearization(fa, phi);
        lin.within(lc.max_deviation, kTol, [&] { return where(); });

        Blocks p;
        const auto fb0 = free_object(base, b, phi);
        for (auto d : fb0.dims) p.push_back(random_invertible(d, rng));
        const auto fb = change_basis(fb0, p);
        const auto lhs = static_cast<Eigen::Index>(hom_space(fa, fb).size());
        const auto rhs = static_cast<Eigen::Index>(hom_space(fb, fa).size());
        adj.expect(lhs == plain_hom_dimension(a, forget(fb)) && rhs == plain_hom_dimension(forget(fb), a),
                   [&] { return where() + ": dims " + std::to_string(lhs) + ", " + std::to_string(rhs); });

        std::vector<Phase> alpha(n);
        for (auto& x : alpha) x = Phase(pick<std::int64_t>(rng, 0, 11), 12);
        std::vector<Phase> neg = alpha;
        for (auto& x : neg) x = -x;
        const auto tw = retwist(fa, alpha);
        ret.within(check_linearization(tw, phi.coboundary(alpha)).max_deviation, kTol, [&] { return where(); });
        const auto back = retwist(tw, neg);
        double dev = 0.0;
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t s = 0; s < base.size(); ++s) dev = std::max(dev, max_abs(back.rho[g][s] - fa.rho[g][s]));
        ret.within(dev, kTol, [&] { return where(); });
        retdim.expect(hom_space(tw, retwist(fb, alpha)).size() == static_cast<std::size_t>(lhs), [&] { return where(); });

        if (n <= 8) {
            const GSet pt = GSet::trivial(grp, 1);
            const TwistedAlgebra algebra(pt, phi);
            alg.expect(algebra.is_associative(), [&] { return where(); });
            const auto obj = free_object(pt, {1}, phi);
            const auto m = conjugate(to_module(algebra, obj), random_invertible(obj.total_dim(), rng));
            alg.within(module_defect(algebra, m), kTol, [&] { return where() + ": module axioms"; });
            const auto fm = from_module(algebra, m);
            round.within(module_iso_defect(to_module(algebra, fm.object), m, fm.iso), kTol, [&] { return where(); });
            round.within(check_linearization(fm.object, phi).max_deviation, kTol, [&] { return where() + ": recovered object"; });
        }
    }
    for (auto* p : {&lin, &adj, &ret, &retdim, &alg, &round}) rep.properties.push_back(p->take());
    return rep;
}

// ---------------------------------------------------------------- finite-fm

struct ModelConfig {
    FiniteAbelianGroup b, k;
    GroupCochain lambda;
    std::string label;
};

std::vector<ModelConfig> fm_models(bool full) {
    std::vector<ModelConfig> out;
    const FiniteAbelianGroup trivial_k(std::vector<std::int64_t>{});
    const FiniteAbelianGroup z2({2}), z22({2, 2}), z4({4});
    std::vector<std::pair<FiniteAbelianGroup, std::vector<std::pair<GroupCochain, std::string>>>> ks = {
        {trivial_k, {{GroupCochain::trivial(trivial_k), "1"}}},
        {z2, {{GroupCochain::trivial(z2), "1"}, {GroupCochain::bilinear(z2, {{Phase(1, 2)}}), "zeta2^(ac)"}}},
        {z22, {{GroupCochain::trivial(z22), "1"}, {GroupCochain::bilinear(z22, {{Phase(), Phase(1, 2)}, {Phase(), Phase()}}), "zeta2^(ad)"}}},
        {z4, {{GroupCochain::trivial(z4), "1"}, {GroupCochain::bilinear(z4, {{Phase(1, 4)}}), "zeta4^(ac)"}}},
    };
    for (const auto& grp : abelian_groups_up_to(8)) {
        if (!full && grp.order() != 4 && grp.order() != 8) continue;
        for (const auto& [k, lams] : ks) {
            if (!find_embedding(k, grp)) continue;
            for (const auto& [lam, name] : lams) out.push_back({grp, k, lam, "B=" + grp.to_string() + " Khat=" + k.to_string() + " lambda=" + name});
        }
    }
    return out;
}

SuiteReport fm_suite(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0x66696e697465ULL);
    const bool full = opt.grid == Grid::full;
    const int pairs = full ? 20 : 3;
    SuiteReport rep{"finite-fm", {}};
    Property pairing("pairing_bimultiplicative"), inversion("fourier_inversion"), kernel("deformed_kernel_laws"), homs("hom_preservation"),
        trips("round_trip_isomorphisms"), fact("factorization"), equi("fm_ab_equivariance");
    for (const auto& cfg : fm_models(full)) {
        const TorusModel model(cfg.b, cfg.k, cfg.lambda);
        const auto& b = model.b();
        const auto where = [&] { return cfg.label; };
        for (std::size_t x = 0; x < b.order(); ++x)
            for (std::size_t u = 0; u < b.order(); ++u)
                for (std::size_t v = 0; v < b.order(); ++v)
                    pairing.expect(model.pairing(x, b.add_index(u, v)) == model.pairing(x, u) + model.pairing(x, v) &&
                                       model.pairing(b.add_index(u, v), x) == model.pairing(u, x) + model.pairing(v, x),
                                   [&] { return where(); });
        for (std::size_t x = 1; x < b.order(); ++x) {
            bool detects = false;
            for (std::size_t u = 0; u < b.order() && !detects; ++u) detects = !model.pairing(u, x).is_zero();
            pairing.expect(detects, [&] { return where() + ": degenerate pairing"; });
        }

        DimVector dims(b.order());
        for (auto& d : dims) d = pick<Eigen::Index>(rng, 0, 2);
        const BRep plain = fm_ab(model, dims);
        const CMatrix pmat = random_invertible(plain.dim, rng);
        BRep v{plain.dim, {}};
        for (const auto& r : plain.rho) v.rho.push_back(pmat.inverse() * r * pmat);
        const auto inv = fm_ab_inverse(model, v);
        const BRep again = fm_ab(model, inv.graded);
        double dev = inv.graded == dims ? 0.0 : std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < b.order(); ++x) dev = std::max(dev, max_abs(inv.inclusion * again.rho[x] - v.rho[x] * inv.inclusion));
        if (numeric_rank(inv.inclusion) != v.dim) dev = std::numeric_limits<double>::infinity();
        inversion.within(dev, kTol, [&] { return where(); });

        const auto kc = check_deformed_kernel(model, build_deformed_kernel(model));
        kernel.within(std::max({kc.twisted_action_deviation, kc.module_deviation, kc.bimodule_deviation}), kTol, [&] { return where(); });

        for (int i = 0; i < pairs; ++i) {
            const auto m1 = random_sheaf(model, rng), m2 = random_sheaf(model, rng);
            const auto v1 = fm_lambda(model, m1), v2 = fm_lambda(model, m2);
            const auto d1 = hom_space(m1, m2).size(), d2 = module_hom_space(model, v1, v2).size();
            homs.expect(d1 == d2, [&] { return where() + ": " + std::to_string(d1) + " vs " + std::to_string(d2); });
            const auto rt = check_round_trips(model, m1);
            trips.within(std::max({rt.unit_morphism_defect, rt.unit_inverse_defect, rt.counit_morphism_defect, rt.counit_inverse_defect}), kTol,
                         [&] { return where(); });
            fact.within(verify_factorization(model, m1).deviation, kTol, [&] { return where(); });
            const auto eq = check_fm_ab_equivariance(model, m1.dims);
            equi.within(std::max(eq.intertwining_deviation, eq.coherence_deviation), kTol, [&] { return where(); });
        }
    }
    for (auto* p : {&pairing, &inversion, &kernel, &homs, &trips, &fact, &equi}) rep.properties.push_back(p->take());

    // Averaged omega formula on a free K-orbit against the lambda-weighted Fourier product.
    Property points("star_on_points");
    double literal = 0.0;
    nlohmann::json per_group = nlohmann::json::object();
    std::vector<std::pair<std::string, DualPairData>> cases;
    for (const std::int64_t n : {2, 3, 4}) {
        const FiniteAbelianGroup z({n});
        cases.emplace_back("Z/" + std::to_string(n), lambda_sharp(GroupCochain::bilinear(z, {{Phase(1, n)}})));
    }
    for (const std::int64_t n : {2, 3}) {
        IntMatrix m = IntMatrix::Zero(2, 2);
        m(0, 1) = 1;
        const BilinearCocycle lam(2, n, m);
        const auto q = compute_K_hat(compute_H_hat(antisymmetrize(lam), n));
        cases.emplace_back(q.group.to_string(), lambda_sharp(descend_cocycle(lam, q)));
    }
    for (const auto& [name, dp] : cases) {
        double worst_literal = 0.0;
        for (int i = 0; i < (full ? 50 : 10); ++i) {
            const auto n = static_cast<Eigen::Index>(dp.k_hat.order());
            const CVector phi = random_matrix(n, 1, rng), psi = random_matrix(n, 1, rng);
            const auto r = star_on_points_check(dp, phi, psi);
            points.within(r.deviation_inverse, kTol, [&] { return name; });
            worst_literal = std::max(worst_literal, r.deviation);
        }
        literal = std::max(literal, worst_literal);
        per_group[name] = worst_literal;
    }
    points.result().notes = {{"weights", "lambda^-1"}, {"deviation_with_lambda", literal}, {"deviation_with_lambda_by_group", per_group}};
    rep.properties.push_back(points.take());
    return rep;
}

} // namespace

SuiteReport fm_demo(const TorusModel& model, const DualPairData* points, std::uint64_t seed, int pairs) {
    std::mt19937_64 rng(seed ^ 0x64656d6fULL);
    SuiteReport rep{"fm-demo", {}};
    Property kernel("deformed_kernel_laws"), homs("hom_preservation"), trips("round_trip_isomorphisms"), fact("factorization"),
        equi("fm_ab_equivariance");
    const auto kc = check_deformed_kernel(model, build_deformed_kernel(model));
    kernel.within(std::max({kc.twisted_action_deviation, kc.module_deviation, kc.bimodule_deviation}), kTol, [] { return std::string(); });
    for (int i = 0; i < pairs; ++i) {
        const auto m1 = random_sheaf(model, rng), m2 = random_sheaf(model, rng);
        const auto where = [&] { return "pair " + std::to_string(i); };
        const auto d1 = hom_space(m1, m2).size();
        const auto d2 = module_hom_space(model, fm_lambda(model, m1), fm_lambda(model, m2)).size();
        homs.expect(d1 == d2, [&] { return where() + ": " + std::to_string(d1) + " vs " + std::to_string(d2); });
        const auto rt = check_round_trips(model, m1);
        trips.within(std::max({rt.unit_morphism_defect, rt.unit_inverse_defect, rt.counit_morphism_defect, rt.counit_inverse_defect}), kTol, where);
        fact.within(verify_factorization(model, m1).deviation, kTol, where);
        const auto eq = check_fm_ab_equivariance(model, m1.dims);
        equi.within(std::max(eq.intertwining_deviation, eq.coherence_deviation), kTol, where);
    }
    for (auto* p : {&kernel, &homs, &trips, &fact, &equi}) rep.properties.push_back(p->take());
    if (points) {
        Property prod("star_on_points");
        double literal = 0.0;
        const auto n = static_cast<Eigen::Index>(points->k_hat.order());
        for (int i = 0; i < 10; ++i) {
            const CVector phi = random_matrix(n, 1, rng), psi = random_matrix(n, 1, rng);
            const auto r = star_on_points_check(*points, phi, psi);
            prod.within(r.deviation_inverse, kTol, [&] { return "pair " + std::to_string(i); });
            literal = std::max(literal, r.deviation);
        }
        prod.result().notes = {{"weights", "lambda^-1"}, {"deviation_with_lambda", literal}};
        rep.properties.push_back(prod.take());
    }
    std::sort(rep.properties.begin(), rep.properties.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return rep;
}

bool SuiteReport::ok() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.ok; });
}

const std::vector<std::string>& verify_scopes() {
    static const std::vector<std::string> scopes{"cocycle", "qweyl", "laurent-star", "lattice", "twisted-equivariant", "finite-fm"};
    return scopes;
}

SuiteReport run_suite(const std::string& scope, const VerifyOptions& options) {
    SuiteReport rep;
    if (scope == "cocycle") rep = cocycle_suite(options);
    else if (scope == "qweyl") rep = qweyl_suite(options);
    else if (scope == "laurent-star") rep = laurent_suite(options);
    else if (scope == "lattice") rep = lattice_suite(options);
    else if (scope == "twisted-equivariant") rep = twisted_suite(options);
    else if (scope == "finite-fm") rep = fm_suite(options);
    else throw std::invalid_argument("unknown scope \"" + scope + "\"");
    std::sort(rep.properties.begin(), rep.properties.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return rep;
}

std::vector<SuiteReport> run_suites(const std::vector<std::string>& scopes, const VerifyOptions& options) {
    for (const auto& s : scopes)
        if (std::find(verify_scopes().begin(), verify_scopes().end(), s) == verify_scopes().end())
            throw std::invalid_argument("unknown scope \"" + s + "\"");
    std::vector<std::future<SuiteReport>> jobs;
    for (const auto& s : scopes) jobs.push_back(std::async(std::launch::async, [&options, s] { return run_suite(s, options); }));
    std::vector<SuiteReport> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

nlohmann::json to_json(const PropertyResult& p) {
    nlohmann::json j = {{"name", p.name}, {"ok", p.ok}, {"cases", p.cases}, {"max_deviation", p.max_deviation}};
    j["witness"] = p.ok ? nlohmann::json(nullptr) : nlohmann::json(p.witness);
    if (!p.notes.is_null()) j["notes"] = p.notes;
    return j;
}

nlohmann::json to_json(const SuiteReport& r) {
    auto props = nlohmann::json::array();
    for (const auto& p : r.properties) props.push_back(to_json(p));
    return {{"scope", r.scope}, {"ok", r.ok()}, {"properties", std::move(props)}};
}

} // namespace nctorus
