#include "nctorus/lattice.hpp"

#include <numeric>
#include <stdexcept>

namespace nctorus {

bool SublatticeBasis::contains(const Exponent& t) const {
    const Eigen::Index g = basis.rows();
    if (static_cast<Eigen::Index>(t.size()) != g) return false;
    // basis is lower triangular with positive diagonal
    IntVector rest(g);
    for (Eigen::Index i = 0; i < g; ++i) rest(i) = t[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i < g; ++i) {
        if (rest(i) % basis(i, i) != 0) return false;
        const std::int64_t x = rest(i) / basis(i, i);
        rest -= x * basis.col(i);
    }
    return true;
}

SublatticeBasis compute_H_hat(const IntMatrix& lambda, std::int64_t order) {
    if (order < 1) throw std::invalid_argument("order must be positive");
    const Eigen::Index g = lambda.rows();
    if (lambda.cols() != g) throw std::invalid_argument("alternating form must be square");
    const IntMatrix a = reduce_mod(lambda, order);
    for (Eigen::Index i = 0; i < g; ++i) {
        if (a(i, i) != 0) throw std::invalid_argument("alternating form has nonzero diagonal");
        for (Eigen::Index j = 0; j < i; ++j)
            if (floor_mod(a(i, j) + a(j, i), order) != 0) throw std::invalid_argument("form is not antisymmetric");
    }
    if (g == 0) return {IntMatrix(0, 0)};
    // U A V = D, so A t = 0 mod N  <=>  d_i s_i = 0 mod N with s = V^{-1} t
    const auto snf = smith_normal_form(a);
    IntMatrix gens = snf.V;
    for (Eigen::Index i = 0; i < g; ++i) {
        const std::int64_t d = snf.D(i, i);
        gens.col(i) *= order / std::gcd(d, order);
    }
    return {column_hermite_form(gens)};
}

FiniteAbelianGroup::Element QuotientData::project(const Exponent& t) const {
    if (static_cast<Eigen::Index>(t.size()) != projection.cols()) throw std::invalid_argument("exponent has wrong dimension");
    Exponent k(static_cast<std::size_t>(projection.rows()), 0);
    for (Eigen::Index i = 0; i < projection.rows(); ++i) {
        __int128 acc = 0;
        for (Eigen::Index j = 0; j < projection.cols(); ++j) acc += static_cast<__int128>(projection(i, j)) * t[static_cast<std::size_t>(j)];
        k[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(acc % group.factors()[static_cast<std::size_t>(i)]);
    }
    return group.reduce(k);
}

Exponent QuotientData::lift(const FiniteAbelianGroup::Element& k) const {
    if (!group.contains(k)) throw std::out_of_range("element outside the quotient");
    Exponent t(static_cast<std::size_t>(lifts.rows()), 0);
    for (Eigen::Index i = 0; i < lifts.rows(); ++i)
        for (Eigen::Index j = 0; j < lifts.cols(); ++j) t[static_cast<std::size_t>(i)] += lifts(i, j) * k[static_cast<std::size_t>(j)];
    return t;
}

QuotientData compute_K_hat(const SublatticeBasis& h) {
    const Eigen::Index g = h.basis.rows();
    if (h.basis.cols() != g) throw std::invalid_argument("sublattice basis must be square");
    if (g == 0) return {FiniteAbelianGroup(), IntMatrix(0, 0), IntMatrix(0, 0)};
    if (determinant(h.basis) == 0) throw std::domain_error("sublattice has infinite index (rank deficient basis)");
    // U H V = D: Z^g / H Z^g = (+)_i Z/d_i via t -> U t
    const auto snf = smith_normal_form(h.basis);
    const IntMatrix u_inv = unimodular_inverse(snf.U);
    std::vector<std::int64_t> factors;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < g; ++i)
        if (snf.D(i, i) > 1) {
            factors.push_back(snf.D(i, i));
            rows.push_back(i);
        }
    const auto r = static_cast<Eigen::Index>(rows.size());
    IntMatrix proj(r, g), lifts(g, r);
    for (Eigen::Index k = 0; k < r; ++k) {
        proj.row(k) = snf.U.row(rows[static_cast<std::size_t>(k)]);
        lifts.col(k) = u_inv.col(rows[static_cast<std::size_t>(k)]);
    }
    return {FiniteAbelianGroup(std::move(factors)), std::move(proj), std::move(lifts)};
}

namespace {

Phase alternating(const BilinearCocycle& lambda, const Exponent& s, const Exponent& t) {
    return lambda(s, t) - lambda(t, s);
}

} // namespace

GroupCochain descend_cocycle(const BilinearCocycle& lambda, const QuotientData& quotient) {
    const auto& k = quotient.group;
    const int r = k.rank();
    const int g = lambda.dim();
    if (quotient.projection.cols() != g) throw std::invalid_argument("quotient does not match cocycle dimension");
    // the alternating form must be trivial on H x Z^g
    for (int i = 0; i < r; ++i) {
        const Exponent hi = quotient.lift(k.generator(i));
        Exponent scaled = hi;
        for (auto& x : scaled) x *= k.factors()[static_cast<std::size_t>(i)];
        for (int j = 0; j < g; ++j)
            if (!alternating(lambda, scaled, unit_vector(g, j)).is_zero())
                throw std::domain_error("alternating form does not descend to the quotient");
    }
    std::vector<std::vector<Phase>> m(static_cast<std::size_t>(r), std::vector<Phase>(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i) {
        m[i][i] = Phase(1, k.factors()[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < r; ++j)
            m[i][j] = alternating(lambda, quotient.lift(k.generator(i)), quotient.lift(k.generator(j)));
    }
    return GroupCochain::bilinear(k, m);
}

bool descends_consistently(const BilinearCocycle& lambda, const QuotientData& quotient, const GroupCochain& lambda_k) {
    const auto& k = quotient.group;
    const auto elems = k.elements();
    const auto anti = lambda_k.antisymmetrization();
    for (std::size_t a = 0; a < elems.size(); ++a)
        for (std::size_t b = 0; b < elems.size(); ++b)
            if (anti(a, b) != alternating(lambda, quotient.lift(elems[a]), quotient.lift(elems[b]))) return false;
    return true;
}

namespace {

std::vector<std::size_t> sharp_table(const GroupCochain& lambda_k) {
    const auto& k = lambda_k.group();
    std::vector<std::size_t> sharp(k.order());
    for (std::size_t a = 0; a < k.order(); ++a) {
        // coordinates of the character k2 -> lambda_K(a, k2) in the dual basis
        FiniteAbelianGroup::Element chi(static_cast<std::size_t>(k.rank()));
        for (int j = 0; j < k.rank(); ++j) {
            const Phase v = lambda_k(a, k.index(k.generator(j)));
            const std::int64_t d = k.factors()[static_cast<std::size_t>(j)];
            chi[static_cast<std::size_t>(j)] = v.num() * (d / v.den());
        }
        sharp[a] = k.index(chi);
    }
    return sharp;
}

} // namespace

bool sharp_is_bijective(const GroupCochain& lambda_k) {
    const auto sharp = sharp_table(lambda_k);
    std::vector<bool> hit(sharp.size(), false);
    for (auto s : sharp) {
        if (hit[s]) return false;
        hit[s] = true;
    }
    return true;
}

DualPairData lambda_sharp(const GroupCochain& lambda_k) {
    const auto& k = lambda_k.group();
    DualPairData out;
    out.k_hat = k;
    out.lambda_k = lambda_k;
    out.sharp = sharp_table(lambda_k);
    out.flat.assign(k.order(), k.order());
    for (std::size_t a = 0; a < k.order(); ++a) {
        if (out.flat[out.sharp[a]] != k.order()) throw std::domain_error("sharp map is not bijective (degenerate pairing)");
        out.flat[out.sharp[a]] = a;
    }
    std::vector<Phase> omega(k.order() * k.order());
    for (std::size_t x = 0; x < k.order(); ++x)
        for (std::size_t y = 0; y < k.order(); ++y) omega[x * k.order() + y] = lambda_k(out.flat[x], out.flat[y]);
    out.omega = GroupCochain(k, std::move(omega));
    return out;
}

} // namespace nctorus
