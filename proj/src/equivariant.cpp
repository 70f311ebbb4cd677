#include "nctorus/equivariant.hpp"

#include <limits>
#include <stdexcept>

namespace nctorus {

GSet::GSet(FiniteAbelianGroup group, std::size_t points, std::vector<std::size_t> action)
    : group_(std::move(group)), points_(points), action_(std::move(action)) {
    const std::size_t n = group_.order();
    if (action_.size() != points_ * n) throw std::invalid_argument("action table has wrong size");
    for (std::size_t s = 0; s < points_; ++s) {
        if (act(s, 0) != s) throw std::invalid_argument("identity does not act trivially");
        for (std::size_t g = 0; g < n; ++g) {
            if (act(s, g) >= points_) throw std::invalid_argument("action leaves the set");
            for (std::size_t h = 0; h < n; ++h)
                if (act(act(s, g), h) != act(s, group_.add_index(g, h)))
                    throw std::invalid_argument("table is not a group action");
        }
    }
}

GSet GSet::trivial(const FiniteAbelianGroup& group, std::size_t points) {
    std::vector<std::size_t> action(points * group.order());
    for (std::size_t s = 0; s < points; ++s)
        for (std::size_t g = 0; g < group.order(); ++g) action[s * group.order() + g] = s;
    return GSet(group, points, std::move(action));
}

GSet GSet::regular(const FiniteAbelianGroup& group) {
    const std::size_t n = group.order();
    std::vector<std::size_t> action(n * n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t g = 0; g < n; ++g) action[s * n + g] = group.add_index(s, g);
    return GSet(group, n, std::move(action));
}

Eigen::Index EquivariantObject::total_dim() const {
    Eigen::Index n = 0;
    for (auto d : dims) n += d;
    return n;
}

void EquivariantObject::validate_shapes() const {
    const auto& grp = base.group();
    if (dims.size() != base.size()) throw std::invalid_argument("dimension vector does not match the base");
    if (rho.size() != grp.order()) throw std::invalid_argument("need one linearization map per group element");
    for (std::size_t g = 0; g < grp.order(); ++g) {
        if (rho[g].size() != base.size()) throw std::invalid_argument("need one block per base point");
        for (std::size_t s = 0; s < base.size(); ++s)
            if (rho[g][s].rows() != dims[base.act(s, g)] || rho[g][s].cols() != dims[s])
                throw std::invalid_argument("linearization block has the wrong shape");
    }
}

LinearizationCheck check_linearization(const EquivariantObject& obj, const GroupCochain& phi, double tol) {
    obj.validate_shapes();
    const auto& grp = obj.base.group();
    if (!(phi.group() == grp)) throw std::invalid_argument("cocycle lives on a different group");
    LinearizationCheck result;
    for (std::size_t g1 = 0; g1 < grp.order(); ++g1)
        for (std::size_t g2 = 0; g2 < grp.order(); ++g2) {
            const Complex c = phi(g1, g2).embed();
            const std::size_t g12 = grp.add_index(g1, g2);
            double worst = 0.0;
            for (std::size_t s = 0; s < obj.base.size(); ++s) {
                const CMatrix lhs = obj.rho[g2][obj.base.act(s, g1)] * obj.rho[g1][s];
                worst = std::max(worst, max_abs(lhs - c * obj.rho[g12][s]));
            }
            result.max_deviation = std::max(result.max_deviation, worst);
            if (worst > tol && result.ok) {
                result.ok = false;
                result.witness = std::make_pair(g1, g2);
            }
        }
    return result;
}

EquivariantObject free_object(const GSet& base, const DimVector& a, const GroupCochain& phi) {
    const auto& grp = base.group();
    if (a.size() != base.size()) throw std::invalid_argument("dimension vector does not match the base");
    if (!(phi.group() == grp)) throw std::invalid_argument("cocycle lives on a different group");
    const std::size_t n = grp.order();
    // offset[s][h]: start of the h summand A_{s.h} inside free(A)_s
    std::vector<std::vector<Eigen::Index>> offset(base.size(), std::vector<Eigen::Index>(n));
    EquivariantObject obj{base, DimVector(base.size(), 0), {}};
    for (std::size_t s = 0; s < base.size(); ++s)
        for (std::size_t h = 0; h < n; ++h) {
            offset[s][h] = obj.dims[s];
            obj.dims[s] += a[base.act(s, h)];
        }
    obj.rho.assign(n, Blocks(base.size()));
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t s = 0; s < base.size(); ++s) {
            const std::size_t t = base.act(s, g);
            CMatrix m = CMatrix::Zero(obj.dims[t], obj.dims[s]);
            for (std::size_t h = 0; h < n; ++h) {
                const std::size_t k = grp.sub_index(h, g);
                const Eigen::Index d = a[base.act(s, h)];
                m.block(offset[t][k], offset[s][h], d, d) = phi(g, k).embed() * CMatrix::Identity(d, d);
            }
            obj.rho[g][s] = std::move(m);
        }
    return obj;
}

DimVector forget(const EquivariantObject& obj) { return obj.dims; }

EquivariantObject direct_sum(const EquivariantObject& a, const EquivariantObject& b) {
    if (!(a.base == b.base)) throw std::invalid_argument("direct sum over different bases");
    EquivariantObject r{a.base, a.dims, a.rho};
    for (std::size_t s = 0; s < a.dims.size(); ++s) r.dims[s] += b.dims[s];
    for (std::size_t g = 0; g < a.rho.size(); ++g)
        for (std::size_t s = 0; s < a.dims.size(); ++s) {
            const std::size_t t = a.base.act(s, g);
            CMatrix m = CMatrix::Zero(r.dims[t], r.dims[s]);
            m.topLeftCorner(a.dims[t], a.dims[s]) = a.rho[g][s];
            m.bottomRightCorner(b.dims[t], b.dims[s]) = b.rho[g][s];
            r.rho[g][s] = std::move(m);
        }
    return r;
}

EquivariantObject change_basis(const EquivariantObject& obj, const Blocks& p) {
    if (p.size() != obj.base.size()) throw std::invalid_argument("need one basis change per base point");
    Blocks p_inv(p.size());
    for (std::size_t s = 0; s < p.size(); ++s) p_inv[s] = p[s].inverse();
    EquivariantObject r = obj;
    for (std::size_t g = 0; g < obj.rho.size(); ++g)
        for (std::size_t s = 0; s < obj.base.size(); ++s)
            r.rho[g][s] = p[obj.base.act(s, g)] * obj.rho[g][s] * p_inv[s];
    return r;
}

Eigen::Index plain_hom_dimension(const DimVector& a, const DimVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("incompatible gradings");
    Eigen::Index n = 0;
    for (std::size_t s = 0; s < a.size(); ++s) n += a[s] * b[s];
    return n;
}

namespace {

void require_compatible(const EquivariantObject& a, const EquivariantObject& b) {
    a.validate_shapes();
    b.validate_shapes();
    if (!(a.base == b.base)) throw std::invalid_argument("objects live over different G-sets");
}

// The defining equations, one column per coordinate of the unknown morphism.
CMatrix hom_equations(const EquivariantObject& a, const EquivariantObject& b) {
    const auto& base = a.base;
    const std::size_t n = base.group().order();
    std::vector<Eigen::Index> var_offset(base.size() + 1, 0);
    for (std::size_t s = 0; s < base.size(); ++s) var_offset[s + 1] = var_offset[s] + a.dims[s] * b.dims[s];
    // both sides obey the same twisted law, so the generators' equations imply the rest
    std::vector<std::size_t> gens;
    for (int i = 0; i < base.group().rank(); ++i) gens.push_back(base.group().index(base.group().generator(i)));
    (void)n;
    Eigen::Index rows = 0;
    for (const std::size_t g : gens)
        for (std::size_t s = 0; s < base.size(); ++s) rows += b.dims[base.act(s, g)] * a.dims[s];
    CMatrix eq = CMatrix::Zero(rows, var_offset.back());
    Eigen::Index row = 0;
    for (const std::size_t g : gens)
        for (std::size_t s = 0; s < base.size(); ++s) {
            const std::size_t t = base.act(s, g);
            // rho^B_g[s] chi_s - chi_t rho^A_g[s], vectorized column-major
            const CMatrix& rb = b.rho[g][s];
            const CMatrix& ra = a.rho[g][s];
            const Eigen::Index m = b.dims[t], k = a.dims[s];
            for (Eigen::Index col = 0; col < k; ++col)
                for (Eigen::Index r = 0; r < m; ++r) {
                    const Eigen::Index eq_row = row + col * m + r;
                    // (rb chi_s)(r, col) = sum_p rb(r,p) chi_s(p,col)
                    for (Eigen::Index p = 0; p < b.dims[s]; ++p)
                        eq(eq_row, var_offset[s] + col * b.dims[s] + p) += rb(r, p);
                    // (chi_t ra)(r, col) = sum_p chi_t(r,p) ra(p,col)
                    for (Eigen::Index p = 0; p < a.dims[t]; ++p)
                        eq(eq_row, var_offset[t] + p * m + r) -= ra(p, col);
                }
            row += m * k;
        }
    return eq;
}

} // namespace

std::vector<Morphism> hom_space(const EquivariantObject& a, const EquivariantObject& b, double tol) {
    require_compatible(a, b);
    const CMatrix ker = nullspace(hom_equations(a, b), tol);
    std::vector<Morphism> out;
    for (Eigen::Index c = 0; c < ker.cols(); ++c) {
        Morphism chi(a.base.size());
        Eigen::Index off = 0;
        for (std::size_t s = 0; s < a.base.size(); ++s) {
            chi[s] = CMatrix(b.dims[s], a.dims[s]);
            for (Eigen::Index j = 0; j < a.dims[s]; ++j)
                for (Eigen::Index i = 0; i < b.dims[s]; ++i) chi[s](i, j) = ker(off + j * b.dims[s] + i, c);
            off += a.dims[s] * b.dims[s];
        }
        out.push_back(std::move(chi));
    }
    return out;
}

double morphism_defect(const EquivariantObject& a, const EquivariantObject& b, const Morphism& chi) {
    require_compatible(a, b);
    double worst = 0.0;
    for (std::size_t g = 0; g < a.rho.size(); ++g)
        for (std::size_t s = 0; s < a.base.size(); ++s) {
            const std::size_t t = a.base.act(s, g);
            worst = std::max(worst, max_abs(b.rho[g][s] * chi[s] - chi[t] * a.rho[g][s]));
        }
    return worst;
}

EquivariantObject retwist(const EquivariantObject& obj, const std::vector<Phase>& alpha) {
    if (alpha.size() != obj.rho.size()) throw std::invalid_argument("twist needs one phase per group element");
    EquivariantObject r = obj;
    for (std::size_t g = 0; g < r.rho.size(); ++g)
        for (auto& block : r.rho[g]) block *= alpha[g].embed();
    return r;
}

TwistedAlgebra::TwistedAlgebra(GSet base, GroupCochain phi) : base_(std::move(base)), phi_(std::move(phi)) {
    if (!(phi_.group() == base_.group())) throw std::invalid_argument("cocycle lives on a different group");
    if (!phi_.check_cocycle().ok) throw std::invalid_argument("twisting table is not a 2-cocycle");
}

std::optional<std::pair<std::size_t, Phase>> TwistedAlgebra::product(std::size_t i, std::size_t j) const {
    const std::size_t n = base_.group().order();
    const std::size_t s = i / n, g = i % n, t = j / n, h = j % n;
    if (base_.act(s, g) != t) return std::nullopt;
    return std::make_pair(basis_index(s, base_.group().add_index(g, h)), phi_(g, h));
}

CVector TwistedAlgebra::multiply(const CVector& x, const CVector& y) const {
    if (static_cast<std::size_t>(x.size()) != dim() || static_cast<std::size_t>(y.size()) != dim())
        throw std::invalid_argument("algebra element has wrong size");
    CVector r = CVector::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x(static_cast<Eigen::Index>(i)) == Complex(0.0)) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (auto p = product(i, j))
                r(static_cast<Eigen::Index>(p->first)) += x(static_cast<Eigen::Index>(i)) * y(static_cast<Eigen::Index>(j)) * p->second.embed();
        }
    }
    return r;
}

CVector TwistedAlgebra::unit() const {
    CVector u = CVector::Zero(static_cast<Eigen::Index>(dim()));
    const Complex c = 1.0 / phi_(0, 0).embed();
    for (std::size_t s = 0; s < base_.size(); ++s) u(static_cast<Eigen::Index>(basis_index(s, 0))) = c;
    return u;
}

CMatrix TwistedAlgebra::left_multiplication(std::size_t i) const {
    const auto n = static_cast<Eigen::Index>(dim());
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t j = 0; j < dim(); ++j)
        if (auto p = product(i, j)) m(static_cast<Eigen::Index>(p->first), static_cast<Eigen::Index>(j)) += p->second.embed();
    return m;
}

bool TwistedAlgebra::is_associative() const {
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            for (std::size_t k = 0; k < dim(); ++k) {
                std::optional<std::pair<std::size_t, Phase>> lhs, rhs;
                if (auto ij = product(i, j))
                    if (auto r = product(ij->first, k)) lhs = std::make_pair(r->first, ij->second + r->second);
                if (auto jk = product(j, k))
                    if (auto r = product(i, jk->first)) rhs = std::make_pair(r->first, jk->second + r->second);
                if (lhs != rhs) return false;
            }
    return true;
}

Eigen::Index TwistedAlgebra::center_dimension(double tol) const {
    // z is central iff z b_i - b_i z = 0 for every basis element
    const auto n = static_cast<Eigen::Index>(dim());
    CMatrix eq(n * n, n);
    for (std::size_t i = 0; i < dim(); ++i) {
        CMatrix right = CMatrix::Zero(n, n); // z -> z b_i
        for (std::size_t j = 0; j < dim(); ++j)
            if (auto p = product(j, i)) right(static_cast<Eigen::Index>(p->first), static_cast<Eigen::Index>(j)) += p->second.embed();
        eq.middleRows(static_cast<Eigen::Index>(i) * n, n) = right - left_multiplication(i);
    }
    return nullspace(eq, tol).cols();
}

bool TwistedAlgebra::is_commutative() const {
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j) {
            auto a = product(i, j), b = product(j, i);
            if (a.has_value() != b.has_value()) return false;
            if (a && (a->first != b->first || a->second != b->second)) return false;
        }
    return true;
}

bool TwistedAlgebra::is_semisimple(double tol) const {
    const auto n = static_cast<Eigen::Index>(dim());
    std::vector<CMatrix> left(dim());
    for (std::size_t i = 0; i < dim(); ++i) left[i] = left_multiplication(i);
    CMatrix form(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) form(i, j) = (left[i] * left[j]).trace();
    return numeric_rank(form, tol) == n;
}

double module_defect(const TwistedAlgebra& alg, const AlgebraModule& m) {
    if (m.action.size() != alg.dim()) throw std::invalid_argument("module needs one matrix per basis element");
    double worst = 0.0;
    for (std::size_t i = 0; i < alg.dim(); ++i)
        for (std::size_t j = 0; j < alg.dim(); ++j) {
            CMatrix xy = CMatrix::Zero(m.dim, m.dim);
            if (auto p = alg.product(i, j)) xy = p->second.embed() * m.action[p->first];
            worst = std::max(worst, max_abs(m.action[j] * m.action[i] - xy));
        }
    const CVector u = alg.unit();
    CMatrix unit_action = CMatrix::Zero(m.dim, m.dim);
    for (std::size_t i = 0; i < alg.dim(); ++i) unit_action += u(static_cast<Eigen::Index>(i)) * m.action[i];
    return std::max(worst, max_abs(unit_action - CMatrix::Identity(m.dim, m.dim)));
}

AlgebraModule to_module(const TwistedAlgebra& alg, const EquivariantObject& obj) {
    obj.validate_shapes();
    if (!(obj.base == alg.base())) throw std::invalid_argument("object lives over a different G-set");
    const auto& base = obj.base;
    std::vector<Eigen::Index> off(base.size() + 1, 0);
    for (std::size_t s = 0; s < base.size(); ++s) off[s + 1] = off[s] + obj.dims[s];
    AlgebraModule m{off.back(), std::vector<CMatrix>(alg.dim())};
    const std::size_t n = base.group().order();
    for (std::size_t s = 0; s < base.size(); ++s)
        for (std::size_t g = 0; g < n; ++g) {
            CMatrix a = CMatrix::Zero(m.dim, m.dim);
            const std::size_t t = base.act(s, g);
            a.block(off[t], off[s], obj.dims[t], obj.dims[s]) = obj.rho[g][s];
            m.action[alg.basis_index(s, g)] = std::move(a);
        }
    return m;
}

FromModule from_module(const TwistedAlgebra& alg, const AlgebraModule& m, double tol) {
    if (m.action.size() != alg.dim()) throw std::invalid_argument("module needs one matrix per basis element");
    const auto& base = alg.base();
    const std::size_t n = base.group().order();
    const Complex c = 1.0 / alg.phi()(0, 0).embed();
    // the idempotents c delta_s e_0 cut out the graded pieces
    Blocks pieces(base.size());
    FromModule out;
    out.object.base = base;
    out.object.dims.resize(base.size());
    out.iso = CMatrix(m.dim, 0);
    for (std::size_t s = 0; s < base.size(); ++s) {
        pieces[s] = column_space(c * m.action[alg.basis_index(s, 0)], tol);
        out.object.dims[s] = pieces[s].cols();
        CMatrix grown(m.dim, out.iso.cols() + pieces[s].cols());
        grown << out.iso, pieces[s];
        out.iso = std::move(grown);
    }
    if (out.iso.cols() != m.dim) throw std::domain_error("idempotents do not decompose the module");
    const CMatrix coords = out.iso.inverse();
    std::vector<Eigen::Index> off(base.size() + 1, 0);
    for (std::size_t s = 0; s < base.size(); ++s) off[s + 1] = off[s] + out.object.dims[s];
    out.object.rho.assign(n, Blocks(base.size()));
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t s = 0; s < base.size(); ++s) {
            const std::size_t t = base.act(s, g);
            out.object.rho[g][s] = coords.middleRows(off[t], out.object.dims[t]) * m.action[alg.basis_index(s, g)] * pieces[s];
        }
    return out;
}

double module_iso_defect(const AlgebraModule& m1, const AlgebraModule& m2, const CMatrix& iso) {
    if (m1.action.size() != m2.action.size()) throw std::invalid_argument("modules over different algebras");
    if (iso.rows() != m2.dim || iso.cols() != m1.dim) throw std::invalid_argument("isomorphism has the wrong shape");
    if (m1.dim != m2.dim || numeric_rank(iso) != m1.dim) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < m1.action.size(); ++i)
        worst = std::max(worst, max_abs(iso * m1.action[i] - m2.action[i] * iso));
    return worst;
}

AlgebraModule conjugate(const AlgebraModule& m, const CMatrix& p) {
    const CMatrix p_inv = p.inverse();
    AlgebraModule r{m.dim, {}};
    for (const auto& a : m.action) r.action.push_back(p_inv * a * p);
    return r;
}

} // namespace nctorus
