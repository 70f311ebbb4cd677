#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nctorus/abelian_group.hpp"
#include "nctorus/coefficient.hpp"
#include "nctorus/linalg.hpp"

namespace nctorus {

/// A finite set of base points with a G-action s -> s.g.
class GSet {
public:
    GSet() = default;
    /// action[s * |G| + g] = s.g; validated as a group action.
    GSet(FiniteAbelianGroup group, std::size_t points, std::vector<std::size_t> action);

    /// n points, every group element acting as the identity.
    static GSet trivial(const FiniteAbelianGroup& group, std::size_t points = 1);
    /// G acting on itself by translation (one free orbit).
    static GSet regular(const FiniteAbelianGroup& group);

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    std::size_t size() const noexcept { return points_; }
    std::size_t act(std::size_t s, std::size_t g) const { return action_[s * group_.order() + g]; }

    friend bool operator==(const GSet&, const GSet&) = default;

private:
    FiniteAbelianGroup group_;
    std::size_t points_ = 0;
    std::vector<std::size_t> action_;
};

using DimVector = std::vector<Eigen::Index>;
/// One matrix per base point.
using Blocks = std::vector<CMatrix>;

/**
 * A graded vector space V = (+)_s V_s over a G-set with maps
 * rho_g[s] : V_s -> V_{s.g}. The phi-twisted law is
 *   rho_{g2}[s.g1] rho_{g1}[s] = phi(g1, g2) rho_{g1+g2}[s].
 */
struct EquivariantObject {
    GSet base;
    DimVector dims;
    std::vector<Blocks> rho; // rho[g][s]

    Eigen::Index total_dim() const;
    /// Throws std::invalid_argument if some block has the wrong shape.
    void validate_shapes() const;
};

struct LinearizationCheck {
    bool ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
    double max_deviation = 0.0;
};

LinearizationCheck check_linearization(const EquivariantObject& obj, const GroupCochain& phi, double tol = 1e-9);

/// free(A)_s = (+)_{h in G} A_{s.h}; rho_g sends the h summand to the h-g summand with factor phi(g, h-g).
EquivariantObject free_object(const GSet& base, const DimVector& a, const GroupCochain& phi);
DimVector forget(const EquivariantObject& obj);

/// Direct sum of two objects over the same base.
EquivariantObject direct_sum(const EquivariantObject& a, const EquivariantObject& b);
/// Same object transported along per-point invertible matrices: rho'_g[s] = P_{s.g} rho_g[s] P_s^{-1}.
EquivariantObject change_basis(const EquivariantObject& obj, const Blocks& p);

/// Graded linear maps chi_s : A_s -> B_s.
using Morphism = Blocks;

/// Basis of {chi : rho^B_g[s] chi_s = chi_{s.g} rho^A_g[s] for all g, s}.
std::vector<Morphism> hom_space(const EquivariantObject& a, const EquivariantObject& b, double tol = 1e-9);
/// Largest entry of rho^B chi - chi rho^A.
double morphism_defect(const EquivariantObject& a, const EquivariantObject& b, const Morphism& chi);
/// Dimension of the plain graded Hom space, sum_s dim A_s dim B_s.
Eigen::Index plain_hom_dimension(const DimVector& a, const DimVector& b);

/// rho'_g = alpha(g) rho_g; linearized for phi.coboundary(alpha).
EquivariantObject retwist(const EquivariantObject& obj, const std::vector<Phase>& alpha);

/**
 * The algebra with basis delta_s e_g and
 *   (delta_s e_g)(delta_t e_h) = [s.g = t] phi(g, h) delta_s e_{g+h}.
 * Over a trivial G-set this is functions on the base tensor the twisted
 * group algebra; over a translation action it is the crossed product.
 */
class TwistedAlgebra {
public:
    /// Throws std::invalid_argument if phi is not a cocycle.
    TwistedAlgebra(GSet base, GroupCochain phi);

    const GSet& base() const noexcept { return base_; }
    const GroupCochain& phi() const noexcept { return phi_; }
    std::size_t dim() const noexcept { return base_.size() * base_.group().order(); }
    std::size_t basis_index(std::size_t s, std::size_t g) const { return s * base_.group().order() + g; }

    /// Product of two basis elements: target index and phase, or nothing when it vanishes.
    std::optional<std::pair<std::size_t, Phase>> product(std::size_t i, std::size_t j) const;
    CVector multiply(const CVector& x, const CVector& y) const;
    CVector unit() const;
    /// Matrix of y -> x y for x the basis element i.
    CMatrix left_multiplication(std::size_t i) const;

    /// Exact check of associativity on basis triples.
    bool is_associative() const;
    Eigen::Index center_dimension(double tol = 1e-9) const;
    bool is_commutative() const;
    /// Nondegeneracy of the trace form Tr(L_x L_y).
    bool is_semisimple(double tol = 1e-9) const;

private:
    GSet base_;
    GroupCochain phi_;
};

/// Right module: action[i] is the matrix of v -> v . b_i, so action(xy) = action(y) action(x).
struct AlgebraModule {
    Eigen::Index dim = 0;
    std::vector<CMatrix> action;
};

/// Largest violation of the right-module axioms (product law and unit).
double module_defect(const TwistedAlgebra& alg, const AlgebraModule& m);

/// v . (delta_s e_g) = rho_g P_s v.
AlgebraModule to_module(const TwistedAlgebra& alg, const EquivariantObject& obj);

struct FromModule {
    EquivariantObject object;
    /// iso * to_module(object).action[i] == m.action[i] * iso
    CMatrix iso;
};
FromModule from_module(const TwistedAlgebra& alg, const AlgebraModule& m, double tol = 1e-9);

/// Largest entry of m2(x) iso - iso m1(x) over the basis, or infinity if iso is not invertible.
double module_iso_defect(const AlgebraModule& m1, const AlgebraModule& m2, const CMatrix& iso);

/// Transports a module along an invertible matrix: action'(x) = p^{-1} action(x) p.
AlgebraModule conjugate(const AlgebraModule& m, const CMatrix& p);

} // namespace nctorus
