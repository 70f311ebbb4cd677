#pragma once

#include <cstdint>
#include <vector>

#include "nctorus/abelian_group.hpp"
#include "nctorus/cocycle.hpp"
#include "nctorus/intmat.hpp"

namespace nctorus {

/// Columns generate a full-rank sublattice of Z^g, kept in column Hermite form.
struct SublatticeBasis {
    IntMatrix basis;

    int dim() const noexcept { return static_cast<int>(basis.rows()); }
    /// Exact membership test: solves basis * x = t over Z by forward substitution.
    bool contains(const Exponent& t) const;
};

/// Radical {t : Lambda t = 0 mod N} of an alternating form on Z^g.
SublatticeBasis compute_H_hat(const IntMatrix& lambda, std::int64_t order);

/// Z^g / H with its projection. project(t) = P t reduced coordinatewise.
struct QuotientData {
    FiniteAbelianGroup group;
    IntMatrix projection; // rank x g
    IntMatrix lifts;      // g x rank, column i lifts generator i

    FiniteAbelianGroup::Element project(const Exponent& t) const;
    Exponent lift(const FiniteAbelianGroup::Element& k) const;
};

QuotientData compute_K_hat(const SublatticeBasis& h);

/**
 * Bilinear representative on the finite quotient of the class of lambda.
 *
 * For i < j the generator pair carries the value of the alternating form,
 * i > j is trivial, and the diagonal entry is zeta_{d_i}. The diagonal does
 * not change the class (it is symmetric) but makes the pairing nondegenerate.
 * Throws std::domain_error if the alternating form does not descend.
 */
GroupCochain descend_cocycle(const BilinearCocycle& lambda, const QuotientData& quotient);

/// Checks that lambda_K induces the same alternating form as lambda on every
/// pair of lifts from one fundamental domain.
bool descends_consistently(const BilinearCocycle& lambda, const QuotientData& quotient, const GroupCochain& lambda_k);

/**
 * sharp(k1) is the character k2 -> lambda_K(k1, k2) of K_hat; characters are
 * stored as dual-group coordinates. omega is lambda_K transported to K via
 * the inverse (flat) map.
 */
struct DualPairData {
    FiniteAbelianGroup k_hat;
    GroupCochain lambda_k;
    std::vector<std::size_t> sharp; // index in K_hat -> index in K (same factors)
    std::vector<std::size_t> flat;  // inverse of sharp
    GroupCochain omega;             // on K
};

/// True iff k1 -> lambda_K(k1, .) is injective.
bool sharp_is_bijective(const GroupCochain& lambda_k);

/// Throws std::domain_error when the sharp map is not bijective.
DualPairData lambda_sharp(const GroupCochain& lambda_k);

} // namespace nctorus
