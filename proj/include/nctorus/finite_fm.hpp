#pragma once

#include <optional>
#include <random>
#include <vector>

#include "nctorus/abelian_group.hpp"
#include "nctorus/equivariant.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/linalg.hpp"

namespace nctorus {

/**
 * Finite stand-in for the pair of tori and the deformation data.
 *
 * B plays Y, its character group Bhat (same invariant factors) plays the
 * dual torus, and Khat sits inside Bhat through `embedding`. lambda is a
 * normalized 2-cocycle on Khat. Coherent sheaves on Y are modelled by
 * B-representations, so a point beta of Bhat corresponds to the line
 * bundle with character beta.
 */
class TorusModel {
public:
    /// embedding lists the image in Bhat of each generator of Khat; found by search when omitted.
    TorusModel(FiniteAbelianGroup b, FiniteAbelianGroup k_hat, GroupCochain lambda,
               std::optional<std::vector<FiniteAbelianGroup::Element>> generator_images = std::nullopt);

    const FiniteAbelianGroup& b() const noexcept { return b_; }
    /// Same factors as b(); kept separate for readability at call sites.
    const FiniteAbelianGroup& b_hat() const noexcept { return b_; }
    const FiniteAbelianGroup& k_hat() const noexcept { return k_hat_; }
    const GroupCochain& lambda() const noexcept { return lambda_; }
    std::size_t embed(std::size_t k) const { return embedding_[k]; }
    const std::vector<std::size_t>& embedding() const noexcept { return embedding_; }

    /// beta(b)
    Phase pairing(std::size_t b, std::size_t beta) const;
    /// Khat acting on Bhat by translation through the embedding.
    const GSet& khat_on_bhat() const noexcept { return action_; }
    /// Smallest Bhat index in each Khat-orbit, increasing.
    const std::vector<std::size_t>& orbit_representatives() const noexcept { return reps_; }

private:
    FiniteAbelianGroup b_, k_hat_;
    GroupCochain lambda_;
    std::vector<std::size_t> embedding_;
    GSet action_;
    std::vector<std::size_t> reps_;
};

/// Images of the generators of k under some injective homomorphism into g, if one exists.
std::optional<std::vector<FiniteAbelianGroup::Element>> find_embedding(const FiniteAbelianGroup& k, const FiniteAbelianGroup& g);

/// A representation of B: rho[b] for every element.
struct BRep {
    Eigen::Index dim = 0;
    std::vector<CMatrix> rho;
};

/**
 * A B-representation with maps m_k, k in Khat, satisfying
 *   rho(b) m_k = k(b) m_k rho(b),  m_{k2} m_{k1} = lambda(k1,k2) m_{k1+k2},  m_0 = lambda(0,0) id.
 */
struct ModuleOnXLambda {
    BRep rep;
    std::vector<CMatrix> m;

    Eigen::Index dim() const noexcept { return rep.dim; }
};

double rep_defect(const TorusModel& model, const BRep& v);
double module_defect(const TorusModel& model, const ModuleOnXLambda& v);

Phase poincare_pairing(const TorusModel& model, const FiniteAbelianGroup::Element& b, const FiniteAbelianGroup::Element& beta);

/// F(b, beta) = beta(b).
CMatrix fourier_matrix(const TorusModel& model);
/// f -> (b -> sum_beta f(beta) beta(b)).
CVector fm_ab_on_functions(const TorusModel& model, const CVector& f);

/// Bhat-graded dims -> (+)_beta M_beta with rho(b) = beta(b) on the beta summand.
BRep fm_ab(const TorusModel& model, const DimVector& m);
/// Block-diagonal image of a graded map.
CMatrix fm_ab_morphism(const DimVector& m, const DimVector& m2, const Blocks& chi);

/// Isotypic decomposition. `inclusion` maps fm_ab(graded) isomorphically onto v.
struct FmAbInverse {
    DimVector graded;
    CMatrix inclusion;
};
FmAbInverse fm_ab_inverse(const TorusModel& model, const BRep& v, double tol = 1e-9);

/// (R_y^* M)_beta = M_{beta + y}, y in Bhat.
DimVector pullback_dims(const TorusModel& model, const DimVector& m, std::size_t y_hat);

/**
 * fm_ab(R_y^* M) -> fm_ab(M) (x) L_y^{-1}: the beta summand M_{beta+y}
 * goes identically onto the beta+y summand. y is a Khat index.
 */
CMatrix fm_ab_equivariance_iso(const TorusModel& model, const DimVector& m, std::size_t y);
/// B-action of fm_ab(M) (x) L_y^{-1}.
BRep twist_by_inverse_line(const TorusModel& model, const BRep& v, std::size_t y);

struct EquivarianceReport {
    double intertwining_deviation = 0.0; // a_y rho(b) vs rho'(b) a_y
    double coherence_deviation = 0.0;    // a_{y1+y2} vs a_{y1} a_{y2}
};
EquivarianceReport check_fm_ab_equivariance(const TorusModel& model, const DimVector& m);

/// Structure of the deformed kernel at beta: component j has B-weight beta+j.
struct DeformedKernel {
    /// action[k][j] = (target component j+k, phase lambda(k, j)); beta moves to beta-k
    std::vector<std::vector<std::pair<std::size_t, Phase>>> action;
    /// right_module[k][j] = (component j+k, phase lambda(j, k))
    std::vector<std::vector<std::pair<std::size_t, Phase>>> right_module;
};
DeformedKernel build_deformed_kernel(const TorusModel& model);

struct KernelCheck {
    double twisted_action_deviation = 0.0; // rho_{k1} rho_{k2} = lambda(k1,k2) rho_{k1+k2}
    double module_deviation = 0.0;         // right action law
    double bimodule_deviation = 0.0;       // left and right actions commute
};
KernelCheck check_deformed_kernel(const TorusModel& model, const DeformedKernel& kernel);

/// Objects of coh Xhat^lambda live over model.khat_on_bhat() with twist lambda.
using SheafOnXhatLambda = EquivariantObject;

/// Invariant sections of M (x) P. Coordinates are the values at the orbit representatives.
ModuleOnXLambda fm_lambda(const TorusModel& model, const SheafOnXhatLambda& m);
CMatrix fm_lambda_morphism(const TorusModel& model, const SheafOnXhatLambda& m, const SheafOnXhatLambda& m2, const Morphism& chi);

/// N_beta = Hom(P_beta, V). frames[beta] has the maps f = (f_j) stacked as columns.
struct InverseImage {
    SheafOnXhatLambda object;
    std::vector<CMatrix> frames;
};
InverseImage fm_lambda_inverse(const TorusModel& model, const ModuleOnXLambda& v, double tol = 1e-9);
Blocks fm_lambda_inverse_morphism(const InverseImage& n, const InverseImage& n2, const CMatrix& psi);

/// eta_M : M -> fm^{-1}(fm M), blockwise.
Blocks unit_map(const TorusModel& model, const SheafOnXhatLambda& m, const InverseImage& round_trip);
/// eps_V : fm(fm^{-1} V) -> V.
CMatrix counit_map(const TorusModel& model, const ModuleOnXLambda& v, const InverseImage& n);

std::vector<CMatrix> module_hom_space(const TorusModel& model, const ModuleOnXLambda& v, const ModuleOnXLambda& w, double tol = 1e-9);
/// Largest violation of psi being a module map v -> w.
double module_morphism_defect(const TorusModel& model, const ModuleOnXLambda& v, const ModuleOnXLambda& w, const CMatrix& psi);
std::optional<CMatrix> find_isomorphism(const TorusModel& model, const ModuleOnXLambda& v, const ModuleOnXLambda& w,
                                        std::mt19937_64& rng, double tol = 1e-9);
/// p^{-1} . v . p
ModuleOnXLambda conjugate(const ModuleOnXLambda& v, const CMatrix& p);

/// The rank-one module on the orbit of beta: C^{Khat} with weights beta+j and m_k e_j = lambda(j,k) e_{j+k}.
ModuleOnXLambda line_module(const TorusModel& model, std::size_t beta);
/// free(skyscraper at beta) in coh Xhat^lambda.
SheafOnXhatLambda orbit_sheaf(const TorusModel& model, std::size_t beta, Eigen::Index multiplicity = 1);

struct RoundTripReport {
    double unit_morphism_defect = 0.0;
    double unit_inverse_defect = 0.0; // 0 when invertible; infinity otherwise
    double counit_morphism_defect = 0.0;
    double counit_inverse_defect = 0.0;
};
RoundTripReport check_round_trips(const TorusModel& model, const SheafOnXhatLambda& m);

struct FactorizationReport {
    ModuleOnXLambda direct;       // fm_lambda(M)
    ModuleOnXLambda equivariant;  // fm_ab(M) with m_k = a_k fm_ab(rho_k)
    CMatrix comparison;           // equivariant -> direct
    double deviation = 0.0;
};
FactorizationReport verify_factorization(const TorusModel& model, const SheafOnXhatLambda& m);

struct StarOnPointsReport {
    CVector points_product;      // the averaged omega formula
    CVector star_product;        // Fourier pieces multiplied with lambda
    CVector star_product_inverse;// same with lambda^{-1}
    double deviation = 0.0;
    double deviation_inverse = 0.0;
};
/// phi, psi are functions on K (a free K-orbit identified with K).
StarOnPointsReport star_on_points_check(const DualPairData& data, const CVector& phi, const CVector& psi);

/// Direct sum of 1..max_orbits orbit sheaves in random bases, total dimension <= max_dim.
SheafOnXhatLambda random_sheaf(const TorusModel& model, std::mt19937_64& rng, Eigen::Index max_dim = 12);
/// A random linear combination of a Hom basis (zero when the space is trivial).
Morphism random_morphism(const SheafOnXhatLambda& a, const SheafOnXhatLambda& b, std::mt19937_64& rng);

} // namespace nctorus
