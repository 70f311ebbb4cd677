#include <doctest.h>

#include <random>

#include "nctorus/finite_fm.hpp"
#include "nctorus/lattice.hpp"

using namespace nctorus;

namespace {

const FiniteAbelianGroup none(std::vector<std::int64_t>{});
const FiniteAbelianGroup z2({2}), z4({4}), z22({2, 2}), z24({2, 4});

GroupCochain ad_cocycle() { return GroupCochain::bilinear(z22, {{Phase(), Phase(1, 2)}, {Phase(), Phase()}}); }

// trace of rho(b) on fm_ab(M): sum_beta dim M_beta beta(b)
Complex fm_character(const TorusModel& model, const DimVector& m, std::size_t b) {
    Complex s = 0.0;
    for (std::size_t beta = 0; beta < m.size(); ++beta) s += static_cast<double>(m[beta]) * model.pairing(b, beta).embed();
    return s;
}

} // namespace

TEST_SUITE("finite-fm") {

TEST_CASE("Poincare pairing") {
    const TorusModel model(z4, none, GroupCochain::trivial(none));
    for (std::size_t x = 0; x < 4; ++x) {
        CHECK(model.pairing(0, x).is_zero());
        CHECK(model.pairing(x, 0).is_zero());
    }
    CHECK(model.pairing(1, 1) == Phase(1, 4));
    CHECK(poincare_pairing(model, {1}, {1}) == Phase(1, 4));

    for (const auto& grp : abelian_groups_up_to(8)) {
        const TorusModel m(grp, none, GroupCochain::trivial(none));
        bool ok = true;
        for (std::size_t b = 0; b < grp.order(); ++b)
            for (std::size_t u = 0; u < grp.order(); ++u)
                for (std::size_t v = 0; v < grp.order(); ++v) ok = ok && m.pairing(b, grp.add_index(u, v)) == m.pairing(b, u) + m.pairing(b, v);
        CHECK(ok);
    }
}

TEST_CASE("classical transform") {
    const TorusModel m2(z2, none, GroupCochain::trivial(none));
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    CHECK(max_abs(fourier_matrix(m2) - h) < 1e-15);

    const TorusModel model(z24, none, GroupCochain::trivial(none));
    const auto sky = fm_ab(model, DimVector{1, 0, 0, 0, 0, 0, 0, 0});
    CHECK(sky.dim == 1);
    for (const auto& r : sky.rho) CHECK(std::abs(r(0, 0) - 1.0) < 1e-15);

    // inversion with the conjugate transpose and 1/|B|
    std::mt19937_64 rng(1);
    const CMatrix f = fourier_matrix(model);
    const CVector x = random_matrix(8, 1, rng);
    const CVector y = fm_ab_on_functions(model, x);
    CHECK(max_abs(f.adjoint() * y / 8.0 - x) < 1e-12);

    // fm_ab inverse recovers the grading of a conjugated representation
    const DimVector dims{0, 2, 1, 0, 0, 1, 0, 2};
    const BRep plain = fm_ab(model, dims);
    const CMatrix p = random_invertible(plain.dim, rng);
    BRep v{plain.dim, {}};
    for (const auto& r : plain.rho) v.rho.push_back(p.inverse() * r * p);
    CHECK(rep_defect(model, v) < 1e-9);
    const auto inv = fm_ab_inverse(model, v);
    CHECK(inv.graded == dims);
    for (std::size_t b = 0; b < 8; ++b) CHECK(max_abs(inv.inclusion * plain.rho[b] - v.rho[b] * inv.inclusion) < 1e-9);
    CHECK(numeric_rank(inv.inclusion) == v.dim);
}

TEST_CASE("equivariance of the classical transform") {
    const TorusModel model(z4, z2, GroupCochain::trivial(z2));
    const DimVector m{1, 0, 2, 0};
    CHECK(max_abs(fm_ab_equivariance_iso(model, m, 0) - CMatrix::Identity(3, 3)) == 0.0);
    for (std::size_t y = 0; y < 2; ++y) {
        const auto iso = fm_ab_equivariance_iso(model, m, y);
        const auto src = fm_ab(model, pullback_dims(model, m, model.embed(y)));
        const auto dst = twist_by_inverse_line(model, fm_ab(model, m), y);
        for (std::size_t b = 0; b < 4; ++b) CHECK(max_abs(iso * src.rho[b] - dst.rho[b] * iso) < 1e-9);
    }
    const auto r = check_fm_ab_equivariance(model, m);
    CHECK(r.intertwining_deviation < 1e-9);
    CHECK(r.coherence_deviation < 1e-9);
}

TEST_CASE("deformed kernel") {
    const TorusModel plain(z4, none, GroupCochain::trivial(none));
    const auto k0 = build_deformed_kernel(plain);
    REQUIRE(k0.action.size() == 1);
    CHECK(k0.action[0][0].first == 0);
    CHECK(k0.action[0][0].second.is_zero());

    const TorusModel model(z24, z22, ad_cocycle());
    const auto k = build_deformed_kernel(model);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(k.action[a][j].first == z22.add_index(j, a));
            CHECK(k.action[a][j].second == ad_cocycle()(a, j));
            const auto v = k.action[a][j].second.embed();
            CHECK(std::abs(std::abs(v.real()) - 1.0) < 1e-15);
        }
    const auto c = check_deformed_kernel(model, k);
    CHECK(c.twisted_action_deviation < 1e-12);
    CHECK(c.module_deviation < 1e-12);
    CHECK(c.bimodule_deviation < 1e-12);
}

TEST_CASE("trivial deformation reduces to the classical transform") {
    const TorusModel model(z24, none, GroupCochain::trivial(none));
    std::mt19937_64 rng(2);
    const auto m = random_sheaf(model, rng, 6);
    const auto v = fm_lambda(model, m);
    CHECK(v.dim() == m.total_dim());
    for (std::size_t b = 0; b < 8; ++b) CHECK(std::abs(v.rep.rho[b].trace() - fm_character(model, m.dims, b)) < 1e-9);
}

TEST_CASE("orbit sheaves go to line modules") {
    const TorusModel model(z24, z22, ad_cocycle());
    std::mt19937_64 rng(3);
    for (std::size_t beta : model.orbit_representatives()) {
        const auto sky = orbit_sheaf(model, beta);
        const auto v = fm_lambda(model, sky);
        const auto line = line_module(model, beta);
        CHECK(module_defect(model, v) < 1e-9);
        CHECK(module_defect(model, line) < 1e-9);
        CHECK(v.dim() == static_cast<Eigen::Index>(z22.order()));
        const auto iso = find_isomorphism(model, v, line, rng);
        REQUIRE(iso.has_value());
        CHECK(module_morphism_defect(model, v, line, *iso) < 1e-9);

        const auto rt = check_round_trips(model, sky);
        CHECK(rt.unit_morphism_defect < 1e-9);
        CHECK(rt.unit_inverse_defect == 0.0);
        CHECK(rt.counit_morphism_defect < 1e-9);
        CHECK(rt.counit_inverse_defect == 0.0);
    }
}

TEST_CASE("dimension count and round trips on random objects") {
    std::mt19937_64 rng(4);
    const std::vector<TorusModel> models{TorusModel(z4, z2, GroupCochain::bilinear(z2, {{Phase(1, 2)}})),
                                         TorusModel(z4, z4, GroupCochain::bilinear(z4, {{Phase(1, 4)}})),
                                         TorusModel(z24, z22, ad_cocycle())};
    for (const auto& model : models)
        for (int rep = 0; rep < 4; ++rep) {
            const auto m = random_sheaf(model, rng);
            const auto v = fm_lambda(model, m);
            CHECK(v.dim() == m.total_dim());
            const auto rt = check_round_trips(model, m);
            CHECK(rt.unit_morphism_defect < 1e-9);
            CHECK(rt.unit_inverse_defect == 0.0);
            CHECK(rt.counit_morphism_defect < 1e-9);
            CHECK(rt.counit_inverse_defect == 0.0);
        }
}

TEST_CASE("factorization and Hom dimensions") {
    const TorusModel flat(z4, none, GroupCochain::trivial(none));
    std::mt19937_64 rng(5);
    CHECK(verify_factorization(flat, random_sheaf(flat, rng)).deviation == doctest::Approx(0.0));

    const TorusModel model(z24, z22, ad_cocycle());
    for (int rep = 0; rep < 5; ++rep) {
        const auto a = random_sheaf(model, rng), b = random_sheaf(model, rng);
        CHECK(verify_factorization(model, a).deviation < 1e-9);
        CHECK(hom_space(a, b).size() == module_hom_space(model, fm_lambda(model, a), fm_lambda(model, b)).size());
    }
}

TEST_CASE("product on points") {
    // trivial K: the averaged product is the pointwise one
    const auto dp1 = lambda_sharp(GroupCochain::trivial(none));
    CVector phi(1), psi(1);
    phi << Complex(2.0, 1.0);
    psi << Complex(-0.5, 3.0);
    CHECK(std::abs(star_on_points_check(dp1, phi, psi).points_product(0) - phi(0) * psi(0)) < 1e-15);

    // K = Z/2, delta functions: both sides written out
    const auto dp2 = lambda_sharp(GroupCochain::bilinear(z2, {{Phase(1, 2)}}));
    CVector d0 = CVector::Zero(2);
    d0(0) = 1.0;
    const auto r = star_on_points_check(dp2, d0, d0);
    for (std::size_t x = 0; x < 2; ++x) {
        Complex avg = 0.0;
        for (std::size_t k1 = 0; k1 < 2; ++k1)
            for (std::size_t k2 = 0; k2 < 2; ++k2) avg += dp2.omega(k1, k2).embed() * d0((x + k1) % 2) * d0((x + k2) % 2);
        CHECK(std::abs(r.points_product(static_cast<Eigen::Index>(x)) - avg / 2.0) < 1e-15);
    }
    CHECK(r.deviation_inverse < 1e-12);

    // K = (Z/3)^2 from the g = 2, N = 3 parameter
    IntMatrix m(2, 2);
    m << 0, 1, 0, 0;
    const BilinearCocycle lam(2, 3, m);
    const auto q = compute_K_hat(compute_H_hat(antisymmetrize(lam), 3));
    const auto dp = lambda_sharp(descend_cocycle(lam, q));
    const auto& k = dp.k_hat;
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 5; ++rep) {
        const CVector f = random_matrix(9, 1, rng), g = random_matrix(9, 1, rng);
        const auto s = star_on_points_check(dp, f, g);
        // Fourier side with lambda^{-1}, computed here from scratch
        CVector fourier = CVector::Zero(9);
        const auto el = k.elements();
        for (std::size_t a = 0; a < 9; ++a)
            for (std::size_t b = 0; b < 9; ++b) {
                Complex fa = 0.0, gb = 0.0;
                for (std::size_t x = 0; x < 9; ++x) {
                    fa += std::conj(k.pairing(el[a], el[x]).embed()) * f(static_cast<Eigen::Index>(x)) / 9.0;
                    gb += std::conj(k.pairing(el[b], el[x]).embed()) * g(static_cast<Eigen::Index>(x)) / 9.0;
                }
                for (std::size_t x = 0; x < 9; ++x)
                    fourier(static_cast<Eigen::Index>(x)) += std::conj(dp.lambda_k(a, b).embed()) * fa * gb *
                                                             k.pairing(k.add(el[a], el[b]), el[x]).embed();
            }
        CHECK(max_abs(s.points_product - fourier) < 1e-9);
        CHECK(s.deviation_inverse < 1e-9);
    }
}

} // TEST_SUITE
