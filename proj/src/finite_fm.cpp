#include "nctorus/finite_fm.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace nctorus {

namespace {

using Element = FiniteAbelianGroup::Element;

bool injective_images(const FiniteAbelianGroup& k, const FiniteAbelianGroup& g, const std::vector<Element>& images) {
    std::vector<bool> hit(g.order(), false);
    for (const auto& e : k.elements()) {
        Element img = g.zero();
        for (int i = 0; i < k.rank(); ++i) img = g.add(img, g.scale(images[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]));
        const std::size_t idx = g.index(img);
        if (hit[idx]) return false;
        hit[idx] = true;
    }
    return true;
}

bool search_embedding(const FiniteAbelianGroup& k, const FiniteAbelianGroup& g, std::vector<Element>& images) {
    const auto i = images.size();
    if (static_cast<int>(i) == k.rank()) return injective_images(k, g, images);
    for (const auto& cand : g.elements()) {
        // the generator's order must divide into the image order
        if (!g.scale(cand, k.factors()[i]).empty() && g.index(g.scale(cand, k.factors()[i])) != 0) continue;
        images.push_back(cand);
        if (search_embedding(k, g, images)) return true;
        images.pop_back();
    }
    return false;
}

} // namespace

std::optional<std::vector<Element>> find_embedding(const FiniteAbelianGroup& k, const FiniteAbelianGroup& g) {
    std::vector<Element> images;
    if (search_embedding(k, g, images)) return images;
    return std::nullopt;
}

TorusModel::TorusModel(FiniteAbelianGroup b, FiniteAbelianGroup k_hat, GroupCochain lambda,
                       std::optional<std::vector<Element>> generator_images)
    : b_(std::move(b)), k_hat_(std::move(k_hat)), lambda_(std::move(lambda)) {
    if (!(lambda_.group() == k_hat_)) throw std::invalid_argument("deformation cocycle lives on a different group");
    if (!lambda_.check_cocycle().ok) throw std::invalid_argument("deformation table is not a 2-cocycle");
    for (std::size_t k = 0; k < k_hat_.order(); ++k)
        if (!lambda_(0, k).is_zero() || !lambda_(k, 0).is_zero()) throw std::invalid_argument("deformation cocycle must be normalized");
    if (!generator_images) generator_images = find_embedding(k_hat_, b_);
    if (!generator_images) throw std::invalid_argument(k_hat_.to_string() + " does not embed in the dual of " + b_.to_string());
    if (static_cast<int>(generator_images->size()) != k_hat_.rank()) throw std::invalid_argument("need one image per generator");
    for (std::size_t i = 0; i < generator_images->size(); ++i) {
        const auto& img = (*generator_images)[i];
        if (!b_.contains(img) || b_.index(b_.scale(img, k_hat_.factors()[i])) != 0)
            throw std::invalid_argument("generator image has incompatible order");
    }
    if (!injective_images(k_hat_, b_, *generator_images)) throw std::invalid_argument("embedding is not injective");
    embedding_.resize(k_hat_.order());
    for (std::size_t k = 0; k < k_hat_.order(); ++k) {
        const Element e = k_hat_.element(k);
        Element img = b_.zero();
        for (int i = 0; i < k_hat_.rank(); ++i)
            img = b_.add(img, b_.scale((*generator_images)[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]));
        embedding_[k] = b_.index(img);
    }
    std::vector<std::size_t> table(b_.order() * k_hat_.order());
    for (std::size_t beta = 0; beta < b_.order(); ++beta)
        for (std::size_t k = 0; k < k_hat_.order(); ++k) table[beta * k_hat_.order() + k] = b_.add_index(beta, embedding_[k]);
    action_ = GSet(k_hat_, b_.order(), std::move(table));
    std::vector<bool> seen(b_.order(), false);
    for (std::size_t beta = 0; beta < b_.order(); ++beta) {
        if (seen[beta]) continue;
        reps_.push_back(beta);
        for (std::size_t k = 0; k < k_hat_.order(); ++k) seen[action_.act(beta, k)] = true;
    }
}

Phase TorusModel::pairing(std::size_t b, std::size_t beta) const { return b_.pairing(b_.element(beta), b_.element(b)); }

Phase poincare_pairing(const TorusModel& model, const Element& b, const Element& beta) {
    return model.pairing(model.b().index(b), model.b_hat().index(beta));
}

double rep_defect(const TorusModel& model, const BRep& v) {
    const auto& grp = model.b();
    if (v.rho.size() != grp.order()) throw std::invalid_argument("representation needs one matrix per element");
    double worst = max_abs(v.rho[0] - CMatrix::Identity(v.dim, v.dim));
    for (std::size_t a = 0; a < grp.order(); ++a)
        for (std::size_t b = 0; b < grp.order(); ++b)
            worst = std::max(worst, max_abs(v.rho[a] * v.rho[b] - v.rho[grp.add_index(a, b)]));
    return worst;
}

double module_defect(const TorusModel& model, const ModuleOnXLambda& v) {
    const auto& kh = model.k_hat();
    if (v.m.size() != kh.order()) throw std::invalid_argument("module needs one map per element of Khat");
    double worst = rep_defect(model, v.rep);
    const CMatrix id = CMatrix::Identity(v.dim(), v.dim());
    worst = std::max(worst, max_abs(v.m[0] - model.lambda()(0, 0).embed() * id));
    for (std::size_t k = 0; k < kh.order(); ++k)
        for (std::size_t b = 0; b < model.b().order(); ++b) {
            const Complex kb = model.pairing(b, model.embed(k)).embed();
            worst = std::max(worst, max_abs(v.rep.rho[b] * v.m[k] - kb * v.m[k] * v.rep.rho[b]));
        }
    for (std::size_t k1 = 0; k1 < kh.order(); ++k1)
        for (std::size_t k2 = 0; k2 < kh.order(); ++k2)
            worst = std::max(worst, max_abs(v.m[k2] * v.m[k1] - model.lambda()(k1, k2).embed() * v.m[kh.add_index(k1, k2)]));
    return worst;
}

CMatrix fourier_matrix(const TorusModel& model) {
    const auto n = static_cast<Eigen::Index>(model.b().order());
    CMatrix f(n, n);
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index beta = 0; beta < n; ++beta)
            f(b, beta) = model.pairing(static_cast<std::size_t>(b), static_cast<std::size_t>(beta)).embed();
    return f;
}

CVector fm_ab_on_functions(const TorusModel& model, const CVector& f) {
    if (static_cast<std::size_t>(f.size()) != model.b_hat().order()) throw std::invalid_argument("function has wrong length");
    return fourier_matrix(model) * f;
}

namespace {

std::vector<Eigen::Index> offsets(const DimVector& d) {
    std::vector<Eigen::Index> off(d.size() + 1, 0);
    for (std::size_t i = 0; i < d.size(); ++i) off[i + 1] = off[i] + d[i];
    return off;
}

void require_graded(const TorusModel& model, const DimVector& m) {
    if (m.size() != model.b_hat().order()) throw std::invalid_argument("grading does not match the dual group");
}

void require_sheaf(const TorusModel& model, const SheafOnXhatLambda& m) {
    if (!(m.base == model.khat_on_bhat())) throw std::invalid_argument("object is not graded over the model");
    m.validate_shapes();
}

} // namespace

BRep fm_ab(const TorusModel& model, const DimVector& m) {
    require_graded(model, m);
    const auto off = offsets(m);
    BRep v{off.back(), {}};
    for (std::size_t b = 0; b < model.b().order(); ++b) {
        CMatrix r = CMatrix::Zero(v.dim, v.dim);
        for (std::size_t beta = 0; beta < m.size(); ++beta)
            r.block(off[beta], off[beta], m[beta], m[beta]).diagonal().setConstant(model.pairing(b, beta).embed());
        v.rho.push_back(std::move(r));
    }
    return v;
}

CMatrix fm_ab_morphism(const DimVector& m, const DimVector& m2, const Blocks& chi) {
    if (m.size() != m2.size() || chi.size() != m.size()) throw std::invalid_argument("graded map does not match the gradings");
    const auto off = offsets(m), off2 = offsets(m2);
    CMatrix r = CMatrix::Zero(off2.back(), off.back());
    for (std::size_t s = 0; s < m.size(); ++s) r.block(off2[s], off[s], m2[s], m[s]) = chi[s];
    return r;
}

FmAbInverse fm_ab_inverse(const TorusModel& model, const BRep& v, double tol) {
    const auto& grp = model.b();
    FmAbInverse out{DimVector(grp.order(), 0), CMatrix(v.dim, 0)};
    const double scale = 1.0 / static_cast<double>(grp.order());
    for (std::size_t beta = 0; beta < grp.order(); ++beta) {
        CMatrix proj = CMatrix::Zero(v.dim, v.dim);
        for (std::size_t b = 0; b < grp.order(); ++b) proj += std::conj(model.pairing(b, beta).embed()) * v.rho[b];
        const CMatrix piece = column_space(scale * proj, tol);
        out.graded[beta] = piece.cols();
        CMatrix grown(v.dim, out.inclusion.cols() + piece.cols());
        grown << out.inclusion, piece;
        out.inclusion = std::move(grown);
    }
    return out;
}

DimVector pullback_dims(const TorusModel& model, const DimVector& m, std::size_t y_hat) {
    require_graded(model, m);
    DimVector r(m.size());
    for (std::size_t beta = 0; beta < m.size(); ++beta) r[beta] = m[model.b_hat().add_index(beta, y_hat)];
    return r;
}

CMatrix fm_ab_equivariance_iso(const TorusModel& model, const DimVector& m, std::size_t y) {
    if (y >= model.k_hat().order()) throw std::out_of_range("element is not in Khat");
    const std::size_t yh = model.embed(y);
    const DimVector pulled = pullback_dims(model, m, yh);
    const auto off_src = offsets(pulled), off_tgt = offsets(m);
    CMatrix a = CMatrix::Zero(off_tgt.back(), off_src.back());
    for (std::size_t beta = 0; beta < m.size(); ++beta) {
        const std::size_t t = model.b_hat().add_index(beta, yh);
        a.block(off_tgt[t], off_src[beta], m[t], pulled[beta]).setIdentity();
    }
    return a;
}

BRep twist_by_inverse_line(const TorusModel& model, const BRep& v, std::size_t y) {
    BRep r = v;
    for (std::size_t b = 0; b < model.b().order(); ++b) r.rho[b] *= (-model.pairing(b, model.embed(y))).embed();
    return r;
}

EquivarianceReport check_fm_ab_equivariance(const TorusModel& model, const DimVector& m) {
    EquivarianceReport rep;
    const auto& kh = model.k_hat();
    const BRep base = fm_ab(model, m);
    for (std::size_t y = 0; y < kh.order(); ++y) {
        const BRep src = fm_ab(model, pullback_dims(model, m, model.embed(y)));
        const BRep tgt = twist_by_inverse_line(model, base, y);
        const CMatrix a = fm_ab_equivariance_iso(model, m, y);
        for (std::size_t b = 0; b < model.b().order(); ++b)
            rep.intertwining_deviation = std::max(rep.intertwining_deviation, max_abs(a * src.rho[b] - tgt.rho[b] * a));
    }
    // a_{y1+y2}(M) = a_{y1}(M) a_{y2}(R_{y1}^* M)
    for (std::size_t y1 = 0; y1 < kh.order(); ++y1) {
        const DimVector pulled = pullback_dims(model, m, model.embed(y1));
        for (std::size_t y2 = 0; y2 < kh.order(); ++y2) {
            const CMatrix lhs = fm_ab_equivariance_iso(model, m, kh.add_index(y1, y2));
            const CMatrix rhs = fm_ab_equivariance_iso(model, m, y1) * fm_ab_equivariance_iso(model, pulled, y2);
            rep.coherence_deviation = std::max(rep.coherence_deviation, max_abs(lhs - rhs));
        }
    }
    return rep;
}

DeformedKernel build_deformed_kernel(const TorusModel& model) {
    const auto& kh = model.k_hat();
    const std::size_t n = kh.order();
    DeformedKernel kernel;
    kernel.action.assign(n, std::vector<std::pair<std::size_t, Phase>>(n));
    kernel.right_module.assign(n, std::vector<std::pair<std::size_t, Phase>>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            kernel.action[k][j] = {kh.add_index(j, k), model.lambda()(k, j)};
            kernel.right_module[k][j] = {kh.add_index(j, k), model.lambda()(j, k)};
        }
    return kernel;
}

namespace {

// Matrix of a monomial table (target, phase) on C^{Khat}.
CMatrix table_matrix(const std::vector<std::pair<std::size_t, Phase>>& t) {
    const auto n = static_cast<Eigen::Index>(t.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t j = 0; j < t.size(); ++j) m(static_cast<Eigen::Index>(t[j].first), static_cast<Eigen::Index>(j)) = t[j].second.embed();
    return m;
}

} // namespace

KernelCheck check_deformed_kernel(const TorusModel& model, const DeformedKernel& kernel) {
    const auto& kh = model.k_hat();
    KernelCheck out;
    std::vector<CMatrix> left, right;
    for (std::size_t k = 0; k < kh.order(); ++k) {
        left.push_back(table_matrix(kernel.action[k]));
        right.push_back(table_matrix(kernel.right_module[k]));
    }
    for (std::size_t k1 = 0; k1 < kh.order(); ++k1)
        for (std::size_t k2 = 0; k2 < kh.order(); ++k2) {
            const Complex c = model.lambda()(k1, k2).embed();
            const std::size_t k12 = kh.add_index(k1, k2);
            out.twisted_action_deviation = std::max(out.twisted_action_deviation, max_abs(left[k1] * left[k2] - c * left[k12]));
            out.module_deviation = std::max(out.module_deviation, max_abs(right[k2] * right[k1] - c * right[k12]));
            out.bimodule_deviation = std::max(out.bimodule_deviation, max_abs(left[k1] * right[k2] - right[k2] * left[k1]));
        }
    return out;
}

namespace {

// Ambient space (+)_beta M_beta (x) C^{Khat}; block (beta, j) starts at amb[beta] + j dim M_beta.
struct SectionLayout {
    std::vector<Eigen::Index> amb;
    std::vector<Eigen::Index> rep_offset; // W-coordinate offset of each orbit representative
    Eigen::Index ambient_dim = 0;
    Eigen::Index dim = 0;
};

SectionLayout section_layout(const TorusModel& model, const DimVector& dims) {
    const std::size_t nk = model.k_hat().order();
    SectionLayout l;
    l.amb.resize(dims.size());
    for (std::size_t beta = 0; beta < dims.size(); ++beta) {
        l.amb[beta] = l.ambient_dim;
        l.ambient_dim += static_cast<Eigen::Index>(nk) * dims[beta];
    }
    for (auto r : model.orbit_representatives()) {
        l.rep_offset.push_back(l.dim);
        l.dim += static_cast<Eigen::Index>(nk) * dims[r];
    }
    return l;
}

// W-coordinates of the invariant section whose value at beta is m (x) e_j.
CVector section_through(const TorusModel& model, const SheafOnXhatLambda& obj, const SectionLayout& l,
                        std::size_t beta, std::size_t j, const CVector& m) {
    const auto& kh = model.k_hat();
    const auto& reps = model.orbit_representatives();
    CVector w = CVector::Zero(l.dim);
    for (std::size_t ri = 0; ri < reps.size(); ++ri) {
        const std::size_t r = reps[ri];
        for (std::size_t k0 = 0; k0 < kh.order(); ++k0) {
            if (obj.base.act(r, k0) != beta) continue;
            // value at r is tau_{-k0}(m (x) e_j) = lambda(-k0, j+k0)^{-1} rho_{-k0} m (x) e_{j+k0}
            const std::size_t mk = kh.neg_index(k0);
            const std::size_t jj = kh.add_index(j, k0);
            const Complex c = (-model.lambda()(mk, jj)).embed();
            const Eigen::Index d = obj.dims[r];
            w.segment(l.rep_offset[ri] + static_cast<Eigen::Index>(jj) * d, d) = c * (obj.rho[mk][beta] * m);
            return w;
        }
    }
    throw std::logic_error("point outside every orbit");
}

// Columns: W basis vectors written in the ambient space (the extension map E).
CMatrix extension_matrix(const TorusModel& model, const SheafOnXhatLambda& obj, const SectionLayout& l) {
    const auto& kh = model.k_hat();
    const auto& reps = model.orbit_representatives();
    CMatrix e = CMatrix::Zero(l.ambient_dim, l.dim);
    for (std::size_t ri = 0; ri < reps.size(); ++ri) {
        const std::size_t r = reps[ri];
        const Eigen::Index d = obj.dims[r];
        for (std::size_t j = 0; j < kh.order(); ++j)
            for (Eigen::Index c = 0; c < d; ++c) {
                const Eigen::Index col = l.rep_offset[ri] + static_cast<Eigen::Index>(j) * d + c;
                for (std::size_t k = 0; k < kh.order(); ++k) {
                    // tau_k(e_c (x) e_j at r) = rho_k e_c (x) lambda(k, j-k)^{-1} e_{j-k} at r+k
                    const std::size_t t = obj.base.act(r, k);
                    const std::size_t jk = kh.sub_index(j, k);
                    const Complex ph = (-model.lambda()(k, jk)).embed();
                    e.block(l.amb[t] + static_cast<Eigen::Index>(jk) * obj.dims[t], col, obj.dims[t], 1) = ph * obj.rho[k][r].col(c);
                }
            }
    }
    return e;
}

// Rows: restriction of an ambient vector to the representative blocks (R, with R E = I).
CMatrix restriction_matrix(const TorusModel& model, const DimVector& dims, const SectionLayout& l) {
    const auto& reps = model.orbit_representatives();
    const auto nk = static_cast<Eigen::Index>(model.k_hat().order());
    CMatrix r = CMatrix::Zero(l.dim, l.ambient_dim);
    for (std::size_t ri = 0; ri < reps.size(); ++ri)
        r.block(l.rep_offset[ri], l.amb[reps[ri]], nk * dims[reps[ri]], nk * dims[reps[ri]]).setIdentity();
    return r;
}

} // namespace

ModuleOnXLambda fm_lambda(const TorusModel& model, const SheafOnXhatLambda& obj) {
    require_sheaf(model, obj);
    const auto& kh = model.k_hat();
    const SectionLayout l = section_layout(model, obj.dims);
    const CMatrix e = extension_matrix(model, obj, l);
    const CMatrix r = restriction_matrix(model, obj.dims, l);
    ModuleOnXLambda v;
    v.rep.dim = l.dim;
    for (std::size_t b = 0; b < model.b().order(); ++b) {
        CMatrix amb = CMatrix::Zero(l.ambient_dim, l.ambient_dim);
        for (std::size_t beta = 0; beta < obj.dims.size(); ++beta)
            for (std::size_t j = 0; j < kh.order(); ++j) {
                const std::size_t w = model.b_hat().add_index(beta, model.embed(j));
                amb.block(l.amb[beta] + static_cast<Eigen::Index>(j) * obj.dims[beta], l.amb[beta] + static_cast<Eigen::Index>(j) * obj.dims[beta],
                          obj.dims[beta], obj.dims[beta])
                    .diagonal()
                    .setConstant(model.pairing(b, w).embed());
            }
        v.rep.rho.push_back(r * amb * e);
    }
    for (std::size_t k = 0; k < kh.order(); ++k) {
        CMatrix amb = CMatrix::Zero(l.ambient_dim, l.ambient_dim);
        for (std::size_t beta = 0; beta < obj.dims.size(); ++beta)
            for (std::size_t j = 0; j < kh.order(); ++j) {
                const std::size_t jk = kh.add_index(j, k);
                const Eigen::Index d = obj.dims[beta];
                amb.block(l.amb[beta] + static_cast<Eigen::Index>(jk) * d, l.amb[beta] + static_cast<Eigen::Index>(j) * d, d, d)
                    .diagonal()
                    .setConstant(model.lambda()(j, k).embed());
            }
        v.m.push_back(r * amb * e);
    }
    return v;
}

CMatrix fm_lambda_morphism(const TorusModel& model, const SheafOnXhatLambda& a, const SheafOnXhatLambda& b, const Morphism& chi) {
    require_sheaf(model, a);
    require_sheaf(model, b);
    const auto nk = static_cast<Eigen::Index>(model.k_hat().order());
    const SectionLayout la = section_layout(model, a.dims), lb = section_layout(model, b.dims);
    const CMatrix e = extension_matrix(model, a, la);
    const CMatrix r = restriction_matrix(model, b.dims, lb);
    CMatrix amb = CMatrix::Zero(lb.ambient_dim, la.ambient_dim);
    for (std::size_t beta = 0; beta < a.dims.size(); ++beta)
        for (Eigen::Index j = 0; j < nk; ++j)
            amb.block(lb.amb[beta] + j * b.dims[beta], la.amb[beta] + j * a.dims[beta], b.dims[beta], a.dims[beta]) = chi[beta];
    return r * amb * e;
}

InverseImage fm_lambda_inverse(const TorusModel& model, const ModuleOnXLambda& v, double tol) {
    const auto& kh = model.k_hat();
    const auto nk = static_cast<Eigen::Index>(kh.order());
    const Eigen::Index d = v.dim();
    const Eigen::Index unknowns = nk * d;
    const std::size_t nb = model.b().order();
    InverseImage out;
    out.object.base = model.khat_on_bhat();
    out.object.dims.assign(nb, 0);
    out.frames.resize(nb);
    for (std::size_t beta = 0; beta < nb; ++beta) {
        // f_j has weight beta+j and m_k f_j = lambda(j,k) f_{j+k}
        const Eigen::Index rows = static_cast<Eigen::Index>(nb) * unknowns + nk * unknowns;
        CMatrix eq = CMatrix::Zero(rows, unknowns);
        Eigen::Index row = 0;
        const CMatrix id = CMatrix::Identity(d, d);
        for (std::size_t b = 0; b < nb; ++b) {
            for (Eigen::Index j = 0; j < nk; ++j) {
                const std::size_t w = model.b_hat().add_index(beta, model.embed(static_cast<std::size_t>(j)));
                eq.block(row + j * d, j * d, d, d) = v.rep.rho[b] - model.pairing(b, w).embed() * id;
            }
            row += unknowns;
        }
        for (std::size_t k = 0; k < kh.order(); ++k) {
            for (Eigen::Index j = 0; j < nk; ++j) {
                const auto jk = static_cast<Eigen::Index>(kh.add_index(static_cast<std::size_t>(j), k));
                eq.block(row + j * d, j * d, d, d) += v.m[k];
                eq.block(row + j * d, jk * d, d, d) -= model.lambda()(static_cast<std::size_t>(j), k).embed() * id;
            }
            row += unknowns;
        }
        out.frames[beta] = nullspace(eq, tol);
        out.object.dims[beta] = out.frames[beta].cols();
    }
    out.object.rho.assign(kh.order(), Blocks(nb));
    for (std::size_t k = 0; k < kh.order(); ++k)
        for (std::size_t beta = 0; beta < nb; ++beta) {
            const std::size_t t = out.object.base.act(beta, k);
            // (rho_k f)_{j'} = lambda(k, j') f_{j'+k}
            CMatrix moved(unknowns, out.frames[beta].cols());
            for (Eigen::Index jp = 0; jp < nk; ++jp) {
                const auto src = static_cast<Eigen::Index>(kh.add_index(static_cast<std::size_t>(jp), k));
                moved.middleRows(jp * d, d) = model.lambda()(k, static_cast<std::size_t>(jp)).embed() * out.frames[beta].middleRows(src * d, d);
            }
            out.object.rho[k][beta] = out.frames[t].adjoint() * moved;
        }
    return out;
}

Blocks fm_lambda_inverse_morphism(const InverseImage& n, const InverseImage& n2, const CMatrix& psi) {
    const std::size_t nb = n.frames.size();
    if (n2.frames.size() != nb) throw std::invalid_argument("inverse images over different models");
    Blocks out(nb);
    for (std::size_t beta = 0; beta < nb; ++beta) {
        const CMatrix& f = n.frames[beta];
        const Eigen::Index d = psi.cols(), d2 = psi.rows();
        if (d == 0) {
            out[beta] = CMatrix::Zero(n2.frames[beta].cols(), f.cols());
            continue;
        }
        const Eigen::Index nk = f.rows() / d;
        CMatrix pushed(nk * d2, f.cols());
        for (Eigen::Index j = 0; j < nk; ++j) pushed.middleRows(j * d2, d2) = psi * f.middleRows(j * d, d);
        out[beta] = n2.frames[beta].adjoint() * pushed;
    }
    return out;
}

Blocks unit_map(const TorusModel& model, const SheafOnXhatLambda& obj, const InverseImage& round_trip) {
    require_sheaf(model, obj);
    const auto& kh = model.k_hat();
    const SectionLayout l = section_layout(model, obj.dims);
    Blocks eta(obj.dims.size());
    for (std::size_t beta = 0; beta < obj.dims.size(); ++beta) {
        CMatrix stacked(static_cast<Eigen::Index>(kh.order()) * l.dim, obj.dims[beta]);
        for (Eigen::Index c = 0; c < obj.dims[beta]; ++c) {
            const CVector m = CVector::Unit(obj.dims[beta], c);
            for (std::size_t j = 0; j < kh.order(); ++j)
                stacked.block(static_cast<Eigen::Index>(j) * l.dim, c, l.dim, 1) = section_through(model, obj, l, beta, j, m);
        }
        eta[beta] = round_trip.frames[beta].adjoint() * stacked;
    }
    return eta;
}

CMatrix counit_map(const TorusModel& model, const ModuleOnXLambda& v, const InverseImage& n) {
    const auto& kh = model.k_hat();
    const SectionLayout l = section_layout(model, n.object.dims);
    const auto& reps = model.orbit_representatives();
    const Eigen::Index d = v.dim();
    CMatrix eps = CMatrix::Zero(d, l.dim);
    for (std::size_t ri = 0; ri < reps.size(); ++ri) {
        const CMatrix& f = n.frames[reps[ri]];
        const Eigen::Index dn = f.cols();
        for (std::size_t j = 0; j < kh.order(); ++j)
            eps.middleCols(l.rep_offset[ri] + static_cast<Eigen::Index>(j) * dn, dn) = f.middleRows(static_cast<Eigen::Index>(j) * d, d);
    }
    return eps;
}

namespace {

std::vector<CMatrix> module_generators(const ModuleOnXLambda& v) {
    std::vector<CMatrix> g = v.rep.rho;
    g.insert(g.end(), v.m.begin(), v.m.end());
    return g;
}

// rho(b) and m_k for generators b of B and k of Khat; these determine the module.
std::vector<CMatrix> module_generators(const TorusModel& model, const ModuleOnXLambda& v) {
    std::vector<CMatrix> g;
    for (int i = 0; i < model.b().rank(); ++i) g.push_back(v.rep.rho[model.b().index(model.b().generator(i))]);
    for (int i = 0; i < model.k_hat().rank(); ++i) g.push_back(v.m[model.k_hat().index(model.k_hat().generator(i))]);
    if (g.empty()) g.push_back(CMatrix::Identity(v.dim(), v.dim()));
    return g;
}

double inverse_defect(const CMatrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    if (a.rows() == 0) return 0.0;
    return numeric_rank(a) == a.rows() ? 0.0 : std::numeric_limits<double>::infinity();
}

} // namespace

std::vector<CMatrix> module_hom_space(const TorusModel& model, const ModuleOnXLambda& v, const ModuleOnXLambda& w, double tol) {
    if (v.dim() == 0 || w.dim() == 0) return {};
    return intertwiners(module_generators(model, v), module_generators(model, w), tol);
}

double module_morphism_defect(const TorusModel&, const ModuleOnXLambda& v, const ModuleOnXLambda& w, const CMatrix& psi) {
    const auto a = module_generators(v), b = module_generators(w);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_abs(psi * a[i] - b[i] * psi));
    return worst;
}

std::optional<CMatrix> find_isomorphism(const TorusModel& model, const ModuleOnXLambda& v, const ModuleOnXLambda& w,
                                        std::mt19937_64& rng, double tol) {
    if (v.dim() != w.dim()) return std::nullopt;
    if (v.dim() == 0) return CMatrix(0, 0);
    const auto basis = module_hom_space(model, v, w, tol);
    if (basis.empty()) return std::nullopt;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // a generic combination is invertible when any element is
    for (int attempt = 0; attempt < 4; ++attempt) {
        CMatrix psi = CMatrix::Zero(w.dim(), v.dim());
        for (const auto& b : basis) {
            const double re = u(rng);
            const double im = u(rng);
            psi += Complex(re, im) * b;
        }
        if (numeric_rank(psi, tol) == v.dim()) return psi;
    }
    return std::nullopt;
}

ModuleOnXLambda conjugate(const ModuleOnXLambda& v, const CMatrix& p) {
    const CMatrix p_inv = p.inverse();
    ModuleOnXLambda r;
    r.rep.dim = v.rep.dim;
    for (const auto& x : v.rep.rho) r.rep.rho.push_back(p_inv * x * p);
    for (const auto& x : v.m) r.m.push_back(p_inv * x * p);
    return r;
}

ModuleOnXLambda line_module(const TorusModel& model, std::size_t beta) {
    const auto& kh = model.k_hat();
    const auto n = static_cast<Eigen::Index>(kh.order());
    ModuleOnXLambda v;
    v.rep.dim = n;
    for (std::size_t b = 0; b < model.b().order(); ++b) {
        CMatrix r = CMatrix::Zero(n, n);
        for (std::size_t j = 0; j < kh.order(); ++j)
            r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = model.pairing(b, model.b_hat().add_index(beta, model.embed(j))).embed();
        v.rep.rho.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < kh.order(); ++k) {
        CMatrix m = CMatrix::Zero(n, n);
        for (std::size_t j = 0; j < kh.order(); ++j)
            m(static_cast<Eigen::Index>(kh.add_index(j, k)), static_cast<Eigen::Index>(j)) = model.lambda()(j, k).embed();
        v.m.push_back(std::move(m));
    }
    return v;
}

SheafOnXhatLambda orbit_sheaf(const TorusModel& model, std::size_t beta, Eigen::Index multiplicity) {
    DimVector a(model.b_hat().order(), 0);
    a.at(beta) = multiplicity;
    return free_object(model.khat_on_bhat(), a, model.lambda());
}

RoundTripReport check_round_trips(const TorusModel& model, const SheafOnXhatLambda& m) {
    RoundTripReport rep;
    const ModuleOnXLambda v = fm_lambda(model, m);
    const InverseImage n = fm_lambda_inverse(model, v);
    const Blocks eta = unit_map(model, m, n);
    rep.unit_morphism_defect = morphism_defect(m, n.object, eta);
    for (const auto& blk : eta) rep.unit_inverse_defect = std::max(rep.unit_inverse_defect, inverse_defect(blk));
    // the other composite, on the image module
    const InverseImage n2 = fm_lambda_inverse(model, v);
    const ModuleOnXLambda back = fm_lambda(model, n2.object);
    const CMatrix eps = counit_map(model, v, n2);
    rep.counit_morphism_defect = module_morphism_defect(model, back, v, eps);
    rep.counit_inverse_defect = inverse_defect(eps);
    return rep;
}

FactorizationReport verify_factorization(const TorusModel& model, const SheafOnXhatLambda& obj) {
    require_sheaf(model, obj);
    const auto& kh = model.k_hat();
    FactorizationReport rep;
    rep.direct = fm_lambda(model, obj);
    rep.equivariant.rep = fm_ab(model, obj.dims);
    // m_k = a_k o fm_ab(rho_k), where rho_k : M -> R_k^* M is a graded map
    for (std::size_t k = 0; k < kh.order(); ++k) {
        const DimVector pulled = pullback_dims(model, obj.dims, model.embed(k));
        Blocks graded(obj.dims.size());
        for (std::size_t beta = 0; beta < obj.dims.size(); ++beta) graded[beta] = obj.rho[k][beta];
        rep.equivariant.m.push_back(fm_ab_equivariance_iso(model, obj.dims, k) * fm_ab_morphism(obj.dims, pulled, graded));
    }
    const SectionLayout l = section_layout(model, obj.dims);
    const auto off = offsets(obj.dims);
    rep.comparison = CMatrix::Zero(l.dim, off.back());
    for (std::size_t beta = 0; beta < obj.dims.size(); ++beta)
        for (Eigen::Index c = 0; c < obj.dims[beta]; ++c)
            rep.comparison.col(off[beta] + c) = section_through(model, obj, l, beta, 0, CVector::Unit(obj.dims[beta], c));
    rep.deviation = std::max({module_defect(model, rep.equivariant), module_defect(model, rep.direct),
                              module_morphism_defect(model, rep.equivariant, rep.direct, rep.comparison),
                              inverse_defect(rep.comparison)});
    return rep;
}

StarOnPointsReport star_on_points_check(const DualPairData& data, const CVector& phi, const CVector& psi) {
    const auto& k = data.k_hat; // K has the same invariant factors
    const std::size_t n = k.order();
    if (static_cast<std::size_t>(phi.size()) != n || static_cast<std::size_t>(psi.size()) != n)
        throw std::invalid_argument("functions must live on a free orbit of K");
    const double inv = 1.0 / static_cast<double>(n);
    StarOnPointsReport rep;
    rep.points_product = CVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        Complex s = 0.0;
        for (std::size_t k1 = 0; k1 < n; ++k1)
            for (std::size_t k2 = 0; k2 < n; ++k2)
                s += data.omega(k1, k2).embed() * phi(static_cast<Eigen::Index>(k.add_index(x, k1))) * psi(static_cast<Eigen::Index>(k.add_index(x, k2)));
        rep.points_product(static_cast<Eigen::Index>(x)) = inv * s;
    }
    // Fourier pieces along Khat: phi = sum_a phi_a a(.)
    const auto elems = k.elements();
    auto chi = [&](std::size_t a, std::size_t x) { return k.pairing(elems[a], elems[x]).embed(); };
    CVector pa = CVector::Zero(static_cast<Eigen::Index>(n)), pb = CVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t x = 0; x < n; ++x) {
            pa(static_cast<Eigen::Index>(a)) += inv * std::conj(chi(a, x)) * phi(static_cast<Eigen::Index>(x));
            pb(static_cast<Eigen::Index>(a)) += inv * std::conj(chi(a, x)) * psi(static_cast<Eigen::Index>(x));
        }
    rep.star_product = CVector::Zero(static_cast<Eigen::Index>(n));
    rep.star_product_inverse = CVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const Complex w = pa(static_cast<Eigen::Index>(a)) * pb(static_cast<Eigen::Index>(b));
            const std::size_t ab = k.add_index(a, b);
            for (std::size_t x = 0; x < n; ++x) {
                rep.star_product(static_cast<Eigen::Index>(x)) += data.lambda_k(a, b).embed() * w * chi(ab, x);
                rep.star_product_inverse(static_cast<Eigen::Index>(x)) += (-data.lambda_k(a, b)).embed() * w * chi(ab, x);
            }
        }
    rep.deviation = max_abs(rep.points_product - rep.star_product);
    rep.deviation_inverse = max_abs(rep.points_product - rep.star_product_inverse);
    return rep;
}

SheafOnXhatLambda random_sheaf(const TorusModel& model, std::mt19937_64& rng, Eigen::Index max_dim) {
    const auto nk = static_cast<Eigen::Index>(model.k_hat().order());
    const Eigen::Index max_orbits = std::max<Eigen::Index>(1, std::min<Eigen::Index>(3, max_dim / nk));
    std::uniform_int_distribution<Eigen::Index> count(1, max_orbits);
    std::uniform_int_distribution<std::size_t> point(0, model.b_hat().order() - 1);
    const Eigen::Index orbits = count(rng);
    DimVector a(model.b_hat().order(), 0);
    for (Eigen::Index i = 0; i < orbits; ++i) a[point(rng)] += 1;
    SheafOnXhatLambda obj = free_object(model.khat_on_bhat(), a, model.lambda());
    Blocks p;
    for (auto d : obj.dims) p.push_back(random_invertible(d, rng));
    return change_basis(obj, p);
}

Morphism random_morphism(const SheafOnXhatLambda& a, const SheafOnXhatLambda& b, std::mt19937_64& rng) {
    const auto basis = hom_space(a, b);
    Morphism chi(a.dims.size());
    for (std::size_t s = 0; s < a.dims.size(); ++s) chi[s] = CMatrix::Zero(b.dims[s], a.dims[s]);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& m : basis) {
        const double re = u(rng);
        const double im = u(rng);
        for (std::size_t s = 0; s < chi.size(); ++s) chi[s] += Complex(re, im) * m[s];
    }
    return chi;
}

} // namespace nctorus
