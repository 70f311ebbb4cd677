#include "nctorus/cocycle.hpp"

#include <string>

namespace nctorus {

BilinearCocycle::BilinearCocycle(int g, std::int64_t order, IntMatrix matrix)
    : g_(g), order_(order), matrix_(std::move(matrix)) {
    if (g < 0) throw std::invalid_argument("negative dimension");
    if (order < 1) throw std::invalid_argument("order of root of unity must be >= 1");
    if (matrix_.rows() != g || matrix_.cols() != g)
        throw std::invalid_argument("cocycle matrix must be " + std::to_string(g) + "x" + std::to_string(g));
    matrix_ = reduce_mod(matrix_, order_);
}

BilinearCocycle BilinearCocycle::trivial(int g, std::int64_t order) {
    return BilinearCocycle(g, order, IntMatrix::Zero(g, g));
}

Phase BilinearCocycle::operator()(const Exponent& s, const Exponent& t) const {
    if (static_cast<int>(s.size()) != g_ || static_cast<int>(t.size()) != g_)
        throw std::invalid_argument("exponent dimension does not match cocycle dimension");
    __int128 acc = 0;
    for (int i = 0; i < g_; ++i) {
        if (s[i] == 0) continue;
        __int128 row = 0;
        for (int j = 0; j < g_; ++j) row += static_cast<__int128>(matrix_(i, j)) * t[j];
        acc += row * s[i];
    }
    return Phase(static_cast<std::int64_t>(acc % order_), order_);
}

Cochain2::Cochain2(const BilinearCocycle& lambda)
    : g_(lambda.dim()), fn_([lambda](const Exponent& s, const Exponent& t) { return lambda(s, t); }) {}

Phase Cochain2::operator()(const Exponent& s, const Exponent& t) const {
    if (static_cast<int>(s.size()) != g_ || static_cast<int>(t.size()) != g_)
        throw std::invalid_argument("exponent dimension does not match cochain dimension");
    return fn_(s, t);
}

CochainTable::CochainTable(Box window, std::map<Exponent, Phase> values)
    : window_(std::move(window)), values_(std::move(values)) {
    if (values_.size() != window_.size()) throw std::invalid_argument("cochain table is not total on its window");
    for (const auto& [t, v] : values_)
        if (!window_.contains(t)) throw std::invalid_argument("cochain table entry outside window");
}

CochainTable CochainTable::tabulate(const Box& window, const std::function<Phase(const Exponent&)>& fn) {
    std::map<Exponent, Phase> values;
    for (auto& t : window.points()) values.emplace(t, fn(t));
    return CochainTable(window, std::move(values));
}

CochainTable CochainTable::trivial(const Box& window) {
    return tabulate(window, [](const Exponent&) { return Phase(); });
}

Phase CochainTable::operator()(const Exponent& t) const {
    auto it = values_.find(t);
    if (it == values_.end()) throw OutOfWindow("cochain evaluated outside its window at " + to_string(t));
    return it->second;
}

CochainTable CochainTable::inverse() const {
    std::map<Exponent, Phase> values;
    for (const auto& [t, v] : values_) values.emplace(t, -v);
    return CochainTable(window_, std::move(values));
}

CocycleCheck check_cocycle(const Cochain2& lambda, const Box& window) {
    if (window.dim() != lambda.dim()) throw std::invalid_argument("window dimension does not match cochain");
    CocycleCheck result;
    const auto pts = window.points();
    for (const auto& t1 : pts)
        for (const auto& t2 : pts)
            for (const auto& t3 : pts) {
                Phase defect;
                try {
                    defect = lambda(t2, t3) - lambda(t1 + t2, t3) + lambda(t1, t2 + t3) - lambda(t1, t2);
                } catch (const OutOfWindow&) {
                    continue;
                }
                ++result.triples_checked;
                if (!defect.is_zero() && result.ok) {
                    result.ok = false;
                    result.witness = std::array<Exponent, 3>{t1, t2, t3};
                    result.defect = defect;
                }
            }
    if (result.triples_checked == 0) throw std::invalid_argument("window too small to evaluate any triple");
    return result;
}

CocycleCheck check_cocycle(const BilinearCocycle& lambda) {
    CocycleCheck result;
    const int g = lambda.dim();
    if (g == 0) {
        result.triples_checked = 1;
        return result;
    }
    Cochain2 c(lambda);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            for (int k = 0; k < g; ++k) {
                const auto t1 = unit_vector(g, i), t2 = unit_vector(g, j), t3 = unit_vector(g, k);
                const Phase defect = c(t2, t3) - c(t1 + t2, t3) + c(t1, t2 + t3) - c(t1, t2);
                ++result.triples_checked;
                if (!defect.is_zero() && result.ok) {
                    result.ok = false;
                    result.witness = std::array<Exponent, 3>{t1, t2, t3};
                    result.defect = defect;
                }
            }
    return result;
}

IntMatrix antisymmetrize(const BilinearCocycle& lambda) {
    return reduce_mod(lambda.matrix() - lambda.matrix().transpose(), lambda.order());
}

Cochain2 coboundary(const CochainTable& alpha, const Cochain2& lambda) {
    if (alpha.dim() != lambda.dim()) throw std::invalid_argument("cochain dimension mismatch");
    return Cochain2(lambda.dim(), [alpha, lambda](const Exponent& s, const Exponent& t) {
        return lambda(s, t) + alpha(s) + alpha(t) - alpha(s + t);
    });
}

CochainTable bounding_cochain(const IntMatrix& symmetric, std::int64_t order, const Box& window) {
    const auto g = symmetric.rows();
    if (symmetric.cols() != g || symmetric != symmetric.transpose())
        throw std::invalid_argument("bounding_cochain needs a symmetric matrix");
    if (window.dim() != g) throw std::invalid_argument("window dimension does not match matrix");
    return CochainTable::tabulate(window, [&](const Exponent& t) {
        __int128 q = 0;
        for (Eigen::Index i = 0; i < g; ++i) {
            for (Eigen::Index j = 0; j < g; ++j) q += static_cast<__int128>(symmetric(i, j)) * t[i] * t[j];
            q -= static_cast<__int128>(symmetric(i, i)) * t[i];
        }
        // t^T S t and sum S_ii t_i have the same parity
        const std::int64_t modulus = 2 * order;
        return Phase(static_cast<std::int64_t>(q % modulus), modulus);
    });
}

bool cohomologous(const BilinearCocycle& a, const BilinearCocycle& b) {
    if (a.dim() != b.dim() || a.order() != b.order()) throw std::invalid_argument("cocycles live on different data");
    return antisymmetrize(a) == antisymmetrize(b);
}

std::optional<CochainTable> cohomology_witness(const BilinearCocycle& a, const BilinearCocycle& b, const Box& window) {
    if (!cohomologous(a, b)) return std::nullopt;
    // D = M_a - M_b is symmetric mod N; S is its symmetric lift, and
    // coboundary(bounding_cochain(S)) = zeta^{-s^T S t} turns a into b.
    const IntMatrix d = reduce_mod(a.matrix() - b.matrix(), a.order());
    IntMatrix s = d;
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) s(i, j) = d(j, i);
    return bounding_cochain(s, a.order(), window);
}

} // namespace nctorus
