#include "nctorus/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace nctorus {

namespace {

// Square (or wide) matrix with the same kernel as a, so the SVD stays small.
CMatrix compress_rows(const CMatrix& a) {
    if (a.rows() <= a.cols()) return a;
    Eigen::HouseholderQR<CMatrix> qr(a);
    CMatrix r = qr.matrixQR().topRows(a.cols());
    return r.triangularView<Eigen::Upper>();
}

} // namespace

CMatrix nullspace(const CMatrix& a, double tol) {
    const Eigen::Index n = a.cols();
    if (n == 0) return CMatrix(0, 0);
    if (a.rows() == 0) return CMatrix::Identity(n, n);
    const CMatrix r = compress_rows(a);
    const auto kernel = [&](const auto& svd) -> CMatrix {
        const auto& s = svd.singularValues();
        const double cutoff = tol * std::max(1.0, s.size() ? s(0) : 0.0);
        Eigen::Index rank = 0;
        while (rank < s.size() && s(rank) > cutoff) ++rank;
        return svd.matrixV().rightCols(n - rank);
    };
    if (n <= 32) return kernel(Eigen::JacobiSVD<CMatrix>(r, Eigen::ComputeFullV));
    // Larger systems: the kernel is the orthogonal complement of the row space,
    // read off a rank-revealing QR of the adjoint.
    const CMatrix adj = r.adjoint();
    Eigen::ColPivHouseholderQR<CMatrix> qr(adj);
    const auto diag = qr.matrixQR().diagonal().cwiseAbs();
    const double cutoff = tol * std::max(1.0, diag.size() ? diag(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < diag.size() && diag(rank) > cutoff) ++rank;
    const CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    return q.rightCols(n - rank);
}

Eigen::Index numeric_rank(const CMatrix& a, double tol) {
    if (a.size() == 0) return 0;
    return a.cols() - nullspace(a, tol).cols();
}

CMatrix column_space(const CMatrix& a, double tol) {
    if (a.size() == 0) return CMatrix(a.rows(), 0);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double cutoff = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;
    return svd.matrixU().leftCols(rank);
}

double max_abs(const CMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = u(rng);
            const double im = u(rng);
            m(i, j) = {re, im};
        }
    return m;
}

CMatrix random_invertible(Eigen::Index n, std::mt19937_64& rng) {
    CMatrix m = random_matrix(n, n, rng);
    // diagonal dominance keeps the condition number small
    m += CMatrix::Identity(n, n) * static_cast<double>(2 * n);
    return m;
}

} // namespace nctorus

namespace nctorus {

std::vector<CMatrix> intertwiners(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b, double tol) {
    if (a.size() != b.size()) throw std::invalid_argument("intertwiner systems need matching generator lists");
    if (a.empty()) throw std::invalid_argument("intertwiner systems need at least one generator");
    const Eigen::Index n = a.front().rows(), m = b.front().rows();
    const Eigen::Index unknowns = n * m;
    std::vector<CMatrix> out;
    if (unknowns == 0) return out;
    // vec(P a - b P) = (a^T (x) I_m - I_n (x) b) vec(P), column-major vec
    CMatrix eq(static_cast<Eigen::Index>(a.size()) * unknowns, unknowns);
    eq.setZero();
    for (std::size_t g = 0; g < a.size(); ++g) {
        if (a[g].rows() != n || a[g].cols() != n || b[g].rows() != m || b[g].cols() != m)
            throw std::invalid_argument("intertwiner generators have inconsistent sizes");
        auto blk = eq.middleRows(static_cast<Eigen::Index>(g) * unknowns, unknowns);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const std::complex<double> c = a[g](j, i);
                if (c == std::complex<double>(0.0)) continue;
                for (Eigen::Index r = 0; r < m; ++r) blk(i * m + r, j * m + r) += c;
            }
        for (Eigen::Index i = 0; i < n; ++i) blk.block(i * m, i * m, m, m) -= b[g];
    }
    const CMatrix ker = nullspace(eq, tol);
    for (Eigen::Index c = 0; c < ker.cols(); ++c) out.push_back(ker.col(c).reshaped(m, n));
    return out;
}

} // namespace nctorus
