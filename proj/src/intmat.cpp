#include "nctorus/intmat.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace nctorus {

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

IntMatrix reduce_mod(const IntMatrix& a, std::int64_t n) {
    IntMatrix r = a;
    for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = floor_mod(r.data()[i], n);
    return r;
}

namespace {

void swap_rows(IntMatrix& m, Eigen::Index i, Eigen::Index j) {
    if (i != j) m.row(i).swap(m.row(j));
}
void swap_cols(IntMatrix& m, Eigen::Index i, Eigen::Index j) {
    if (i != j) m.col(i).swap(m.col(j));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

IntMatrix hermite_impl(const IntMatrix& basis, IntMatrix* transform) {
    const Eigen::Index n = basis.rows();
    if (basis.cols() != n) throw std::invalid_argument("hermite form needs a square basis");
    IntMatrix h = basis;
    IntMatrix w = IntMatrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // gcd-eliminate row i over columns i..n-1
        while (true) {
            Eigen::Index piv = -1;
            for (Eigen::Index j = i; j < n; ++j)
                if (h(i, j) != 0 && (piv < 0 || std::llabs(h(i, j)) < std::llabs(h(i, piv)))) piv = j;
            if (piv < 0) throw std::domain_error("lattice basis is rank deficient");
            swap_cols(h, i, piv);
            swap_cols(w, i, piv);
            bool clean = true;
            for (Eigen::Index j = i + 1; j < n; ++j) {
                if (h(i, j) == 0) continue;
                const std::int64_t q = h(i, j) / h(i, i);
                h.col(j) -= q * h.col(i);
                w.col(j) -= q * w.col(i);
                if (h(i, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (h(i, i) < 0) {
            h.col(i) = -h.col(i);
            w.col(i) = -w.col(i);
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            const std::int64_t q = floor_div(h(i, j), h(i, i));
            if (q != 0) {
                h.col(j) -= q * h.col(i);
                w.col(j) -= q * w.col(i);
            }
        }
    }
    if (transform) *transform = std::move(w);
    return h;
}

} // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
    const Eigen::Index m = a.rows(), n = a.cols();
    IntMatrix d = a;
    IntMatrix u = IntMatrix::Identity(m, m);
    IntMatrix v = IntMatrix::Identity(n, n);
    const Eigen::Index r = std::min(m, n);

    for (Eigen::Index t = 0; t < r; ++t) {
        bool empty = false;
        while (true) {
            Eigen::Index pi = -1, pj = -1;
            for (Eigen::Index i = t; i < m; ++i)
                for (Eigen::Index j = t; j < n; ++j)
                    if (d(i, j) != 0 && (pi < 0 || std::llabs(d(i, j)) < std::llabs(d(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) {
                empty = true;
                break;
            }
            swap_rows(d, t, pi);
            swap_rows(u, t, pi);
            swap_cols(d, t, pj);
            swap_cols(v, t, pj);

            bool clean = true;
            for (Eigen::Index i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                const std::int64_t q = d(i, t) / d(t, t);
                d.row(i) -= q * d.row(t);
                u.row(i) -= q * u.row(t);
                if (d(i, t) != 0) clean = false;
            }
            for (Eigen::Index j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                const std::int64_t q = d(t, j) / d(t, t);
                d.col(j) -= q * d.col(t);
                v.col(j) -= q * v.col(t);
                if (d(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // divisibility: pull an offending row into row t and retry
            Eigen::Index bad = -1;
            for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
                for (Eigen::Index j = t + 1; j < n; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            d.row(t) += d.row(bad);
            u.row(t) += u.row(bad);
        }
        if (empty) break;
        if (d(t, t) < 0) {
            d.row(t) = -d.row(t);
            u.row(t) = -u.row(t);
        }
    }
    return {std::move(u), std::move(d), std::move(v)};
}

IntMatrix column_hermite_form(const IntMatrix& basis) { return hermite_impl(basis, nullptr); }

std::int64_t determinant(const IntMatrix& a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("determinant of non-square matrix");
    if (n == 0) return 1;
    // Bareiss fraction-free elimination
    Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> m = a.cast<__int128>();
    __int128 prev = 1;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            Eigen::Index s = k + 1;
            while (s < n && m(s, k) == 0) ++s;
            if (s == n) return 0;
            m.row(k).swap(m.row(s));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * static_cast<std::int64_t>(m(n - 1, n - 1));
}

IntMatrix unimodular_inverse(const IntMatrix& u) {
    IntMatrix w;
    const IntMatrix h = hermite_impl(u, &w);
    if (h != IntMatrix::Identity(u.rows(), u.cols())) throw std::domain_error("matrix is not unimodular");
    return w;
}

std::string to_string(const IntMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

} // namespace nctorus
