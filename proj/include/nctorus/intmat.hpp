#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace nctorus {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

std::int64_t floor_mod(std::int64_t a, std::int64_t n);
IntMatrix reduce_mod(const IntMatrix& a, std::int64_t n);

/// Smith normal form with explicit unimodular transforms: U * A * V == D,
/// D diagonal (rectangular), d_1 | d_2 | ... and d_i >= 0.
struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Column Hermite normal form of a full-rank square lattice basis:
/// the returned H * W (W unimodular) is lower triangular with positive
/// diagonal and 0 <= H(i,j) < H(i,i) for j < i.
IntMatrix column_hermite_form(const IntMatrix& basis);

std::int64_t determinant(const IntMatrix& a);
/// Inverse of a unimodular matrix.
IntMatrix unimodular_inverse(const IntMatrix& u);

std::string to_string(const IntMatrix& m);

} // namespace nctorus
