#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace nctorus {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Orthonormal columns spanning {x : a x = 0}; singular values below
/// tol * max(1, largest) count as zero.
CMatrix nullspace(const CMatrix& a, double tol = 1e-9);
Eigen::Index numeric_rank(const CMatrix& a, double tol = 1e-9);
/// Orthonormal basis of the column space.
CMatrix column_space(const CMatrix& a, double tol = 1e-9);

/// Largest absolute entry (0 for empty matrices).
double max_abs(const CMatrix& a);

/// Entries with real and imaginary parts uniform in [-1, 1].
CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
/// A random matrix shifted until it is comfortably invertible.
CMatrix random_invertible(Eigen::Index n, std::mt19937_64& rng);

} // namespace nctorus

namespace nctorus {

/// Basis of {P : P a_i = b_i P for all i}; P maps the a-space to the b-space.
std::vector<CMatrix> intertwiners(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b, double tol = 1e-9);

} // namespace nctorus
