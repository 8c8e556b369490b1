#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stochmech::linalg {

/// Symmetric tridiagonal matrix: `diag` has n entries, `off` has n-1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }
};

/// Number of eigenvalues strictly below `x` (Sturm sequence via LDL^T pivots).
std::size_t sturm_count(const SymTridiagonal& t, double x);

/// Eigenvalues with indices [first, first+count) in ascending order, by bisection.
std::vector<double> eigenvalues(const SymTridiagonal& t, std::size_t first, std::size_t count,
                                double abs_tol = 0.0);

/// Unit-norm eigenvector (Euclidean) for an accurately known eigenvalue.
std::vector<double> inverse_iteration(const SymTridiagonal& t, double lambda);

struct EigenPairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;  ///< Euclidean-orthonormal
};

/// Lowest `count` eigenpairs. Vectors of clustered eigenvalues are
/// re-orthogonalised.
EigenPairs lowest_eigenpairs(const SymTridiagonal& t, std::size_t count);

/// Solves a general tridiagonal system (sub: n-1, diag: n, sup: n-1) by the
/// Thomas algorithm. Intended for diagonally dominant matrices.
std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs);

}  // namespace stochmech::linalg
