#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>

#include "stheat/meshes.hpp"

namespace stheat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// The small time/space matrices every global operator factors through.
/// All P1 integrals are closed-form, so entries are exact up to one
/// rounding each.
struct FactorMatrices {
    Matrix Ms;  ///< n x n space mass,        <s_j, s_i>
    Matrix Ks;  ///< n x n space stiffness,   <s'_j, s'_i>
    Matrix At;  ///< m x m time stiffness,    <psi'_j, psi'_i>
    Matrix Ut;  ///< m x m time mass,         <psi_j, psi_i>
    Matrix Gt;  ///< m x m time drift,        Gt(p,q) = <psi'_q, psi_p>
    Vector y_T; ///< endpoint values psi_i(T); a single 1 in the last slot
    SpaceMesh space;
    TimeMesh time;
};

struct assembly_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Global space-time operators, kept in Kronecker-factored form.
/// Lexicographic ordering throughout: global index = time_index * n +
/// space_index (0-based), i.e. the space index runs fastest.
///
/// The seven operators are
///   A = At (x) Ms,   M = Ut (x) Ks,   B = Gt^T (x) Ks,
///   G = Gt (x) Ms,   U = Ut (x) Ms,   W = At (x) Ks,
///   Y = (y_T y_T^T) (x) Ms = Yhalf Yhalf^T with Yhalf = y_T (x) Ls.
struct GlobalSystem {
    double nu = 0.0;
    FactorMatrices factors;

    // Lower Cholesky factors of the four positive definite factor
    // matrices; Kronecker products of these give the square roots of
    // A, M, U, W (e.g. A^{1/2} = Lt_A (x) Ls_M).
    Matrix Lt_A, Lt_U, Ls_M, Ls_K;

    int m() const { return factors.time.m; }
    int n() const { return factors.space.n; }
    Eigen::Index dim() const { return Eigen::Index(m()) * n(); }

    // Dense expansions. Only norms/solver paths that genuinely need a
    // full matrix call these; sweeps stay factored.
    Matrix dense_A() const;
    Matrix dense_M() const;
    Matrix dense_B() const;
    Matrix dense_G() const;
    Matrix dense_U() const;
    Matrix dense_W() const;
    Matrix dense_Yhalf() const;               ///< mn x n rank factor of Y
    Matrix dense_K() const;                   ///< A + nu * B
    Matrix dense_K_hat() const;               ///< G + nu * M
    Matrix dense_half(char which) const;      ///< 'A','M','U','W' -> lower Cholesky of that operator

    // Factored matrix-vector products, O(mn(m+n)) instead of O((mn)^2).
    Vector apply_A(const Vector& x) const;
    Vector apply_M(const Vector& x) const;
    Vector apply_U(const Vector& x) const;
    Vector apply_W(const Vector& x) const;
    Vector apply_Y(const Vector& x) const;
};

/// Exact elemental assembly of the factor matrices: per-cell stiffness
/// (1/len)[[1,-1],[-1,1]], mass (len/6)[[2,1],[1,2]] and drift
/// (1/2)[[-1,1],[-1,1]], with the t_0 row/column dropped in time and
/// boundary rows/columns dropped in space.
FactorMatrices elemental_matrices(const SpaceMesh& space, const TimeMesh& time);

/// Wrap factors into the global Kronecker system and take the factor
/// Choleskys. Throws assembly_error if any factor fails to be positive
/// definite (which would mean the assembly itself is broken).
GlobalSystem build_global_system(const FactorMatrices& factors, double nu);

/// Dense global matrices recomputed from the bilinear-form definitions
/// by per-cell tensor Gauss quadrature. Independent of the elemental
/// closed forms, so it serves as the assembly oracle in tests.
struct DenseSystem {
    Matrix A, M, B, G, U, W, Y, K;  ///< K = A + nu * B
};
DenseSystem brute_force_assembly(const SpaceMesh& space, const TimeMesh& time,
                                 double nu, int quad_order = 5);

/// Kronecker product, dense. Row-major pairing consistent with the
/// global index convention above.
Matrix kron(const Matrix& T_part, const Matrix& S_part);

/// (T (x) S) x without expanding the product.
Vector kron_apply(const Matrix& T_part, const Matrix& S_part, const Vector& x);

/// Plain-text coordinate triplets "row col value", one line per entry,
/// suitable for diffing and external inspection.
void write_coordinate_triplets(std::ostream& os, const Matrix& mat);

}  // namespace stheat
