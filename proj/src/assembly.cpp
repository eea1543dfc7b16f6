#include "stheat/assembly.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <ostream>

#include "stheat/quadrature.hpp"

namespace stheat {

namespace {

// Assemble the three 1D elemental stencils over a uniform mesh with
// n_cells cells of width len, keeping the rows/columns listed in
// `keep` (0-based node indices into 0..n_cells).
struct Stencils {
    Matrix stiff, mass, drift;
};

Stencils assemble_1d(int n_cells, double len, int first_kept, int last_kept) {
    const int nk = last_kept - first_kept + 1;
    Matrix stiff = Matrix::Zero(nk, nk);
    Matrix mass = Matrix::Zero(nk, nk);
    Matrix drift = Matrix::Zero(nk, nk);
    const double se[2][2] = {{1.0 / len, -1.0 / len}, {-1.0 / len, 1.0 / len}};
    const double me[2][2] = {{len / 3.0, len / 6.0}, {len / 6.0, len / 3.0}};
    // drift(i,j) = <phi'_j, phi_i> on one cell
    const double de[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};
    for (int c = 0; c < n_cells; ++c) {
        const int nodes[2] = {c, c + 1};
        for (int a = 0; a < 2; ++a) {
            const int i = nodes[a];
            if (i < first_kept || i > last_kept) continue;
            for (int b = 0; b < 2; ++b) {
                const int j = nodes[b];
                if (j < first_kept || j > last_kept) continue;
                stiff(i - first_kept, j - first_kept) += se[a][b];
                mass(i - first_kept, j - first_kept) += me[a][b];
                drift(i - first_kept, j - first_kept) += de[a][b];
            }
        }
    }
    return {stiff, mass, drift};
}

}  // namespace

FactorMatrices elemental_matrices(const SpaceMesh& space, const TimeMesh& time) {
    // space: drop both boundary nodes; time: drop only t_0
    auto s = assemble_1d(space.n_cells, space.h, 1, space.n_cells - 1);
    auto t = assemble_1d(time.m_cells, time.k, 1, time.m_cells);
    FactorMatrices f;
    f.Ms = s.mass;
    f.Ks = s.stiff;
    f.At = t.stiff;
    f.Ut = t.mass;
    f.Gt = t.drift;
    f.y_T = Vector::Zero(time.m);
    f.y_T(time.m - 1) = 1.0;  // hat at t_m is the only one alive at T
    f.space = space;
    f.time = time;
    return f;
}

namespace {

Matrix lower_cholesky(const Matrix& S, const char* name) {
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success)
        throw assembly_error(std::string("factor matrix not positive definite: ") + name);
    return llt.matrixL();
}

}  // namespace

GlobalSystem build_global_system(const FactorMatrices& factors, double nu) {
    if (!(nu > 0.0)) throw assembly_error("diffusion coefficient nu must be positive");
    GlobalSystem sys;
    sys.nu = nu;
    sys.factors = factors;
    sys.Lt_A = lower_cholesky(factors.At, "At");
    sys.Lt_U = lower_cholesky(factors.Ut, "Ut");
    sys.Ls_M = lower_cholesky(factors.Ms, "Ms");
    sys.Ls_K = lower_cholesky(factors.Ks, "Ks");
    return sys;
}

Matrix kron(const Matrix& T_part, const Matrix& S_part) {
    Matrix out(T_part.rows() * S_part.rows(), T_part.cols() * S_part.cols());
    for (Eigen::Index p = 0; p < T_part.rows(); ++p)
        for (Eigen::Index q = 0; q < T_part.cols(); ++q)
            out.block(p * S_part.rows(), q * S_part.cols(), S_part.rows(), S_part.cols()) =
                T_part(p, q) * S_part;
    return out;
}

Vector kron_apply(const Matrix& T_part, const Matrix& S_part, const Vector& x) {
    // reshape x into n x m (columns are time slices), then (T (x) S) x
    // is vec(S * X * T^T) in the same ordering
    const Eigen::Index n = S_part.cols(), m = T_part.cols();
    Eigen::Map<const Matrix> X(x.data(), n, m);
    Matrix Y = S_part * X * T_part.transpose();
    return Eigen::Map<Vector>(Y.data(), Y.size());
}

Matrix GlobalSystem::dense_A() const { return kron(factors.At, factors.Ms); }
Matrix GlobalSystem::dense_M() const { return kron(factors.Ut, factors.Ks); }
Matrix GlobalSystem::dense_B() const { return kron(factors.Gt.transpose(), factors.Ks); }
Matrix GlobalSystem::dense_G() const { return kron(factors.Gt, factors.Ms); }
Matrix GlobalSystem::dense_U() const { return kron(factors.Ut, factors.Ms); }
Matrix GlobalSystem::dense_W() const { return kron(factors.At, factors.Ks); }
Matrix GlobalSystem::dense_K() const { return dense_A() + nu * dense_B(); }
Matrix GlobalSystem::dense_K_hat() const { return dense_G() + nu * dense_M(); }

Matrix GlobalSystem::dense_Yhalf() const {
    Matrix out = Matrix::Zero(dim(), n());
    for (int p = 0; p < m(); ++p)
        if (factors.y_T(p) != 0.0)
            out.block(Eigen::Index(p) * n(), 0, n(), n()) = factors.y_T(p) * Ls_M;
    return out;
}

Matrix GlobalSystem::dense_half(char which) const {
    switch (which) {
        case 'A': return kron(Lt_A, Ls_M);
        case 'M': return kron(Lt_U, Ls_K);
        case 'U': return kron(Lt_U, Ls_M);
        case 'W': return kron(Lt_A, Ls_K);
        default: throw assembly_error("dense_half: expected one of A, M, U, W");
    }
}

Vector GlobalSystem::apply_A(const Vector& x) const { return kron_apply(factors.At, factors.Ms, x); }
Vector GlobalSystem::apply_M(const Vector& x) const { return kron_apply(factors.Ut, factors.Ks, x); }
Vector GlobalSystem::apply_U(const Vector& x) const { return kron_apply(factors.Ut, factors.Ms, x); }
Vector GlobalSystem::apply_W(const Vector& x) const { return kron_apply(factors.At, factors.Ks, x); }

Vector GlobalSystem::apply_Y(const Vector& x) const {
    // Y = (y_T y_T^T) (x) Ms: weight the time slices by y_T twice
    const int nn = n(), mm = m();
    Eigen::Map<const Matrix> X(x.data(), nn, mm);
    Vector slice = Vector::Zero(nn);
    for (int p = 0; p < mm; ++p) slice += factors.y_T(p) * X.col(p);
    slice = factors.Ms * slice;
    Vector out = Vector::Zero(x.size());
    Eigen::Map<Matrix> O(out.data(), nn, mm);
    for (int p = 0; p < mm; ++p) O.col(p) = factors.y_T(p) * slice;
    return out;
}

namespace {

// P1 shape values / derivatives on one cell [left, left+len] at the
// mapped Gauss point xi in [0,1]; dof 0 is the left node's hat.
struct Shape {
    double v[2], d[2];
};
inline Shape shape_at(double xi, double len) {
    return {{1.0 - xi, xi}, {-1.0 / len, 1.0 / len}};
}

}  // namespace

DenseSystem brute_force_assembly(const SpaceMesh& space, const TimeMesh& time,
                                 double nu, int quad_order) {
    const Eigen::Index mn = Eigen::Index(space.n) * time.m;
    if (mn > 400)
        throw assembly_error("brute_force_assembly is a small-instance oracle (mn <= 400)");
    const auto rule = gauss_rule(quad_order);
    const int n = space.n, m = time.m;
    const double h = space.h, k = time.k;

    DenseSystem d;
    for (Matrix* M : {&d.A, &d.M, &d.B, &d.G, &d.U, &d.W, &d.Y})
        *M = Matrix::Zero(mn, mn);

    // Space dof s in 1..n lives on cells s-1 and s; time dof p in 1..m
    // on cells p-1 and p (cell indices 0-based, time dof 0 excluded).
    auto global = [n](int p, int s) { return Eigen::Index(p - 1) * n + (s - 1); };

    for (int tc = 0; tc < time.m_cells; ++tc) {
        for (size_t qa = 0; qa < rule.nodes.size(); ++qa) {
            const auto ts = shape_at(rule.nodes[qa], k);
            const double wt = rule.weights[qa] * k;
            const int tdof[2] = {tc, tc + 1};
            for (int sc = 0; sc < space.n_cells; ++sc) {
                for (size_t qb = 0; qb < rule.nodes.size(); ++qb) {
                    const auto ss = shape_at(rule.nodes[qb], h);
                    const double w = wt * rule.weights[qb] * h;
                    const int sdof[2] = {sc, sc + 1};
                    for (int ia = 0; ia < 2; ++ia) {
                        const int pi = tdof[ia];
                        if (pi < 1) continue;
                        for (int ib = 0; ib < 2; ++ib) {
                            const int si = sdof[ib];
                            if (si < 1 || si > n) continue;
                            const Eigen::Index gi = global(pi, si);
                            for (int ja = 0; ja < 2; ++ja) {
                                const int pj = tdof[ja];
                                if (pj < 1) continue;
                                for (int jb = 0; jb < 2; ++jb) {
                                    const int sj = sdof[jb];
                                    if (sj < 1 || sj > n) continue;
                                    const Eigen::Index gj = global(pj, sj);
                                    const double ti = ts.v[ia], dti = ts.d[ia];
                                    const double tj = ts.v[ja], dtj = ts.d[ja];
                                    const double xi = ss.v[ib], dxi = ss.d[ib];
                                    const double xj = ss.v[jb], dxj = ss.d[jb];
                                    d.A(gi, gj) += w * dtj * xj * dti * xi;   // <dt u, dt v>
                                    d.M(gi, gj) += w * tj * dxj * ti * dxi;   // <grad u, grad v>
                                    d.B(gi, gj) += w * tj * dxj * dti * dxi;  // <grad u, dt grad v>
                                    d.G(gi, gj) += w * dtj * xj * ti * xi;    // <dt u, v>
                                    d.U(gi, gj) += w * tj * xj * ti * xi;     // <u, v>
                                    d.W(gi, gj) += w * dtj * dxj * dti * dxi; // <dt grad u, dt grad v>
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Y: final-time slice mass, int_Omega u(x,T) v(x,T) dx. Only the
    // last time dof is nonzero at T.
    for (int sc = 0; sc < space.n_cells; ++sc) {
        for (size_t qb = 0; qb < rule.nodes.size(); ++qb) {
            const auto ss = shape_at(rule.nodes[qb], h);
            const double w = rule.weights[qb] * h;
            const int sdof[2] = {sc, sc + 1};
            for (int ib = 0; ib < 2; ++ib) {
                const int si = sdof[ib];
                if (si < 1 || si > n) continue;
                for (int jb = 0; jb < 2; ++jb) {
                    const int sj = sdof[jb];
                    if (sj < 1 || sj > n) continue;
                    d.Y(global(m, si), global(m, sj)) += w * ss.v[ib] * ss.v[jb];
                }
            }
        }
    }

    d.K = d.A + nu * d.B;
    return d;
}

void write_coordinate_triplets(std::ostream& os, const Matrix& mat) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
        for (Eigen::Index j = 0; j < mat.cols(); ++j)
            if (mat(i, j) != 0.0) os << i << ' ' << j << ' ' << mat(i, j) << '\n';
}

}  // namespace stheat
