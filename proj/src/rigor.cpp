#include "stheat/rigor.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

namespace stheat {

namespace {

constexpr double kUnit = 1.1102230246251565e-16;  // 2^-53

// Upper bound of the accumulated dot-product rounding factor gamma_n =
// n*u / (1 - n*u), evaluated pessimistically.
double gamma_factor(Eigen::Index n) {
    const double nu_ = (static_cast<double>(n) + 2.0) * kUnit;
    if (nu_ >= 0.5) throw rigor_error("dimension too large for the rounding-error bound");
    return nu_ / (1.0 - 2.0 * nu_);
}

}  // namespace

Eigen::MatrixXd IntervalMatrix::rad_upper() const {
    Eigen::MatrixXd r(rows(), cols());
    for (Eigen::Index j = 0; j < cols(); ++j) {
        for (Eigen::Index i = 0; i < rows(); ++i) {
            const double m = 0.5 * (lo(i, j) + hi(i, j));
            const double rd = 0.5 * (hi(i, j) - lo(i, j));
            // cover the rounding of both the midpoint and the radius
            r(i, j) = succ(succ(rd) + 2.3e-16 * std::abs(m) + 1e-300);
        }
    }
    return r;
}

double IntervalMatrix::max_rel_width() const {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < cols(); ++j)
        for (Eigen::Index i = 0; i < rows(); ++i)
            worst = std::max(worst, at(i, j).rel_width());
    return worst;
}

IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b) {
    IntervalMatrix c(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            c.lo(i, j) = pred(a.lo(i, j) + b.lo(i, j));
            c.hi(i, j) = succ(a.hi(i, j) + b.hi(i, j));
        }
    return c;
}

IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b) {
    IntervalMatrix c(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            c.lo(i, j) = pred(a.lo(i, j) - b.hi(i, j));
            c.hi(i, j) = succ(a.hi(i, j) - b.lo(i, j));
        }
    return c;
}

IntervalMatrix scale(const Interval& s, const IntervalMatrix& a) {
    IntervalMatrix c(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) c.set(i, j, s * a.at(i, j));
    return c;
}

IntervalMatrix mul(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (a.cols() != b.rows()) throw rigor_error("interval product dimension mismatch");
    const Eigen::MatrixXd Am = a.mid(), Bm = b.mid();
    const Eigen::MatrixXd Ar = a.rad_upper(), Br = b.rad_upper();
    const Eigen::MatrixXd AbsA = Am.cwiseAbs(), AbsB = Bm.cwiseAbs();

    const Eigen::MatrixXd Cm = Am * Bm;
    // radius: operand radii propagated, plus the midpoint product's own
    // rounding error bounded through gamma_(n+2) * |Am| |Bm|
    const double g = gamma_factor(a.cols());
    Eigen::MatrixXd R = AbsA * Br + Ar * (AbsB + Br) + g * (AbsA * AbsB);
    // the radius accumulation above ran in round-to-nearest on
    // nonnegative data; inflate to dominate its own rounding
    const double inflate = 1.0 + 8.0 * (static_cast<double>(a.cols()) + 4.0) * kUnit;

    IntervalMatrix c(Cm.rows(), Cm.cols());
    for (Eigen::Index j = 0; j < Cm.cols(); ++j) {
        for (Eigen::Index i = 0; i < Cm.rows(); ++i) {
            const double rr = succ(R(i, j) * inflate + 1e-300);
            c.lo(i, j) = pred(Cm(i, j) - rr);
            c.hi(i, j) = succ(Cm(i, j) + rr);
        }
    }
    return c;
}

IntervalMatrix interval_kron(const IntervalMatrix& t, const IntervalMatrix& s) {
    IntervalMatrix out(t.rows() * s.rows(), t.cols() * s.cols());
    for (Eigen::Index p = 0; p < t.rows(); ++p)
        for (Eigen::Index q = 0; q < t.cols(); ++q) {
            const Interval tpq = t.at(p, q);
            if (tpq.lo == 0.0 && tpq.hi == 0.0) continue;
            for (Eigen::Index i = 0; i < s.rows(); ++i)
                for (Eigen::Index j = 0; j < s.cols(); ++j)
                    out.set(p * s.rows() + i, q * s.cols() + j, tpq * s.at(i, j));
        }
    return out;
}

std::optional<IntervalMatrix> verified_cholesky(const IntervalMatrix& S) {
    const Eigen::Index n = S.rows();
    if (S.cols() != n) throw rigor_error("verified_cholesky needs a square matrix");

    // row-major scratch so the dot products in the inner loop walk
    // contiguous memory
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMat Llo = RowMat::Zero(n, n), Lhi = RowMat::Zero(n, n);

    for (Eigen::Index j = 0; j < n; ++j) {
        Interval d = S.at(j, j);
        {
            const double* plo = Llo.row(j).data();
            const double* phi = Lhi.row(j).data();
            for (Eigen::Index k = 0; k < j; ++k) {
                const Interval l{plo[k], phi[k]};
                d = d - l * l;
            }
        }
        if (!(d.lo > 0.0)) return std::nullopt;
        const Interval piv = sqrt(d);
        Llo(j, j) = piv.lo;
        Lhi(j, j) = piv.hi;

        const double* jlo = Llo.row(j).data();
        const double* jhi = Lhi.row(j).data();
        for (Eigen::Index i = j + 1; i < n; ++i) {
            Interval s = S.at(i, j);
            const double* ilo = Llo.row(i).data();
            const double* ihi = Lhi.row(i).data();
            for (Eigen::Index k = 0; k < j; ++k)
                s = s - Interval{ilo[k], ihi[k]} * Interval{jlo[k], jhi[k]};
            const Interval lij = s / piv;
            Llo(i, j) = lij.lo;
            Lhi(i, j) = lij.hi;
        }
    }

    IntervalMatrix L(n, n);
    L.lo = Llo;
    L.hi = Lhi;
    return L;
}

namespace {

// Upward-rounded max absolute row sum of an entrywise magnitude matrix.
double inf_norm_upper(const Eigen::MatrixXd& magnitudes) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < magnitudes.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < magnitudes.cols(); ++j) s = succ(s + magnitudes(i, j));
        worst = std::max(worst, s);
    }
    return worst;
}

// Fallback positive-definiteness certificate for the symmetric family in
// T. Interval Cholesky compounds entry radii through every elimination
// step, so a long run of small pivots (many eigenvalues crowding the
// margin) makes it reject families that are comfortably definite. This
// variant keeps all growth out of the interval computation: factor the
// shifted midpoint in plain floating point, then charge the
// factorization defect and the family radius against the shift. For
// every symmetric T* inside T, with Tm the exactly symmetrized midpoint,
//
//   lambda_min(T*) >= lambda_min(Tm) - r,   r >= ||T* - Tm||_2
//   lambda_min(Tm) >= c - e - d   from  Tm - c I = G G^T + E + diag(delta)
//                                 with  e >= ||E||_2,  d >= max|delta|
//
// (||X||_2 <= ||X||_inf for symmetric X), so c >= r + e + d proves every
// member positive semidefinite.
bool shifted_point_pd(const IntervalMatrix& T) {
    const Eigen::Index d = T.rows();
    const Eigen::MatrixXd M0 = T.mid();
    const Eigen::MatrixXd Tm = 0.5 * (M0 + M0.transpose());

    // entrywise deviation bound of any family member from Tm; succ of a
    // nearest-rounded difference bounds the exact difference from above
    Eigen::MatrixXd Rad(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            Rad(i, j) = std::max(succ(T.hi(i, j) - Tm(i, j)), succ(Tm(i, j) - T.lo(i, j)));
    const double r = inf_norm_upper(Rad);

    // the eigensolver only guides the shift choice; rigor comes from the
    // residual inequality below
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    double c = 0.875 * es.eigenvalues()(0);
    if (!std::isfinite(c)) return false;

    for (int attempt = 0; attempt < 4 && c > 0.0; ++attempt, c *= 0.5) {
        Eigen::MatrixXd A = Tm;
        A.diagonal().array() -= c;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) continue;
        const Eigen::MatrixXd G = llt.matrixL();
        const Eigen::MatrixXd Gt = G.transpose();
        const IntervalMatrix P =
            mul(IntervalMatrix::from_point(G), IntervalMatrix::from_point(Gt));

        // e bounds ||A - G G^T||_inf over the exact product
        Eigen::MatrixXd Emag(d, d);
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index i = 0; i < d; ++i)
                Emag(i, j) = (Interval::point(A(i, j)) - P.at(i, j)).mag();
        const double e = inf_norm_upper(Emag);

        // d bounds the rounding of the diagonal shift: the exact
        // Tm_ii - c lies within one ulp of its nearest-rounded A_ii
        double dmax = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double a = A(i, i);
            dmax = std::max(dmax, std::max(succ(a) - a, a - pred(a)));
        }

        if (c >= succ(succ(e + dmax) + r)) return true;
    }
    return false;
}

}  // namespace

IntervalMatrix enclose_solve(const IntervalMatrix& K, const IntervalMatrix& RHS) {
    const Eigen::Index d = K.rows();
    if (K.cols() != d || RHS.rows() != d) throw rigor_error("enclose_solve dimension mismatch");

    const Eigen::MatrixXd Kmid = K.mid();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Kmid);
    const Eigen::MatrixXd R = lu.inverse();

    // refined point solution: one residual correction on top of R*rhs
    const Eigen::MatrixXd RHSmid = RHS.mid();
    Eigen::MatrixXd X = R * RHSmid;
    X += R * (RHSmid - Kmid * X);

    // alpha = certified ||I - R K||_inf over the whole interval hull
    const IntervalMatrix C = IntervalMatrix::identity(d) - mul(IntervalMatrix::from_point(R), K);
    const double alpha = inf_norm_upper(C.mag());
    if (!(alpha < 1.0))
        throw rigor_error("enclosure failed: residual norm of the approximate inverse is not "
                          "below one (matrix too ill-conditioned for this precision)");

    // D = R (RHS - K X) encloses the preconditioned defect of X; the
    // Neumann tail alpha/(1-alpha) * colmax|D| dominates what the
    // higher-order terms can add entrywise
    const IntervalMatrix Res = RHS - mul(K, IntervalMatrix::from_point(X));
    const IntervalMatrix D = mul(IntervalMatrix::from_point(R), Res);
    const Eigen::MatrixXd Dmag = D.mag();
    const double tail_factor = succ(alpha / pred(1.0 - alpha));

    IntervalMatrix out(d, RHS.cols());
    for (Eigen::Index j = 0; j < RHS.cols(); ++j) {
        double colmax = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) colmax = std::max(colmax, Dmag(i, j));
        const double tau = succ(tail_factor * colmax);
        for (Eigen::Index i = 0; i < d; ++i) {
            out.lo(i, j) = pred(pred(X(i, j) + D.lo(i, j)) - tau);
            out.hi(i, j) = succ(succ(X(i, j) + D.hi(i, j)) + tau);
        }
    }
    return out;
}

bool lambda_max_upper(const IntervalMatrix& S, double lambda_try) {
    if (!(lambda_try > 0.0)) throw rigor_error("lambda_max_upper needs a positive shift");
    const Eigen::Index d = S.rows();
    IntervalMatrix T(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i == j) {
                T.lo(i, j) = pred(lambda_try - S.hi(i, j));
                T.hi(i, j) = succ(lambda_try - S.lo(i, j));
            } else {
                T.lo(i, j) = -S.hi(i, j);
                T.hi(i, j) = -S.lo(i, j);
            }
        }
    }
    if (verified_cholesky(T).has_value()) return true;
    return shifted_point_pd(T);
}

double rayleigh_lower(const IntervalMatrix& S, const Eigen::VectorXd& v) {
    const Eigen::Index d = S.rows();
    if (v.size() != d) throw rigor_error("rayleigh_lower dimension mismatch");
    if (v.norm() == 0.0) throw rigor_error("rayleigh_lower needs a nonzero vector");

    Interval num = Interval::point(0.0);
    for (Eigen::Index i = 0; i < d; ++i) {
        Interval row = Interval::point(0.0);
        for (Eigen::Index j = 0; j < d; ++j) {
            const double p1 = S.lo(i, j) * v(j), p2 = S.hi(i, j) * v(j);
            row = row + Interval{pred(std::min(p1, p2)), succ(std::max(p1, p2))};
        }
        const double q1 = row.lo * v(i), q2 = row.hi * v(i);
        num = num + Interval{pred(std::min(q1, q2)), succ(std::max(q1, q2))};
    }
    Interval den = Interval::point(0.0);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double sq = v(i) * v(i);
        den = den + Interval{pred(sq), succ(sq)};
    }
    // den > 0; pick the denominator end that cannot overestimate
    const double q = num.lo >= 0.0 ? num.lo / den.hi : num.lo / den.lo;
    return pred(q);
}

}  // namespace stheat
