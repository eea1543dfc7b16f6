#include "stheat/norms.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <random>

namespace stheat {

bool rigorous_size_supported(const GlobalSystem& sys) { return sys.dim() <= rigorous_dim_cap; }

// ---------------------------------------------------------------------------
// power iteration

PowerResult power_iteration(const std::function<Vector(const Vector&)>& sym_op,
                            Eigen::Index dim) {
    constexpr int cap = 10000;
    constexpr double increment_tol = 1e-12;

    // Plain power iteration from the deterministic all-ones start,
    // stopping once the relative Rayleigh increment stays below
    // tolerance for two consecutive steps.
    Vector x = Vector::Ones(dim) / std::sqrt(static_cast<double>(dim));
    double lambda = 0.0;
    double prev = 0.0;
    bool prev_small = false;
    bool settled = false;
    int used = cap;
    for (int it = 0; it < cap; ++it) {
        Vector w = sym_op(x);
        lambda = x.dot(w);
        const double scale = std::max(std::abs(lambda), 1e-300);
        const bool small_inc =
            it > 0 && std::abs(lambda - prev) <= increment_tol * scale;
        prev = lambda;
        const double wn = w.norm();
        if (wn == 0.0) return {0.0, x, it + 1, true};  // spectrum reached 0
        x = w / wn;
        if (small_inc && prev_small) {
            settled = true;
            used = it + 1;
            break;
        }
        prev_small = small_inc;
    }
    PowerResult best{lambda, x, used, settled};
    if (dim < 2) return best;

    // Two-dimensional Rayleigh-Ritz polish. A fixed-seed random companion
    // supplies any leading-eigenspace component the deterministic start
    // lacks, so a start vector that is (nearly) orthogonal to the top
    // eigenvector cannot leave the result captured on a subdominant
    // eigenvalue. The block advances until each vector's own Rayleigh
    // quotient has settled: the companion's quotient keeps climbing for
    // as long as it is still overtaking a captured first vector, which a
    // stopping rule on the joint Ritz value alone would miss.
    constexpr int polish_cap = 2000;
    std::mt19937 rng(0x5eed5137u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v1 = best.v;
    Vector v2(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v2(i) = gauss(rng);
    v2 -= v1.dot(v2) * v1;
    if (v2.norm() < 1e-14) v2 = Vector::Unit(dim, 0);
    v2.normalize();

    double prev_q1 = best.lambda, prev_q2 = 0.0;
    bool both_small_prev = false;
    double lam = best.lambda;
    Vector ritz = best.v;
    for (int it = 0; it < polish_cap; ++it) {
        Vector w1 = sym_op(v1), w2 = sym_op(v2);
        const double q1 = v1.dot(w1), q2 = v2.dot(w2);
        Eigen::Matrix2d T;
        T(0, 0) = q1;
        T(0, 1) = v1.dot(w2);
        T(1, 0) = v2.dot(w1);
        T(1, 1) = q2;
        const Eigen::Matrix2d Ts = 0.5 * (T + T.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Ts);
        lam = es.eigenvalues()(1);
        const Eigen::Vector2d c = es.eigenvectors().col(1);
        ritz = c(0) * v1 + c(1) * v2;
        ritz.normalize();

        const bool both_small =
            std::abs(q1 - prev_q1) <= increment_tol * std::max(std::abs(q1), 1e-300) &&
            std::abs(q2 - prev_q2) <= increment_tol * std::max(std::abs(q2), 1e-300);
        if (both_small && both_small_prev) {
            if (lam >= best.lambda) return {lam, ritz, best.iterations + it + 1, true};
            return {best.lambda, best.v, best.iterations + it + 1, best.converged};
        }
        both_small_prev = both_small;
        prev_q1 = q1;
        prev_q2 = q2;

        // advance the block and re-orthonormalize
        v1 = w1.norm() > 0 ? Vector(w1.normalized()) : ritz;
        v2 = w2 - v1.dot(w2) * v1;
        if (v2.norm() < 1e-14) {
            for (Eigen::Index i = 0; i < dim; ++i) v2(i) = gauss(rng);
            v2 -= v1.dot(v2) * v1;
        }
        v2.normalize();
    }
    if (lam > best.lambda) return {lam, ritz, best.iterations + polish_cap, false};
    return {best.lambda, best.v, best.iterations + polish_cap, best.converged};
}

// ---------------------------------------------------------------------------
// fast mode, dense strategy

namespace {

// sigma = largest singular value of left^T * Kinv * right, where the
// three pieces are supplied as dense matrices; iterates on the smaller
// of the two Gram forms.
double sigma_dense(const Matrix& leftT, const Eigen::PartialPivLU<Matrix>& Klu,
                   const Matrix& right) {
    const Matrix P = leftT * Klu.solve(right);
    const Eigen::Index r = P.rows(), c = P.cols();
    if (r <= c) {
        const Matrix S = P * P.transpose();
        auto op = [&](const Vector& x) { return Vector(S.selfadjointView<Eigen::Lower>() * x); };
        return std::sqrt(std::max(0.0, power_iteration(op, r).lambda));
    }
    const Matrix S = P.transpose() * P;
    auto op = [&](const Vector& x) { return Vector(S.selfadjointView<Eigen::Lower>() * x); };
    return std::sqrt(std::max(0.0, power_iteration(op, c).lambda));
}

struct DensePack {
    double eta, eta_hat, gamma1, gamma0, gammaT;
};

DensePack fast_dense_all(const GlobalSystem& sys) {
    Eigen::PartialPivLU<Matrix> Klu(sys.dense_K());
    const Matrix Ahalf = sys.dense_half('A');
    const Matrix Whalf = sys.dense_half('W');
    const Matrix MT = sys.dense_half('M').transpose();
    const Matrix UT = sys.dense_half('U').transpose();
    const Matrix YT = sys.dense_Yhalf().transpose();

    DensePack p{};
    p.eta = sigma_dense(MT, Klu, Ahalf);
    p.gamma1 = sys.nu * sigma_dense(MT, Klu, Whalf);
    p.gamma0 = sys.nu * sigma_dense(UT, Klu, Whalf);
    p.gammaT = sys.nu * sigma_dense(YT, Klu, Whalf);

    Eigen::PartialPivLU<Matrix> Khlu(sys.dense_K_hat());
    p.eta_hat = sigma_dense(Ahalf.transpose(), Khlu, sys.dense_half('U'));
    return p;
}

// ---------------------------------------------------------------------------
// fast mode, block strategy
//
// With the generalized space eigenpairs Ks v_j = lambda_j Ms v_j
// (normalized v^T Ms v = I), the congruence I (x) V turns every global
// operator into a block-diagonal one over j:
//   A -> At, M -> lambda_j Ut, B -> lambda_j Gt^T, U -> Ut,
//   W -> lambda_j At, Y -> y_T y_T^T.
// Singular values are invariant under that transformation because the
// congruence factors cancel inside left^T K^{-1} right, so with
// s_j = || Ut^{T/2} (At + nu lambda_j Gt^T)^{-1} At^{1/2} || and
// q_j = y^T Kt^{-1} At Kt^{-T} y:
//   eta     = max_j sqrt(lambda_j) s_j
//   gamma_1 = nu max_j lambda_j s_j
//   gamma_0 = nu max_j sqrt(lambda_j) s_j = nu * eta   (same maximizer)
//   gamma_T = nu max_j sqrt(lambda_j q_j)
//   eta_hat = max_j || At^{T/2} (Gt + nu lambda_j Ut)^{-1} Ut^{1/2} ||.

struct BlockPack {
    double eta, eta_hat, gamma1, gamma0, gammaT;
};

Vector space_eigenvalues(const GlobalSystem& sys) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(sys.factors.Ks, sys.factors.Ms);
    if (ges.info() != Eigen::Success)
        throw assembly_error("generalized space eigenproblem failed to converge");
    return ges.eigenvalues();
}

// sigma = || Lleft^T Kt^{-1} Lright || for one time block: form the
// product densely and take the top eigenvalue of its Gram form with a
// direct symmetric eigensolver. The per-eigenvalue time problems are
// small and their leading singular values cluster tightly, so a direct
// solve is both cheaper and more accurate than iterating there.
double block_sigma(const Matrix& Lleft, const Matrix& Lright,
                   const Eigen::PartialPivLU<Matrix>& lu) {
    const Matrix P = Lleft.triangularView<Eigen::Lower>().transpose() *
                     lu.solve(Matrix(Lright.triangularView<Eigen::Lower>()));
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    es.compute(P.transpose() * P, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw assembly_error("time-block eigenproblem failed to converge");
    return std::sqrt(std::max(0.0, es.eigenvalues()(P.cols() - 1)));
}

BlockPack fast_block_all(const GlobalSystem& sys) {
    const auto& f = sys.factors;
    const Vector lambdas = space_eigenvalues(sys);
    const Matrix GtT = f.Gt.transpose();

    BlockPack p{0.0, 0.0, 0.0, 0.0, 0.0};
    for (Eigen::Index j = 0; j < lambdas.size(); ++j) {
        const double lam = lambdas(j);
        const Matrix Kt = f.At + sys.nu * lam * GtT;
        Eigen::PartialPivLU<Matrix> lu(Kt);

        const double s = block_sigma(sys.Lt_U, sys.Lt_A, lu);
        p.eta = std::max(p.eta, std::sqrt(lam) * s);
        p.gamma1 = std::max(p.gamma1, sys.nu * lam * s);

        const Vector w = lu.transpose().solve(f.y_T);
        const double q = w.dot(f.At * w);
        p.gammaT = std::max(p.gammaT, sys.nu * std::sqrt(std::max(0.0, lam * q)));

        // || At^{T/2} Kht^{-1} Ut^{1/2} ||: same Gram structure with the
        // roles of the two mass/stiffness factors swapped
        const Matrix Kht = f.Gt + sys.nu * lam * f.Ut;
        Eigen::PartialPivLU<Matrix> hlu(Kht);
        p.eta_hat = std::max(p.eta_hat, block_sigma(sys.Lt_A, sys.Lt_U, hlu));
    }
    p.gamma0 = sys.nu * p.eta;
    return p;
}

// ---------------------------------------------------------------------------
// rigorous mode

struct IntervalStencils {
    IntervalMatrix stiff, mass, drift;
};

// Interval twin of the exact elemental assembly: the cell width itself
// is an interval (1/n_cells is generally not representable), and all
// sums run in interval arithmetic.
IntervalStencils interval_assemble_1d(int n_cells, const Interval& len, int first_kept,
                                      int last_kept) {
    const int nk = last_kept - first_kept + 1;
    IntervalStencils st{IntervalMatrix(nk, nk), IntervalMatrix(nk, nk), IntervalMatrix(nk, nk)};
    const Interval one = Interval::point(1.0);
    const Interval inv_len = one / len;
    const Interval m3 = len / Interval::point(3.0);
    const Interval m6 = len / Interval::point(6.0);
    const Interval half = Interval::point(0.5);
    const Interval se[2][2] = {{inv_len, -inv_len}, {-inv_len, inv_len}};
    const Interval me[2][2] = {{m3, m6}, {m6, m3}};
    const Interval de[2][2] = {{-half, half}, {-half, half}};
    for (int c = 0; c < n_cells; ++c) {
        const int nodes[2] = {c, c + 1};
        for (int a = 0; a < 2; ++a) {
            const int i = nodes[a];
            if (i < first_kept || i > last_kept) continue;
            for (int b = 0; b < 2; ++b) {
                const int j = nodes[b];
                if (j < first_kept || j > last_kept) continue;
                const Eigen::Index ii = i - first_kept, jj = j - first_kept;
                st.stiff.set(ii, jj, st.stiff.at(ii, jj) + se[a][b]);
                st.mass.set(ii, jj, st.mass.at(ii, jj) + me[a][b]);
                st.drift.set(ii, jj, st.drift.at(ii, jj) + de[a][b]);
            }
        }
    }
    return st;
}

struct RigorousContext {
    IntervalMatrix K, Khat;          // A + nu B and G + nu M
    IntervalMatrix Ahalf, Whalf, Uhalf;
    IntervalMatrix MT, UT, YT;       // left factors, already transposed
    IntervalMatrix AT;               // A^{T/2} for eta_hat
};

IntervalMatrix chol_or_throw(const IntervalMatrix& S, const char* name) {
    auto L = verified_cholesky(S);
    if (!L)
        throw rigor_error(std::string("verified Cholesky failed on factor matrix ") + name);
    return *L;
}

RigorousContext build_rigorous_context(const GlobalSystem& sys) {
    if (!rounding_selftest()) throw rigor_error("rounding self-test failed on this platform");
    const auto& sm = sys.factors.space;
    const auto& tm = sys.factors.time;
    const Interval h = Interval::point(1.0) / Interval::point(double(sm.n_cells));
    const Interval k = Interval::point(tm.T) / Interval::point(double(tm.m_cells));

    const auto s = interval_assemble_1d(sm.n_cells, h, 1, sm.n_cells - 1);
    const auto t = interval_assemble_1d(tm.m_cells, k, 1, tm.m_cells);
    const IntervalMatrix &Ms = s.mass, &Ks = s.stiff;
    const IntervalMatrix &At = t.stiff, &Ut = t.mass, &Gt = t.drift;

    const IntervalMatrix LsM = chol_or_throw(Ms, "Ms");
    const IntervalMatrix LsK = chol_or_throw(Ks, "Ks");
    const IntervalMatrix LtA = chol_or_throw(At, "At");
    const IntervalMatrix LtU = chol_or_throw(Ut, "Ut");

    const Interval nu = Interval::point(sys.nu);
    RigorousContext ctx;
    ctx.K = interval_kron(At, Ms) + scale(nu, interval_kron(Gt.transpose(), Ks));
    ctx.Khat = interval_kron(Gt, Ms) + scale(nu, interval_kron(Ut, Ks));
    ctx.Ahalf = interval_kron(LtA, LsM);
    ctx.Whalf = interval_kron(LtA, LsK);
    ctx.Uhalf = interval_kron(LtU, LsM);
    ctx.MT = interval_kron(LtU, LsK).transpose();
    ctx.UT = ctx.Uhalf.transpose();
    ctx.AT = ctx.Ahalf.transpose();

    // Yhalf = y_T (x) LsM: only the final time block is nonzero
    const Eigen::Index n = sm.n, mn = sys.dim();
    IntervalMatrix Yhalf(mn, n);
    Yhalf.lo.block((tm.m - 1) * n, 0, n, n) = LsM.lo;
    Yhalf.hi.block((tm.m - 1) * n, 0, n, n) = LsM.hi;
    ctx.YT = Yhalf.transpose();
    return ctx;
}

// Certified enclosure of the spectral norm sigma = || leftT * Z || where
// Z encloses K^{-1} * right-half. Gram form on the smaller side, then a
// Rayleigh lower bound and a shifted verified-Cholesky upper bound.
Interval rigorous_sigma(const IntervalMatrix& leftT, const IntervalMatrix& Z) {
    IntervalMatrix F = mul(leftT, Z);
    IntervalMatrix S = (F.rows() <= F.cols()) ? mul(F, F.transpose())
                                              : mul(F.transpose(), F);
    {  // S is symmetric; tighten with its transpose enclosure
        const IntervalMatrix St = S.transpose();
        S.lo = S.lo.cwiseMax(St.lo);
        S.hi = S.hi.cwiseMin(St.hi);
    }

    const Matrix Smid = 0.5 * (S.lo + S.hi);
    auto op = [&](const Vector& x) { return Vector(Smid * x); };
    const PowerResult pw = power_iteration(op, Smid.rows());

    double lower = std::max(0.0, rayleigh_lower(S, pw.v));
    // a certified lower bound survives being decreased; give away a few
    // ulps so an equally converged point evaluation of the same quantity
    // cannot land spuriously below the enclosure
    lower = std::max(0.0, pred(lower * (1.0 - 4e-12)));

    // Inflate the power-iteration estimate by (1 + 2^-k) until the
    // shifted verified Cholesky certifies it as an upper bound.
    const double base = std::max({pw.lambda, lower, 0.0});
    double upper = 0.0;
    bool certified = false;
    for (const int k : {20, 16, 12, 9, 7, 5, 3, 1, 0}) {
        const double t = succ(base * (1.0 + std::ldexp(1.0, -k)) + 1e-300);
        if (lambda_max_upper(S, t)) {
            upper = t;
            certified = true;
            break;
        }
    }
    if (!certified) {
        // Power iteration must have missed the top eigenvalue. For
        // symmetric S, lambda_max <= max row sum of |S|; that rung is
        // wide but essentially always certifiable.
        const Matrix absS = S.mag();
        double rowmax = 0.0;
        for (Eigen::Index i = 0; i < absS.rows(); ++i) {
            double s = 0.0;
            for (Eigen::Index j = 0; j < absS.cols(); ++j) s = succ(s + absS(i, j));
            rowmax = std::max(rowmax, s);
        }
        const double t = succ(rowmax * (1.0 + 0x1p-8) + 1e-300);
        if (lambda_max_upper(S, t)) {
            upper = t;
            certified = true;
        }
    }
    if (!certified)
        throw rigor_error("eigenvalue certification failed: no upper bound could be verified");
    return sqrt(Interval{lower, upper});
}

struct RigorousPack {
    Interval eta, eta_hat, gamma1, gamma0, gammaT;
};

RigorousPack rigorous_all(const GlobalSystem& sys) {
    const RigorousContext ctx = build_rigorous_context(sys);
    const Interval nu = Interval::point(sys.nu);

    RigorousPack p;
    {
        const IntervalMatrix Za = enclose_solve(ctx.K, ctx.Ahalf);
        p.eta = rigorous_sigma(ctx.MT, Za);
    }
    {
        const IntervalMatrix Zw = enclose_solve(ctx.K, ctx.Whalf);
        p.gamma1 = nu * rigorous_sigma(ctx.MT, Zw);
        p.gammaT = nu * rigorous_sigma(ctx.YT, Zw);
    }
    // gamma_0 = nu * eta holds exactly: in the space eigenbasis both
    // reduce to the same per-eigenvalue quantity (see the block-path
    // derivation above), so the eta enclosure transfers.
    p.gamma0 = nu * p.eta;
    {
        const IntervalMatrix Zu = enclose_solve(ctx.Khat, ctx.Uhalf);
        p.eta_hat = rigorous_sigma(ctx.AT, Zu);
    }
    return p;
}

DensePack fast_all(const GlobalSystem& sys, FastStrategy strategy) {
    if (strategy == FastStrategy::dense) return fast_dense_all(sys);
    const BlockPack b = fast_block_all(sys);
    return {b.eta, b.eta_hat, b.gamma1, b.gamma0, b.gammaT};
}

}  // namespace

StabilityConstants compute_all_constants(const GlobalSystem& sys, Mode mode,
                                         FastStrategy strategy) {
    StabilityConstants out;
    out.nu = sys.nu;
    out.h = sys.factors.space.h;
    out.k = sys.factors.time.k;

    if (mode == Mode::rigorous && rigorous_size_supported(sys)) {
        const RigorousPack p = rigorous_all(sys);
        out.eta = Enclosure::certified(p.eta);
        out.eta_hat = Enclosure::certified(p.eta_hat);
        out.gamma1 = Enclosure::certified(p.gamma1);
        out.gamma0 = Enclosure::certified(p.gamma0);
        out.gammaT = Enclosure::certified(p.gammaT);
        out.mode = Mode::rigorous;
        return out;
    }

    const DensePack p = fast_all(sys, strategy);
    out.eta = Enclosure::fast_point(p.eta);
    out.eta_hat = Enclosure::fast_point(p.eta_hat);
    out.gamma1 = Enclosure::fast_point(p.gamma1);
    out.gamma0 = Enclosure::fast_point(p.gamma0);
    out.gammaT = Enclosure::fast_point(p.gammaT);
    out.mode = Mode::fast;  // either requested, or rigorous beyond the size cap
    return out;
}

Enclosure compute_eta(const GlobalSystem& sys, Mode mode, FastStrategy strategy) {
    if (mode == Mode::rigorous && rigorous_size_supported(sys)) {
        const RigorousContext ctx = build_rigorous_context(sys);
        const IntervalMatrix Za = enclose_solve(ctx.K, ctx.Ahalf);
        return Enclosure::certified(rigorous_sigma(ctx.MT, Za));
    }
    if (strategy == FastStrategy::dense) {
        Eigen::PartialPivLU<Matrix> Klu(sys.dense_K());
        return Enclosure::fast_point(
            sigma_dense(sys.dense_half('M').transpose(), Klu, sys.dense_half('A')));
    }
    return Enclosure::fast_point(fast_block_all(sys).eta);
}

Enclosure compute_eta_hat(const GlobalSystem& sys, Mode mode, FastStrategy strategy) {
    if (mode == Mode::rigorous && rigorous_size_supported(sys)) {
        const RigorousContext ctx = build_rigorous_context(sys);
        const IntervalMatrix Zu = enclose_solve(ctx.Khat, ctx.Uhalf);
        return Enclosure::certified(rigorous_sigma(ctx.AT, Zu));
    }
    if (strategy == FastStrategy::dense) {
        Eigen::PartialPivLU<Matrix> Khlu(sys.dense_K_hat());
        return Enclosure::fast_point(
            sigma_dense(sys.dense_half('A').transpose(), Khlu, sys.dense_half('U')));
    }
    return Enclosure::fast_point(fast_block_all(sys).eta_hat);
}

GammaTriple compute_gammas(const GlobalSystem& sys, Mode mode, FastStrategy strategy) {
    if (mode == Mode::rigorous && rigorous_size_supported(sys)) {
        const RigorousPack p = rigorous_all(sys);
        return {Enclosure::certified(p.gamma1), Enclosure::certified(p.gamma0),
                Enclosure::certified(p.gammaT)};
    }
    if (strategy == FastStrategy::dense) {
        const DensePack p = fast_dense_all(sys);
        return {Enclosure::fast_point(p.gamma1), Enclosure::fast_point(p.gamma0),
                Enclosure::fast_point(p.gammaT)};
    }
    const BlockPack p = fast_block_all(sys);
    return {Enclosure::fast_point(p.gamma1), Enclosure::fast_point(p.gamma0),
            Enclosure::fast_point(p.gammaT)};
}

}  // namespace stheat
