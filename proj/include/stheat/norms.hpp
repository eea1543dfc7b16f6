#pragma once

#include <functional>

#include "stheat/assembly.hpp"
#include "stheat/rigor.hpp"

namespace stheat {

/// The five stability constants of one (nu, h, k) configuration:
///   eta     = || M^{T/2} (A + nu B)^{-1} A^{1/2} ||
///   eta_hat = || A^{T/2} (G + nu M)^{-1} U^{1/2} ||
///   gamma_1 = nu || M^{T/2} (A + nu B)^{-1} W^{1/2} ||
///   gamma_0 = nu || U^{T/2} (A + nu B)^{-1} W^{1/2} ||
///   gamma_T = nu || Y^{T/2} (A + nu B)^{-1} W^{1/2} ||
/// where || . || is the spectral norm.
struct StabilityConstants {
    Enclosure eta, eta_hat, gamma1, gamma0, gammaT;
    double nu = 0.0, h = 0.0, k = 0.0;
    Mode mode = Mode::fast;
};

struct GammaTriple {
    Enclosure gamma1, gamma0, gammaT;
};

/// Fast-mode evaluation strategy. `block` diagonalizes through the
/// generalized space eigenproblem Ks v = lambda Ms v into independent
/// m x m problems (the table-sweep path); `dense` works on the full
/// mn x mn operators and exists as the cross-check and small-instance
/// path. `automatic` picks block.
enum class FastStrategy { automatic, dense, block };

/// Rigorous dense interval computations are O((mn)^3); above this
/// dimension the rigorous mode falls back to a fast point value and
/// callers surface "fast-only".
constexpr Eigen::Index rigorous_dim_cap = 2000;
bool rigorous_size_supported(const GlobalSystem& sys);

Enclosure compute_eta(const GlobalSystem& sys, Mode mode,
                      FastStrategy strategy = FastStrategy::automatic);
Enclosure compute_eta_hat(const GlobalSystem& sys, Mode mode,
                          FastStrategy strategy = FastStrategy::automatic);
GammaTriple compute_gammas(const GlobalSystem& sys, Mode mode,
                           FastStrategy strategy = FastStrategy::automatic);

/// All five constants with shared factorizations (one pass over the
/// space eigenvalues in fast mode, shared solution enclosures in
/// rigorous mode). Falls back to fast values when rigorous mode is
/// requested beyond the size cap; the returned mode tag says what
/// actually ran.
StabilityConstants compute_all_constants(const GlobalSystem& sys, Mode mode,
                                         FastStrategy strategy = FastStrategy::automatic);

/// Largest eigenvalue of a symmetric operator by power iteration.
/// Deterministic all-ones start vector; stops when the relative Rayleigh
/// increment holds below 1e-12 for two consecutive steps (10000-step cap).
/// A short two-dimensional Rayleigh-Ritz pass with a fixed-seed random
/// companion vector then polishes the estimate and rescues a start vector
/// with no component in the leading eigenspace. Deterministic across runs.
struct PowerResult {
    double lambda = 0.0;
    Eigen::VectorXd v;
    int iterations = 0;
    bool converged = false;
};
PowerResult power_iteration(const std::function<Vector(const Vector&)>& sym_op,
                            Eigen::Index dim);

}  // namespace stheat
