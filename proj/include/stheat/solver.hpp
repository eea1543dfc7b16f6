#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "stheat/assembly.hpp"

namespace stheat {

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coefficient vector in the lexicographic tensor basis (space index
/// fastest), together with the dimensions it was built for.
struct Coefficients {
    Vector values;
    int m = 0;
    int n = 0;
};

/// Analytic space-time function with the derivatives that load assembly
/// and error measurement need. The right-hand side is induced:
/// f = u_t - nu u_xx. Every catalogue entry satisfies u(x,0) = 0 and
/// u(0,t) = u(1,t) = 0.
struct ManufacturedCase {
    std::string label;
    std::function<double(double, double)> u;     ///< u(x, t)
    std::function<double(double, double)> u_t;
    std::function<double(double, double)> u_x;
    std::function<double(double, double)> u_xx;
};

/// The built-in cases:
///   u1 = sin(pi x) (1 - exp(-t))
///   u2 = x (1 - x) t
///   u3 = sin(2 pi x) sin(t) t
const std::vector<ManufacturedCase>& manufactured_catalogue();

/// Catalogue lookup by label; throws solver_error on an unknown label.
const ManufacturedCase& find_case(const std::string& label);

/// Pairing used for the load functional: a0 tests f against the time
/// derivative of the basis function, a0_hat against the basis function
/// itself.
enum class LoadForm { a0, a0_hat };

/// Q solves (A + nu B) u = load(a0); Q_hat solves (G + nu M) u = load(a0_hat).
enum class Scheme { Q, Q_hat };

/// Entry i = <f, d/dt phi_i> (a0) or <f, phi_i> (a0_hat), by tensor
/// Gauss quadrature per space-time cell in a fixed traversal order.
/// Requires quad_order >= 3.
Coefficients load_vector(const ManufacturedCase& mc, const GlobalSystem& sys, LoadForm form,
                         int quad_order = 5);

/// Direct LU solve of the scheme's linear system with a residual check
/// (relative residual <= 1e-10, after at most one refinement pass).
Coefficients solve_scheme(const GlobalSystem& sys, const Coefficients& load, Scheme scheme);

/// Discrete norms of a coefficient vector u:
///   v1_l2    = sqrt(u^T A u)   time-derivative L2 norm
///   l2_h1    = sqrt(u^T M u)   spatial-gradient L2 norm
///   l2_l2    = sqrt(u^T U u)
///   final_l2 = sqrt(u^T Y u)   L2(Omega) norm of the final-time slice
struct DiscreteNorms {
    double v1_l2 = 0.0;
    double l2_h1 = 0.0;
    double l2_l2 = 0.0;
    double final_l2 = 0.0;
};
DiscreteNorms discrete_norms(const Coefficients& coef, const GlobalSystem& sys);

/// Continuous-norm errors of the discrete function against the exact
/// solution, by per-cell Gauss quadrature, plus |f|_{L2(J;L2)} for
/// bound comparison. Requires quad_order >= 5.
struct ErrorMeasurement {
    double l2_h1 = 0.0;     ///< |grad(u - u_hk)| in L2(J;L2)
    double l2_l2 = 0.0;     ///< |u - u_hk| in L2(J;L2)
    double final_l2 = 0.0;  ///< |(u - u_hk)(., T)| in L2(Omega)
    double f_norm = 0.0;
};
ErrorMeasurement error_vs_exact(const Coefficients& coef, const ManufacturedCase& mc,
                                const GlobalSystem& sys, int quad_order = 5);

/// Point value of the discrete bilinear function at (x, t), boundary
/// and initial values included (they are zero by construction).
double fe_value(const Coefficients& coef, const GlobalSystem& sys, double x, double t);

/// (t, x, value) samples on the full tensor node grid as CSV.
void export_solution_csv(const Coefficients& coef, const GlobalSystem& sys, std::ostream& os);

}  // namespace stheat
