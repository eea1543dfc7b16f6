#pragma once

#include <string>
#include <vector>

#include "stheat/meshes.hpp"
#include "stheat/norms.hpp"

namespace stheat {

/// Mesh-level a priori constants combined into the first bound set:
///   C1 = (2/nu) C_Omega + C_inv C_J
///   C0 = (8/nu) C_Omega^2 + C_J
///   c0 = sqrt(8/nu) C_Omega
/// cj_cinv keeps the product C_J C_inv that scales every tilde
/// correction, so downstream composition never re-derives it.
struct BaseConstants {
    Enclosure c1, c0, c0_T, cj_cinv;
    Enclosure c_omega, c_j, c_inv, c_p;  ///< the ingredients, same mode
    double nu = 0.0, h = 0.0, k = 0.0;
    Mode mode = Mode::fast;
};

/// Constructive error constants: the base values and their corrections
/// by the stability constants,
///   C1~ = C1 + C_J C_inv gamma_1
///   C0~ = C0 + C_J C_inv gamma_0
///   c0~ = c0 + C_J C_inv gamma_T.
/// The tilde fields are certified enclosures exactly when both inputs
/// were computed rigorously; `mode` describes them.
struct ErrorConstants {
    Enclosure c1, c0, c0_T;
    Enclosure c1_tilde, c0_tilde, c0_T_tilde;
    double nu = 0.0, h = 0.0, k = 0.0;
    Mode mode = Mode::fast;
};

/// Evaluates the base constants. Rigorous mode rebuilds C_Omega = h/pi,
/// C_J = k/pi, C_inv = sqrt(12)/h from the exact cell counts in
/// interval arithmetic with an enclosure of pi, so the results carry a
/// containment guarantee.
BaseConstants base_constants(const SpaceMesh& space, const TimeMesh& time, double nu,
                             Mode mode);

/// Combines base constants with computed stability constants. Throws
/// std::invalid_argument when the two arguments describe different
/// (nu, h, k) configurations.
ErrorConstants tilde_constants(const BaseConstants& base, const StabilityConstants& consts);

/// One stability inequality: the named norm of the scheme's solution is
/// bounded by value * |f|_{L2(J;L2)}.
struct BoundLine {
    std::string norm;    ///< left-hand side description
    std::string factor;  ///< symbolic name of the constant
    Enclosure value;     ///< its numeric value for this configuration
};

struct StabilityReport {
    std::vector<BoundLine> bounds;
    std::vector<std::string> notes;
};

/// The four stability bounds with their numeric factors for one
/// configuration: scheme Q is bounded in V1(J;L2) by |f| (constant
/// exactly 1) and in L2(J;H10) by eta |f|; scheme Qhat is bounded in
/// L2(J;H10) by (C_p/nu) |f| and in V1(J;L2) by eta_hat |f|, where
/// eta_hat grows like 1/k under time refinement.
StabilityReport stability_report(const StabilityConstants& consts,
                                 const AprioriConstants& apriori);

}  // namespace stheat
