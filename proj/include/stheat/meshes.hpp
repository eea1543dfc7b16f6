#pragma once

#include <stdexcept>
#include <vector>

namespace stheat {

/// Uniform partition of the unit interval Omega = (0,1) for P1 elements
/// with homogeneous Dirichlet conditions. Only interior nodes carry
/// degrees of freedom.
struct SpaceMesh {
    int n_cells = 0;   ///< number of cells
    double h = 0.0;    ///< cell width, 1 / n_cells
    int n = 0;         ///< interior-node count, n_cells - 1

    /// Interior node coordinates x_1 .. x_n.
    std::vector<double> nodes() const;
};

/// Uniform partition of J = (0,T). The P1 basis in time excludes the
/// node t_0 = 0, so every basis function vanishes at t = 0 and the
/// degree-of-freedom count equals the cell count.
struct TimeMesh {
    int m_cells = 0;   ///< number of cells
    double T = 0.0;    ///< final time
    double k = 0.0;    ///< step, T / m_cells
    int m = 0;         ///< degrees of freedom (nodes t_1 .. t_m = T)

    /// Node coordinates t_1 .. t_m.
    std::vector<double> nodes() const;
};

/// Interpolation and inverse-inequality constants of the two meshes.
struct AprioriConstants {
    double c_omega = 0.0;  ///< spatial L2-projection constant, h / pi
    double c_j = 0.0;      ///< temporal interpolation constant, k / pi
    double c_inv = 0.0;    ///< inverse inequality constant, sqrt(12) / h
    double c_p = 0.0;      ///< Poincare constant on (0,1), taken as 1 / pi
};

/// Thrown when a mesh request has no legal realization.
struct mesh_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Build a uniform space mesh. Requires n_cells >= 2 so that at least
/// one interior degree of freedom exists.
SpaceMesh make_space_mesh(int n_cells);

/// Build a uniform time mesh on (0,T). Requires m_cells >= 1 and T > 0.
TimeMesh make_time_mesh(int m_cells, double T);

/// Evaluate the a priori constants for a mesh pair. c_p = 1/pi is a
/// derived choice (first Dirichlet eigenvalue of -d2/dx2 on (0,1) is
/// pi^2); reports that surface it say so.
AprioriConstants apriori_constants(const SpaceMesh& space, const TimeMesh& time);

}  // namespace stheat
