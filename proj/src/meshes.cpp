#include "stheat/meshes.hpp"

#include <cmath>
#include <numbers>

namespace stheat {

std::vector<double> SpaceMesh::nodes() const {
    std::vector<double> x(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) x[static_cast<size_t>(i - 1)] = i * h;
    return x;
}

std::vector<double> TimeMesh::nodes() const {
    std::vector<double> t(static_cast<size_t>(m));
    for (int i = 1; i <= m; ++i) t[static_cast<size_t>(i - 1)] = i * k;
    // guard against k*m drifting off the endpoint by a few ulps
    t.back() = T;
    return t;
}

SpaceMesh make_space_mesh(int n_cells) {
    if (n_cells < 2)
        throw mesh_error("space mesh needs n_cells >= 2 (no interior node otherwise)");
    return {n_cells, 1.0 / n_cells, n_cells - 1};
}

TimeMesh make_time_mesh(int m_cells, double T) {
    if (m_cells < 1) throw mesh_error("time mesh needs m_cells >= 1");
    if (!(T > 0.0)) throw mesh_error("time mesh needs T > 0");
    return {m_cells, T, T / m_cells, m_cells};
}

AprioriConstants apriori_constants(const SpaceMesh& space, const TimeMesh& time) {
    const double pi = std::numbers::pi;
    return {space.h / pi, time.k / pi, std::sqrt(12.0) / space.h, 1.0 / pi};
}

}  // namespace stheat
