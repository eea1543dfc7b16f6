#include "stheat/solver.hpp"

#include <Eigen/LU>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "stheat/quadrature.hpp"

namespace stheat {

namespace {

constexpr double pi = std::numbers::pi;

// Coefficient of a tensor node, with the zero initial and boundary
// conditions baked in: time node 0 and the two space boundary nodes
// carry no degree of freedom.
double node_coef(const Coefficients& c, const GlobalSystem& sys, int time_node,
                 int space_node) {
    if (time_node == 0) return 0.0;
    if (space_node == 0 || space_node == sys.factors.space.n_cells) return 0.0;
    return c.values((time_node - 1) * sys.n() + (space_node - 1));
}

void require_dims(const Coefficients& c, const GlobalSystem& sys, const char* what) {
    if (c.m != sys.m() || c.n != sys.n() || c.values.size() != sys.dim())
        throw solver_error(std::string(what) + ": coefficient dimensions do not match the system");
}

}  // namespace

const std::vector<ManufacturedCase>& manufactured_catalogue() {
    static const std::vector<ManufacturedCase> cases = {
        {"u1",
         [](double x, double t) { return std::sin(pi * x) * (1.0 - std::exp(-t)); },
         [](double x, double t) { return std::sin(pi * x) * std::exp(-t); },
         [](double x, double t) { return pi * std::cos(pi * x) * (1.0 - std::exp(-t)); },
         [](double x, double t) { return -pi * pi * std::sin(pi * x) * (1.0 - std::exp(-t)); }},
        {"u2",
         [](double x, double t) { return x * (1.0 - x) * t; },
         [](double x, double) { return x * (1.0 - x); },
         [](double x, double t) { return (1.0 - 2.0 * x) * t; },
         [](double, double t) { return -2.0 * t; }},
        {"u3",
         [](double x, double t) { return std::sin(2.0 * pi * x) * std::sin(t) * t; },
         [](double x, double t) {
             return std::sin(2.0 * pi * x) * (std::sin(t) + t * std::cos(t));
         },
         [](double x, double t) {
             return 2.0 * pi * std::cos(2.0 * pi * x) * std::sin(t) * t;
         },
         [](double x, double t) {
             return -4.0 * pi * pi * std::sin(2.0 * pi * x) * std::sin(t) * t;
         }},
    };
    return cases;
}

const ManufacturedCase& find_case(const std::string& label) {
    for (const auto& c : manufactured_catalogue())
        if (c.label == label) return c;
    throw solver_error("unknown manufactured case: " + label);
}

Coefficients load_vector(const ManufacturedCase& mc, const GlobalSystem& sys, LoadForm form,
                         int quad_order) {
    if (quad_order < 3) throw solver_error("load_vector requires quadrature order >= 3");
    const GaussRule q = gauss_rule(quad_order);
    const auto& sm = sys.factors.space;
    const auto& tm = sys.factors.time;
    const double h = sm.h, k = tm.k, nu = sys.nu;
    const int n = sys.n();

    Coefficients out;
    out.m = sys.m();
    out.n = n;
    out.values = Vector::Zero(sys.dim());

    for (int tc = 0; tc < tm.m_cells; ++tc) {
        const double t0 = tc * k;
        for (int xc = 0; xc < sm.n_cells; ++xc) {
            const double x0 = xc * h;
            for (std::size_t qt = 0; qt < q.nodes.size(); ++qt) {
                const double t = t0 + k * q.nodes[qt];
                const double psi[2] = {1.0 - q.nodes[qt], q.nodes[qt]};
                const double dpsi[2] = {-1.0 / k, 1.0 / k};
                for (std::size_t qx = 0; qx < q.nodes.size(); ++qx) {
                    const double x = x0 + h * q.nodes[qx];
                    const double s[2] = {1.0 - q.nodes[qx], q.nodes[qx]};
                    const double f = mc.u_t(x, t) - nu * mc.u_xx(x, t);
                    const double wf = f * q.weights[qt] * k * q.weights[qx] * h;
                    for (int a = 0; a < 2; ++a) {
                        const int tn = tc + a;
                        if (tn == 0) continue;
                        const double tfac = (form == LoadForm::a0) ? dpsi[a] : psi[a];
                        for (int b = 0; b < 2; ++b) {
                            const int xn = xc + b;
                            if (xn == 0 || xn == sm.n_cells) continue;
                            out.values((tn - 1) * n + (xn - 1)) += wf * tfac * s[b];
                        }
                    }
                }
            }
        }
    }
    return out;
}

Coefficients solve_scheme(const GlobalSystem& sys, const Coefficients& load, Scheme scheme) {
    require_dims(load, sys, "solve_scheme");
    const Matrix K = (scheme == Scheme::Q) ? sys.dense_K() : sys.dense_K_hat();
    Eigen::PartialPivLU<Matrix> lu(K);

    Coefficients out;
    out.m = load.m;
    out.n = load.n;
    out.values = lu.solve(load.values);
    if (!out.values.allFinite())
        throw solver_error("scheme matrix is singular to working precision");

    const double scale = std::max(load.values.norm(), 1e-300);
    double resid = (K * out.values - load.values).norm() / scale;
    if (resid > 1e-10) {
        out.values += lu.solve(load.values - K * out.values);
        resid = (K * out.values - load.values).norm() / scale;
        if (resid > 1e-10)
            throw solver_error("linear solve residual stayed above tolerance after refinement");
    }
    return out;
}

DiscreteNorms discrete_norms(const Coefficients& coef, const GlobalSystem& sys) {
    require_dims(coef, sys, "discrete_norms");
    const Vector& x = coef.values;
    auto nrm = [&](const Vector& Ax) { return std::sqrt(std::max(0.0, x.dot(Ax))); };
    return {nrm(sys.apply_A(x)), nrm(sys.apply_M(x)), nrm(sys.apply_U(x)),
            nrm(sys.apply_Y(x))};
}

ErrorMeasurement error_vs_exact(const Coefficients& coef, const ManufacturedCase& mc,
                                const GlobalSystem& sys, int quad_order) {
    if (quad_order < 5) throw solver_error("error_vs_exact requires quadrature order >= 5");
    require_dims(coef, sys, "error_vs_exact");
    const GaussRule q = gauss_rule(quad_order);
    const auto& sm = sys.factors.space;
    const auto& tm = sys.factors.time;
    const double h = sm.h, k = tm.k, nu = sys.nu;

    double err_h1 = 0.0, err_l2 = 0.0, f_sq = 0.0;
    for (int tc = 0; tc < tm.m_cells; ++tc) {
        const double t0 = tc * k;
        for (int xc = 0; xc < sm.n_cells; ++xc) {
            const double x0 = xc * h;
            const double c00 = node_coef(coef, sys, tc, xc);
            const double c01 = node_coef(coef, sys, tc, xc + 1);
            const double c10 = node_coef(coef, sys, tc + 1, xc);
            const double c11 = node_coef(coef, sys, tc + 1, xc + 1);
            for (std::size_t qt = 0; qt < q.nodes.size(); ++qt) {
                const double t = t0 + k * q.nodes[qt];
                const double pl = 1.0 - q.nodes[qt], pr = q.nodes[qt];
                for (std::size_t qx = 0; qx < q.nodes.size(); ++qx) {
                    const double x = x0 + h * q.nodes[qx];
                    const double sl = 1.0 - q.nodes[qx], sr = q.nodes[qx];
                    const double w = q.weights[qt] * k * q.weights[qx] * h;

                    const double uh = pl * (c00 * sl + c01 * sr) + pr * (c10 * sl + c11 * sr);
                    const double uh_x =
                        (pl * (c01 - c00) + pr * (c11 - c10)) / h;
                    const double du = mc.u(x, t) - uh;
                    const double dux = mc.u_x(x, t) - uh_x;
                    const double f = mc.u_t(x, t) - nu * mc.u_xx(x, t);
                    err_l2 += w * du * du;
                    err_h1 += w * dux * dux;
                    f_sq += w * f * f;
                }
            }
        }
    }

    double err_T = 0.0;
    for (int xc = 0; xc < sm.n_cells; ++xc) {
        const double x0 = xc * h;
        const double cl = node_coef(coef, sys, tm.m_cells, xc);
        const double cr = node_coef(coef, sys, tm.m_cells, xc + 1);
        for (std::size_t qx = 0; qx < q.nodes.size(); ++qx) {
            const double x = x0 + h * q.nodes[qx];
            const double uh = cl * (1.0 - q.nodes[qx]) + cr * q.nodes[qx];
            const double du = mc.u(x, tm.T) - uh;
            err_T += q.weights[qx] * h * du * du;
        }
    }

    return {std::sqrt(err_h1), std::sqrt(err_l2), std::sqrt(err_T), std::sqrt(f_sq)};
}

double fe_value(const Coefficients& coef, const GlobalSystem& sys, double x, double t) {
    require_dims(coef, sys, "fe_value");
    const auto& sm = sys.factors.space;
    const auto& tm = sys.factors.time;
    if (x < 0.0 || x > 1.0 || t < 0.0 || t > tm.T)
        throw solver_error("fe_value: point outside the space-time domain");

    int xc = std::min(int(x / sm.h), sm.n_cells - 1);
    int tc = std::min(int(t / tm.k), tm.m_cells - 1);
    const double sx = x / sm.h - xc;
    const double st = t / tm.k - tc;
    const double c00 = node_coef(coef, sys, tc, xc);
    const double c01 = node_coef(coef, sys, tc, xc + 1);
    const double c10 = node_coef(coef, sys, tc + 1, xc);
    const double c11 = node_coef(coef, sys, tc + 1, xc + 1);
    return (1.0 - st) * (c00 * (1.0 - sx) + c01 * sx) + st * (c10 * (1.0 - sx) + c11 * sx);
}

void export_solution_csv(const Coefficients& coef, const GlobalSystem& sys, std::ostream& os) {
    require_dims(coef, sys, "export_solution_csv");
    const auto& sm = sys.factors.space;
    const auto& tm = sys.factors.time;
    os << "t,x,value\n";
    os << std::setprecision(17);
    for (int tn = 0; tn <= tm.m_cells; ++tn) {
        const double t = (tn == tm.m_cells) ? tm.T : tn * tm.k;
        for (int xn = 0; xn <= sm.n_cells; ++xn) {
            const double x = (xn == sm.n_cells) ? 1.0 : xn * sm.h;
            os << t << ',' << x << ',' << node_coef(coef, sys, tn, xn) << '\n';
        }
    }
}

}  // namespace stheat
