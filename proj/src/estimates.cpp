#include "stheat/estimates.hpp"

#include <cmath>
#include <stdexcept>

namespace stheat {

namespace {

struct IntervalApriori {
    Interval c_omega, c_j, c_inv;
};

IntervalApriori interval_apriori(const SpaceMesh& space, const TimeMesh& time) {
    const Interval pi = interval_pi();
    const Interval h = Interval::point(1.0) / Interval::point(double(space.n_cells));
    const Interval k = Interval::point(time.T) / Interval::point(double(time.m_cells));
    return {h / pi, k / pi, sqrt(Interval::point(12.0)) / h};
}

}  // namespace

BaseConstants base_constants(const SpaceMesh& space, const TimeMesh& time, double nu,
                             Mode mode) {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    BaseConstants out;
    out.nu = nu;
    out.h = space.h;
    out.k = time.k;
    out.mode = mode;

    if (mode == Mode::rigorous) {
        const IntervalApriori ap = interval_apriori(space, time);
        const Interval inu = Interval::point(nu);
        out.c1 = Enclosure::certified(Interval::point(2.0) / inu * ap.c_omega +
                                      ap.c_inv * ap.c_j);
        out.c0 = Enclosure::certified(Interval::point(8.0) / inu * (ap.c_omega * ap.c_omega) +
                                      ap.c_j);
        out.c0_T = Enclosure::certified(sqrt(Interval::point(8.0) / inu) * ap.c_omega);
        out.cj_cinv = Enclosure::certified(ap.c_j * ap.c_inv);
        out.c_omega = Enclosure::certified(ap.c_omega);
        out.c_j = Enclosure::certified(ap.c_j);
        out.c_inv = Enclosure::certified(ap.c_inv);
        out.c_p = Enclosure::certified(Interval::point(1.0) / interval_pi());
        return out;
    }

    const AprioriConstants ap = apriori_constants(space, time);
    out.c1 = Enclosure::fast_point(2.0 / nu * ap.c_omega + ap.c_inv * ap.c_j);
    out.c0 = Enclosure::fast_point(8.0 / nu * ap.c_omega * ap.c_omega + ap.c_j);
    out.c0_T = Enclosure::fast_point(std::sqrt(8.0 / nu) * ap.c_omega);
    out.cj_cinv = Enclosure::fast_point(ap.c_j * ap.c_inv);
    out.c_omega = Enclosure::fast_point(ap.c_omega);
    out.c_j = Enclosure::fast_point(ap.c_j);
    out.c_inv = Enclosure::fast_point(ap.c_inv);
    out.c_p = Enclosure::fast_point(ap.c_p);
    return out;
}

ErrorConstants tilde_constants(const BaseConstants& base, const StabilityConstants& consts) {
    if (base.nu != consts.nu || base.h != consts.h || base.k != consts.k)
        throw std::invalid_argument(
            "base constants and stability constants describe different configurations");

    ErrorConstants out;
    out.nu = base.nu;
    out.h = base.h;
    out.k = base.k;
    out.c1 = base.c1;
    out.c0 = base.c0;
    out.c0_T = base.c0_T;

    if (base.mode == Mode::rigorous && consts.mode == Mode::rigorous) {
        const Interval cc = base.cj_cinv.as_interval();
        out.c1_tilde = Enclosure::certified(base.c1.as_interval() +
                                            cc * consts.gamma1.as_interval());
        out.c0_tilde = Enclosure::certified(base.c0.as_interval() +
                                            cc * consts.gamma0.as_interval());
        out.c0_T_tilde = Enclosure::certified(base.c0_T.as_interval() +
                                              cc * consts.gammaT.as_interval());
        out.mode = Mode::rigorous;
        return out;
    }

    const double cc = base.cj_cinv.mid();
    out.c1_tilde = Enclosure::fast_point(base.c1.mid() + cc * consts.gamma1.mid());
    out.c0_tilde = Enclosure::fast_point(base.c0.mid() + cc * consts.gamma0.mid());
    out.c0_T_tilde = Enclosure::fast_point(base.c0_T.mid() + cc * consts.gammaT.mid());
    out.mode = Mode::fast;
    return out;
}

StabilityReport stability_report(const StabilityConstants& consts,
                                 const AprioriConstants& apriori) {
    StabilityReport rep;
    rep.bounds.push_back({"|Q u|_{V1(J;L2)}", "1", Enclosure{1.0, 1.0, consts.mode}});
    rep.bounds.push_back({"|Q u|_{L2(J;H10)}", "eta", consts.eta});

    Enclosure cp_over_nu;
    if (consts.mode == Mode::rigorous) {
        cp_over_nu = Enclosure::certified(Interval::point(1.0) / interval_pi() /
                                          Interval::point(consts.nu));
    } else {
        cp_over_nu = Enclosure::fast_point(apriori.c_p / consts.nu);
    }
    rep.bounds.push_back({"|Qhat u|_{L2(J;H10)}", "C_p / nu", cp_over_nu});
    rep.bounds.push_back({"|Qhat u|_{V1(J;L2)}", "eta_hat", consts.eta_hat});

    rep.notes.push_back("C_p is the Poincare constant of the unit interval, taken as 1/pi.");
    rep.notes.push_back(
        "eta_hat grows like 1/k under time refinement: Qhat has no V1 stability uniform in k.");
    rep.notes.push_back(
        "all bounds are stated against |f| in L2(J;L2); square-integrability of f is assumed.");
    return rep;
}

}  // namespace stheat
