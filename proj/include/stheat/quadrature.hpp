#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stheat {

/// Gauss-Legendre rule mapped to [0,1]. Orders 1..5 cover every
/// integrand in this project (P1 x P1 products are quadratic per
/// direction; error integrands default to order 5).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_rule(int order) {
    std::vector<double> x, w;  // on [-1,1]
    switch (order) {
        case 1:
            x = {0.0};
            w = {2.0};
            break;
        case 2:
            x = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
            w = {1.0, 1.0};
            break;
        case 3:
            x = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        case 4: {
            const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
            const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
            x = {-b, -a, a, b};
            w = {wb, wa, wa, wb};
            break;
        }
        case 5: {
            const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
            const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
            const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
            const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
            x = {-b, -a, 0.0, a, b};
            w = {wb, wa, 128.0 / 225.0, wa, wb};
            break;
        }
        default:
            throw std::invalid_argument("gauss_rule: supported orders are 1..5");
    }
    GaussRule r;
    r.nodes.resize(x.size());
    r.weights.resize(w.size());
    for (size_t i = 0; i < x.size(); ++i) {
        r.nodes[i] = 0.5 * (x[i] + 1.0);
        r.weights[i] = 0.5 * w[i];
    }
    return r;
}

}  // namespace stheat
