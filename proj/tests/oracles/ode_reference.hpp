#pragma once

// Undelayed system integrated with classical RK4 at a fixed small step. Used as the
// reference for the zero-lag limit of the delayed integrator.

#include "oracles/equilibrium.hpp"

#include <vector>

namespace oracle {

inline V3 field(const System& s, const V3& X)
{
    const auto f = incidence(s, X[0], X[1]);
    const auto v = response(s.v, s.vsat, X[0]);
    const auto p = response(s.p, s.psat, X[1]);
    return {s.a - s.b * f.value - s.d * X[0] - s.c * v[0] + s.alpha * X[2],
            s.b1 * f.value - s.r * p[0] - s.d1 * X[1], s.r * p[0] - s.alpha * X[2]};
}

/// States at t = 0, dt_out, 2 dt_out, ..., t_end (t_end a multiple of dt_out).
inline std::vector<V3> integrate_undelayed(const System& s, V3 X, double t_end, double dt_out,
                                           int substeps)
{
    const int n_out = static_cast<int>(t_end / dt_out + 0.5);
    const double h = dt_out / substeps;
    std::vector<V3> out{X};
    auto axpy = [](const V3& u, double w, const V3& k) {
        return V3{u[0] + w * k[0], u[1] + w * k[1], u[2] + w * k[2]};
    };
    for (int i = 0; i < n_out; ++i) {
        for (int j = 0; j < substeps; ++j) {
            const V3 k1 = field(s, X);
            const V3 k2 = field(s, axpy(X, h / 2, k1));
            const V3 k3 = field(s, axpy(X, h / 2, k2));
            const V3 k4 = field(s, axpy(X, h, k3));
            for (int c = 0; c < 3; ++c)
                X[c] += h / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
        }
        out.push_back(X);
    }
    return out;
}

} // namespace oracle
