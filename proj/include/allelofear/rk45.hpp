#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "allelofear/errors.hpp"

namespace allelofear {

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double h_min = std::numeric_limits<double>::infinity();
    double h_max = 0;

    void merge(const StepStats& o) {
        accepted += o.accepted;
        rejected += o.rejected;
        h_min = std::min(h_min, o.h_min);
        h_max = std::max(h_max, o.h_max);
    }
};

struct IntegrateOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double h_max = 0; // 0 = unrestricted

    void validate() const {
        if (!(rel_tol > 0) || rel_tol > 1e-2)
            throw DomainError("integrate: rel_tol must be in (0, 1e-2]");
        if (!(abs_tol > 0) || abs_tol > 1e-2)
            throw DomainError("integrate: abs_tol must be in (0, 1e-2]");
    }
};

namespace detail {

// Dormand-Prince 5(4) tableau
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a2[] = {1.0 / 5};
inline constexpr double dp_a3[] = {3.0 / 40, 9.0 / 40};
inline constexpr double dp_a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
inline constexpr double dp_a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
inline constexpr double dp_a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656};
inline constexpr double dp_b[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
// b - b_hat (embedded 4th-order error weights, k7 last)
inline constexpr double dp_e[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

} // namespace detail

struct AdvanceResult {
    double t;
    double h; // last accepted step size, reusable as the next initial guess
};

/// Adaptive Dormand-Prince 5(4) with FSAL, integrating y from t0 to t1
/// (t1 > t0). `on_accept(t, y)` runs after every accepted step and may mutate
/// y; returning false stops the integration early. Works for any state type
/// with size()/operator[] (std::array, std::vector).
template <class StateVec, class Rhs, class OnAccept>
AdvanceResult rk45_advance(Rhs&& rhs, double t0, double t1, StateVec& y,
                           const IntegrateOptions& opt, StepStats& stats,
                           OnAccept&& on_accept, double h_start = 0) {
    opt.validate();
    if (!(t1 > t0)) throw DomainError("integrate: time span must be positive");

    const std::size_t n = y.size();
    StateVec k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ytmp = y, ynew = y;

    auto scaled_norm = [&](const StateVec& err, const StateVec& y0, const StateVec& y1) {
        double sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double q = err[i] / sc;
            sum += q * q;
        }
        return std::sqrt(sum / static_cast<double>(n));
    };

    const double span = t1 - t0;
    const double hmax = opt.h_max > 0 ? opt.h_max : span;
    const double t_eps = 1e-14 * std::max(1.0, std::abs(t1));
    double t = t0;
    rhs(t, y, k1);

    double h_prop = h_start; // controller's proposal, kept clear of endpoint clamps
    if (!(h_prop > 0)) {
        // crude start; the controller settles within a couple of steps
        double fn = 0, yn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            fn = std::max(fn, std::abs(k1[i]));
            yn = std::max(yn, std::abs(y[i]));
        }
        h_prop = (fn > 1e-12) ? 0.01 * (yn + 1.0) / fn : 0.01 * span;
    }
    h_prop = std::min({h_prop, hmax, span});

    using detail::dp_c;
    while (t1 - t > t_eps) {
        if (h_prop < 1e-14)
            throw NumericalError("integrate: step-size underflow below 1e-14 (stiffness)");
        const double remaining = t1 - t;
        const bool clamped = h_prop >= remaining;
        const double h = clamped ? remaining : h_prop;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * detail::dp_a2[0] * k1[i];
        rhs(t + dp_c[1] * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (detail::dp_a3[0] * k1[i] + detail::dp_a3[1] * k2[i]);
        rhs(t + dp_c[2] * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (detail::dp_a4[0] * k1[i] + detail::dp_a4[1] * k2[i] +
                                  detail::dp_a4[2] * k3[i]);
        rhs(t + dp_c[3] * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (detail::dp_a5[0] * k1[i] + detail::dp_a5[1] * k2[i] +
                                  detail::dp_a5[2] * k3[i] + detail::dp_a5[3] * k4[i]);
        rhs(t + dp_c[4] * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (detail::dp_a6[0] * k1[i] + detail::dp_a6[1] * k2[i] +
                                  detail::dp_a6[2] * k3[i] + detail::dp_a6[3] * k4[i] +
                                  detail::dp_a6[4] * k5[i]);
        rhs(t + dp_c[5] * h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (detail::dp_b[0] * k1[i] + detail::dp_b[2] * k3[i] +
                                  detail::dp_b[3] * k4[i] + detail::dp_b[4] * k5[i] +
                                  detail::dp_b[5] * k6[i]);
        rhs(t + h, ynew, k7); // FSAL stage

        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = h * (detail::dp_e[0] * k1[i] + detail::dp_e[2] * k3[i] +
                           detail::dp_e[3] * k4[i] + detail::dp_e[4] * k5[i] +
                           detail::dp_e[5] * k6[i] + detail::dp_e[6] * k7[i]);
        double err = scaled_norm(ytmp, y, ynew);
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            t = clamped ? t1 : t + h;
            y = ynew;
            std::swap(k1, k7);
            ++stats.accepted;
            stats.h_min = std::min(stats.h_min, h);
            stats.h_max = std::max(stats.h_max, h);
            if (!on_accept(t, y)) return {t, h_prop};
            // the hook may have mutated y (e.g. positivity clamp); refresh FSAL
            bool mutated = false;
            for (std::size_t i = 0; i < n; ++i)
                if (y[i] != ynew[i]) { mutated = true; break; }
            if (mutated) rhs(t, y, k1);
            const double fac = (err == 0) ? 5.0
                                          : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            // an endpoint-clamped step must not shrink the proposal
            h_prop = std::min(clamped ? std::max(h_prop, h * fac) : h * fac, hmax);
        } else {
            ++stats.rejected;
            h_prop = h * std::max(0.2, std::min(1.0, 0.9 * std::pow(err, -0.2)));
        }
    }
    return {t, h_prop};
}

} // namespace allelofear
