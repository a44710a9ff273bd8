#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <vector>

#include "allelofear/equilibria.hpp"
#include "allelofear/model.hpp"
#include "allelofear/parallel.hpp"
#include "allelofear/rk45.hpp"

namespace allelofear {

struct Trajectory {
    std::vector<double> times;
    std::vector<State2> states;
    StepStats stats;

    const State2& final_state() const { return states.back(); }
};

namespace detail {

using Vec2 = std::array<double, 2>;

/// Components in (-10*abs_tol, 0) are integrator noise on the invariant axes
/// and get clamped; anything more negative is a genuine failure.
inline void clamp_nonnegative(Vec2& y, double abs_tol) {
    for (double& c : y) {
        if (c < 0) {
            if (c < -10.0 * abs_tol)
                throw NumericalError("integrate: negative component beyond tolerance");
            c = 0.0;
        }
    }
}

inline auto forward_rhs(const ModelParams& p) {
    return [p](double, const Vec2& y, Vec2& dydt) {
        const State2 d = kinetics(p, {y[0], y[1]});
        dydt[0] = d.x;
        dydt[1] = d.y;
    };
}

} // namespace detail

/// Forward-integrate the kinetic system, recording every accepted step.
inline Trajectory integrate(const ModelParams& p, State2 init, double t_end,
                            double rel_tol = 1e-8, double abs_tol = 1e-10) {
    p.validate();
    if (!(init.x >= 0) || !(init.y >= 0))
        throw DomainError("integrate: initial state must be nonnegative");
    if (!(t_end > 0)) throw DomainError("integrate: t_end must be positive");
    const IntegrateOptions opt{rel_tol, abs_tol};

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(init);
    detail::Vec2 y{init.x, init.y};
    rk45_advance(detail::forward_rhs(p), 0.0, t_end, y, opt, traj.stats,
                 [&](double t, detail::Vec2& s) {
                     detail::clamp_nonnegative(s, abs_tol);
                     traj.times.push_back(t);
                     traj.states.push_back({s[0], s[1]});
                     return true;
                 });
    return traj;
}

/// Final state only (no per-step recording).
inline State2 integrate_final(const ModelParams& p, State2 init, double t_end,
                              double rel_tol = 1e-8, double abs_tol = 1e-10) {
    p.validate();
    if (!(init.x >= 0) || !(init.y >= 0))
        throw DomainError("integrate: initial state must be nonnegative");
    const IntegrateOptions opt{rel_tol, abs_tol};
    detail::Vec2 y{init.x, init.y};
    StepStats stats;
    rk45_advance(detail::forward_rhs(p), 0.0, t_end, y, opt, stats,
                 [&](double, detail::Vec2& s) {
                     detail::clamp_nonnegative(s, abs_tol);
                     return true;
                 });
    return {y[0], y[1]};
}

/// States at the requested times (ascending, all positive).
inline std::vector<State2> integrate_at_times(const ModelParams& p, State2 init,
                                              const std::vector<double>& times,
                                              double rel_tol = 1e-8, double abs_tol = 1e-10) {
    const IntegrateOptions opt{rel_tol, abs_tol};
    detail::Vec2 y{init.x, init.y};
    StepStats stats;
    std::vector<State2> out;
    double t = 0, h = 0;
    auto rhs = detail::forward_rhs(p);
    for (double target : times) {
        if (!(target > t)) throw DomainError("integrate_at_times: times must be ascending and positive");
        AdvanceResult r = rk45_advance(rhs, t, target, y, opt, stats,
                                       [&](double, detail::Vec2& s) {
                                           detail::clamp_nonnegative(s, abs_tol);
                                           return true;
                                       },
                                       h);
        t = r.t;
        h = r.h;
        out.push_back({y[0], y[1]});
    }
    return out;
}

/// Uniform eventual bounds from the permanence theorem: M = 1 and
/// l = min{1-c, (1/(1+k)-a)/(1+m)}, certified when 0 < k < k* and 0 < c < 1.
struct PermanenceBounds {
    double upper_M;
    double lower_l;
    bool certified;
};

inline PermanenceBounds permanence_bounds(const ModelParams& p) {
    const double l = std::min(1.0 - p.c, (1.0 / (1.0 + p.k) - p.a) / (1.0 + p.m));
    const bool certified = p.k > 0 && p.k < thresholds(p).k_star && p.c > 0 && p.c < 1;
    return {1.0, l, certified};
}

/// First time after which the step-to-step sup-change stays below 1e-6 for
/// 50 consecutive accepted steps. Concrete finite-time stand-in for "t large".
inline std::optional<double> detect_transient(const Trajectory& traj) {
    int streak = 0;
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        const double d = std::max(std::abs(traj.states[i].x - traj.states[i - 1].x),
                                  std::abs(traj.states[i].y - traj.states[i - 1].y));
        if (d < 1e-6) {
            if (++streak >= 50) return traj.times[i - streak];
        } else {
            streak = 0;
        }
    }
    return std::nullopt;
}

struct DulacReport {
    double max_value;
    State2 argmax;
    std::size_t evaluations;
    bool all_negative;
};

/// Weighted divergence with B = 1/(xy): Delta = -b/y - (mx+1)/x, which is
/// negative on the whole open quadrant. The grid audit is a regression
/// tripwire, not a proof.
inline DulacReport dulac_audit(const ModelParams& p, std::pair<double, double> x_range,
                               std::pair<double, double> y_range, int n) {
    if (!(x_range.first > 0) || !(y_range.first > 0))
        throw DomainError("dulac_audit: ranges must lie inside the open positive quadrant");
    if (n < 2) throw DomainError("dulac_audit: n must be >= 2");
    DulacReport rep{-std::numeric_limits<double>::infinity(), {}, 0, true};
    for (int i = 0; i < n; ++i) {
        const double x = x_range.first + (x_range.second - x_range.first) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double y = y_range.first + (y_range.second - y_range.first) * j / (n - 1);
            const double v = -p.b / y + (-p.m * x - 1.0) / x;
            ++rep.evaluations;
            if (v > rep.max_value) {
                rep.max_value = v;
                rep.argmax = {x, y};
            }
        }
    }
    rep.all_negative = rep.max_value < 0;
    return rep;
}

/// Stable-manifold branches of a saddle, traced in reversed time.
struct Separatrix {
    Equilibrium saddle;
    std::vector<State2> branch_pos, branch_neg; // launched at saddle +/- delta*v_s
    std::vector<double> arc_pos, arc_neg;       // cumulative arc length per vertex
};

namespace detail {

inline void trace_branch(const ModelParams& p, State2 start, double span,
                         std::vector<State2>& line, std::vector<double>& arc) {
    const IntegrateOptions opt{1e-10, 1e-12};
    Vec2 y{start.x, start.y};
    StepStats stats;
    line.push_back(start);
    arc.push_back(0.0);
    auto rhs = [&p](double, const Vec2& s, Vec2& d) {
        const State2 f = kinetics(p, {s[0], s[1]});
        d[0] = -f.x;
        d[1] = -f.y;
    };
    rk45_advance(rhs, 0.0, span, y, opt, stats, [&](double, Vec2& s) {
        clamp_nonnegative(s, opt.abs_tol);
        const State2 prev = line.back();
        const State2 cur{s[0], s[1]};
        arc.push_back(arc.back() + std::hypot(cur.x - prev.x, cur.y - prev.y));
        line.push_back(cur);
        // reversed dynamics blow up outside the biologically relevant box
        return cur.x < 3.0 && cur.y < 3.0;
    });
}

} // namespace detail

inline Separatrix trace_separatrix(const ModelParams& p, const Equilibrium& saddle,
                                   double span) {
    if (!is_saddle(saddle.kind))
        throw DomainError("trace_separatrix: equilibrium is not a saddle");
    if (!(span > 0)) throw DomainError("trace_separatrix: span must be positive");

    const Jacobian2 jac = jacobian(p, saddle.location);
    auto [l1, l2] = jac.eigenvalues();
    if (l1.imag() != 0 || l2.imag() != 0)
        throw NumericalError("trace_separatrix: complex eigenvalues at a saddle");
    const double lam_s = std::min(l1.real(), l2.real());
    if (!(lam_s < 0)) throw NumericalError("trace_separatrix: no stable eigenvalue");
    std::array<double, 2> v = jac.eigenvector(lam_s);
    const double norm = std::hypot(v[0], v[1]);
    v = {v[0] / norm, v[1] / norm};

    constexpr double delta = 1e-6;
    Separatrix sep;
    sep.saddle = saddle;
    detail::trace_branch(p, {saddle.location.x + delta * v[0], saddle.location.y + delta * v[1]},
                         span, sep.branch_pos, sep.arc_pos);
    detail::trace_branch(p, {saddle.location.x - delta * v[0], saddle.location.y - delta * v[1]},
                         span, sep.branch_neg, sep.arc_neg);
    return sep;
}

struct BasinResult {
    std::vector<Equilibrium> attractors;
    std::vector<int> labels; // index into attractors, -1 = undecided
};

/// Label each initial state by the attractor its forward orbit approaches
/// within tol, holding for 5% of the horizon (guards against slow saddle
/// passage). Deterministic for fixed inputs.
inline BasinResult basin_classify(const ModelParams& p, const std::vector<State2>& inits,
                                  double t_end, double tol) {
    if (!(tol > 0)) throw DomainError("basin_classify: tol must be positive");
    for (const State2& s : inits)
        if (s.x < 0 || s.x > 2 || s.y < 0 || s.y > 2)
            throw DomainError("basin_classify: initial states must lie in [0,2]^2");

    BasinResult res;
    for (const Equilibrium& e : all_equilibria(p))
        if (is_attracting(e.kind)) res.attractors.push_back(e);

    const double hold_needed = 0.05 * t_end;
    const IntegrateOptions opt{1e-8, 1e-10};
    res.labels.assign(inits.size(), -1);
    // cells are independent; results land in per-index slots, so the outcome
    // is identical for any execution order
    parallel_for(inits.size(), [&](std::size_t cell) {
        const State2 init = inits[cell];
        auto nearest = [&](double x, double y) {
            for (std::size_t j = 0; j < res.attractors.size(); ++j) {
                const State2& a = res.attractors[j].location;
                if (std::hypot(x - a.x, y - a.y) < tol) return static_cast<int>(j);
            }
            return -1;
        };
        int label = nearest(init.x, init.y); // starting on an attractor decides immediately
        if (label < 0) {
            detail::Vec2 y{init.x, init.y};
            StepStats stats;
            int near_idx = -1;
            double near_since = 0;
            rk45_advance(detail::forward_rhs(p), 0.0, t_end, y, opt, stats,
                         [&](double t, detail::Vec2& s) {
                             detail::clamp_nonnegative(s, opt.abs_tol);
                             const int now = nearest(s[0], s[1]);
                             if (now != near_idx) {
                                 near_idx = now;
                                 near_since = t;
                             } else if (now >= 0 && t - near_since >= hold_needed) {
                                 label = now;
                                 return false;
                             }
                             return true;
                         });
        }
        res.labels[cell] = label;
    });
    return res;
}

struct RecurrenceReport {
    bool cycle_detected = false;
    double t_first = 0, t_second = 0; // witness pair if detected
    std::size_t comparisons = 0;
};

/// Scan a trajectory for a close return with consistent heading away from
/// equilibria. The no-limit-cycle theorem makes any detection a build-failing
/// event.
inline RecurrenceReport limit_cycle_probe(const ModelParams& p, State2 init, double t_end) {
    if (!(init.x > 0) || !(init.y > 0))
        throw DomainError("limit_cycle_probe: init must be strictly positive");
    const Trajectory traj = integrate(p, init, t_end, 1e-8, 1e-10);

    // decimate to keep the pairwise scan cheap
    const std::size_t n = traj.times.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 3000);
    std::vector<double> ts;
    std::vector<State2> ss;
    std::vector<State2> fs;
    for (std::size_t i = 0; i < n; i += stride) {
        ts.push_back(traj.times[i]);
        ss.push_back(traj.states[i]);
        fs.push_back(kinetics(p, traj.states[i]));
    }

    RecurrenceReport rep;
    constexpr double close_tol = 1e-6;
    constexpr double speed_min = 1e-5; // excludes states that are effectively at equilibrium
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double vi = std::hypot(fs[i].x, fs[i].y);
        if (vi < speed_min) continue;
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
            if (ts[j] - ts[i] < 1.0) continue;
            ++rep.comparisons;
            if (std::hypot(ss[j].x - ss[i].x, ss[j].y - ss[i].y) > close_tol) continue;
            const double vj = std::hypot(fs[j].x, fs[j].y);
            if (vj < speed_min) continue;
            const double dot = (fs[i].x * fs[j].x + fs[i].y * fs[j].y) / (vi * vj);
            if (dot > 0.9) {
                rep.cycle_detected = true;
                rep.t_first = ts[i];
                rep.t_second = ts[j];
                return rep;
            }
        }
    }
    return rep;
}

/// CSV export: header t,x,y then one row per accepted step, 17 significant
/// digits for lossless double round-trips.
inline void trajectory_to_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,x,y\n";
    char buf[96];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", traj.times[i],
                      traj.states[i].x, traj.states[i].y);
        os << buf;
    }
}

} // namespace allelofear
