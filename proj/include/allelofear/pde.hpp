#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "allelofear/equilibria.hpp"
#include "allelofear/model.hpp"
#include "allelofear/ode.hpp"
#include "allelofear/parallel.hpp"
#include "allelofear/rk45.hpp"

namespace allelofear {

/// Kinetic parameters of the reaction-diffusion system; the fear coefficient
/// comes from the spatial field instead.
struct ReactionParams {
    double a, b, c, m;
};

inline ReactionParams reaction_params(const ModelParams& p) { return {p.a, p.b, p.c, p.m}; }

inline ModelParams with_fear(const ReactionParams& rp, double k) {
    return ModelParams{rp.a, rp.b, rp.c, k, rp.m};
}

/// Sampled heterogeneous fear function on a cell-centered grid over [0, L].
struct FearField {
    double length = std::numbers::pi;
    std::vector<double> x; // cell centers (j + 1/2) h
    std::vector<double> k;
    double k_hat = 0;       // min over the domain (exact for built-ins)
    double k_tilde = 0;     // max over the domain
    double zero_measure = 0; // estimated measure of {k == 0}

    std::size_t size() const { return k.size(); }
    double h() const { return length / static_cast<double>(k.size()); }
};

namespace detail {

inline void check_field_assumptions(FearField& f) {
    const double h = f.h();
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < f.k.size(); ++j) {
        if (f.k[j] < 0)
            throw DomainError("fear field violates assumption (ii): negative sample at x = " +
                              std::to_string(f.x[j]));
        if (f.k[j] <= 1e-12) ++zeros;
    }
    f.zero_measure = static_cast<double>(zeros) * h;
    // assumptions (iii)-(iv): the zero set must have measure zero; on the grid
    // that means at most a few isolated cells
    if (f.zero_measure > 0.05 * f.length)
        throw DomainError("fear field violates assumption (iii): k vanishes on a set of "
                          "measure ~" + std::to_string(f.zero_measure));
}

inline FearField field_skeleton(double L, int n) {
    if (n < 16) throw DomainError("make_fear_field: n must be >= 16");
    if (!(L > 0)) throw DomainError("make_fear_field: L must be positive");
    FearField f;
    f.length = L;
    f.x.resize(n);
    f.k.resize(n);
    const double h = L / n;
    for (int j = 0; j < n; ++j) f.x[j] = (j + 0.5) * h;
    return f;
}

/// Constant bounding field for the comparison systems; skips the zero-set
/// assumption so k-hat = 0 (the classical competition limit) stays usable.
inline FearField constant_field_unchecked(double kappa, double L, int n) {
    FearField f = field_skeleton(L, n);
    if (kappa < 0) throw DomainError("fear field violates assumption (ii): negative constant");
    std::fill(f.k.begin(), f.k.end(), kappa);
    f.k_hat = f.k_tilde = kappa;
    f.zero_measure = kappa <= 1e-12 ? L : 0.0;
    return f;
}

} // namespace detail

inline FearField make_fear_field_constant(double kappa, double L, int n) {
    FearField f = detail::constant_field_unchecked(kappa, L, n);
    detail::check_field_assumptions(f);
    return f;
}

/// kappa0 + kappa1 sin^2(omega x); extrema are closed-form on [0, L].
inline FearField make_fear_field_shifted_sine(double kappa0, double kappa1, double omega,
                                              double L, int n) {
    if (!(omega > 0)) throw DomainError("make_fear_field: omega must be positive");
    FearField f = detail::field_skeleton(L, n);
    for (int j = 0; j < n; ++j) {
        const double s = std::sin(omega * f.x[j]);
        f.k[j] = kappa0 + kappa1 * s * s;
    }
    // sin^2(omega x) attains 0 at x = 0; it attains 1 iff omega L >= pi/2
    const double s_end = std::sin(omega * L);
    const double smax = (omega * L >= std::numbers::pi / 2) ? 1.0 : s_end * s_end;
    f.k_hat = std::min(kappa0, kappa0 + kappa1 * smax);
    f.k_tilde = std::max(kappa0, kappa0 + kappa1 * smax);
    detail::check_field_assumptions(f);
    return f;
}

inline FearField make_fear_field_tabulated(std::vector<double> samples, double L) {
    FearField f = detail::field_skeleton(L, static_cast<int>(samples.size()));
    f.k = std::move(samples);
    f.k_hat = *std::min_element(f.k.begin(), f.k.end());
    f.k_tilde = *std::max_element(f.k.begin(), f.k.end());
    detail::check_field_assumptions(f);
    return f;
}

struct PDEState {
    double time;
    std::vector<double> u, v;
};

/// One Crank-Nicolson half-step of the 1-D Neumann diffusion operator on a
/// cell-centered grid (ghost value mirrors the first interior cell, which
/// keeps the scheme second order and mass conservative).
class CrankNicolsonDiffusion {
public:
    CrankNicolsonDiffusion(std::size_t n, double h, double d, double dt)
        : n_(n), beta_(d * dt / (2.0 * h * h)), cp_(n), dp_(n), rhs_(n) {
        // factor (I - beta L): tridiagonal with off-diagonals -beta
        diag0_ = 1.0 + beta_;       // first and last rows of the FV Laplacian
        diag_ = 1.0 + 2.0 * beta_;
        cp_[0] = -beta_ / diag0_;
        for (std::size_t i = 1; i < n_; ++i) {
            const double d_i = (i + 1 == n_) ? diag0_ : diag_;
            const double m = d_i - (-beta_) * cp_[i - 1];
            cp_[i] = -beta_ / m;
            inv_m_.push_back(1.0 / m);
        }
        inv_m0_ = 1.0 / diag0_;
    }

    void step(double* y) {
        // rhs = (I + beta L) y
        rhs_[0] = y[0] + beta_ * (y[1] - y[0]);
        for (std::size_t i = 1; i + 1 < n_; ++i)
            rhs_[i] = y[i] + beta_ * (y[i - 1] - 2.0 * y[i] + y[i + 1]);
        rhs_[n_ - 1] = y[n_ - 1] + beta_ * (y[n_ - 2] - y[n_ - 1]);
        // Thomas solve
        dp_[0] = rhs_[0] * inv_m0_;
        for (std::size_t i = 1; i < n_; ++i)
            dp_[i] = (rhs_[i] + beta_ * dp_[i - 1]) * inv_m_[i - 1];
        y[n_ - 1] = dp_[n_ - 1];
        for (std::size_t i = n_ - 1; i-- > 0;) y[i] = dp_[i] - cp_[i] * y[i + 1];
    }

    void step(std::vector<double>& y) { step(y.data()); }

private:
    std::size_t n_;
    double beta_, diag0_ = 0, diag_ = 0, inv_m0_ = 0;
    std::vector<double> cp_, dp_, rhs_;
    std::vector<double> inv_m_;
};

namespace detail {

struct StackedReaction {
    ReactionParams rp;
    const std::vector<double>* karr;

    void operator()(double, const std::vector<double>& y, std::vector<double>& dydt) const {
        const std::size_t n = karr->size();
        const auto& k = *karr;
        for (std::size_t j = 0; j < n; ++j) {
            const double u = y[j], v = y[n + j];
            dydt[j] = rp.b * u * (1.0 - u - rp.c * v);
            dydt[n + j] = v * (1.0 / (1.0 + k[j] * u) - v - rp.a * u - rp.m * u * v);
        }
    }
};

inline void clamp_pde(std::vector<double>& y, double abs_tol) {
    for (double& c : y) {
        if (c < 0) {
            if (c < -10.0 * abs_tol)
                throw NumericalError("integrate_pde: negative component beyond tolerance");
            c = 0.0;
        }
        if (c > 10.0)
            throw NumericalError("integrate_pde: divergence guard tripped (component > 10)");
    }
}

} // namespace detail

/// Method-of-lines solver: Strang splitting with Crank-Nicolson diffusion
/// half-steps around an adaptive Dormand-Prince solve of the stacked reaction
/// system. Snapshots are taken exactly at the requested times.
inline std::vector<PDEState> integrate_pde(const ReactionParams& rp, const FearField& field,
                                           double d1, double d2,
                                           std::vector<double> u0, std::vector<double> v0,
                                           double t_end, double dt_ctrl,
                                           std::vector<double> snapshot_times,
                                           double rel_tol = 1e-8, double abs_tol = 1e-10) {
    const std::size_t n = field.size();
    if (u0.size() != n || v0.size() != n)
        throw DomainError("integrate_pde: initial data size must match the field grid");
    for (std::size_t j = 0; j < n; ++j)
        if (u0[j] < 0 || v0[j] < 0)
            throw DomainError("integrate_pde: initial data must be nonnegative");
    if (!(d1 > 0) || !(d2 > 0)) throw DomainError("integrate_pde: diffusivities must be positive");
    if (!(t_end > 0)) throw DomainError("integrate_pde: t_end must be positive");
    if (!(dt_ctrl > 0)) throw DomainError("integrate_pde: dt_ctrl must be positive");

    std::sort(snapshot_times.begin(), snapshot_times.end());
    for (double t : snapshot_times)
        if (!(t > 0) || t > t_end + 1e-12)
            throw DomainError("integrate_pde: snapshot times must lie in (0, t_end]");

    const double h = field.h();
    std::vector<double> y(2 * n);
    std::copy(u0.begin(), u0.end(), y.begin());
    std::copy(v0.begin(), v0.end(), y.begin() + n);

    CrankNicolsonDiffusion cn_u(n, h, d1, dt_ctrl / 2.0);
    CrankNicolsonDiffusion cn_v(n, h, d2, dt_ctrl / 2.0);
    detail::StackedReaction reaction{rp, &field.k};
    const IntegrateOptions opt{rel_tol, abs_tol};
    StepStats stats;

    std::vector<PDEState> out;
    std::vector<double> ubuf(n), vbuf(n);
    auto snapshot = [&](double t) {
        std::copy(y.begin(), y.begin() + n, ubuf.begin());
        std::copy(y.begin() + n, y.end(), vbuf.begin());
        out.push_back({t, ubuf, vbuf});
    };

    double t = 0;
    double h_carry = 0;
    std::size_t next_snap = 0;
    while (t < t_end - 1e-12) {
        double target = t_end;
        if (next_snap < snapshot_times.size()) target = std::min(target, snapshot_times[next_snap]);
        const double dt = std::min(dt_ctrl, target - t);
        const bool full = std::abs(dt - dt_ctrl) < 1e-13;

        auto diffuse_half = [&]() {
            if (full) {
                cn_u.step(y.data());
                cn_v.step(y.data() + n);
            } else {
                CrankNicolsonDiffusion(n, h, d1, dt / 2.0).step(y.data());
                CrankNicolsonDiffusion(n, h, d2, dt / 2.0).step(y.data() + n);
            }
        };

        diffuse_half();
        AdvanceResult r = rk45_advance(reaction, t, t + dt, y, opt, stats,
                                       [&](double, std::vector<double>& s) {
                                           detail::clamp_pde(s, abs_tol);
                                           return true;
                                       },
                                       h_carry);
        h_carry = r.h;
        diffuse_half();

        t += dt;
        if (target - t < 1e-12) t = target; // absorb accumulation slivers
        if (next_snap < snapshot_times.size() && t >= snapshot_times[next_snap] - 1e-12) {
            snapshot(snapshot_times[next_snap]);
            ++next_snap;
        }
    }
    return out;
}

/// Flat-initial-data convenience overload.
inline std::vector<PDEState> integrate_pde(const ReactionParams& rp, const FearField& field,
                                           double d1, double d2, double u0, double v0,
                                           double t_end, double dt_ctrl,
                                           std::vector<double> snapshot_times,
                                           double rel_tol = 1e-8, double abs_tol = 1e-10) {
    return integrate_pde(rp, field, d1, d2, std::vector<double>(field.size(), u0),
                         std::vector<double>(field.size(), v0), t_end, dt_ctrl,
                         std::move(snapshot_times), rel_tol, abs_tol);
}

/// Sandwich tolerance: exact comparison in the continuum plus an h^2-size
/// discretization allowance. The refinement study (n = 64..1000 on the
/// weak-competition and exclusion configurations) measured ordering
/// violations at roundoff level only, so C = 1 already dominates them by
/// ten orders of magnitude.
inline constexpr double kSandwichC = 1.0;

inline double sandwich_tolerance(double h) { return 1e-6 + kSandwichC * h * h; }

struct ComparisonReport {
    std::vector<double> times;
    double max_tilde_minus_v; // should be <= tol: v_tilde <= v
    double max_v_minus_hat;   // should be <= tol: v <= v_hat
    double tol;
    bool holds;
    PDEState het_terminal; // final snapshot of the heterogeneous run
};

/// Run the heterogeneous system plus the constant k-hat and k-tilde bounding
/// systems from the same flat initial data and test the pointwise ordering
/// v_tilde <= v <= v_hat at every snapshot and grid point.
inline ComparisonReport comparison_triplet(const ReactionParams& rp, const FearField& field,
                                           double d1, double d2, double u0, double v0,
                                           double t_end, double dt_ctrl = 0.02,
                                           int n_snapshots = 100) {
    std::vector<double> times;
    times.reserve(n_snapshots);
    for (int i = 1; i <= n_snapshots; ++i) times.push_back(t_end * i / n_snapshots);

    const int n = static_cast<int>(field.size());
    const FearField hat = detail::constant_field_unchecked(field.k_hat, field.length, n);
    const FearField tilde = detail::constant_field_unchecked(field.k_tilde, field.length, n);

    // three independent runs; deterministic regardless of scheduling
    const FearField* fields[3] = {&field, &hat, &tilde};
    std::vector<std::vector<PDEState>> runs(3);
    parallel_for(3, [&](std::size_t i) {
        runs[i] = integrate_pde(rp, *fields[i], d1, d2, u0, v0, t_end, dt_ctrl, times);
    });
    const auto& het = runs[0];
    const auto& upper = runs[1];
    const auto& lower = runs[2];

    ComparisonReport rep;
    rep.times = times;
    rep.max_tilde_minus_v = -std::numeric_limits<double>::infinity();
    rep.max_v_minus_hat = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < het.size(); ++s)
        for (int j = 0; j < n; ++j) {
            rep.max_tilde_minus_v = std::max(rep.max_tilde_minus_v, lower[s].v[j] - het[s].v[j]);
            rep.max_v_minus_hat = std::max(rep.max_v_minus_hat, het[s].v[j] - upper[s].v[j]);
        }
    rep.tol = sandwich_tolerance(field.h());
    rep.holds = rep.max_tilde_minus_v <= rep.tol && rep.max_v_minus_hat <= rep.tol;
    rep.het_terminal = het.back();
    return rep;
}

struct ConvergenceReport {
    double oscillation_u = 0, oscillation_v = 0; // terminal max - min per component
    State2 attained;                             // terminal spatial mean
    double dist_10 = 0, dist_01 = 0;             // terminal sup distance to the exclusion states
    std::string verdict;                         // "(1,0)" | "(0,1)" | "interior" | "none"
    std::vector<State2> interior_candidates;
};

/// Decide which spatially homogeneous state the terminal snapshot sits on.
/// Interior candidates come from the kinetic equilibria at k-hat and k-tilde;
/// anything homogeneous between them (componentwise) counts as "interior",
/// since the heterogeneous limit state is only bracketed by the two kinetic
/// systems.
inline ConvergenceReport detect_convergence(const std::vector<PDEState>& series,
                                            const std::vector<State2>& interior_candidates,
                                            double tol) {
    if (series.empty()) throw DomainError("detect_convergence: empty series");
    if (!(tol > 0)) throw DomainError("detect_convergence: tol must be positive");
    const PDEState& fin = series.back();
    const std::size_t n = fin.u.size();

    ConvergenceReport rep;
    rep.interior_candidates = interior_candidates;
    double umin = fin.u[0], umax = fin.u[0], vmin = fin.v[0], vmax = fin.v[0];
    double su = 0, sv = 0;
    rep.dist_10 = 0;
    rep.dist_01 = 0;
    for (std::size_t j = 0; j < n; ++j) {
        umin = std::min(umin, fin.u[j]);
        umax = std::max(umax, fin.u[j]);
        vmin = std::min(vmin, fin.v[j]);
        vmax = std::max(vmax, fin.v[j]);
        su += fin.u[j];
        sv += fin.v[j];
        rep.dist_10 = std::max(rep.dist_10, std::max(std::abs(fin.u[j] - 1.0), std::abs(fin.v[j])));
        rep.dist_01 = std::max(rep.dist_01, std::max(std::abs(fin.u[j]), std::abs(fin.v[j] - 1.0)));
    }
    rep.oscillation_u = umax - umin;
    rep.oscillation_v = vmax - vmin;
    rep.attained = {su / n, sv / n};

    if (std::max(rep.oscillation_u, rep.oscillation_v) >= tol) {
        rep.verdict = "none";
        return rep;
    }
    if (rep.dist_10 < tol) {
        rep.verdict = "(1,0)";
        return rep;
    }
    if (rep.dist_01 < tol) {
        rep.verdict = "(0,1)";
        return rep;
    }
    if (!interior_candidates.empty()) {
        double cx_lo = interior_candidates[0].x, cx_hi = cx_lo;
        double cy_lo = interior_candidates[0].y, cy_hi = cy_lo;
        for (const State2& cand : interior_candidates) {
            cx_lo = std::min(cx_lo, cand.x);
            cx_hi = std::max(cx_hi, cand.x);
            cy_lo = std::min(cy_lo, cand.y);
            cy_hi = std::max(cy_hi, cand.y);
        }
        const bool between = rep.attained.x > cx_lo - tol && rep.attained.x < cx_hi + tol &&
                             rep.attained.y > cy_lo - tol && rep.attained.y < cy_hi + tol;
        if (between && rep.attained.x > tol && rep.attained.y > tol) {
            rep.verdict = "interior";
            return rep;
        }
    }
    rep.verdict = "none";
    return rep;
}

/// Interior stable nodes of the kinetic systems at the field extrema; these
/// are the convergence candidates for the weak-competition / bi-stability
/// regimes.
inline std::vector<State2> interior_candidates_for(const ReactionParams& rp,
                                                   const FearField& field) {
    std::vector<State2> out;
    for (double kk : {field.k_hat, field.k_tilde})
        for (const Equilibrium& e : interior_equilibria(with_fear(rp, kk)))
            if (e.kind == EquilibriumKind::InteriorStableNode) out.push_back(e.location);
    return out;
}

namespace detail {

/// u-coordinate where the polyline crosses the horizontal line y = v, nearest
/// to u_ref when several segments cross.
inline std::optional<double> crossing_u(const std::vector<State2>& line, double v, double u_ref) {
    std::optional<double> best;
    for (std::size_t i = 1; i < line.size(); ++i) {
        const State2& p = line[i - 1];
        const State2& q = line[i];
        if ((p.y - v) * (q.y - v) > 0) continue;
        if (p.y == q.y) continue;
        const double t = (v - p.y) / (q.y - p.y);
        if (t < 0 || t > 1) continue;
        const double u = p.x + t * (q.x - p.x);
        if (!best || std::abs(u - u_ref) < std::abs(*best - u_ref)) best = u;
    }
    return best;
}

inline std::vector<State2> joined_branches(const Separatrix& sep) {
    std::vector<State2> line(sep.branch_neg.rbegin(), sep.branch_neg.rend());
    line.insert(line.end(), sep.branch_pos.begin(), sep.branch_pos.end());
    return line;
}

} // namespace detail

struct WedgeReport {
    Equilibrium e1_star;   // interior saddle of the k-hat kinetic system
    Equilibrium e1_dstar;  // interior saddle of the k-tilde kinetic system
    bool v_ordering;       // v(E1**) > v(E1*)
    bool separatrix_ordering;
    int ordering_samples;
    std::string restriction_note; // surfaces the two m2-type numerators
    ConvergenceReport probe_below, probe_above;
    bool probes_ok;
};

/// Strong-competition structure check: both kinetic systems at the field
/// extrema have an interior saddle; the k-tilde separatrix stays on the far
/// side of the k-hat separatrix inside the wedge; flat PDE data on either
/// side of the wedge converge to the opposite exclusion states.
inline WedgeReport wedge_check(const ReactionParams& rp, const FearField& field, double d1,
                               double d2, double t_end, State2 below_init, State2 above_init,
                               double dt_ctrl = 0.02) {
    // the theorem's restriction set, checked for k = k_hat and k = k_tilde
    char buf[256];
    WedgeReport rep;
    for (double kk : {field.k_hat, field.k_tilde}) {
        if (!(rp.c > 1))
            throw PreconditionError("wedge_check: restriction c > 1 failed");
        if (!(rp.m > 1.0 - rp.a * rp.c - kk)) {
            std::snprintf(buf, sizeof buf,
                          "wedge_check: restriction m > 1 - a c - k failed for k = %g", kk);
            throw PreconditionError(buf);
        }
        const double m2_plus = (2 * rp.a * rp.c * kk + rp.a * rp.c - kk + 1.0) / (1.0 + kk);
        if (!(rp.m > m2_plus)) {
            std::snprintf(buf, sizeof buf,
                          "wedge_check: restriction m > (2ack+ac-k+1)/(1+k) failed for k = %g "
                          "(threshold %g)",
                          kk, m2_plus);
            throw PreconditionError(buf);
        }
        if (!(kk >= 1.0 / rp.a - 1.0)) {
            std::snprintf(buf, sizeof buf,
                          "wedge_check: restriction k >= 1/a - 1 failed for k = %g", kk);
            throw PreconditionError(buf);
        }
        const Cubic cu = cubic(with_fear(rp, kk));
        auto cp = cu.critical_points();
        const bool u_neg = cp && cp->second > 0 && cp->second < 1 && cu.u(cp->second) < 0;
        if (!u_neg) {
            std::snprintf(buf, sizeof buf, "wedge_check: restriction u(E) < 0 failed for k = %g",
                          kk);
            throw PreconditionError(buf);
        }
    }
    {
        const double kk = field.k_hat;
        const double m2_plus = (2 * rp.a * rp.c * kk + rp.a * rp.c - kk + 1.0) / (1.0 + kk);
        const double m2_table = (2 * rp.a * rp.c * kk + rp.a * rp.c - kk - 1.0) / (1.0 + kk);
        std::snprintf(buf, sizeof buf,
                      "m2-type restriction at k-hat: numerator '-k+1' gives %g, the m2 "
                      "threshold's numerator '-k-1' gives %g; both below m = %g",
                      m2_plus, m2_table, rp.m);
        rep.restriction_note = buf;
    }

    auto interior_saddle = [&](double kk) -> Equilibrium {
        for (const Equilibrium& e : interior_equilibria(with_fear(rp, kk)))
            if (e.kind == EquilibriumKind::InteriorSaddle) return e;
        throw NumericalError("wedge_check: no interior saddle found");
    };
    rep.e1_star = interior_saddle(field.k_hat);
    rep.e1_dstar = interior_saddle(field.k_tilde);
    rep.v_ordering = rep.e1_dstar.location.y > rep.e1_star.location.y;

    const Separatrix sep_hat = trace_separatrix(with_fear(rp, field.k_hat), rep.e1_star, 80.0);
    const Separatrix sep_tilde =
        trace_separatrix(with_fear(rp, field.k_tilde), rep.e1_dstar, 80.0);
    const auto line_hat = detail::joined_branches(sep_hat);
    const auto line_tilde = detail::joined_branches(sep_tilde);

    // sample the wedge along horizontal rays through heights around E1*:
    // the k-tilde separatrix must sit weakly on the E2-side (smaller u)
    rep.separatrix_ordering = true;
    rep.ordering_samples = 0;
    const double v0 = rep.e1_star.location.y;
    for (int i = -20; i <= 20; ++i) {
        const double v = v0 + 0.02 * i;
        if (v <= 0.05) continue;
        const auto u_hat = detail::crossing_u(line_hat, v, rep.e1_star.location.x);
        const auto u_tilde = detail::crossing_u(line_tilde, v, rep.e1_star.location.x);
        if (!u_hat || !u_tilde) continue;
        ++rep.ordering_samples;
        if (*u_tilde > *u_hat + 1e-6) rep.separatrix_ordering = false;
    }

    const std::vector<double> snaps{t_end / 2, t_end};
    const auto run_below = integrate_pde(rp, field, d1, d2, below_init.x, below_init.y, t_end,
                                         dt_ctrl, snaps);
    const auto run_above = integrate_pde(rp, field, d1, d2, above_init.x, above_init.y, t_end,
                                         dt_ctrl, snaps);
    const auto candidates = interior_candidates_for(rp, field);
    rep.probe_below = detect_convergence(run_below, candidates, 1e-3);
    rep.probe_above = detect_convergence(run_above, candidates, 1e-3);
    rep.probes_ok = rep.probe_below.verdict == "(1,0)" && rep.probe_above.verdict == "(0,1)";
    return rep;
}

} // namespace allelofear
