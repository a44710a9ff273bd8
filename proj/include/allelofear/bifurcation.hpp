#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "allelofear/equilibria.hpp"
#include "allelofear/model.hpp"

namespace allelofear {

enum class BifKind { TranscriticalE1, TranscriticalE2, SaddleNode, Pitchfork };

inline const char* to_string(BifKind kind) {
    switch (kind) {
        case BifKind::TranscriticalE1: return "transcritical-E1";
        case BifKind::TranscriticalE2: return "transcritical-E2";
        case BifKind::SaddleNode: return "saddle-node";
        case BifKind::Pitchfork: return "pitchfork";
    }
    return "?";
}

enum class Verdict { Satisfied, DegenerateToPitchfork, Failed };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::DegenerateToPitchfork: return "degenerate-to-pitchfork";
        case Verdict::Failed: return "failed";
    }
    return "?";
}

/// The three Sotomayor scalars: W.Q_mu, W.[DQ_mu V], W.[D^2Q(V,V)].
struct TransversalityReport {
    BifKind kind;
    double threshold;
    double s1, s2, s3;
    Verdict verdict;
};

namespace detail {

using Vec2d = std::array<double, 2>;

inline Vec2d eval_q(const ModelParams& p, const Vec2d& s) {
    const State2 d = kinetics(p, {s[0], s[1]});
    return {d.x, d.y};
}

/// dQ/dmu at fixed state, central difference.
inline Vec2d q_param_deriv(const ModelParams& p, char mu, const Vec2d& s, double h = 1e-5) {
    const Vec2d qp = eval_q(p.with(mu, p.get(mu) + h), s);
    const Vec2d qm = eval_q(p.with(mu, p.get(mu) - h), s);
    return {(qp[0] - qm[0]) / (2 * h), (qp[1] - qm[1]) / (2 * h)};
}

/// Mixed derivative d/deps [dQ/dmu](s + eps V) via a 4-point stencil with one
/// Richardson step. The larger base step keeps the h^-2 roundoff term below
/// the 1e-8 agreement target; plain central differences at 1e-5 cannot.
inline Vec2d q_mixed_deriv(const ModelParams& p, char mu, const Vec2d& s, const Vec2d& dir) {
    auto stencil = [&](double h) {
        const ModelParams pp = p.with(mu, p.get(mu) + h);
        const ModelParams pm = p.with(mu, p.get(mu) - h);
        const Vec2d sp{s[0] + h * dir[0], s[1] + h * dir[1]};
        const Vec2d sm{s[0] - h * dir[0], s[1] - h * dir[1]};
        const Vec2d qpp = eval_q(pp, sp), qpm = eval_q(pm, sp);
        const Vec2d qmp = eval_q(pp, sm), qmm = eval_q(pm, sm);
        return Vec2d{(qpp[0] - qpm[0] - qmp[0] + qmm[0]) / (4 * h * h),
                     (qpp[1] - qpm[1] - qmp[1] + qmm[1]) / (4 * h * h)};
    };
    const double h = 4e-3;
    const Vec2d d1 = stencil(h), d2 = stencil(h / 2);
    return {(4 * d2[0] - d1[0]) / 3, (4 * d2[1] - d1[1]) / 3};
}

/// Second directional derivative D^2Q(V,V), Richardson-extrapolated.
inline Vec2d q_second_dir(const ModelParams& p, const Vec2d& s, const Vec2d& dir) {
    auto stencil = [&](double h) {
        const Vec2d sp{s[0] + h * dir[0], s[1] + h * dir[1]};
        const Vec2d sm{s[0] - h * dir[0], s[1] - h * dir[1]};
        const Vec2d qp = eval_q(p, sp), q0 = eval_q(p, s), qm = eval_q(p, sm);
        return Vec2d{(qp[0] - 2 * q0[0] + qm[0]) / (h * h),
                     (qp[1] - 2 * q0[1] + qm[1]) / (h * h)};
    };
    const double h = 4e-3;
    const Vec2d d1 = stencil(h), d2 = stencil(h / 2);
    return {(4 * d2[0] - d1[0]) / 3, (4 * d2[1] - d1[1]) / 3};
}

/// Null eigenvectors of J and J^T at the degenerate equilibrium, scaled so the
/// last nonzero component is +1 (the displayed representatives' convention).
struct NullVectors {
    Vec2d v, w;
};

inline NullVectors null_vectors(const ModelParams& p, const State2& at) {
    const Jacobian2 jac = jacobian(p, at);
    auto [l1, l2] = jac.eigenvalues();
    const double lam = std::abs(l1.real()) <= std::abs(l2.real()) ? l1.real() : l2.real();
    return {jac.eigenvector(lam), jac.transposed().eigenvector(lam)};
}

inline double dot(const Vec2d& a, const Vec2d& b) { return a[0] * b[0] + a[1] * b[1]; }

} // namespace detail

/// Closed-form Sotomayor scalars, for cross-checks against the numeric path.
inline double e1_second_scalar_closed(const ModelParams& p) { return -p.a * p.a; }
inline double e1_third_scalar_closed(const ModelParams& p) {
    return (-2.0 * p.a * p.a + 4.0 * p.a) * p.c - 2.0 * p.m - 2.0;
}
inline double e2_second_scalar_closed(const ModelParams& p) {
    return p.b / (p.a + p.k + p.m);
}
inline double e2_third_scalar_closed(const ModelParams& p) {
    const double s = p.a + p.k + p.m;
    return 2.0 * p.b * (-1.0 + s) / (s * s);
}
inline double sn_first_scalar_closed(const ModelParams& p, double E) {
    return -(1.0 - E) * (1.0 - E) * E / (p.c * p.c);
}
inline double sn_third_scalar_closed(const ModelParams& p, double E) {
    const double k = p.k, c = p.c;
    const double w = E * k + 1.0;
    const double num = E * E * E * k * k * k - 3.0 * k * k * (c - 1.0) * E * E -
                       3.0 * k * (c - 1.0) * E - c + 1.0;
    return 2.0 * (-1.0 + E) * num / (w * w * w * E * E);
}

/// Transcritical transversality at E1, evaluated at k = k* = 1/a - 1.
inline TransversalityReport transversality_E1(const ModelParams& p) {
    p.validate();
    const double k_star = thresholds(p).k_star;
    if (std::abs(p.k - k_star) >= 1e-12)
        throw PreconditionError("transversality_E1: k must equal k* = 1/a - 1 to 1e-12");

    const State2 e1{1.0, 0.0};
    const auto [v, w] = detail::null_vectors(p, e1);
    const detail::Vec2d s{e1.x, e1.y};
    TransversalityReport rep;
    rep.kind = BifKind::TranscriticalE1;
    rep.threshold = k_star;
    rep.s1 = detail::dot(w, detail::q_param_deriv(p, 'k', s));
    rep.s2 = detail::dot(w, detail::q_mixed_deriv(p, 'k', s, v));
    rep.s3 = detail::dot(w, detail::q_second_dir(p, s, v));
    if (std::abs(rep.s1) >= kEpsDeg || std::abs(rep.s2) <= kEpsDeg)
        rep.verdict = Verdict::Failed;
    else
        rep.verdict = std::abs(rep.s3) > kEpsDeg ? Verdict::Satisfied
                                                 : Verdict::DegenerateToPitchfork;
    return rep;
}

/// Transcritical transversality at E2, evaluated at c = 1.
inline TransversalityReport transversality_E2(const ModelParams& p) {
    p.validate();
    if (std::abs(p.c - 1.0) >= 1e-12)
        throw PreconditionError("transversality_E2: c must equal 1 to 1e-12");

    const State2 e2{0.0, 1.0};
    const auto [v, w] = detail::null_vectors(p, e2);
    const detail::Vec2d s{e2.x, e2.y};
    TransversalityReport rep;
    rep.kind = BifKind::TranscriticalE2;
    rep.threshold = 1.0;
    rep.s1 = detail::dot(w, detail::q_param_deriv(p, 'c', s));
    rep.s2 = detail::dot(w, detail::q_mixed_deriv(p, 'c', s, v));
    rep.s3 = detail::dot(w, detail::q_second_dir(p, s, v));
    if (std::abs(rep.s1) >= kEpsDeg || std::abs(rep.s2) <= kEpsDeg)
        rep.verdict = Verdict::Failed;
    else
        rep.verdict = std::abs(rep.s3) > kEpsDeg ? Verdict::Satisfied
                                                 : Verdict::DegenerateToPitchfork;
    return rep;
}

/// (m_SN, a1): the parameter pair that makes x = E a double root of u,
/// given k and c.
inline std::pair<double, double> saddle_node_threshold(double k, double c, double E) {
    if (!(E > 0.0) || !(E < 1.0))
        throw DomainError("saddle_node_threshold: E must lie in (0,1)");
    if (!(k > 0) || !(c > 0))
        throw DomainError("saddle_node_threshold: k and c must be positive");
    const double w = E * k + 1.0;
    const double den = E * E * w * w;
    const double m_sn = (-E * E * k * k + 2.0 * E * c * k - 2.0 * E * k + c - 1.0) / den;
    const double a1 =
        (std::pow(E, 4) * k * k - 2.0 * std::pow(E, 3) * k * k + 2.0 * std::pow(E, 3) * k +
         3.0 * E * E * c * k + E * E * k * k - 4.0 * E * E * k - 2.0 * E * c * k + E * E +
         2.0 * E * c + 2.0 * E * k - 2.0 * E - c + 1.0) /
        (c * den);
    return {m_sn, a1};
}

/// (a*, c*): the dual closed form, solving u(x) = v(x) = 0 for (a, c)
/// given k and m.
inline std::pair<double, double> saddle_node_ac(double k, double m, double x) {
    if (!(x > 0.0) || !(x < 1.0)) throw DomainError("saddle_node_ac: x must lie in (0,1)");
    const double w = k * x + 1.0;
    const double den = w * w * (m * x * x + 1.0);
    const double a_star =
        (3.0 * k * m * x * x - 2.0 * k * m * x + 2.0 * k * x + 2.0 * m * x - k - m + 1.0) / den;
    const double c_star = den / (2.0 * k * x + 1.0);
    return {a_star, c_star};
}

struct DoubleRoot {
    double E;
    double m_sn;
};

/// Solve u(E) = v(E) = 0 for (E, m) at fixed (a, c, k): m is eliminated via
/// m_of_x and the remaining scalar equation v(E) = 0 is bisected over (0,1).
inline DoubleRoot solve_double_root(double a, double c, double k) {
    if (!(a > 0) || !(c > 0) || !(k > 0))
        throw DomainError("solve_double_root: a, c, k must be positive");
    auto psi = [&](double E) {
        const ModelParams q{a, 1.0, c, k, m_of_x(ModelParams{a, 1.0, c, k, 0.0}, E)};
        return cubic(q).v(E);
    };
    constexpr int n = 4000;
    constexpr double lo = 1e-6, hi = 1.0 - 1e-6;
    double prev_e = lo, prev_v = psi(lo);
    std::vector<DoubleRoot> found;
    for (int i = 1; i <= n; ++i) {
        const double e = lo + (hi - lo) * i / n;
        const double ve = psi(e);
        if ((prev_v < 0) != (ve < 0)) {
            double s = prev_e, t = e;
            for (int it = 0; it < 200 && t - s > 1e-15; ++it) {
                const double mid = 0.5 * (s + t);
                if ((psi(s) < 0) != (psi(mid) < 0)) t = mid;
                else s = mid;
            }
            const double E = 0.5 * (s + t);
            const double m = m_of_x(ModelParams{a, 1.0, c, k, 0.0}, E);
            if (m > 0) found.push_back({E, m});
        }
        prev_e = e;
        prev_v = ve;
    }
    if (found.empty())
        throw NumericalError("solve_double_root: no interior double root with m > 0");
    return found.front();
}

/// Saddle-node transversality at E3* = (E, (1-E)/c); requires (m, a) pinned
/// at (m_SN, a1) for this E.
inline TransversalityReport transversality_SN(const ModelParams& p, double E) {
    p.validate();
    const auto [m_sn, a1] = saddle_node_threshold(p.k, p.c, E);
    if (std::abs(p.m - m_sn) >= 1e-10 || std::abs(p.a - a1) >= 1e-10)
        throw PreconditionError("transversality_SN: (m, a) must equal (m_SN, a1) to 1e-10");

    const State2 e3{E, (1.0 - E) / p.c};
    const auto [v, w] = detail::null_vectors(p, e3);
    const detail::Vec2d s{e3.x, e3.y};
    TransversalityReport rep;
    rep.kind = BifKind::SaddleNode;
    rep.threshold = m_sn;
    rep.s1 = detail::dot(w, detail::q_param_deriv(p, 'm', s));
    rep.s2 = detail::dot(w, detail::q_mixed_deriv(p, 'm', s, v));
    rep.s3 = detail::dot(w, detail::q_second_dir(p, s, v));
    rep.verdict = (std::abs(rep.s1) > kEpsDeg && std::abs(rep.s3) > kEpsDeg)
                      ? Verdict::Satisfied
                      : Verdict::Failed;
    return rep;
}

struct DiagramSample {
    double value;
    std::vector<Equilibrium> equilibria;
};

struct DiagramEvent {
    double value;
    double bracket_lo, bracket_hi;
    BifKind kind;
    double merge_x; // abscissa where the inventory change happens
};

struct BifurcationDiagram {
    char parameter;
    std::vector<DiagramSample> samples;
    std::vector<DiagramEvent> events;
};

namespace detail {

/// Interior-inventory signature: kinds with multiplicities, sorted.
inline std::vector<std::pair<int, int>> interior_signature(const ModelParams& p) {
    std::vector<std::pair<int, int>> sig;
    for (const Equilibrium& e : interior_equilibria(p))
        sig.emplace_back(static_cast<int>(e.kind), e.multiplicity);
    std::sort(sig.begin(), sig.end());
    return sig;
}

} // namespace detail

/// One-parameter sweep with event location by bisection on inventory-change
/// brackets. Events are labeled transcritical when the merge happens at a
/// boundary equilibrium (u(1) or u(0) changes sign across the bracket),
/// pitchfork when such a boundary merge changes the nearby full-plane
/// equilibrium count by two, and saddle-node otherwise.
inline BifurcationDiagram scan(const ModelParams& base, char param, double lo, double hi,
                               int n) {
    if (!(lo < hi)) throw DomainError("scan: lo must be < hi");
    if (n < 3) throw DomainError("scan: n must be >= 3");
    base.with(param, lo).validate();

    BifurcationDiagram diagram;
    diagram.parameter = param;
    diagram.samples.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double value = lo + (hi - lo) * i / (n - 1);
        diagram.samples.push_back({value, all_equilibria(base.with(param, value))});
    }

    for (int i = 0; i + 1 < n; ++i) {
        double s = diagram.samples[i].value, e = diagram.samples[i + 1].value;
        const auto sig_lo = detail::interior_signature(base.with(param, s));
        if (sig_lo == detail::interior_signature(base.with(param, e))) continue;

        while (e - s > 1e-8) {
            const double mid = 0.5 * (s + e);
            if (detail::interior_signature(base.with(param, mid)) == sig_lo) s = mid;
            else e = mid;
        }

        DiagramEvent ev;
        ev.bracket_lo = s;
        ev.bracket_hi = e;
        ev.value = 0.5 * (s + e);

        auto valid = [&](double v) {
            try {
                base.with(param, v).validate();
                return true;
            } catch (const DomainError&) {
                return false;
            }
        };
        // Boundary merges are recognized by u(1) or u(0) changing sign near the
        // event. The window is wider than the bracket: the inventory flips a
        // hair before the analytic threshold (roots inside the 1e-12 boundary
        // band already count as boundary points), so the bracket itself need
        // not straddle the zero of u(1).
        double w = std::max(1e-4 * (hi - lo), 1e-6);
        while (w > 1e-9 && (!valid(ev.value - w) || !valid(ev.value + w))) w /= 2;
        const Cubic cu_lo = cubic(base.with(param, ev.value - w));
        const Cubic cu_hi = cubic(base.with(param, ev.value + w));
        auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
        const bool at_e1 = sgn(cu_lo.u(1.0)) != sgn(cu_hi.u(1.0));
        const bool at_e2 = sgn(cu_lo.u(0.0)) != sgn(cu_hi.u(0.0));

        if (at_e1 || at_e2) {
            const State2 center = at_e1 ? State2{1.0, 0.0} : State2{0.0, 1.0};
            ev.merge_x = at_e1 ? 1.0 : 0.0;
            // count signature on either side of the event, clear of the bracket
            double off = std::max(1e-3 * (hi - lo), 1e-6);
            while (off > 1e-9 && (!valid(ev.value - off) || !valid(ev.value + off))) off /= 2;
            const int below = equilibria_near_count(base.with(param, ev.value - off), center, 0.25);
            const int above = equilibria_near_count(base.with(param, ev.value + off), center, 0.25);
            if (std::abs(below - above) == 2)
                ev.kind = BifKind::Pitchfork;
            else
                ev.kind = at_e1 ? BifKind::TranscriticalE1 : BifKind::TranscriticalE2;
        } else {
            ev.kind = BifKind::SaddleNode;
            const Cubic cu = cubic(base.with(param, ev.value));
            ev.merge_x = 0.5;
            if (auto cp = cu.critical_points()) {
                // the merging pair sits at the critical point where |u| is smallest
                const double u1 = std::abs(cu.u(cp->first)), u2 = std::abs(cu.u(cp->second));
                ev.merge_x = u1 < u2 ? cp->first : cp->second;
            }
        }
        diagram.events.push_back(ev);
    }
    return diagram;
}

/// Transversality report for a scan-detected event, with the scanned
/// parameter snapped onto the exact analytic threshold first (event brackets
/// are 1e-8 wide; the transversality preconditions demand 1e-12).
inline TransversalityReport transversality_at_event(const ModelParams& p_event,
                                                    const DiagramEvent& ev, char param) {
    ModelParams p = p_event.with(param, ev.value);
    switch (ev.kind) {
        case BifKind::TranscriticalE1: {
            if (param == 'k') p.k = thresholds(p).k_star;
            else if (param == 'a') p.a = 1.0 / (1.0 + p.k);
            else throw PreconditionError("transversality_at_event: E1 events arise only in k or a scans");
            return transversality_E1(p);
        }
        case BifKind::TranscriticalE2:
        case BifKind::Pitchfork: {
            if (param != 'c')
                throw PreconditionError("transversality_at_event: E2 events arise only in c scans");
            p.c = 1.0;
            return transversality_E2(p);
        }
        case BifKind::SaddleNode: {
            // pin (m, a) on the double-root manifold through the event
            double E = ev.merge_x;
            for (int it = 0; it < 4; ++it) {
                const auto [m_sn, a1] = saddle_node_threshold(p.k, p.c, E);
                p.m = m_sn;
                p.a = a1;
                if (auto cp = cubic(p).critical_points()) {
                    const double u1 = std::abs(cubic(p).u(cp->first));
                    const double u2 = std::abs(cubic(p).u(cp->second));
                    E = u1 < u2 ? cp->first : cp->second;
                }
            }
            return transversality_SN(p, E);
        }
    }
    throw NumericalError("transversality_at_event: unreachable");
}

} // namespace allelofear
