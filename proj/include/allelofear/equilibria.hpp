#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "allelofear/model.hpp"

namespace allelofear {

enum class EquilibriumKind {
    Source,
    HyperbolicStableNode,
    HyperbolicSaddle,
    AttractingSaddleNodeParabolicUpper,
    AttractingSaddleNodeParabolicLower,
    AttractingSaddleNodeParabolicRight,
    AttractingSaddleNodeParabolicLeft,
    NonhyperbolicSaddle,
    DegenerateStableNode,
    InteriorSaddle,
    InteriorStableNode,
    InteriorSaddleNode
};

inline const char* to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::Source: return "source";
        case EquilibriumKind::HyperbolicStableNode: return "hyperbolic-stable-node";
        case EquilibriumKind::HyperbolicSaddle: return "hyperbolic-saddle";
        case EquilibriumKind::AttractingSaddleNodeParabolicUpper: return "attracting-saddle-node-parabolic-upper";
        case EquilibriumKind::AttractingSaddleNodeParabolicLower: return "attracting-saddle-node-parabolic-lower";
        case EquilibriumKind::AttractingSaddleNodeParabolicRight: return "attracting-saddle-node-parabolic-right";
        case EquilibriumKind::AttractingSaddleNodeParabolicLeft: return "attracting-saddle-node-parabolic-left";
        case EquilibriumKind::NonhyperbolicSaddle: return "nonhyperbolic-saddle";
        case EquilibriumKind::DegenerateStableNode: return "degenerate-stable-node";
        case EquilibriumKind::InteriorSaddle: return "interior-saddle";
        case EquilibriumKind::InteriorStableNode: return "interior-stable-node";
        case EquilibriumKind::InteriorSaddleNode: return "interior-saddle-node";
    }
    return "?";
}

inline bool is_saddle(EquilibriumKind kind) {
    return kind == EquilibriumKind::HyperbolicSaddle ||
           kind == EquilibriumKind::NonhyperbolicSaddle ||
           kind == EquilibriumKind::InteriorSaddle;
}

/// Attracting in the sense of owning a basin with nonempty interior.
inline bool is_attracting(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::HyperbolicStableNode:
        case EquilibriumKind::AttractingSaddleNodeParabolicUpper:
        case EquilibriumKind::AttractingSaddleNodeParabolicLower:
        case EquilibriumKind::AttractingSaddleNodeParabolicRight:
        case EquilibriumKind::AttractingSaddleNodeParabolicLeft:
        case EquilibriumKind::DegenerateStableNode:
        case EquilibriumKind::InteriorStableNode:
        case EquilibriumKind::InteriorSaddleNode:
            return true;
        default:
            return false;
    }
}

struct Equilibrium {
    std::string label; // E0, E1, E2, E1*, E2*, E3*
    State2 location;
    EquilibriumKind kind;
    std::complex<double> eig1, eig2;
    double residual = 0;   // max |kinetics| at location
    int multiplicity = 1;  // 2 for the saddle-node double root E3*
    bool outside_proved_regime = false; // k=k*, m=m* with m*<=0
};

struct RootInfo {
    double x;
    int multiplicity;
};

namespace detail {

inline double bisect_root(const Cubic& cu, double lo, double hi) {
    double flo = cu.u(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = cu.u(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0) != (fm < 0)) hi = mid;
        else { lo = mid; flo = fm; }
    }
    double x = 0.5 * (lo + hi);
    // one Newton polish step; keep it inside the bracket
    const double vx = cu.v(x);
    if (std::abs(vx) > 1e-12) {
        const double xn = x - cu.u(x) / vx;
        if (xn > lo && xn < hi && std::abs(cu.u(xn)) <= std::abs(cu.u(x))) x = xn;
    }
    return x;
}

/// All real roots of u in the open interval (lo, hi). The interval is split
/// at the critical points of u so every sub-segment is monotone; double roots
/// sit at critical points where |u| < kEpsRoot and are reported once with
/// multiplicity 2. Simple roots closer than 1e-3 to a detected double root
/// are absorbed by it.
inline std::vector<RootInfo> roots_in(const Cubic& cu, double lo, double hi) {
    std::vector<double> brk{lo, hi};
    if (auto cp = cu.critical_points()) {
        for (double xc : {cp->first, cp->second})
            if (xc > lo && xc < hi) brk.push_back(xc);
    }
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [](double p, double q) { return std::abs(p - q) < 1e-14; }),
              brk.end());

    std::vector<RootInfo> roots;
    for (std::size_t i = 1; i + 1 < brk.size(); ++i) // interior breakpoints = critical points
        if (std::abs(cu.u(brk[i])) < kEpsRoot)
            roots.push_back({brk[i], 2});

    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double s = brk[i], e = brk[i + 1];
        const double us = cu.u(s), ue = cu.u(e);
        if ((us < 0) == (ue < 0) || us == 0.0 || ue == 0.0) continue;
        const double x = bisect_root(cu, s, e);
        // roots essentially on the interval boundary belong to the endpoints
        // (e.g. x = 1 is the E1 abscissa when k sits exactly on k*)
        if (!(x - lo > 1e-12 && hi - x > 1e-12)) continue;
        bool absorbed = false;
        for (const auto& r : roots)
            if (r.multiplicity == 2 && std::abs(r.x - x) < 1e-3) { absorbed = true; break; }
        if (!absorbed) roots.push_back({x, 1});
    }
    std::sort(roots.begin(), roots.end(),
              [](const RootInfo& p, const RootInfo& q) { return p.x < q.x; });
    return roots;
}

} // namespace detail

/// Roots of u in the open unit interval, ascending, double roots deduplicated
/// at multiplicity 2. Every reported abscissa satisfies |u(x)| < kEpsRoot.
inline std::vector<RootInfo> interior_roots(const ModelParams& p) {
    return detail::roots_in(cubic(p), 0.0, 1.0);
}

inline std::vector<Equilibrium> boundary_equilibria(const ModelParams& p) {
    std::vector<Equilibrium> out;
    const Thresholds th = thresholds(p);
    auto finalize = [&p](Equilibrium& e) {
        std::tie(e.eig1, e.eig2) = jacobian(p, e.location).eigenvalues();
        const State2 f = kinetics(p, e.location);
        e.residual = std::max(std::abs(f.x), std::abs(f.y));
    };

    { // E0 = (0,0): always a source, eigenvalues {b, 1}
        Equilibrium e;
        e.label = "E0";
        e.location = {0.0, 0.0};
        e.kind = EquilibriumKind::Source;
        finalize(e);
        out.push_back(e);
    }

    { // E1 = (1,0): eigenvalues {-b, 1/(1+k) - a}
        Equilibrium e;
        e.label = "E1";
        e.location = {1.0, 0.0};
        const double lam2 = 1.0 / (1.0 + p.k) - p.a;
        if (lam2 < -kEpsDeg) e.kind = EquilibriumKind::HyperbolicStableNode;      // k > k*
        else if (lam2 > kEpsDeg) e.kind = EquilibriumKind::HyperbolicSaddle;      // k < k*
        else if (p.m > th.m_star + kEpsDeg)
            e.kind = EquilibriumKind::AttractingSaddleNodeParabolicUpper;
        else if (p.m < th.m_star - kEpsDeg)
            e.kind = EquilibriumKind::AttractingSaddleNodeParabolicLower;
        else {
            e.kind = EquilibriumKind::NonhyperbolicSaddle;
            e.outside_proved_regime = (th.m_star <= 0);
        }
        finalize(e);
        out.push_back(e);
    }

    { // E2 = (0,1): eigenvalues {b(1-c), -1}
        Equilibrium e;
        e.label = "E2";
        e.location = {0.0, 1.0};
        const double lam1 = p.b * (1.0 - p.c);
        if (lam1 < -kEpsDeg) e.kind = EquilibriumKind::HyperbolicStableNode;      // c > 1
        else if (lam1 > kEpsDeg) e.kind = EquilibriumKind::HyperbolicSaddle;      // c < 1
        else if (p.m < th.m_dstar - kEpsDeg)
            e.kind = EquilibriumKind::AttractingSaddleNodeParabolicRight;
        else if (p.m > th.m_dstar + kEpsDeg)
            e.kind = EquilibriumKind::AttractingSaddleNodeParabolicLeft;
        else
            e.kind = EquilibriumKind::DegenerateStableNode;
        finalize(e);
        out.push_back(e);
    }
    return out;
}

inline std::vector<Equilibrium> interior_equilibria(const ModelParams& p) {
    std::vector<Equilibrium> out;
    const Cubic cu = cubic(p);
    for (const RootInfo& r : interior_roots(p)) {
        const double y = (1.0 - r.x) / p.c;
        if (!(y > 0)) continue;
        Equilibrium e;
        e.location = {r.x, y};
        e.multiplicity = r.multiplicity;
        const double vx = cu.v(r.x);
        const Jacobian2 jac = jacobian(p, e.location);
        if (r.multiplicity == 2 || std::abs(vx) <= kEpsDeg) {
            e.kind = EquilibriumKind::InteriorSaddleNode;
            e.label = "E3*";
            e.multiplicity = 2;
        } else if (vx < 0) { // det(J) < 0
            e.kind = EquilibriumKind::InteriorSaddle;
            e.label = "E1*";
        } else { // det(J) > 0, trace < 0
            e.kind = EquilibriumKind::InteriorStableNode;
            e.label = "E2*";
            if (!(jac.trace() < 0))
                throw NumericalError("interior_equilibria: stable node with nonnegative trace");
        }
        std::tie(e.eig1, e.eig2) = jac.eigenvalues();
        const State2 f = kinetics(p, e.location);
        e.residual = std::max(std::abs(f.x), std::abs(f.y));
        out.push_back(e);
    }
    return out;
}

inline std::vector<Equilibrium> all_equilibria(const ModelParams& p) {
    std::vector<Equilibrium> out = boundary_equilibria(p);
    std::vector<Equilibrium> in = interior_equilibria(p);
    out.insert(out.end(), in.begin(), in.end());
    return out;
}

/// Distinct equilibria of the planar vector field (boundary points plus all
/// real roots of u, interior or not) within `radius` of `center`. Used by the
/// pitchfork count signature, where a +/- pair appears next to E2.
inline int equilibria_near_count(const ModelParams& p, State2 center, double radius) {
    std::vector<State2> pts{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const double span = std::max(2.0, radius + 1.0);
    for (const RootInfo& r : detail::roots_in(cubic(p), -span, span))
        pts.push_back({r.x, (1.0 - r.x) / p.c});
    int count = 0;
    std::vector<State2> seen;
    for (const State2& q : pts) {
        if (std::hypot(q.x - center.x, q.y - center.y) > radius) continue;
        bool dup = false;
        for (const State2& s : seen)
            if (std::hypot(q.x - s.x, q.y - s.y) < 1e-9) { dup = true; break; }
        if (!dup) { seen.push_back(q); ++count; }
    }
    return count;
}

enum class Cmp { Less, Equal, Greater, NotApplicable };

inline const char* to_string(Cmp c) {
    switch (c) {
        case Cmp::Less: return "<";
        case Cmp::Equal: return "=";
        case Cmp::Greater: return ">";
        case Cmp::NotApplicable: return "n/a";
    }
    return "?";
}

/// One resolved row of the positive-equilibria existence table.
struct ExistenceCase {
    Cmp m_vs_m1;
    Cmp c_vs_one;
    Cmp u_at_xv2;   // sign of u at the larger critical point of u
    Cmp m_vs_m2;
    Cmp k_vs_kstar;
    std::string row;                 // table row identifier, or "none"
    std::vector<std::string> labels; // predicted interior labels
};

inline ExistenceCase existence_case(const ModelParams& p) {
    const Thresholds th = thresholds(p);
    const Cubic cu = cubic(p);
    constexpr double eps_par = 1e-12;

    auto cmp = [](double lhs, double rhs, double eps) {
        if (std::abs(lhs - rhs) <= eps) return Cmp::Equal;
        return lhs < rhs ? Cmp::Less : Cmp::Greater;
    };

    ExistenceCase ec;
    ec.m_vs_m1 = cmp(p.m, th.m1, eps_par);
    ec.c_vs_one = cmp(p.c, 1.0, eps_par);
    ec.m_vs_m2 = cmp(p.m, th.m2, eps_par);
    ec.k_vs_kstar = cmp(p.k, th.k_star, eps_par);

    // u at the larger critical point, when it lies inside (0,1)
    ec.u_at_xv2 = Cmp::NotApplicable;
    double u_xv2 = 0;
    bool have_xv2 = false;
    if (auto cp = cu.critical_points()) {
        const double xv2 = cp->second;
        if (xv2 > 0 && xv2 < 1) {
            have_xv2 = true;
            u_xv2 = cu.u(xv2);
            ec.u_at_xv2 = std::abs(u_xv2) <= kEpsRoot ? Cmp::Equal
                         : (u_xv2 < 0 ? Cmp::Less : Cmp::Greater);
        }
    }

    // Decision tree. u(0) = c-1 and sign(u(1)) = sign(k* - k) drive the count.
    auto finish = [&ec](std::string row, std::vector<std::string> labels) {
        ec.row = std::move(row);
        ec.labels = std::move(labels);
    };

    if (ec.c_vs_one == Cmp::Greater) {
        if (ec.k_vs_kstar == Cmp::Greater) {
            // u(0) > 0, u(1) < 0: exactly one crossing, a saddle
            if (ec.m_vs_m2 == Cmp::Greater) finish("2(a)ii-A", {"E1*"});
            else if (ec.m_vs_m2 == Cmp::Equal) finish("2(a)ii-C", {"E1*"});
            else finish("2(a)ii-D", {"E1*"});
        } else if (ec.k_vs_kstar == Cmp::Equal) {
            if (have_xv2 && ec.u_at_xv2 == Cmp::Less) finish("2(a)ii-A", {"E1*"});
            else finish("none", {});
        } else {
            if (have_xv2 && ec.u_at_xv2 == Cmp::Less) finish("2(a)ii-B", {"E1*", "E2*"});
            else if (have_xv2 && ec.u_at_xv2 == Cmp::Equal) finish("2(a)i", {"E3*"});
            else finish("none", {});
        }
    } else if (ec.c_vs_one == Cmp::Equal) {
        if (ec.m_vs_m1 == Cmp::Greater && ec.k_vs_kstar == Cmp::Less) finish("2(b)", {"E2*"});
        else finish("none", {});
    } else {
        if (ec.k_vs_kstar == Cmp::Less) {
            if (ec.m_vs_m1 == Cmp::Equal) finish("1", {"E2*"});
            else if (ec.m_vs_m1 == Cmp::Greater) finish("2(b)", {"E2*"});
            else finish("3", {"E2*"});
        } else {
            finish("none", {});
        }
    }
    return ec;
}

} // namespace allelofear
