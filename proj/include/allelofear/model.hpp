#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "allelofear/errors.hpp"

namespace allelofear {

// Module-wide absolute tolerances.
inline constexpr double kEpsRoot = 1e-10; // |u(x)| below this counts as a root
inline constexpr double kEpsCmp  = 1e-8;  // identity cross-checks
inline constexpr double kEpsDeg  = 1e-9;  // eigenvalue / v(x) degeneracy threshold

/// Nondimensional parameters of the competition system
///   x' = b x (1 - x - c y)
///   y' = y (1/(1+kx) - y - a x - m x y)
struct ModelParams {
    double a; ///< interspecific pressure on y
    double b; ///< growth-rate ratio r1/r2
    double c; ///< interspecific pressure on x
    double k; ///< fear coefficient (k = 0 admitted as the classical limit)
    double m; ///< toxin release rate

    void validate() const {
        if (!(a > 0)) throw DomainError("ModelParams: a must be > 0");
        if (!(b > 0)) throw DomainError("ModelParams: b must be > 0");
        if (!(c > 0)) throw DomainError("ModelParams: c must be > 0");
        if (!(k >= 0)) throw DomainError("ModelParams: k must be >= 0");
        if (!(m >= 0)) throw DomainError("ModelParams: m must be >= 0");
    }

    ModelParams with(char name, double value) const {
        ModelParams q = *this;
        switch (name) {
            case 'a': q.a = value; break;
            case 'b': q.b = value; break;
            case 'c': q.c = value; break;
            case 'k': q.k = value; break;
            case 'm': q.m = value; break;
            default: throw DomainError(std::string("unknown parameter '") + name + "'");
        }
        return q;
    }

    double get(char name) const {
        switch (name) {
            case 'a': return a;
            case 'b': return b;
            case 'c': return c;
            case 'k': return k;
            case 'm': return m;
            default: throw DomainError(std::string("unknown parameter '") + name + "'");
        }
    }
};

/// Dimensional rates of the pre-scaled model. k1, k2 are the carrying
/// capacities r1/alpha1, r2/alpha2 used by the scaling below.
struct RawParams {
    double r1, r2;         ///< intrinsic growth rates
    double alpha1, alpha2; ///< intraspecific competition rates
    double beta1, beta2;   ///< interspecific competition rates
    double eta;            ///< fear coefficient
    double xi;             ///< toxin release rate

    double k1() const { return r1 / alpha1; }
    double k2() const { return r2 / alpha2; }

    void validate() const {
        const std::pair<const char*, double> fields[] = {
            {"r1", r1}, {"r2", r2}, {"alpha1", alpha1}, {"alpha2", alpha2},
            {"beta1", beta1}, {"beta2", beta2}, {"xi", xi}};
        for (const auto& [name, value] : fields)
            if (!(value > 0))
                throw DomainError(std::string("RawParams: ") + name + " must be > 0");
        // eta = 0 is the no-fear limit and maps to k = 0
        if (!(eta >= 0)) throw DomainError("RawParams: eta must be >= 0");
    }
};

struct State2 {
    double x = 0;
    double y = 0;
};

/// t = r2*tau, x = x1/k1, y = x2/k2, and the parameter map below.
inline ModelParams nondimensionalize(const RawParams& raw) {
    raw.validate();
    const double k1 = raw.k1();
    const double k2 = raw.k2();
    return ModelParams{
        raw.beta2 * k1 / raw.r2, // a
        raw.r1 / raw.r2,         // b
        raw.beta1 * k2 / raw.r1, // c
        raw.eta * k1,            // k
        raw.xi * k1 * k2 / raw.r2 // m
    };
}

/// Right-hand side of the kinetic system. Total on the nonnegative quadrant.
inline State2 kinetics(const ModelParams& p, const State2& s) {
    const double fx = p.b * s.x * (1.0 - s.x - p.c * s.y);
    const double gy = s.y * (1.0 / (1.0 + p.k * s.x) - s.y - p.a * s.x - p.m * s.x * s.y);
    return {fx, gy};
}

/// 2x2 Jacobian in row-major order (B1 B2 / B3 B4).
struct Jacobian2 {
    double b1, b2, b3, b4;

    double trace() const { return b1 + b4; }
    double det() const { return b1 * b4 - b2 * b3; }

    std::pair<std::complex<double>, std::complex<double>> eigenvalues() const {
        const double tr = trace();
        const double disc = tr * tr - 4.0 * det();
        if (disc >= 0) {
            const double s = std::sqrt(disc);
            return {{0.5 * (tr - s), 0.0}, {0.5 * (tr + s), 0.0}};
        }
        const double s = std::sqrt(-disc);
        return {{0.5 * tr, -0.5 * s}, {0.5 * tr, 0.5 * s}};
    }

    /// Right eigenvector for the given (real) eigenvalue, scaled so the last
    /// component exceeding 1e-12 equals +1. Throws if the eigenproblem is
    /// defective at this eigenvalue.
    std::array<double, 2> eigenvector(double lambda) const {
        // rows of (J - lambda I); pick the better conditioned one
        const double r1a = b1 - lambda, r1b = b2;
        const double r2a = b3, r2b = b4 - lambda;
        const double n1 = std::abs(r1a) + std::abs(r1b);
        const double n2 = std::abs(r2a) + std::abs(r2b);
        std::array<double, 2> v{};
        if (n1 >= n2 && n1 > 0) v = {-r1b, r1a};
        else if (n2 > 0) v = {-r2b, r2a};
        else v = {1.0, 0.0}; // J == lambda I: any direction
        const double norm = std::abs(v[0]) + std::abs(v[1]);
        if (norm < 1e-300) throw NumericalError("eigenvector: defective eigenproblem");
        // normalize: last component with magnitude > 1e-12*norm becomes +1
        const double pivot = (std::abs(v[1]) > 1e-12 * norm) ? v[1] : v[0];
        return {v[0] / pivot, v[1] / pivot};
    }

    Jacobian2 transposed() const { return {b1, b3, b2, b4}; }
};

inline Jacobian2 jacobian(const ModelParams& p, const State2& s) {
    const double w = 1.0 + p.k * s.x;
    return Jacobian2{
        -p.b * (2.0 * s.x + p.c * s.y - 1.0),
        -p.b * p.c * s.x,
        -s.y * (p.k / (w * w) + p.a + p.m * s.y),
        1.0 / w - (2.0 * p.m * s.y + p.a) * s.x - 2.0 * s.y};
}

/// Cubic u(x) whose roots in (0,1) are the interior-equilibrium abscissae,
/// along with its derivative v(x) = u'(x).
struct Cubic {
    double a1, a2, a3, a4; // u(x) = a1 x^3 + a2 x^2 + a3 x + a4

    double u(double x) const { return ((a1 * x + a2) * x + a3) * x + a4; }
    double v(double x) const { return (3.0 * a1 * x + 2.0 * a2) * x + a3; }
    double v_prime(double x) const { return 6.0 * a1 * x + 2.0 * a2; }

    double discriminant() const { return 4.0 * a2 * a2 - 12.0 * a1 * a3; }

    /// Real critical points of u, ascending (local max first when cubic).
    /// Handles the degenerate quadratic/linear cases from k*m == 0.
    std::optional<std::pair<double, double>> critical_points() const {
        const double qa = 3.0 * a1, qb = 2.0 * a2, qc = a3;
        if (std::abs(qa) > 1e-14) {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0) return std::nullopt;
            const double s = std::sqrt(disc);
            // stable quadratic roots
            const double q = -0.5 * (qb + (qb >= 0 ? s : -s));
            double r1 = q / qa;
            double r2 = (std::abs(q) > 0) ? qc / q : r1;
            if (r1 > r2) std::swap(r1, r2);
            return std::make_pair(r1, r2);
        }
        if (std::abs(qb) > 1e-14) {
            const double r = -qc / qb;
            return std::make_pair(r, r);
        }
        return std::nullopt;
    }
};

inline Cubic cubic(const ModelParams& p) {
    const double a3 = 1.0 - p.a * p.c - p.k - p.m;
    return Cubic{p.k * p.m, (a3 + p.k) * p.k + p.m, a3, p.c - 1.0};
}

/// Closed-form bifurcation thresholds.
struct Thresholds {
    double k_star;  ///< 1/a - 1: fear level above which y goes extinct
    double m_star;  ///< -1 + (2a - a^2) c: degeneracy split at E1
    double m_dstar; ///< 1 - a - k: degeneracy split at E2 (pitchfork value)
    double m1;      ///< 1 - ac - k
    double m2;      ///< (2ack + ac - k - 1)/(1 + k)
};

inline Thresholds thresholds(const ModelParams& p) {
    if (!(p.a > 0)) throw DomainError("thresholds: a must be > 0");
    return Thresholds{
        1.0 / p.a - 1.0,
        -1.0 + (-p.a * p.a + 2.0 * p.a) * p.c,
        1.0 - p.a - p.k,
        1.0 - p.a * p.c - p.k,
        (2.0 * p.a * p.c * p.k + p.a * p.c - p.k - 1.0) / (1.0 + p.k)};
}

/// The m value that places a root of u at x. Singular at x = 0 and x = 1;
/// those abscissae belong to the boundary equilibria.
inline double m_of_x(const ModelParams& p, double x) {
    if (!(x > 0.0) || !(x < 1.0))
        throw DomainError("m_of_x: x must lie strictly inside (0,1)");
    const double w = p.k * x + 1.0;
    if (!(w > 0)) throw DomainError("m_of_x: kx+1 must be positive");
    const double num = p.a * p.c * p.k * x * x + p.a * p.c * x - p.k * x * x +
                       p.k * x - p.c - x + 1.0;
    return num / ((x - 1.0) * w * x);
}

/// det(J) at the interior equilibrium (x, (1-x)/c) expressed through v(x).
/// The prefactor x(1-x)b/((kx+1)c) is positive on (0,1), so the determinant
/// carries the sign of v.
inline double det_via_v(const ModelParams& p, double x) {
    const Cubic cu = cubic(p);
    if (std::abs(cu.u(x)) > kEpsCmp)
        throw PreconditionError("det_via_v: x is not an interior-equilibrium abscissa (u(x) != 0)");
    const double pre = x * (1.0 - x) * p.b / ((p.k * x + 1.0) * p.c);
    return pre * cu.v(x);
}

} // namespace allelofear
