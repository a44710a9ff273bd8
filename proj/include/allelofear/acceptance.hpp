#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "allelofear/bifurcation.hpp"
#include "allelofear/equilibria.hpp"
#include "allelofear/model.hpp"
#include "allelofear/ode.hpp"
#include "allelofear/pde.hpp"

namespace allelofear {

struct CriterionResult {
    int id;
    std::string suite;
    std::string name;
    bool pass = false;
    double runtime_s = 0;
    double budget_s = 0;
    std::string detail;
};

namespace acceptance {

constexpr std::uint64_t kSeedBase = 20250810ull;

class Check {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            if (!first_failure_.empty()) first_failure_ += "; ";
            first_failure_ += what;
        }
    }
    void note(const std::string& s) {
        if (!notes_.empty()) notes_ += "; ";
        notes_ += s;
    }
    bool pass() const { return pass_; }
    std::string detail() const {
        if (pass_) return notes_;
        return "FAILED: " + first_failure_ + (notes_.empty() ? "" : " | " + notes_);
    }

private:
    bool pass_ = true;
    std::string first_failure_;
    std::string notes_;
};

inline std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// --- criterion 1: saddle-node threshold reproduction --------------------

inline CriterionResult criterion_saddle_node() {
    CriterionResult res{1, "thresholds", "saddle-node threshold m_SN and 2-1-0 scan transition",
                        false, 0, 5.0, ""};
    Check ck;
    const DoubleRoot dr = solve_double_root(0.3, 1.1, 1.1);
    ck.require(std::abs(dr.m_sn - 0.1262554731) < 1e-7,
               "m_SN = " + num(dr.m_sn) + " differs from the reference 0.1262554731 beyond 1e-7");
    ck.note("m_SN = " + num(dr.m_sn) + " (reference 0.1262554731, tol 1e-7)");

    const ModelParams base{0.3, 0.2, 1.1, 1.1, dr.m_sn};
    const BifurcationDiagram diagram = scan(base, 'm', 0.05, 0.25, 41);
    ck.require(diagram.events.size() == 1, "expected exactly one scan event, got " +
                                               std::to_string(diagram.events.size()));
    if (!diagram.events.empty()) {
        const DiagramEvent& ev = diagram.events.front();
        ck.require(ev.kind == BifKind::SaddleNode, "event not labeled saddle-node");
        ck.require(std::abs(ev.value - dr.m_sn) < 1e-6,
                   "event at " + num(ev.value) + " not within 1e-6 of m_SN");
        ck.note("event at m = " + num(ev.value) + " (tol 1e-6)");
    }

    auto count_mult = [&](double m) {
        int c = 0;
        for (const RootInfo& r : interior_roots(base.with('m', m))) c += r.multiplicity;
        return c;
    };
    const int above = count_mult(dr.m_sn + 1e-3);
    const int below = count_mult(dr.m_sn - 1e-3);
    const std::size_t at = interior_roots(base).size();
    const int at_mult = count_mult(dr.m_sn);
    ck.require(above == 2 && below == 0 && at == 1 && at_mult == 2,
               "interior count transition (above,at,below) = (" + std::to_string(above) + "," +
                   std::to_string(at) + "," + std::to_string(below) + "), expected (2,1,0)");
    ck.note("interior equilibria count 2 -> 1 (double) -> 0 across m_SN, descending m");

    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 2: transcritical thresholds + Sotomayor scalars ----------

inline CriterionResult criterion_transcritical() {
    CriterionResult res{2, "thresholds",
                        "transcritical events at k* and c=1; Sotomayor scalars vs closed forms",
                        false, 0, 30.0, ""};
    Check ck;
    std::mt19937_64 rng(kSeedBase + 2);
    std::uniform_real_distribution<double> Ua(0.10, 0.25), Ub(0.2, 1.0), Uc(0.2, 0.9),
        Uk(0.10, 0.30);

    double worst_event = 0, worst_scalar = 0;
    for (int draw = 0; draw < 10; ++draw) {
        const double a = Ua(rng), b = Ub(rng), c = Uc(rng), k = Uk(rng);
        const double m_cap = 0.8 * (1.0 - 1.1 * a - k);
        const double m = 0.05 + (m_cap - 0.05) * std::uniform_real_distribution<double>()(rng);

        {   // E1: scan k through k* at fixed (a,b,c,m)
            const ModelParams p{a, b, c, k, m};
            const double k_star = thresholds(p).k_star;
            const BifurcationDiagram d = scan(p, 'k', 0.8 * k_star, 1.2 * k_star, 17);
            bool found = false;
            for (const DiagramEvent& ev : d.events)
                if (ev.kind == BifKind::TranscriticalE1) {
                    found = true;
                    worst_event = std::max(worst_event, std::abs(ev.value - k_star));
                    ck.require(std::abs(ev.value - k_star) < 1e-6,
                               "E1 event at " + num(ev.value) + " vs k* = " + num(k_star));
                }
            ck.require(found, "no transcritical-E1 event detected in k scan (draw " +
                                  std::to_string(draw) + ")");

            const TransversalityReport tr = transversality_E1(p.with('k', k_star));
            const double d2 = std::abs(tr.s2 - e1_second_scalar_closed(p));
            const double d3 = std::abs(tr.s3 - e1_third_scalar_closed(p));
            worst_scalar = std::max({worst_scalar, d2, d3, std::abs(tr.s1)});
            ck.require(d2 < 1e-8 && d3 < 1e-8 && std::abs(tr.s1) < 1e-9,
                       "E1 Sotomayor scalars off closed forms (draw " + std::to_string(draw) + ")");
            ck.require(tr.verdict == Verdict::Satisfied, "E1 transversality verdict not satisfied");
        }

        {   // E2: scan c through 1 at fixed (a,b,k,m)
            const ModelParams p{a, b, 0.95, k, m};
            const BifurcationDiagram d = scan(p, 'c', 0.9, 1.1, 17);
            bool found = false;
            for (const DiagramEvent& ev : d.events)
                if (ev.kind == BifKind::TranscriticalE2) {
                    found = true;
                    worst_event = std::max(worst_event, std::abs(ev.value - 1.0));
                    ck.require(std::abs(ev.value - 1.0) < 1e-6,
                               "E2 event at " + num(ev.value) + " vs c = 1");
                }
            ck.require(found, "no transcritical-E2 event detected in c scan (draw " +
                                  std::to_string(draw) + ")");

            const ModelParams pc = p.with('c', 1.0);
            const TransversalityReport tr = transversality_E2(pc);
            const double d2 = std::abs(tr.s2 - e2_second_scalar_closed(pc));
            const double d3 = std::abs(tr.s3 - e2_third_scalar_closed(pc));
            worst_scalar = std::max({worst_scalar, d2, d3, std::abs(tr.s1)});
            ck.require(d2 < 1e-8 && d3 < 1e-8 && std::abs(tr.s1) < 1e-9,
                       "E2 Sotomayor scalars off closed forms (draw " + std::to_string(draw) + ")");
            ck.require(tr.verdict == Verdict::Satisfied, "E2 transversality verdict not satisfied");
        }
    }
    ck.note("worst event-threshold distance " + num(worst_event) + " (tol 1e-6)");
    ck.note("worst scalar-closed-form distance " + num(worst_scalar) + " (tol 1e-8)");
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 3: pitchfork count signature ------------------------------

inline CriterionResult criterion_pitchfork() {
    CriterionResult res{3, "pitchfork", "pitchfork 1-1-3 count signature across c = 1", false, 0,
                        5.0, ""};
    Check ck;
    const ModelParams base{0.2, 0.2, 1.0, 0.2, 0.6};
    int counts[3] = {0, 0, 0};
    const double cs[3] = {0.9, 1.0, 1.1};
    for (int i = 0; i < 3; ++i)
        counts[i] = equilibria_near_count(base.with('c', cs[i]), State2{0.0, 1.0}, 0.8);
    // The vector-field equilibrium count near E2 runs 1 -> 1 -> 3 as c
    // traverses 1.1 -> 1.0 -> 0.9: the pitchfork pair opens on the c < 1 side
    // (u ~ (c-1) + A2 x^2 near x = 0 with A2 > 0 at m = 1-a-k).
    ck.require(counts[0] == 3 && counts[1] == 1 && counts[2] == 1,
               "counts near E2 at c = (0.9, 1.0, 1.1) are (" + std::to_string(counts[0]) + "," +
                   std::to_string(counts[1]) + "," + std::to_string(counts[2]) +
                   "), expected (3,1,1)");
    ck.note("counts near E2: c=0.9 -> " + std::to_string(counts[0]) + ", c=1.0 -> " +
            std::to_string(counts[1]) + ", c=1.1 -> " + std::to_string(counts[2]) +
            " (the 1-1-3 transformation, traversed from c=1.1 downward)");

    const BifurcationDiagram d = scan(base, 'c', 0.9, 1.1, 21);
    bool pf = false;
    for (const DiagramEvent& ev : d.events)
        if (ev.kind == BifKind::Pitchfork && std::abs(ev.value - 1.0) < 1e-6) pf = true;
    ck.require(pf, "c scan did not label a pitchfork event at c = 1");
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 4: fear-threshold benchmark outcomes -----------------------

inline CriterionResult criterion_examples() {
    CriterionResult res{4, "examples", "fear-threshold benchmarks: coexistence below k*, y-extinction above it",
                        false, 0, 30.0, ""};
    Check ck;
    struct Ex {
        const char* name;
        double a, b, c, m, k_lo, k_hi;
    };
    const Ex exs[] = {{"A", 0.8, 0.5, 0.5, 0.5, 0.2, 0.4},
                      {"B", 0.3, 0.5, 1.1, 0.15, 1.1, 4.0},
                      {"C", 0.8, 0.5, 0.5, 0.1, 0.2, 0.3}};
    const State2 init{0.5, 0.5};
    for (const Ex& ex : exs) {
        const ModelParams sub{ex.a, ex.b, ex.c, ex.k_lo, ex.m};
        const Equilibrium* node = nullptr;
        std::vector<Equilibrium> interiors = interior_equilibria(sub);
        for (const Equilibrium& e : interiors)
            if (e.kind == EquilibriumKind::InteriorStableNode) node = &e;
        ck.require(node != nullptr, std::string("benchmark ") + ex.name + ": no interior stable node");
        if (node) {
            const State2 fin = integrate_final(sub, init, 1000.0);
            const double dist = std::max(std::abs(fin.x - node->location.x),
                                         std::abs(fin.y - node->location.y));
            ck.require(dist < 1e-3, std::string("benchmark ") + ex.name +
                                        " sub-threshold: terminal distance " + num(dist) +
                                        " to E2* exceeds 1e-3");
            ck.note(std::string("benchmark ") + ex.name + " k=" + num(ex.k_lo) + ": dist to E2* " +
                    num(dist));
        }
        const ModelParams super{ex.a, ex.b, ex.c, ex.k_hi, ex.m};
        const State2 fin = integrate_final(super, init, 1000.0);
        ck.require(fin.y < 1e-3, std::string("benchmark ") + ex.name +
                                     " super-threshold: y = " + num(fin.y) + " not below 1e-3");
        ck.require(std::abs(fin.x - 1.0) < 1e-3,
                   std::string("benchmark ") + ex.name + " super-threshold: x not at 1");
        ck.note(std::string("benchmark ") + ex.name + " k=" + num(ex.k_hi) + ": y = " + num(fin.y));
    }
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 5: global stability of E2* --------------------------------

inline CriterionResult criterion_global_stability() {
    CriterionResult res{5, "global-stability",
                        "global stability of E2* for 0<c<1, 0<k<k* (10 draws x 20 inits)", false,
                        0, 60.0, ""};
    Check ck;
    std::mt19937_64 rng(kSeedBase + 5);
    std::uniform_real_distribution<double> Ua(0.15, 0.9), Ub(0.2, 1.0), Uc(0.1, 0.9),
        Um(0.05, 1.0), Ufrac(0.05, 0.95), Uinit(0.02, 1.5);

    double worst = 0;
    for (int draw = 0; draw < 10; ++draw) {
        const double a = Ua(rng), b = Ub(rng), c = Uc(rng), m = Um(rng);
        const double k = Ufrac(rng) * (1.0 / a - 1.0);
        const ModelParams p{a, b, c, k, m};
        const Equilibrium* node = nullptr;
        std::vector<Equilibrium> interiors = interior_equilibria(p);
        for (const Equilibrium& e : interiors)
            if (e.kind == EquilibriumKind::InteriorStableNode) node = &e;
        ck.require(node != nullptr, "draw " + std::to_string(draw) + ": E2* missing");
        if (!node) continue;
        for (int j = 0; j < 20; ++j) {
            const State2 init{Uinit(rng), Uinit(rng)};
            State2 fin = integrate_final(p, init, 2000.0);
            double dist = std::hypot(fin.x - node->location.x, fin.y - node->location.y);
            if (dist >= 1e-3) { // slow spectral gap: extend the horizon once
                fin = integrate_final(p, fin, 8000.0);
                dist = std::hypot(fin.x - node->location.x, fin.y - node->location.y);
            }
            worst = std::max(worst, dist);
            ck.require(dist < 1e-3, "draw " + std::to_string(draw) + " init " +
                                        std::to_string(j) + ": distance " + num(dist));
        }
    }
    ck.note("worst terminal distance to E2* = " + num(worst) + " (tol 1e-3)");
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 6: no limit cycles -----------------------------------------

inline CriterionResult criterion_no_cycle() {
    CriterionResult res{6, "no-cycle", "Dulac audit negative on 100 draws; no recurrence on the benchmark sets",
                        false, 0, 30.0, ""};
    Check ck;
    std::mt19937_64 rng(kSeedBase + 6);
    std::uniform_real_distribution<double> U(0.05, 1.5);
    double max_dulac = -std::numeric_limits<double>::infinity();
    for (int draw = 0; draw < 100; ++draw) {
        const ModelParams p{U(rng), U(rng), U(rng), U(rng), U(rng)};
        const DulacReport rep = dulac_audit(p, {0.01, 1.0}, {0.01, 1.0}, 50);
        max_dulac = std::max(max_dulac, rep.max_value);
        ck.require(rep.all_negative, "Dulac grid max not negative on draw " + std::to_string(draw));
    }
    ck.note("max Dulac value over all draws = " + num(max_dulac) + " (< 0 required)");

    const double exsets[6][5] = {{0.8, 0.5, 0.5, 0.2, 0.5}, {0.8, 0.5, 0.5, 0.4, 0.5},
                                 {0.3, 0.5, 1.1, 1.1, 0.15}, {0.3, 0.5, 1.1, 4.0, 0.15},
                                 {0.8, 0.5, 0.5, 0.2, 0.1},  {0.8, 0.5, 0.5, 0.3, 0.1}};
    std::uniform_real_distribution<double> Ui(0.05, 1.5);
    int probes = 0;
    for (const auto& q : exsets) {
        const ModelParams p{q[0], q[1], q[2], q[3], q[4]};
        for (int j = 0; j < 50; ++j) {
            const RecurrenceReport rep = limit_cycle_probe(p, {Ui(rng), Ui(rng)}, 300.0);
            ++probes;
            ck.require(!rep.cycle_detected, "recurrence detected on a benchmark trajectory");
        }
    }
    ck.note(std::to_string(probes) + " recurrence probes, no cycle detected");
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 7: PDE flat-data equivalence -------------------------------

inline CriterionResult criterion_pde_equivalence() {
    CriterionResult res{7, "pde-equivalence",
                        "constant-field flat-data PDE matches kinetic ODE to 1e-5 at t=1,10,100",
                        false, 0, 60.0, ""};
    Check ck;
    const ModelParams p{0.3, 0.5, 1.1, 1.1, 0.15};
    const FearField field = make_fear_field_constant(p.k, std::numbers::pi, 1000);
    const std::vector<double> times{1.0, 10.0, 100.0};
    const auto series = integrate_pde(reaction_params(p), field, 1.0, 1.0, 0.5, 0.5, 100.0, 0.02,
                                      times);
    const auto ode_states = integrate_at_times(p, {0.5, 0.5}, times, 1e-10, 1e-12);
    double worst = 0;
    for (std::size_t s = 0; s < times.size(); ++s) {
        double sup = 0;
        for (std::size_t j = 0; j < field.size(); ++j) {
            sup = std::max(sup, std::abs(series[s].u[j] - ode_states[s].x));
            sup = std::max(sup, std::abs(series[s].v[j] - ode_states[s].y));
        }
        worst = std::max(worst, sup);
        ck.require(sup < 1e-5, "sup discrepancy " + num(sup) + " at t = " + num(times[s]));
    }
    ck.note("worst sup-norm PDE-vs-ODE discrepancy " + num(worst) + " (tol 1e-5, n=1000)");
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 8: sandwich certification ----------------------------------

inline CriterionResult criterion_sandwich() {
    CriterionResult res{8, "sandwich",
                        "sandwich ordering and terminal states across the exclusion, strong-, weak-competition, and bi-stability configurations",
                        false, 0, 600.0, ""};
    Check ck;
    struct Cfg {
        const char* name;
        ReactionParams rp;
        double kappa0, kappa1;
        double u0, v0;
        const char* expect;
    };
    const Cfg cfgs[] = {
        {"high_fear_exclusion", {0.3, 0.2, 1.1, 0.15}, 3.0, 1.0, 2.0, 0.4, "(1,0)"},
        {"strong_c_exclusion", {0.4, 0.2, 2.1, 0.4}, 1.5, 1.0, 0.4, 2.0, "(0,1)"},
        {"strong_comp_v_side", {0.2, 0.2, 1.1, 0.15}, 4.0, 1.0, 0.01, 1.5, "(0,1)"},
        {"strong_comp_u_side", {0.2, 0.2, 1.1, 0.15}, 4.0, 1.0, 1.5, 0.5, "(1,0)"},
        {"weak_comp_from_above", {0.2, 0.2, 0.9, 1.6}, 0.0, 0.1, 4.0, 4.0, "interior"},
        {"weak_comp_from_below", {0.2, 0.2, 0.9, 1.6}, 0.0, 0.1, 0.1, 0.1, "interior"},
        {"bistable_to_exclusion", {0.3, 0.2, 1.1, 0.5}, 1.5, 0.1, 0.05, 2.0, "(0,1)"},
        {"bistable_to_interior", {0.3, 0.2, 1.1, 0.5}, 1.5, 0.1, 2.0, 2.0, "interior"},
    };
    State2 weak_comp_state[2];
    int weak_comp_idx = 0;
    for (const Cfg& cfg : cfgs) {
        const FearField field =
            make_fear_field_shifted_sine(cfg.kappa0, cfg.kappa1, 10.0, std::numbers::pi, 1000);
        const ComparisonReport rep =
            comparison_triplet(cfg.rp, field, 1.0, 1.0, cfg.u0, cfg.v0, 500.0, 0.02, 100);
        ck.require(rep.holds, std::string(cfg.name) + ": sandwich violated, max(vt-v) = " +
                                  num(rep.max_tilde_minus_v) + ", max(v-vh) = " +
                                  num(rep.max_v_minus_hat) + ", tol = " + num(rep.tol));
        const ConvergenceReport conv = detect_convergence(
            {rep.het_terminal}, interior_candidates_for(cfg.rp, field), 1e-3);
        ck.require(conv.verdict == cfg.expect,
                   std::string(cfg.name) + ": terminal verdict '" + conv.verdict +
                       "', expected '" + cfg.expect + "' (attained " + num(conv.attained.x) +
                       "," + num(conv.attained.y) + ")");
        ck.note(std::string(cfg.name) + " -> " + conv.verdict + ", slack hat " +
                num(rep.tol - rep.max_v_minus_hat) + " tilde " +
                num(rep.tol - rep.max_tilde_minus_v));
        if (std::string(cfg.name).rfind("weak_comp", 0) == 0 && weak_comp_idx < 2)
            weak_comp_state[weak_comp_idx++] = conv.attained;
    }
    if (weak_comp_idx == 2) {
        const double diff = std::max(std::abs(weak_comp_state[0].x - weak_comp_state[1].x),
                                     std::abs(weak_comp_state[0].y - weak_comp_state[1].y));
        ck.require(diff < 1e-3,
                   "weak-competition initial data reach different interior states, diff = " +
                       num(diff));
        ck.note("weak-competition inits reach the same interior state to " + num(diff));
    }
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 9: wedge / strong competition ------------------------------

inline CriterionResult criterion_wedge() {
    CriterionResult res{9, "wedge", "strong-competition wedge: interior saddle locations, v-ordering, exclusion probes", false,
                        0, 60.0, ""};
    Check ck;
    const ReactionParams rp{0.2, 0.2, 1.1, 0.15};
    const FearField field = make_fear_field_shifted_sine(4.0, 1.0, 10.0, std::numbers::pi, 400);
    const WedgeReport rep =
        wedge_check(rp, field, 1.0, 1.0, 500.0, State2{1.5, 0.5}, State2{0.01, 1.5});
    const double d_star = std::max(std::abs(rep.e1_star.location.x - 0.029),
                                   std::abs(rep.e1_star.location.y - 0.882));
    const double d_dstar = std::max(std::abs(rep.e1_dstar.location.x - 0.022),
                                    std::abs(rep.e1_dstar.location.y - 0.888));
    ck.require(d_star < 5e-3, "E1* = (" + num(rep.e1_star.location.x) + "," +
                                  num(rep.e1_star.location.y) + ") off (0.029,0.882) by " +
                                  num(d_star));
    ck.require(d_dstar < 5e-3, "E1** = (" + num(rep.e1_dstar.location.x) + "," +
                                   num(rep.e1_dstar.location.y) + ") off (0.022,0.888) by " +
                                   num(d_dstar));
    ck.require(rep.v_ordering, "v(E1**) is not above v(E1*)");
    ck.require(rep.probes_ok, "probe outcomes: below -> " + rep.probe_below.verdict +
                                  ", above -> " + rep.probe_above.verdict);
    ck.note("E1* = (" + num(rep.e1_star.location.x) + "," + num(rep.e1_star.location.y) +
            "), E1** = (" + num(rep.e1_dstar.location.x) + "," + num(rep.e1_dstar.location.y) +
            ") within 5e-3 of the reported points");
    ck.note(std::string("separatrix ordering ") +
            (rep.separatrix_ordering ? "holds" : "violated") + " on " +
            std::to_string(rep.ordering_samples) + " ray samples");
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

// --- criterion 10: oracle equivalence --------------------------------------

inline CriterionResult criterion_oracles() {
    CriterionResult res{10, "oracles",
                        "interior_roots vs dense-scan oracle (1000 draws); jacobian vs finite "
                        "differences (100 states)",
                        false, 0, 30.0, ""};
    Check ck;
    std::mt19937_64 rng(kSeedBase + 10);
    std::uniform_real_distribution<double> Ua(0.1, 1.2), Ub(0.1, 1.5), Uc(0.2, 2.0),
        Uk(0.05, 4.0), Um(0.02, 2.0), Us(0.0, 1.0);

    double worst_root = 0;
    for (int draw = 0; draw < 1000; ++draw) {
        const ModelParams p{Ua(rng), Ub(rng), Uc(rng), Uk(rng), Um(rng)};
        const Cubic cu = cubic(p);
        // dense-scan oracle: step 1e-5, bisect each bracket
        std::vector<double> oracle;
        constexpr int n = 100000;
        double xp = 1e-5 * 0.5, up = cu.u(xp);
        for (int i = 1; i < n; ++i) {
            const double x = (i + 0.5) * 1e-5;
            if (x >= 1.0) break;
            const double ux = cu.u(x);
            if ((up < 0) != (ux < 0)) {
                double lo = xp, hi = x;
                while (hi - lo > 1e-13) {
                    const double mid = 0.5 * (lo + hi);
                    if ((cu.u(lo) < 0) != (cu.u(mid) < 0)) hi = mid;
                    else lo = mid;
                }
                oracle.push_back(0.5 * (lo + hi));
            }
            xp = x;
            up = ux;
        }
        const std::vector<RootInfo> roots = interior_roots(p);
        ck.require(roots.size() == oracle.size(),
                   "draw " + std::to_string(draw) + ": root count " +
                       std::to_string(roots.size()) + " vs oracle " +
                       std::to_string(oracle.size()));
        if (roots.size() == oracle.size())
            for (std::size_t i = 0; i < roots.size(); ++i) {
                const double d = std::abs(roots[i].x - oracle[i]);
                worst_root = std::max(worst_root, d);
                ck.require(d < 1e-9, "draw " + std::to_string(draw) + ": root offset " + num(d));
            }
    }
    ck.note("worst root disagreement " + num(worst_root) + " (tol 1e-9)");

    double worst_jac = 0;
    for (int draw = 0; draw < 100; ++draw) {
        const ModelParams p{Ua(rng), Ub(rng), Uc(rng), Uk(rng), Um(rng)};
        const State2 s{Us(rng), Us(rng)};
        const Jacobian2 jac = jacobian(p, s);
        constexpr double h = 1e-5;
        const State2 fxp = kinetics(p, {s.x + h, s.y}), fxm = kinetics(p, {s.x - h, s.y});
        const State2 fyp = kinetics(p, {s.x, s.y + h}), fym = kinetics(p, {s.x, s.y - h});
        const double fd[4] = {(fxp.x - fxm.x) / (2 * h), (fyp.x - fym.x) / (2 * h),
                              (fxp.y - fxm.y) / (2 * h), (fyp.y - fym.y) / (2 * h)};
        const double an[4] = {jac.b1, jac.b2, jac.b3, jac.b4};
        for (int i = 0; i < 4; ++i) {
            const double d = std::abs(fd[i] - an[i]);
            worst_jac = std::max(worst_jac, d);
            ck.require(d < 1e-6, "jacobian entry off finite difference by " + num(d));
        }
    }
    ck.note("worst jacobian-vs-FD disagreement " + num(worst_jac) + " (tol 1e-6)");
    res.pass = ck.pass();
    res.detail = ck.detail();
    return res;
}

} // namespace acceptance

/// Run the named acceptance suite ("all" or one of the suite tags). Every
/// criterion checks its own runtime budget.
inline std::vector<CriterionResult> run_acceptance(const std::string& suite) {
    using Fn = CriterionResult (*)();
    struct Entry {
        const char* tag;
        Fn fn;
    };
    static const Entry criteria[] = {
        {"thresholds", acceptance::criterion_saddle_node},
        {"thresholds", acceptance::criterion_transcritical},
        {"pitchfork", acceptance::criterion_pitchfork},
        {"examples", acceptance::criterion_examples},
        {"global-stability", acceptance::criterion_global_stability},
        {"no-cycle", acceptance::criterion_no_cycle},
        {"pde-equivalence", acceptance::criterion_pde_equivalence},
        {"sandwich", acceptance::criterion_sandwich},
        {"wedge", acceptance::criterion_wedge},
        {"oracles", acceptance::criterion_oracles},
    };
    std::vector<CriterionResult> out;
    for (const Entry& entry : criteria) {
        if (suite != "all" && suite != entry.tag) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult res = entry.fn();
        res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (res.runtime_s >= res.budget_s) {
            res.pass = false;
            res.detail += " | runtime budget exceeded";
        }
        out.push_back(res);
    }
    if (out.empty()) throw DomainError("run_acceptance: unknown suite '" + suite + "'");
    return out;
}

} // namespace allelofear
