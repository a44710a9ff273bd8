#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "allelofear/ode.hpp"

using namespace allelofear;
using Catch::Approx;

namespace {

std::mt19937_64 make_rng(std::uint64_t salt) { return std::mt19937_64{0x0DEDA7A5ull + salt}; }

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> Ua(0.1, 1.2), Ub(0.1, 1.5), Uc(0.2, 2.0),
        Uk(0.05, 4.0), Um(0.02, 2.0);
    return {Ua(rng), Ub(rng), Uc(rng), Uk(rng), Um(rng)};
}

const Equilibrium* stable_interior(const std::vector<Equilibrium>& es) {
    for (const Equilibrium& e : es)
        if (e.kind == EquilibriumKind::InteriorStableNode) return &e;
    return nullptr;
}

} // namespace

TEST_CASE("integrate keeps equilibria fixed and validates its inputs") {
    const ModelParams p{0.3, 0.2, 1.1, 1.1, 0.15};
    SECTION("E1 stays put") {
        const Trajectory traj = integrate(p, {1.0, 0.0}, 10.0);
        for (const State2& s : traj.states) {
            CHECK(s.x == Approx(1.0).margin(1e-12));
            CHECK(s.y == 0.0);
        }
    }
    SECTION("times strictly increase and states stay nonnegative") {
        const Trajectory traj = integrate(p, {0.7, 0.9}, 50.0);
        for (std::size_t i = 1; i < traj.times.size(); ++i)
            CHECK(traj.times[i] > traj.times[i - 1]);
        for (const State2& s : traj.states) {
            CHECK(s.x >= 0.0);
            CHECK(s.y >= 0.0);
        }
        CHECK(traj.stats.accepted + 1 == traj.times.size());
    }
    SECTION("input validation") {
        CHECK_THROWS_AS(integrate(p, {-0.1, 0.5}, 10.0), DomainError);
        CHECK_THROWS_AS(integrate(p, {0.5, 0.5}, -1.0), DomainError);
        CHECK_THROWS_AS(integrate(p, {0.5, 0.5}, 10.0, 0.5, 1e-10), DomainError);
        CHECK_THROWS_AS(integrate(p, {0.5, 0.5}, 10.0, 1e-8, 0.0), DomainError);
    }
}

TEST_CASE("benchmark outcomes match the fear threshold") {
    SECTION("below k*: convergence to the interior node by t = 500") {
        const ModelParams p{0.8, 0.5, 0.5, 0.2, 0.5};
        const auto interiors = interior_equilibria(p);
        const Equilibrium* node = stable_interior(interiors);
        REQUIRE(node);
        const State2 fin = integrate_final(p, {0.5, 0.5}, 500.0);
        CHECK(std::abs(fin.x - node->location.x) < 1e-4);
        CHECK(std::abs(fin.y - node->location.y) < 1e-4);
    }
    SECTION("above k*: y goes extinct, x approaches 1") {
        const ModelParams p{0.8, 0.5, 0.5, 0.4, 0.5};
        const State2 fin = integrate_final(p, {0.5, 0.5}, 500.0);
        CHECK(fin.y < 1e-4);
        CHECK(std::abs(fin.x - 1.0) < 1e-4);
    }
}

TEST_CASE("trajectories respect positivity and eventual bounds") {
    auto rng = make_rng(1);
    std::uniform_real_distribution<double> Ui(0.05, 2.0);
    for (int i = 0; i < 30; ++i) {
        const ModelParams p = random_params(rng);
        const Trajectory traj = integrate(p, {Ui(rng), Ui(rng)}, 400.0);
        double xmax_tail = 0, ymax_tail = 0;
        const auto transient = detect_transient(traj);
        for (std::size_t j = 0; j < traj.times.size(); ++j) {
            CHECK(traj.states[j].x >= 0.0);
            CHECK(traj.states[j].y >= 0.0);
            if (transient && traj.times[j] >= *transient) {
                xmax_tail = std::max(xmax_tail, traj.states[j].x);
                ymax_tail = std::max(ymax_tail, traj.states[j].y);
            }
        }
        if (transient) {
            CHECK(xmax_tail <= 1.0 + 1e-3);
            CHECK(ymax_tail <= 1.0 + 1e-3);
        }
    }
}

TEST_CASE("permanence bounds evaluate the theorem's constants") {
    SECTION("reference evaluation") {
        const PermanenceBounds pb = permanence_bounds({0.2, 1.0, 0.5, 0.5, 0.5});
        CHECK(pb.upper_M == 1.0);
        CHECK(pb.lower_l == Approx((1.0 / 1.5 - 0.2) / 1.5).margin(1e-14));
        CHECK(pb.lower_l == Approx(0.31111111111).margin(1e-9));
        CHECK(pb.certified);
    }
    SECTION("c = 1 is not certified") {
        const PermanenceBounds pb = permanence_bounds({0.2, 1.0, 1.0, 0.5, 0.5});
        CHECK(pb.lower_l <= 0.0);
        CHECK_FALSE(pb.certified);
    }
    SECTION("k = k* is not certified") {
        const PermanenceBounds pb = permanence_bounds({0.2, 1.0, 0.5, 4.0, 0.5});
        CHECK(pb.lower_l <= 0.0);
        CHECK_FALSE(pb.certified);
    }
    SECTION("certified bounds hold along trajectories") {
        const ModelParams p{0.2, 0.5, 0.5, 0.5, 0.5};
        const PermanenceBounds pb = permanence_bounds(p);
        REQUIRE(pb.certified);
        auto rng = make_rng(2);
        std::uniform_real_distribution<double> Ui(0.05, 1.5);
        for (int i = 0; i < 10; ++i) {
            const Trajectory traj = integrate(p, {Ui(rng), Ui(rng)}, 300.0);
            const auto transient = detect_transient(traj);
            REQUIRE(transient);
            double xmin = 1e9, ymin = 1e9;
            for (std::size_t j = 0; j < traj.times.size(); ++j)
                if (traj.times[j] >= *transient) {
                    xmin = std::min(xmin, traj.states[j].x);
                    ymin = std::min(ymin, traj.states[j].y);
                }
            CHECK(xmin >= pb.lower_l - 1e-3);
            CHECK(ymin >= pb.lower_l - 1e-3);
        }
    }
}

TEST_CASE("E2* is globally stable in the certified regime") {
    // 0 < c < 1 and 0 < k < k*: every positive initial datum lands on the
    // same interior node
    const ModelParams p{0.4, 0.6, 0.7, 0.8, 0.3}; // k* = 1.5
    const auto interiors = interior_equilibria(p);
    REQUIRE(interiors.size() == 1);
    const State2 target = interiors[0].location;
    auto rng = make_rng(7);
    std::uniform_real_distribution<double> Ui(0.02, 1.8);
    for (int i = 0; i < 10; ++i) {
        const State2 fin = integrate_final(p, {Ui(rng), Ui(rng)}, 2000.0);
        CHECK(std::hypot(fin.x - target.x, fin.y - target.y) < 1e-4);
    }
}

TEST_CASE("halving the tolerance barely moves the terminal state") {
    const ModelParams p{0.3, 0.5, 1.1, 1.1, 0.15};
    for (double rel : {1e-6, 1e-8}) {
        const State2 f1 = integrate_final(p, {0.9, 0.8}, 200.0, rel, rel * 1e-2);
        const State2 f2 = integrate_final(p, {0.9, 0.8}, 200.0, rel / 2, rel * 1e-2);
        CHECK(std::abs(f1.x - f2.x) < 10.0 * rel);
        CHECK(std::abs(f1.y - f2.y) < 10.0 * rel);
    }
}

TEST_CASE("Dulac audit is negative on the positive quadrant") {
    SECTION("hand-evaluated point") {
        const DulacReport rep = dulac_audit({0.3, 0.2, 1.1, 1.1, 0.15}, {0.5, 0.5}, {0.5, 0.5}, 2);
        CHECK(rep.max_value == Approx(-2.55).margin(1e-12));
    }
    SECTION("grid maxima stay negative across draws") {
        auto rng = make_rng(3);
        for (int i = 0; i < 50; ++i) {
            const DulacReport rep = dulac_audit(random_params(rng), {0.01, 1.0}, {0.01, 1.0}, 40);
            CHECK(rep.all_negative);
            CHECK(rep.evaluations == 1600);
        }
    }
    SECTION("second summand dominates as b -> 0") {
        const DulacReport rep = dulac_audit({0.3, 1e-10, 1.1, 1.1, 0.15}, {0.01, 1.0}, {0.01, 1.0}, 20);
        CHECK(rep.all_negative);
    }
    SECTION("domain validation") {
        CHECK_THROWS_AS(dulac_audit({0.3, 0.2, 1.1, 1.1, 0.15}, {0.0, 1.0}, {0.1, 1.0}, 10),
                        DomainError);
        CHECK_THROWS_AS(dulac_audit({0.3, 0.2, 1.1, 1.1, 0.15}, {0.1, 1.0}, {0.1, 1.0}, 1),
                        DomainError);
    }
}

TEST_CASE("separatrix tracing at the strong-competition saddle") {
    const ModelParams p{0.2, 0.2, 1.1, 4.0, 0.15};
    const auto interiors = interior_equilibria(p);
    REQUIRE(interiors.size() == 1);
    const Equilibrium& saddle = interiors[0];
    REQUIRE(saddle.kind == EquilibriumKind::InteriorSaddle);

    const Separatrix sep = trace_separatrix(p, saddle, 60.0);
    SECTION("branches start on the stable eigenvector and head opposite ways") {
        const double d0 = std::hypot(sep.branch_pos.front().x - saddle.location.x,
                                     sep.branch_pos.front().y - saddle.location.y);
        CHECK(d0 == Approx(1e-6).margin(1e-9));
        REQUIRE(sep.branch_pos.size() > 5);
        REQUIRE(sep.branch_neg.size() > 5);
        const double hx1 = sep.branch_pos[5].x - saddle.location.x;
        const double hy1 = sep.branch_pos[5].y - saddle.location.y;
        const double hx2 = sep.branch_neg[5].x - saddle.location.x;
        const double hy2 = sep.branch_neg[5].y - saddle.location.y;
        CHECK(hx1 * hx2 + hy1 * hy2 < 0.0);
    }
    SECTION("arc length is cumulative and increasing") {
        REQUIRE(sep.arc_pos.size() == sep.branch_pos.size());
        for (std::size_t i = 1; i < sep.arc_pos.size(); ++i)
            CHECK(sep.arc_pos[i] >= sep.arc_pos[i - 1]);
    }
    SECTION("probes on either side reach different attractors") {
        // offset normal to the curve at mid-arc points, then integrate forward
        int checked = 0;
        for (std::size_t i = 10; i + 1 < sep.branch_pos.size() && checked < 10; i += 15) {
            const State2 a = sep.branch_pos[i], bpt = sep.branch_pos[i + 1];
            const double tx = bpt.x - a.x, ty = bpt.y - a.y;
            const double norm = std::hypot(tx, ty);
            if (norm < 1e-12) continue;
            const double nx = -ty / norm, ny = tx / norm;
            const State2 left{a.x + 0.02 * nx, a.y + 0.02 * ny};
            const State2 right{a.x - 0.02 * nx, a.y - 0.02 * ny};
            if (left.x < 0 || left.y < 0 || right.x < 0 || right.y < 0) continue;
            const State2 fl = integrate_final(p, left, 600.0);
            const State2 fr = integrate_final(p, right, 600.0);
            const bool l_to_e1 = std::abs(fl.x - 1.0) < 1e-2 && fl.y < 1e-2;
            const bool r_to_e1 = std::abs(fr.x - 1.0) < 1e-2 && fr.y < 1e-2;
            CHECK(l_to_e1 != r_to_e1);
            ++checked;
        }
        CHECK(checked >= 5);
    }
    SECTION("rejects non-saddle input") {
        const auto bd = boundary_equilibria(p);
        CHECK_THROWS_AS(trace_separatrix(p, bd[0], 10.0), DomainError); // E0 is a source
    }
}

TEST_CASE("basin classification labels the exclusion attractors") {
    // k sits exactly on k*, so (1,0) is an attracting saddle-node approached
    // only algebraically: the horizon must cover the ~1/t tail
    const ModelParams p{0.2, 0.2, 1.1, 4.0, 0.15};
    const BasinResult res =
        basin_classify(p, {{0.01, 1.5}, {1.5, 0.5}, {0.0, 1.0}}, 3000.0, 1e-3);
    REQUIRE(res.labels.size() == 3);
    auto loc = [&](int idx) { return res.attractors[res.labels[idx]].location; };
    REQUIRE(res.labels[0] >= 0);
    CHECK(loc(0).x == Approx(0.0).margin(1e-9));
    CHECK(loc(0).y == Approx(1.0).margin(1e-9));
    REQUIRE(res.labels[1] >= 0);
    CHECK(loc(1).x == Approx(1.0).margin(1e-9));
    CHECK(loc(1).y == Approx(0.0).margin(1e-9));
    // initial state exactly at an attractor labels immediately
    REQUIRE(res.labels[2] >= 0);
    CHECK(loc(2).y == Approx(1.0).margin(1e-9));

    CHECK_THROWS_AS(basin_classify(p, {{2.5, 0.5}}, 10.0, 1e-3), DomainError);
    CHECK_THROWS_AS(basin_classify(p, {{0.5, 0.5}}, 10.0, 0.0), DomainError);

    SECTION("starting on the interior saddle stays undecided over short horizons") {
        const auto interiors = interior_equilibria(p);
        REQUIRE(interiors.size() == 1);
        const BasinResult undecided = basin_classify(p, {interiors[0].location}, 20.0, 1e-3);
        CHECK(undecided.labels[0] == -1);
    }
}

TEST_CASE("recurrence probe finds no cycles") {
    SECTION("benchmark parameter sets") {
        const double sets[2][5] = {{0.8, 0.5, 0.5, 0.2, 0.5}, {0.3, 0.5, 1.1, 1.1, 0.15}};
        auto rng = make_rng(4);
        std::uniform_real_distribution<double> Ui(0.05, 1.4);
        for (const auto& q : sets) {
            const ModelParams p{q[0], q[1], q[2], q[3], q[4]};
            for (int i = 0; i < 3; ++i) {
                const RecurrenceReport rep = limit_cycle_probe(p, {Ui(rng), Ui(rng)}, 200.0);
                CHECK_FALSE(rep.cycle_detected);
            }
        }
    }
    SECTION("weak-competition kinetic limit") {
        const RecurrenceReport rep = limit_cycle_probe({0.2, 0.2, 0.9, 0.05, 1.6}, {0.5, 0.7}, 300.0);
        CHECK_FALSE(rep.cycle_detected);
    }
    SECTION("starting at an equilibrium is trivially acyclic") {
        const ModelParams p{0.8, 0.5, 0.5, 0.2, 0.5};
        const auto es = interior_equilibria(p);
        REQUIRE(!es.empty());
        const RecurrenceReport rep = limit_cycle_probe(p, es[0].location, 100.0);
        CHECK_FALSE(rep.cycle_detected);
    }
    SECTION("requires strictly positive initial data") {
        CHECK_THROWS_AS(limit_cycle_probe({0.8, 0.5, 0.5, 0.2, 0.5}, {0.0, 0.5}, 10.0),
                        DomainError);
    }
}

TEST_CASE("trajectory CSV round-trips doubles losslessly") {
    const ModelParams p{0.3, 0.2, 1.1, 1.1, 0.15};
    const Trajectory traj = integrate(p, {0.123456789012345, 0.9}, 5.0);
    std::ostringstream os;
    trajectory_to_csv(traj, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,x,y");
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
        REQUIRE(c1 != std::string::npos);
        REQUIRE(c2 != std::string::npos);
        CHECK(std::strtod(line.substr(0, c1).c_str(), nullptr) == traj.times[row]);
        CHECK(std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr) == traj.states[row].x);
        CHECK(std::strtod(line.substr(c2 + 1).c_str(), nullptr) == traj.states[row].y);
        ++row;
    }
    CHECK(row == traj.times.size());
}

TEST_CASE("integrate_at_times hits the requested instants in order") {
    const ModelParams p{0.3, 0.5, 1.1, 1.1, 0.15};
    const auto states = integrate_at_times(p, {0.5, 0.5}, {1.0, 10.0, 50.0});
    REQUIRE(states.size() == 3);
    const State2 direct = integrate_final(p, {0.5, 0.5}, 50.0, 1e-10, 1e-12);
    CHECK(states[2].x == Approx(direct.x).margin(1e-6));
    CHECK(states[2].y == Approx(direct.y).margin(1e-6));
    CHECK_THROWS_AS(integrate_at_times(p, {0.5, 0.5}, {10.0, 5.0}), DomainError);
}
