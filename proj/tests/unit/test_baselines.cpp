#include <doctest.h>

#include "edgealloc/baselines.hpp"
#include "helpers.hpp"

using namespace edgealloc;

TEST_SUITE("baselines") {

TEST_CASE("fixed baseline repeats one allocation") {
    Scenario s = identical_scenario();
    BaselineOptions o;
    o.iterations = 25;
    auto r = run_baseline(FixedBaseline{}, s, o);
    CHECK(r.trace.records.size() == 25);
    CHECK(r.trace.converged);
    for (const auto& rec : r.trace.records) {
        CHECK(rec.objective == r.trace.records.front().objective);
        CHECK(rec.alpha == r.trace.records.front().alpha);
    }
    CHECK(r.cost == doctest::Approx(total_cost(s, fixed_default_allocation(s, Shape::homogeneous))).epsilon(1e-15));

    HomogeneousAllocation bad{0.2, 50, 0.2, 100};  // Σα = 2.2
    CHECK_THROWS_AS(run_baseline(FixedBaseline{Allocation{bad}}, s, o), InfeasibleAllocation);
}

TEST_CASE("random baseline is reproducible per seed") {
    Scenario s = heterogeneous_scenario();
    BaselineOptions o;
    o.shape = Shape::heterogeneous;
    o.seed = 42;
    auto a = run_baseline(RandomBaseline{}, s, o), b = run_baseline(RandomBaseline{}, s, o);
    CHECK(testutil::identical(a.trace, b.trace));
    o.seed = 43;
    auto c = run_baseline(RandomBaseline{}, s, o);
    CHECK_FALSE(testutil::identical(a.trace, c.trace));
    CHECK(a.trace.records.size() == 100);
}

TEST_CASE("every baseline iterate satisfies the resource budgets") {
    for (Shape shape : {Shape::homogeneous, Shape::heterogeneous}) {
        Scenario s = shape == Shape::homogeneous ? identical_scenario() : heterogeneous_scenario();
        BaselineOptions o;
        o.shape = shape;
        for (const BaselineKind& k : {BaselineKind{RandomBaseline{}}, BaselineKind{FixedBaseline{}}}) {
            auto r = run_baseline(k, s, o);
            for (const auto& rec : r.trace.records) {
                double sa = rec.alpha_bcfl, sf = rec.f_bcfl;
                const double reps = shape == Shape::homogeneous ? s.size() : 1;
                for (double a : rec.alpha) sa += reps * a;
                for (double f : rec.f) sf += reps * f;
                CHECK(sa <= 1 + 1e-12);
                CHECK(sf <= s.server.cpu_max * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("pinned variants never move the BCFL variables") {
    BaselineOptions o;
    o.iterations = 200;
    auto g = run_baseline(GAdmmPinned{}, identical_scenario(), o);
    auto c = run_baseline(CAdmmPinned{}, heterogeneous_scenario(), o);
    for (const auto* r : {&g, &c})
        for (const auto& rec : r->trace.records) {
            CHECK(rec.alpha_bcfl == 0.3);
            CHECK(rec.f_bcfl == doctest::Approx(300).epsilon(1e-15));
        }
    CHECK(testutil::identical(g.trace, run_baseline(GAdmmPinned{}, identical_scenario(), o).trace));
}

TEST_CASE("the joint solvers beat every baseline") {
    Scenario s = identical_scenario();
    const double mg = total_cost(s, solve_mg(s).allocation);
    BaselineOptions o;
    o.iterations = 200;
    for (const BaselineKind& k : {BaselineKind{RandomBaseline{}}, BaselineKind{FixedBaseline{}},
                                  BaselineKind{GAdmmPinned{}}})
        CHECK(mg <= run_baseline(k, s, o).cost);

    Scenario h = heterogeneous_scenario();
    const double mc = total_cost(h, solve_mc(h).allocation);
    o.shape = Shape::heterogeneous;
    for (const BaselineKind& k : {BaselineKind{RandomBaseline{}}, BaselineKind{FixedBaseline{}},
                                  BaselineKind{CAdmmPinned{}}})
        CHECK(mc <= run_baseline(k, h, o).cost);
}

TEST_CASE("names round-trip") {
    for (const char* n : {"random", "fixed", "gadmm", "cadmm"}) CHECK(std::string(baseline_name(parse_baseline(n))) == n);
    CHECK_THROWS_AS(parse_baseline("greedy"), ValidationError);
}

}  // TEST_SUITE
