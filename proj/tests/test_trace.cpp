#include <doctest.h>

#include "support/fixtures.hpp"

#include <utxolab/ledger_graph.hpp>

using namespace utxolab;
using namespace utxolab::testing;

namespace {
    trace_prefix states(std::initializer_list<const char *> s)
    {
        trace_prefix p;
        for (const auto *v: s)
            p.states.emplace_back(v);
        return p;
    }
}

TEST_CASE("ultraDistance")
{
    CHECK(ultra_dist(states({ "a", "b" }), states({ "x", "b" })) == ultra_distance::exact_power(0));
    CHECK(ultra_dist(states({ "a", "b" }), states({ "x", "b" })).value() == 1.0);
    const auto d = ultra_dist(states({ "a", "b", "c", "d" }), states({ "a", "b", "c", "e" }));
    CHECK(d == ultra_distance::exact_power(3));
    CHECK(d.value() == 0.125);

    auto five = states({ "a", "b", "c", "d", "e" });
    const auto same = ultra_dist(five, five);
    CHECK_FALSE(same.exact());
    CHECK(same.value() == 1.0 / 32);
    CHECK(ultra_dist(five, five.head(3)) == ultra_distance::upper_bound(3));

    auto other = five;
    five.identity = "t";
    other.identity = "t";
    CHECK(ultra_dist(five, other) == ultra_distance::zero());
    other.identity = "u";
    CHECK_FALSE(ultra_dist(five, other).exact());
}

TEST_CASE("ultrametric axioms")
{
    SUBCASE("equilateral at index 0")
    {
        const std::vector<trace_prefix> s { states({ "a" }), states({ "b" }), states({ "c" }) };
        const auto rep = check_ultrametric_axioms(s);
        CHECK(rep.clean());
        CHECK(rep.triples_checked == 1);
    }
    SUBCASE("isosceles with the larger pair")
    {
        // d(x,y) = 1/2, d(y,z) = 1/8 forces d(x,z) = 1/2
        const auto x = states({ "a", "b", "c", "d" }), y = states({ "a", "x", "c", "d" }), z = states({ "a", "x", "c", "q" });
        CHECK(ultra_dist(x, z) == ultra_distance::exact_power(1));
        const std::vector<trace_prefix> s { x, y, z };
        CHECK(check_ultrametric_axioms(s).clean());
    }
    SUBCASE("inexact triples are skipped")
    {
        const std::vector<trace_prefix> s { states({ "a" }), states({ "a" }), states({ "b" }) };
        const auto rep = check_ultrametric_axioms(s);
        CHECK(rep.triples_skipped == 1);
        CHECK(rep.triples_checked == 0);
    }
    SUBCASE("fuzzed traces")
    {
        rng_type rng { 5 };
        std::vector<trace_prefix> s;
        for (int i = 0; i < 50; ++i) {
            trace_prefix p;
            for (int k = 0; k < 6; ++k)
                p.states.push_back(std::string(1, static_cast<char>('a' + draw(rng, 2))));
            s.push_back(p);
        }
        CHECK(check_ultrametric_axioms(s).clean());
    }
}

TEST_CASE("rational radii")
{
    CHECK(grid_exponent(parse_rational("1")) == 0);
    CHECK(grid_exponent(parse_rational("0.3")) == 1);
    CHECK(grid_exponent(parse_rational("3/10")) == 1);
    CHECK(grid_exponent(parse_rational("1/4")) == 2);
    CHECK(grid_exponent(parse_rational("0.2499")) == 2);
    CHECK(grid_exponent(parse_rational("5")) == 0);
    CHECK_THROWS_AS(parse_rational("0"), parse_error);
    CHECK_THROWS_AS(parse_rational("x/2"), parse_error);
}

TEST_CASE("ballMembers")
{
    const auto center = states({ "a", "b", "c" });
    const std::vector<trace_prefix> cands { states({ "a", "x" }), states({ "z" }), states({ "a", "b", "q" }), center };
    CHECK(ball_members(center, parse_rational("1"), cands).members.size() == 4);
    CHECK(ball_members(center, parse_rational("0.3"), cands).members == std::vector<std::size_t> { 0, 2, 3 });
    CHECK(ball_members(center, parse_rational("1/4"), cands).members == std::vector<std::size_t> { 2, 3 });
    const auto narrow = ball_members(center, parse_rational("1/8"), cands);
    CHECK(narrow.members == std::vector<std::size_t> { 3 });
    CHECK(narrow.undecided == std::vector<std::size_t> { 0, 1 });
}

TEST_CASE("checkNonExpanding")
{
    const auto g = std::make_shared<const simple_graph>(vertex_set { "a", "b", "c" }, std::set<edge> {}, vertex_set {});
    const std::vector<std::pair<trace_prefix, trace_prefix>> pairs {
        { states({ "a", "b" }), states({ "a", "c" }) },
        { states({ "a" }), states({ "b" }) },
        { states({ "a", "b" }), states({ "a", "b" }) },
    };
    const auto id = check_non_expanding(partial_sieve_hom::identity(g), pairs);
    CHECK(id.clean());
    CHECK(id.pairs_checked == 2);

    const auto collapse = check_non_expanding(partial_sieve_hom { [](const vertex_id &) { return vertex_id { "*" }; } }, pairs);
    CHECK(collapse.clean());

    // equal states get distinct images
    int calls = 0;
    const partial_sieve_hom bad { [&](const vertex_id &v) { return v + std::to_string(calls++); } };
    const std::vector<std::pair<trace_prefix, trace_prefix>> same { { states({ "a", "b" }), states({ "a", "c" }) } };
    CHECK_FALSE(check_non_expanding(bad, same).clean());
}

TEST_CASE("monitors")
{
    const auto ctx = small_genesis(3, 9);
    const auto runs = generated_runs(ctx, 6, 5, 9);
    SUBCASE("non-empty state monitor on a trace that keeps outputs")
    {
        const auto m = state_monitor("empty-state", utxo_vertex_id(utxo_set {}));
        for (const auto &r: runs) {
            if (!r.final_state().empty())
                CHECK(monitor_trace(m, r.prefix()).clean());
        }
    }
    SUBCASE("violations persist under extension")
    {
        auto p = states({ "a", "b", "a" });
        const auto m = trivial_update_monitor();
        CHECK(monitor_trace(m, p).violated_at == 2);
        for (const auto *s: { "x", "y", "z" })
            p.states.emplace_back(s);
        CHECK(monitor_trace(m, p).violated_at == 2);
        const std::vector<trace_prefix> samples { p };
        CHECK(verify_monotone(m, samples));
    }
    SUBCASE("replay monitor reports the second occurrence")
    {
        const auto &r = runs.front();
        REQUIRE(r.size() >= 3);
        std::vector<ledger_step> steps(r.steps().begin(), r.steps().begin() + 2);
        steps.push_back(make_unchecked_step(steps.back().env, steps.back().to, steps[0].input));
        const annotated_run corrupted { r.initial(), std::move(steps) };
        CHECK(monitor_trace(replay_monitor(), corrupted.prefix()).violated_at == 2);
        CHECK(monitor_trace(replay_monitor(), r.prefix()).clean());
    }
}

TEST_CASE("validateTracePrefix")
{
    const auto ctx = small_genesis(3, 4);
    const auto runs = generated_runs(ctx, 4, 20, 4);
    SUBCASE("single state")
    {
        trace_prefix p;
        p.states.push_back(utxo_vertex_id(ctx.initial_utxos.front()));
        CHECK(validate_trace_prefix(ctx, p, {}).ok);
        p.states.front() = utxo_vertex_id(utxo_set {});
        CHECK(validate_trace_prefix(ctx, p, {}).diagnostic == "initial-state-not-in-utxo0");
    }
    SUBCASE("generated traces re-validate")
    {
        for (const auto &r: runs) {
            const auto c = validate_trace_prefix(ctx, r.prefix(), r.inputs());
            CHECK_MESSAGE(c.ok, c.diagnostic);
        }
    }
    SUBCASE("decreasing slots")
    {
        for (const auto &r: runs) {
            if (r.size() < 2 || r.steps()[0].env == slot { 0 })
                continue;
            auto inputs = r.inputs();
            inputs[1].q = slot { inputs[0].q.value - 1 };
            auto p = r.prefix();
            p.lift.clear();
            CHECK(validate_trace_prefix(ctx, p, inputs).diagnostic == "slots-decreasing");
            return;
        }
        FAIL("no run with a positive first slot");
    }
    SUBCASE("lift and state mismatches")
    {
        const auto &r = runs.front();
        REQUIRE(r.size() >= 2);
        auto p = r.prefix();
        p.states[2] = p.states[1];
        CHECK(validate_trace_prefix(ctx, p, r.inputs()).diagnostic == "state-mismatch");
        auto inputs = r.inputs();
        std::swap(inputs[0], inputs[1]);
        CHECK(validate_trace_prefix(ctx, r.prefix(), inputs).diagnostic == "lift-mismatch");
        CHECK_THROWS_AS(validate_trace_prefix(ctx, r.prefix(), std::span(inputs).first(1)), precondition_error);
    }
}

TEST_CASE("generateValidTraces")
{
    const auto ctx = small_genesis(3, 2);
    CHECK(generated_runs(ctx, 5, 0, 1).empty());
    const auto a = generated_runs(ctx, 8, 10, 77), b = generated_runs(ctx, 8, 10, 77);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].prefix().states == b[i].prefix().states);
        CHECK(a[i].size() <= 7);
    }
    CHECK_THROWS_AS(generated_runs(ctx, 0, 1, 1), precondition_error);
    const auto starved = generate_valid_traces(genesis_context({}, { slot { 0 }, slot { 0 } }),
        random_tx_generator(), 5, 1, 3);
    CHECK(starved.front().exhausted);
    CHECK(starved.front().run.size() == 0);
}

TEST_CASE("truncated lifts")
{
    const auto src = std::make_shared<const simple_graph>(vertex_set { "a", "b", "c" },
        std::set<edge> { { "a", "b" }, { "b", "c" }, { "c", "c" } }, vertex_set { "a" });
    const auto tgt = std::make_shared<const simple_graph>(vertex_set { "x", "y" },
        std::set<edge> { { "x", "y" }, { "y", "y" } }, vertex_set { "x" });
    const auto f = partial_sieve_hom::from_table({ { "a", "x" }, { "b", "y" }, { "c", "y" } }, src, tgt);
    CHECK(has_truncated_lift(states({ "x" }), f, 0).found);
    const auto l = has_truncated_lift(states({ "x", "y", "y" }), f, 2);
    REQUIRE(l.found);
    CHECK(l.witness == vertex_path { "a", "b", "c" });
    CHECK_FALSE(has_truncated_lift(states({ "x", "x" }), f, 1).found);
    CHECK_THROWS_AS(has_truncated_lift(states({ "x" }), f, 1), precondition_error);
    CHECK_THROWS_AS(has_truncated_lift(states({ "x" }), partial_sieve_hom { [](const vertex_id &v) { return v; } }, 0),
        unsupported_error);

    SUBCASE("a projected ledger path lifts back")
    {
        const auto ctx = small_genesis(3, 8);
        const auto runs = generated_runs(ctx, 4, 3, 8);
        std::vector<tx> universe;
        for (const auto &r: runs) {
            for (const auto &t: r.transactions())
                universe.push_back(t);
        }
        std::set<slot> slots { slot { 0 }, slot { 1 }, slot { 2 }, slot { 3 } };
        for (const auto &r: runs) {
            for (const auto q: r.slots())
                slots.insert(q);
        }
        const auto lambda = build_ledger_graph(ctx.initial_utxos, { slot { 0 }, slot { 1 }, slot { 2 }, slot { 3 } },
            universe, slots);
        const auto proj = project_ledger_graph(lambda);
        for (const auto &r: runs) {
            if (r.size() < 2)
                continue;
            const auto p = r.prefix();
            const auto lift = has_truncated_lift(p, proj.phi, r.size() - 1);
            REQUIRE(lift.found);
            for (std::size_t k = 0; k < lift.witness.size(); ++k)
                CHECK(lambda.vertices.at(lift.witness[k]).u == r.state(k));
        }
    }
}
