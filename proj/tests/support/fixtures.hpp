#pragma once

#include <utxolab/contract.hpp>
#include <utxolab/graph.hpp>
#include <utxolab/ledger_trace.hpp>
#include <utxolab/properties.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace utxolab::testing {
    inline byte_string bytes_of(const std::string &s)
    {
        return { s.begin(), s.end() };
    }

    inline output ada(const std::string &addr, const std::uint64_t qty, const std::string &datum = {})
    {
        return output { bytes_of(addr), token_map { { "ada", qty } }, bytes_of(datum) };
    }

    inline tx_input spend(const utxo_set &u, const output_ref &ref)
    {
        return { ref, *u.find(ref) };
    }

    // The single-input, output-free transaction whose hash is pinned in the tests.
    inline tx golden_tx()
    {
        digest32 h {};
        h.fill(0x11);
        return tx { { { output_ref { h, 0 }, ada("alice", 5) } }, {}, { slot { 0 }, slot { 10 } } };
    }

    struct dependency_fixture {
        ledger_context context;
        annotated_run run;
    };

    // Eight transactions in index order with dependency sets
    // K0 = K1 = K3 = {}, K2 = {1}, K6 = {1,3}, K4 = {0,2,3}, K5 = {2,3}, K7 = {5,6}.
    inline dependency_fixture make_dependency_fixture()
    {
        auto ctx = genesis_context({ make_genesis_tx(3, 1000, 42) }, { slot { 0 }, slot { 0 } });
        const auto &u0 = ctx.initial_utxos.front();
        const auto g = [&](const std::uint32_t i) { return output_ref { ctx.genesis.front().hash(), i }; };
        // consumers of each transaction's outputs, in output-index order
        const std::vector<std::vector<std::size_t>> consumers {
            { 4 }, { 2, 6 }, { 4, 5 }, { 6, 4, 5 }, {}, { 7 }, { 7 }, {}
        };
        const std::vector<std::vector<std::size_t>> deps { {}, {}, { 1 }, {}, { 0, 2, 3 }, { 2, 3 }, { 1, 3 }, { 5, 6 } };
        std::map<std::size_t, output_ref> genesis_input { { 0, g(0) }, { 1, g(1) }, { 3, g(2) } };

        std::vector<tx> txs;
        utxo_set current = u0;
        std::vector<ledger_step> steps;
        for (std::size_t i = 0; i < 8; ++i) {
            std::vector<tx_input> inputs;
            if (deps[i].empty())
                inputs.push_back(spend(current, genesis_input.at(i)));
            for (const auto j: deps[i]) {
                const auto &c = consumers[j];
                const auto slot_ix = static_cast<std::uint32_t>(std::find(c.begin(), c.end(), i) - c.begin());
                inputs.push_back(spend(current, output_ref { txs[j].hash(), slot_ix }));
            }
            std::vector<output> outs;
            const auto n_out = std::max<std::size_t>(1, consumers[i].size());
            for (std::size_t k = 0; k < n_out; ++k)
                outs.push_back(ada("party" + std::to_string(i), 10, "tx" + std::to_string(i) + "." + std::to_string(k)));
            txs.emplace_back(std::move(inputs), std::move(outs), validity_interval { slot { 0 }, slot { 100 } });
            auto res = step_ledger(slot { 0 }, current, txs.back());
            if (!res.ok())
                throw invariant_error("dependency fixture step " + std::to_string(i) + " rejected: "
                    + std::string { res.check.diagnostic() });
            current = res.step->to;
            steps.push_back(std::move(*res.step));
        }
        return { std::move(ctx), annotated_run { u0, std::move(steps) } };
    }

    inline ledger_context small_genesis(const std::size_t outputs, const std::uint64_t tag, ledger_rules rules = {})
    {
        return genesis_context({ make_genesis_tx(outputs, 1'000'000, tag) }, { slot { 0 }, slot { 3 } }, std::move(rules));
    }

    inline std::vector<annotated_run> generated_runs(const ledger_context &ctx, const std::size_t depth,
        const std::size_t count, const std::uint64_t seed, generator_config config = {})
    {
        std::vector<annotated_run> res;
        for (auto &g: generate_valid_traces(ctx, random_tx_generator(std::move(config)), depth, count, seed))
            res.push_back(std::move(g.run));
        return res;
    }

    // Random simple graph on 1..max_vertices vertices named v0, v1, ...
    inline std::shared_ptr<const simple_graph> random_graph(rng_type &rng, const std::size_t max_vertices,
        const std::string &prefix = "v")
    {
        const auto n = 1 + draw(rng, max_vertices);
        vertex_set vertices, initial;
        std::set<edge> edges;
        for (std::size_t i = 0; i < n; ++i)
            vertices.insert(prefix + std::to_string(i));
        const auto density = 1 + draw(rng, 4);
        for (const auto &a: vertices) {
            if (draw(rng, 3) == 0)
                initial.insert(a);
            for (const auto &b: vertices) {
                if (draw(rng, 10) < density)
                    edges.insert({ a, b });
            }
        }
        return std::make_shared<const simple_graph>(std::move(vertices), std::move(edges), std::move(initial));
    }

    // vertices reachable from `seed`, the smallest sieve containing it
    inline vertex_set upward_closure(const simple_graph &g, vertex_set seed)
    {
        std::vector<vertex_id> todo(seed.begin(), seed.end());
        while (!todo.empty()) {
            const auto v = todo.back();
            todo.pop_back();
            for (const auto &w: g.successors(v)) {
                if (seed.insert(w).second)
                    todo.push_back(w);
            }
        }
        return seed;
    }

    inline vertex_set random_subset(rng_type &rng, const vertex_set &s, const std::uint64_t percent)
    {
        vertex_set res;
        for (const auto &v: s) {
            if (draw(rng, 100) < percent)
                res.insert(v);
        }
        return res;
    }

    inline vertex_set random_sieve(rng_type &rng, const simple_graph &g)
    {
        return upward_closure(g, random_subset(rng, g.vertices(), 20));
    }

    struct random_hom {
        std::shared_ptr<const simple_graph> target;
        partial_sieve_hom hom;
        std::map<vertex_id, vertex_id> table;
    };

    // A quotient of `source` onto at most `classes` vertices, restricted to a sieve holding every initial vertex.
    inline random_hom random_quotient_hom(rng_type &rng, const std::shared_ptr<const simple_graph> &source,
        const std::size_t classes, const std::string &prefix)
    {
        std::map<vertex_id, vertex_id> full;
        for (const auto &v: source->vertices())
            full.emplace(v, prefix + std::to_string(draw(rng, classes)));
        const auto domain = upward_closure(*source, [&] {
            auto seed = random_subset(rng, source->vertices(), 25);
            seed.insert(source->initial().begin(), source->initial().end());
            return seed;
        }());
        vertex_set vertices, initial;
        std::set<edge> edges;
        for (const auto &[v, img]: full)
            vertices.insert(img);
        for (const auto &e: source->edges())
            edges.insert({ full.at(e.from), full.at(e.to) });
        for (const auto &a: vertices) {
            for (const auto &b: vertices) {
                if (draw(rng, 20) == 0)
                    edges.insert({ a, b });
            }
        }
        for (const auto &v: source->initial())
            initial.insert(full.at(v));
        // an extra initial vertex outside the image does not break the homomorphism
        if (!vertices.empty() && draw(rng, 4) == 0)
            initial.insert(*vertices.begin());
        std::map<vertex_id, vertex_id> table;
        for (const auto &v: domain)
            table.emplace(v, full.at(v));
        auto target = std::make_shared<const simple_graph>(std::move(vertices), std::move(edges), std::move(initial));
        return { target, partial_sieve_hom::from_table(table, source, target), table };
    }
}
