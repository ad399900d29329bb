#include <utxolab/ledger_graph.hpp>

#include <deque>

namespace utxolab {
    static vertex_id to_vertex_id(const digest32 &d)
    {
        return { reinterpret_cast<const char *>(d.data()), d.size() };
    }

    vertex_id utxo_vertex_id(const utxo_set &u)
    {
        return to_vertex_id(state_digest(u));
    }

    vertex_id ledger_vertex_id(const slot q, const utxo_set &u, const tx &t)
    {
        canonical_writer w;
        w.natural(q.value).raw(canonical_bytes(u)).raw(t.hash());
        return to_vertex_id(sha256(w.bytes()));
    }

    ledger_graph build_ledger_graph(const std::vector<utxo_set> &initial_utxos, const std::set<slot> &initial_slots,
        const std::vector<tx> &tx_universe, const std::set<slot> &slot_universe, const ledger_rules &rules)
    {
        ledger_graph res;
        res.initial_utxos = initial_utxos;
        vertex_set vertices, initial;
        std::set<edge> edges;
        std::deque<vertex_id> queue;

        const auto visit = [&](const slot q, const utxo_set &u, const tx &t) -> std::optional<vertex_id> {
            if (!check_tx(q, u, t, rules))
                return std::nullopt;
            auto id = ledger_vertex_id(q, u, t);
            if (vertices.emplace(id).second) {
                res.vertices.emplace(id, ledger_vertex { q, u, t });
                queue.push_back(id);
            }
            return id;
        };

        for (const auto &u0: initial_utxos) {
            for (const auto q0: initial_slots) {
                for (const auto &t: tx_universe) {
                    if (const auto id = visit(q0, u0, t))
                        initial.emplace(*id);
                }
            }
        }
        while (!queue.empty()) {
            const auto id = std::move(queue.front());
            queue.pop_front();
            const auto &v = res.vertices.at(id);
            const auto next_state = apply_tx(v.u, v.t);
            const auto from_slot = v.q;
            for (auto it = slot_universe.lower_bound(from_slot); it != slot_universe.end(); ++it) {
                for (const auto &t: tx_universe) {
                    if (const auto next = visit(*it, next_state, t))
                        edges.emplace(edge { id, *next });
                }
            }
        }
        res.graph = std::make_shared<const simple_graph>(std::move(vertices), std::move(edges), std::move(initial));
        return res;
    }

    ledger_projection project_ledger_graph(const ledger_graph &lambda)
    {
        std::map<vertex_id, utxo_set> states;
        std::map<vertex_id, vertex_id> phi;
        for (const auto &[id, v]: lambda.vertices) {
            auto uid = utxo_vertex_id(v.u);
            phi.emplace(id, uid);
            states.emplace(std::move(uid), v.u);
        }
        vertex_set vertices, initial;
        for (const auto &[uid, _]: states)
            vertices.emplace(uid);
        std::set<edge> edges;
        for (const auto &[id, v]: lambda.vertices) {
            auto next = utxo_vertex_id(apply_tx(v.u, v.t));
            if (vertices.contains(next))
                edges.emplace(edge { phi.at(id), std::move(next) });
        }
        for (const auto &u0: lambda.initial_utxos) {
            auto uid = utxo_vertex_id(u0);
            if (vertices.contains(uid))
                initial.emplace(std::move(uid));
        }
        auto graph = std::make_shared<const simple_graph>(std::move(vertices), std::move(edges), std::move(initial));
        auto hom = partial_sieve_hom::from_table(std::move(phi), lambda.graph, graph);
        return { std::move(graph), std::move(hom), std::move(states) };
    }
}
