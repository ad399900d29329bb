#pragma once

#include <memory>
#include <utxolab/graph.hpp>
#include <utxolab/ledger.hpp>

namespace utxolab {
    struct ledger_vertex {
        slot q {};
        utxo_set u {};
        tx t;
    };

    vertex_id utxo_vertex_id(const utxo_set &u);
    vertex_id ledger_vertex_id(slot q, const utxo_set &u, const tx &t);

    // Explicit graph of (slot, state, tx) triples passing checkTx, reachable from the initial ones.
    // An edge (q,u,t) -> (q',u',t') exists iff u' = applyTx(u, t) and q <= q'.
    struct ledger_graph {
        std::shared_ptr<const simple_graph> graph;
        std::map<vertex_id, ledger_vertex> vertices;
        std::vector<utxo_set> initial_utxos;
    };

    ledger_graph build_ledger_graph(const std::vector<utxo_set> &initial_utxos, const std::set<slot> &initial_slots,
        const std::vector<tx> &tx_universe, const std::set<slot> &slot_universe, const ledger_rules &rules = {});

    // The UTxO-component projection: vertices are states of the source graph, an edge u -> u'
    // exists when some source vertex (q,u,t) steps to u' and u' is itself a vertex.
    struct ledger_projection {
        std::shared_ptr<const simple_graph> graph;
        partial_sieve_hom phi;
        std::map<vertex_id, utxo_set> states;
    };

    ledger_projection project_ledger_graph(const ledger_graph &lambda);
}
