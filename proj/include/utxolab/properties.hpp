#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>
#include <utxolab/ledger_trace.hpp>

// Executable safety properties of ledger runs and the canonical form of transaction sequences.
namespace utxolab {
    struct well_founded_check {
        bool ok = true;
        std::optional<output_ref> witness {};
        std::string reason {};

        explicit operator bool() const { return ok; }
    };

    // Every entry of u0 must be an output of an inputless transaction from `genesis`.
    well_founded_check check_well_founded(const utxo_set &u0, std::span<const tx> genesis);

    // Clean, or the minimal offending pair (i, j): smallest j first, then smallest i.
    struct pair_verdict {
        std::optional<std::pair<std::size_t, std::size_t>> violation {};

        bool clean() const { return !violation; }
    };

    pair_verdict check_replay_protection(const annotated_run &run);
    // compares u_0 .. u_n including the final state
    pair_verdict check_trivial_update_protection(const annotated_run &run);

    struct disjointness_verdict {
        bool clean = true;
        std::string clause {};
        std::string witness {};
    };

    disjointness_verdict check_disjointness(const annotated_run &run);

    // Throws precondition_error unless both runs start at the same state with the same transaction multiset.
    bool check_commutativity(const annotated_run &a, const annotated_run &b);

    // Dependency structure of a run: depends_on[i] = K_i = { j | r_i ∩ c_j ≠ ∅ }.
    struct tx_poset {
        std::vector<std::set<std::size_t>> depends_on {};
        // transitive closure of depends_on
        std::vector<std::set<std::size_t>> closure {};
        // transitive reduction (Hasse diagram), edges i -> j for j covered by i
        std::vector<std::set<std::size_t>> hasse {};
        std::vector<std::size_t> levels {};

        std::size_t size() const { return depends_on.size(); }
        bool less(const std::size_t i, const std::size_t j) const { return depends_on.at(i).contains(j); }
        bool comparable(std::size_t i, std::size_t j) const;
    };

    tx_poset build_tx_poset(std::span<const std::set<output_ref>> consumed, std::span<const std::set<output_ref>> created);
    tx_poset build_tx_poset(const annotated_run &run);

    // indices sorted by (level, index)
    std::vector<std::size_t> canonical_presentation(const tx_poset &poset);

    struct permutation_set {
        std::vector<std::vector<std::size_t>> sequences {};
        bool truncated = false;
    };

    // Sequences reachable from the canonical presentation by swapping adjacent incomparable
    // transactions, sorted lexicographically, at most `cap` of them.
    permutation_set enumerate_valid_permutations(const tx_poset &poset, std::size_t cap);

    struct replay_result {
        std::optional<annotated_run> run {};
        std::size_t failed_index = 0;
        std::string diagnostic {};

        bool ok() const { return run.has_value(); }
    };

    replay_result replay_sequence(const utxo_set &u0, std::span<const slot> slots, std::span<const tx> txs,
        const ledger_rules &rules = {});

    // A single slot inside every validity interval when one exists, else the pointwise minimal
    // non-decreasing assignment; nullopt when no assignment fits.
    std::optional<std::vector<slot>> assign_slots(std::span<const tx> txs, slot floor = {});

    replay_result replay_permutation(const annotated_run &run, std::span<const std::size_t> order,
        const ledger_rules &rules = {});

    struct permutation_audit {
        permutation_set reachable {};
        std::vector<std::vector<std::size_t>> replay_valid {};
        std::vector<std::pair<std::vector<std::size_t>, std::string>> discrepancies {};
        bool finals_agree = true;
    };

    // Enumerates swap-reachable orders and replays each one from the run's initial state.
    permutation_audit audit_permutations(const annotated_run &run, std::size_t cap, const ledger_rules &rules = {});
}
