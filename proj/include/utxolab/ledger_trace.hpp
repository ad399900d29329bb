#pragma once

#include <functional>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>
#include <utxolab/ledger.hpp>
#include <utxolab/trace.hpp>

namespace utxolab {
    // Inclusive slot range.
    struct slot_range {
        slot first {};
        slot last {};

        bool contains(const slot q) const { return first <= q && q <= last; }
        bool operator==(const slot_range &) const = default;
    };

    // Valid initial states UTxO₀ (finite at desk scale), valid initial slots Slot₀ and the ledger rules.
    struct ledger_context {
        std::vector<utxo_set> initial_utxos {};
        slot_range initial_slots {};
        ledger_rules rules {};
        std::vector<tx> genesis {};

        bool is_initial_utxo(const utxo_set &u) const;
    };

    // A context whose single initial state holds the outputs of the given inputless transactions.
    ledger_context genesis_context(std::vector<tx> genesis, slot_range initial_slots, ledger_rules rules = {});

    struct ledger_input {
        slot q {};
        tx t;
    };

    // A finite run u₀ -(t₀)-> u₁ -> ... with the per-step sets r_i = getORefs(t_i), c_i = keys(mkOuts(t_i)).
    // Construction checks that steps chain and that u_{k+1} = (u_k \ r_k) ∪ c_k.
    class annotated_run {
    public:
        explicit annotated_run(utxo_set initial, std::vector<ledger_step> steps = {});

        const utxo_set &initial() const { return _initial; }
        const std::vector<ledger_step> &steps() const { return _steps; }
        std::size_t size() const { return _steps.size(); }
        // u_k for k in [0, size()]
        const utxo_set &state(std::size_t k) const;
        const utxo_set &final_state() const { return state(_steps.size()); }
        std::set<output_ref> consumed(std::size_t i) const { return get_orefs(_steps.at(i).input); }
        std::set<output_ref> created(std::size_t i) const { return mk_outs(_steps.at(i).input).keys(); }
        std::vector<tx> transactions() const;
        std::vector<slot> slots() const;
        std::vector<ledger_input> inputs() const;

        // states as UTxO vertex ids, lift labels (slot, tx hash)
        trace_prefix prefix() const;
    private:
        utxo_set _initial;
        std::vector<ledger_step> _steps;
    };

    // Set-theoretic update (u \ r) ∪ c without any validity check, for building corrupted runs.
    ledger_step make_unchecked_step(slot q, const utxo_set &u, const tx &t);

    lift_label ledger_label(slot q, const tx &t);

    struct trace_check {
        bool ok = true;
        std::string diagnostic {};
        std::string detail {};
        std::optional<std::size_t> step {};

        explicit operator bool() const { return ok; }
    };

    // Checks a state trace against its lift: u₀ ∈ UTxO₀, q₀ ∈ Slot₀, each step a valid ledger step
    // landing on the recorded next state, slots non-decreasing.
    trace_check validate_trace_prefix(const ledger_context &ctx, const trace_prefix &prefix,
        std::span<const ledger_input> steps);

    using rng_type = std::mt19937_64;
    // uniform in [0, n); n must be positive
    std::uint64_t draw(rng_type &rng, std::uint64_t n);

    using tx_generator = std::function<std::optional<tx>(rng_type &, slot, const utxo_set &)>;

    struct generator_config {
        token_id currency = "ada";
        // when set, transactions mint, move and burn this token respecting a supply of at most one
        std::optional<token_id> nft {};
        std::size_t max_inputs = 3;
        std::size_t max_outputs = 3;
        std::uint64_t interval_slack = 4;
        // chance, in percent, of minting the token when none is live
        std::uint64_t mint_percent = 30;
        std::uint64_t burn_percent = 20;
    };

    tx_generator random_tx_generator(generator_config config = {});

    // An inputless transaction with `outputs` outputs of `amount` currency each; `tag` makes it unique.
    tx make_genesis_tx(std::size_t outputs, std::uint64_t amount, std::uint64_t tag, const token_id &currency = "ada");

    struct generated_trace {
        annotated_run run;
        bool exhausted = false;
    };

    // `depth` is the number of states per trace. Deterministic for a fixed seed.
    std::vector<generated_trace> generate_valid_traces(const ledger_context &ctx, const tx_generator &gen,
        std::size_t depth, std::size_t count, std::uint64_t seed, std::size_t max_attempts = 16);
}
