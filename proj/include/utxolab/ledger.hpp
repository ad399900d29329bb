#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>
#include <utxolab/bytes.hpp>

// The UTxO ledger as a small-step transition system: states are UTxO sets,
// inputs are transactions, the environment is the current slot.
namespace utxolab {
    using tx_hash = digest32;
    using token_id = std::string;
    using token_map = std::map<token_id, std::uint64_t>;

    struct slot {
        std::uint64_t value = 0;

        auto operator<=>(const slot &) const = default;
    };

    struct output_ref {
        tx_hash hash {};
        std::uint32_t index = 0;

        auto operator<=>(const output_ref &) const = default;
    };

    std::string to_string(const output_ref &ref);

    // An output owned by an opaque address. Zero-quantity tokens are dropped on construction.
    class output {
    public:
        output() = default;
        output(byte_string address, token_map value, byte_string datum = {});

        const byte_string &address() const { return _address; }
        const token_map &value() const { return _value; }
        const byte_string &datum() const { return _datum; }
        std::uint64_t quantity(const token_id &token) const;

        bool operator==(const output &) const = default;
    private:
        byte_string _address {};
        token_map _value {};
        byte_string _datum {};
    };

    struct tx_input {
        output_ref ref {};
        output spent {};

        bool operator==(const tx_input &) const = default;
    };

    // Half-open slot range [start, end).
    struct validity_interval {
        slot start {};
        slot end {};

        bool contains(const slot q) const { return start <= q && q < end; }
        bool operator==(const validity_interval &) const = default;
    };

    // Transactions are immutable; inputs are kept sorted by output reference and must
    // reference pairwise distinct outputs. The hash is computed once at construction.
    class tx {
    public:
        tx(std::vector<tx_input> inputs, std::vector<output> outputs, validity_interval validity,
            byte_string additional_data = {});

        const std::vector<tx_input> &inputs() const { return _inputs; }
        const std::vector<output> &outputs() const { return _outputs; }
        const validity_interval &validity() const { return _validity; }
        const byte_string &additional_data() const { return _additional_data; }
        const tx_hash &hash() const { return _hash; }

        bool operator==(const tx &o) const
        {
            return _hash == o._hash && _inputs == o._inputs && _outputs == o._outputs
                && _validity == o._validity && _additional_data == o._additional_data;
        }
    private:
        std::vector<tx_input> _inputs;
        std::vector<output> _outputs;
        validity_interval _validity;
        byte_string _additional_data;
        tx_hash _hash {};
    };

    class utxo_set {
    public:
        using map_type = std::map<output_ref, output>;
        using const_iterator = map_type::const_iterator;

        utxo_set() = default;
        explicit utxo_set(map_type entries): _entries { std::move(entries) } {}

        const map_type &entries() const { return _entries; }
        std::size_t size() const { return _entries.size(); }
        bool empty() const { return _entries.empty(); }
        const_iterator begin() const { return _entries.begin(); }
        const_iterator end() const { return _entries.end(); }
        bool contains(const output_ref &ref) const { return _entries.contains(ref); }
        const output *find(const output_ref &ref) const;
        std::set<output_ref> keys() const;

        bool operator==(const utxo_set &) const = default;
    private:
        map_type _entries {};
    };

    byte_string canonical_bytes(const output &o);
    byte_string canonical_bytes(const tx &t);
    byte_string canonical_bytes(const utxo_set &u);

    tx_hash hash_tx(const tx &t);
    // Stable identity of a ledger state, used as its vertex id in graphs and traces.
    digest32 state_digest(const utxo_set &u);

    std::map<std::uint64_t, output> to_map(std::uint64_t start_ix, const std::vector<output> &outs);
    utxo_set mk_outs(const tx &t);
    std::set<output_ref> get_orefs(const tx &t);

    enum class tx_rejection {
        none,
        empty_inputs,
        slot_out_of_interval,
        missing_input,
        input_mismatch,
        additional_checks
    };

    std::string_view diagnostic_name(tx_rejection r);

    struct tx_check {
        tx_rejection code = tx_rejection::none;
        std::string detail {};

        bool ok() const { return code == tx_rejection::none; }
        explicit operator bool() const { return ok(); }
        std::string_view diagnostic() const { return diagnostic_name(code); }
    };

    // Extension point for the additionalChecks clause of checkTx. An empty hook accepts everything.
    struct ledger_rules {
        using check_fn = std::function<bool(slot, const utxo_set &, const tx &)>;

        std::string name = "default";
        check_fn additional_checks {};

        bool accepts(const slot q, const utxo_set &u, const tx &t) const
        {
            return !additional_checks || additional_checks(q, u, t);
        }
    };

    tx_check check_tx(slot q, const utxo_set &u, const tx &t, const ledger_rules &rules = {});

    // (u \ getORefs(t)) ∪ mkOuts(t); throws key_collision_error instead of overwriting a live entry.
    utxo_set apply_tx(const utxo_set &u, const tx &t);

    struct ledger_step {
        slot env {};
        utxo_set from {};
        tx input;
        utxo_set to {};
    };

    struct step_result {
        std::optional<ledger_step> step {};
        tx_check check {};

        bool ok() const { return step.has_value(); }
    };

    step_result step_ledger(slot q, const utxo_set &u, const tx &t, const ledger_rules &rules = {});
}
