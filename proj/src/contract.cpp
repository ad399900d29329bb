#include <utxolab/contract.hpp>

#include <algorithm>

namespace utxolab {
    std::string_view diagnostic_name(const step_verdict v)
    {
        switch (v) {
            case step_verdict::holds: return "holds";
            case step_verdict::vacuous: return "vacuous";
            case step_verdict::to_state_unprojectable: return "to-state-unprojectable";
            case step_verdict::contract_step_mismatch: return "contract-step-mismatch";
        }
        return "unknown";
    }

    std::string contract_pair_id(const std::string_view state, const std::string_view input)
    {
        canonical_writer w;
        w.var_bytes(as_bytes(state)).var_bytes(as_bytes(input));
        const auto bytes = w.take();
        return { bytes.begin(), bytes.end() };
    }

    std::string_view to_string(const nft_input i)
    {
        switch (i) {
            case nft_input::mint: return "mint";
            case nft_input::burn: return "burn";
            case nft_input::noop: return "noop";
        }
        return "unknown";
    }

    std::uint64_t token_supply(const utxo_set &u, const token_id &token)
    {
        std::uint64_t sum = 0;
        for (const auto &[_, o]: u)
            sum += o.quantity(token);
        return sum;
    }

    std::int64_t token_delta(const tx &t, const token_id &token)
    {
        std::int64_t delta = 0;
        for (const auto &o: t.outputs())
            delta += static_cast<std::int64_t>(o.quantity(token));
        for (const auto &in: t.inputs())
            delta -= static_cast<std::int64_t>(in.spent.quantity(token));
        return delta;
    }

    nft_contract make_nft_contract(const token_id &token)
    {
        nft_contract sc;
        sc.name = "nft";
        sc.spec.step = [](const std::uint64_t &s, const nft_input &i) -> std::optional<std::uint64_t> {
            switch (i) {
                case nft_input::mint:
                    if (s + 1 <= 1)
                        return s + 1;
                    return std::nullopt;
                case nft_input::burn:
                    if (s >= 1)
                        return s - 1;
                    return std::nullopt;
                case nft_input::noop:
                    if (s <= 1)
                        return s;
                    return std::nullopt;
            }
            return std::nullopt;
        };
        sc.spec.is_initial = [](const std::uint64_t &s) { return s <= 1; };
        sc.pi = [token](const utxo_set &u) -> std::optional<std::uint64_t> { return token_supply(u, token); };
        sc.kappa = [token](const tx &t) {
            const auto d = token_delta(t, token);
            return d > 0 ? nft_input::mint : d < 0 ? nft_input::burn : nft_input::noop;
        };
        sc.state_id = [](const std::uint64_t &s) { return std::to_string(s); };
        sc.input_name = [](const nft_input &i) { return std::string { to_string(i) }; };
        return sc;
    }

    ledger_rules nft_policy(const token_id &token)
    {
        return { "nft-policy:" + token, [token](slot, const utxo_set &u, const tx &t) {
            const auto d = token_delta(t, token);
            if (d < -1 || d > 1)
                return false;
            return static_cast<std::int64_t>(token_supply(u, token)) + d <= 1;
        } };
    }

    std::vector<contract_handle> contract_registry()
    {
        const token_id token = "nft";
        std::vector<contract_handle> res;
        res.push_back(erase_contract(make_nft_contract(token), "single token of type '" + token + "' with supply at most one",
            nft_policy(token), std::vector<std::uint64_t> { 0, 1 },
            std::vector<nft_input> { nft_input::mint, nft_input::burn, nft_input::noop }));
        return res;
    }

    const contract_handle *find_contract(const std::string_view name)
    {
        static const auto registry = contract_registry();
        const auto it = std::find_if(registry.begin(), registry.end(), [&](const auto &h) { return h.name == name; });
        return it == registry.end() ? nullptr : &*it;
    }
}
