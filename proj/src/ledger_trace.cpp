#include <utxolab/ledger_trace.hpp>
#include <utxolab/ledger_graph.hpp>

#include <algorithm>
#include <numeric>

namespace utxolab {
    bool ledger_context::is_initial_utxo(const utxo_set &u) const
    {
        return std::find(initial_utxos.begin(), initial_utxos.end(), u) != initial_utxos.end();
    }

    ledger_context genesis_context(std::vector<tx> genesis, const slot_range initial_slots, ledger_rules rules)
    {
        utxo_set::map_type entries;
        for (const auto &g: genesis) {
            if (!g.inputs().empty())
                throw precondition_error("genesis transactions must not have inputs");
            for (const auto &[ref, o]: mk_outs(g)) {
                if (!entries.emplace(ref, o).second)
                    throw key_collision_error("duplicate genesis output " + to_string(ref));
            }
        }
        ledger_context ctx;
        ctx.initial_utxos.emplace_back(std::move(entries));
        ctx.initial_slots = initial_slots;
        ctx.rules = std::move(rules);
        ctx.genesis = std::move(genesis);
        return ctx;
    }

    static utxo_set set_update(const utxo_set &u, const tx &t)
    {
        auto entries = u.entries();
        for (const auto &in: t.inputs())
            entries.erase(in.ref);
        for (const auto &[ref, o]: mk_outs(t))
            entries.emplace(ref, o);
        return utxo_set { std::move(entries) };
    }

    ledger_step make_unchecked_step(const slot q, const utxo_set &u, const tx &t)
    {
        return { q, u, t, set_update(u, t) };
    }

    annotated_run::annotated_run(utxo_set initial, std::vector<ledger_step> steps):
        _initial { std::move(initial) }, _steps { std::move(steps) }
    {
        for (std::size_t k = 0; k < _steps.size(); ++k) {
            const auto &prev = k == 0 ? _initial : _steps[k - 1].to;
            if (_steps[k].from != prev)
                throw precondition_error("run step " + std::to_string(k) + " does not start where the previous one ended");
            if (_steps[k].to != set_update(_steps[k].from, _steps[k].input))
                throw precondition_error("run step " + std::to_string(k) + " is not a UTxO set update");
        }
    }

    const utxo_set &annotated_run::state(const std::size_t k) const
    {
        if (k > _steps.size())
            throw precondition_error("run state index out of range");
        return k == 0 ? _initial : _steps[k - 1].to;
    }

    std::vector<tx> annotated_run::transactions() const
    {
        std::vector<tx> res;
        res.reserve(_steps.size());
        for (const auto &s: _steps)
            res.push_back(s.input);
        return res;
    }

    std::vector<slot> annotated_run::slots() const
    {
        std::vector<slot> res;
        res.reserve(_steps.size());
        for (const auto &s: _steps)
            res.push_back(s.env);
        return res;
    }

    std::vector<ledger_input> annotated_run::inputs() const
    {
        std::vector<ledger_input> res;
        res.reserve(_steps.size());
        for (const auto &s: _steps)
            res.push_back({ s.env, s.input });
        return res;
    }

    lift_label ledger_label(const slot q, const tx &t)
    {
        return { std::to_string(q.value), to_hex(t.hash()) };
    }

    trace_prefix annotated_run::prefix() const
    {
        trace_prefix p;
        p.states.reserve(_steps.size() + 1);
        p.states.push_back(utxo_vertex_id(_initial));
        for (const auto &s: _steps) {
            p.states.push_back(utxo_vertex_id(s.to));
            p.lift.push_back(ledger_label(s.env, s.input));
        }
        return p;
    }

    static trace_check failed(std::string diagnostic, std::string detail, std::optional<std::size_t> step = {})
    {
        return { false, std::move(diagnostic), std::move(detail), step };
    }

    trace_check validate_trace_prefix(const ledger_context &ctx, const trace_prefix &prefix,
        std::span<const ledger_input> steps)
    {
        check_shape(prefix);
        if (steps.size() + 1 != prefix.length())
            throw precondition_error("expected " + std::to_string(prefix.length() - 1) + " ledger steps, got "
                + std::to_string(steps.size()));
        const utxo_set *u0 = nullptr;
        for (const auto &u: ctx.initial_utxos) {
            if (utxo_vertex_id(u) == prefix.states[0]) {
                u0 = &u;
                break;
            }
        }
        if (!u0)
            return failed("initial-state-not-in-utxo0", printable(prefix.states[0]));
        if (!steps.empty() && !ctx.initial_slots.contains(steps[0].q))
            return failed("initial-slot-not-in-slot0", std::to_string(steps[0].q.value), 0);
        utxo_set current = *u0;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto &[q, t] = steps[k];
            if (k > 0 && q < steps[k - 1].q)
                return failed("slots-decreasing", std::to_string(steps[k - 1].q.value) + " > " + std::to_string(q.value), k);
            if (prefix.has_lift() && prefix.lift[k] != ledger_label(q, t))
                return failed("lift-mismatch", "lift label differs from the supplied step", k);
            try {
                auto res = step_ledger(q, current, t, ctx.rules);
                if (!res.ok())
                    return failed(std::string { res.check.diagnostic() }, res.check.detail, k);
                current = std::move(res.step->to);
            } catch (const key_collision_error &ex) {
                return failed("key-collision", ex.what(), k);
            }
            if (utxo_vertex_id(current) != prefix.states[k + 1])
                return failed("state-mismatch", "state " + std::to_string(k + 1) + " differs from the applied step", k);
        }
        return {};
    }

    std::uint64_t draw(rng_type &rng, const std::uint64_t n)
    {
        if (n == 0)
            throw precondition_error("draw needs a positive bound");
        return rng() % n;
    }

    static byte_string random_bytes(rng_type &rng, const std::size_t n)
    {
        byte_string res(n);
        for (auto &b: res)
            b = static_cast<std::uint8_t>(rng());
        return res;
    }

    static std::uint64_t total_quantity(const utxo_set &u, const token_id &token)
    {
        std::uint64_t sum = 0;
        for (const auto &[_, o]: u)
            sum += o.quantity(token);
        return sum;
    }

    tx_generator random_tx_generator(generator_config config)
    {
        return [config = std::move(config)](rng_type &rng, const slot q, const utxo_set &u) -> std::optional<tx> {
            if (u.empty())
                return std::nullopt;
            std::vector<const utxo_set::map_type::value_type *> pool;
            pool.reserve(u.size());
            for (const auto &entry: u.entries())
                pool.push_back(&entry);
            const auto n_in = 1 + draw(rng, std::min<std::uint64_t>(config.max_inputs, pool.size()));
            std::vector<tx_input> inputs;
            for (std::size_t i = 0; i < n_in; ++i) {
                const auto j = i + draw(rng, pool.size() - i);
                std::swap(pool[i], pool[j]);
                inputs.push_back({ pool[i]->first, pool[i]->second });
            }
            // mostly keep the state alive; occasionally consume without producing
            const auto n_out = draw(rng, 8) == 0 ? 0 : 1 + draw(rng, config.max_outputs);
            std::vector<token_map> values(n_out);
            for (auto &v: values)
                v[config.currency] = 1 + draw(rng, 1000);
            if (config.nft && n_out > 0) {
                const auto &nft = *config.nft;
                std::uint64_t spent_nft = 0;
                for (const auto &in: inputs)
                    spent_nft += in.spent.quantity(nft);
                if (spent_nft > 0) {
                    if (draw(rng, 100) >= config.burn_percent)
                        values[draw(rng, n_out)][nft] = spent_nft;
                } else if (total_quantity(u, nft) == 0 && draw(rng, 100) < config.mint_percent) {
                    values[draw(rng, n_out)][nft] = 1;
                }
            }
            std::vector<output> outputs;
            for (auto &v: values) {
                byte_string addr { 'a', 'd', 'd', 'r', static_cast<std::uint8_t>('0' + draw(rng, 4)) };
                outputs.emplace_back(std::move(addr), std::move(v), random_bytes(rng, 4));
            }
            const auto back = draw(rng, config.interval_slack + 1);
            const slot start { q.value >= back ? q.value - back : 0 };
            const slot end { q.value + 1 + draw(rng, config.interval_slack + 1) };
            return tx { std::move(inputs), std::move(outputs), { start, end } };
        };
    }

    tx make_genesis_tx(const std::size_t outputs, const std::uint64_t amount, const std::uint64_t tag, const token_id &currency)
    {
        std::vector<output> outs;
        for (std::size_t i = 0; i < outputs; ++i) {
            canonical_writer datum;
            datum.natural(tag).natural(i);
            outs.emplace_back(byte_string { 'g', 'e', 'n', 'e', 's', 'i', 's' }, token_map { { currency, amount } }, datum.take());
        }
        return tx { {}, std::move(outs), { slot { 0 }, slot { 0 } } };
    }

    std::vector<generated_trace> generate_valid_traces(const ledger_context &ctx, const tx_generator &gen,
        const std::size_t depth, const std::size_t count, const std::uint64_t seed, const std::size_t max_attempts)
    {
        if (depth == 0)
            throw precondition_error("trace depth must be at least 1");
        if (count > 0 && ctx.initial_utxos.empty())
            throw precondition_error("the ledger context has no initial states");
        if (ctx.initial_slots.last < ctx.initial_slots.first)
            throw precondition_error("empty initial slot range");
        rng_type rng { seed };
        std::vector<generated_trace> res;
        res.reserve(count);
        for (std::size_t c = 0; c < count; ++c) {
            const auto &u0 = ctx.initial_utxos[draw(rng, ctx.initial_utxos.size())];
            const auto span = ctx.initial_slots.last.value - ctx.initial_slots.first.value;
            slot q { ctx.initial_slots.first.value + (span == UINT64_MAX ? rng() : draw(rng, span + 1)) };
            std::vector<ledger_step> steps;
            bool exhausted = false;
            utxo_set current = u0;
            while (steps.size() + 1 < depth && !exhausted) {
                std::optional<ledger_step> next;
                for (std::size_t attempt = 0; attempt < max_attempts && !next; ++attempt) {
                    const auto t = gen(rng, q, current);
                    if (!t)
                        break;
                    auto res = step_ledger(q, current, *t, ctx.rules);
                    if (res.ok())
                        next = std::move(res.step);
                }
                if (!next) {
                    exhausted = true;
                    break;
                }
                current = next->to;
                steps.push_back(std::move(*next));
                q = slot { q.value + draw(rng, 3) };
            }
            res.push_back({ annotated_run { u0, std::move(steps) }, exhausted });
        }
        return res;
    }
}
