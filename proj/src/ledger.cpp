#include <utxolab/ledger.hpp>

#include <algorithm>
#include <limits>

namespace utxolab {
    std::string to_string(const output_ref &ref)
    {
        return to_hex(ref.hash) + "#" + std::to_string(ref.index);
    }

    output::output(byte_string address, token_map value, byte_string datum):
        _address { std::move(address) }, _value { std::move(value) }, _datum { std::move(datum) }
    {
        std::erase_if(_value, [](const auto &kv) { return kv.second == 0; });
    }

    std::uint64_t output::quantity(const token_id &token) const
    {
        const auto it = _value.find(token);
        return it == _value.end() ? 0 : it->second;
    }

    tx::tx(std::vector<tx_input> inputs, std::vector<output> outputs, validity_interval validity,
            byte_string additional_data):
        _inputs { std::move(inputs) }, _outputs { std::move(outputs) }, _validity { validity },
        _additional_data { std::move(additional_data) }
    {
        if (_validity.end < _validity.start)
            throw precondition_error("validity interval start exceeds end");
        if (_outputs.size() > std::numeric_limits<std::uint32_t>::max())
            throw precondition_error("a transaction can have at most 2^32 outputs");
        std::sort(_inputs.begin(), _inputs.end(), [](const auto &a, const auto &b) { return a.ref < b.ref; });
        const auto dup = std::adjacent_find(_inputs.begin(), _inputs.end(),
            [](const auto &a, const auto &b) { return a.ref == b.ref; });
        if (dup != _inputs.end())
            throw precondition_error("duplicate transaction input " + to_string(dup->ref));
        _hash = sha256(canonical_bytes(*this));
    }

    const output *utxo_set::find(const output_ref &ref) const
    {
        const auto it = _entries.find(ref);
        return it == _entries.end() ? nullptr : &it->second;
    }

    std::set<output_ref> utxo_set::keys() const
    {
        std::set<output_ref> res;
        for (const auto &[ref, _]: _entries)
            res.emplace_hint(res.end(), ref);
        return res;
    }

    static void write_output(canonical_writer &w, const output &o)
    {
        w.var_bytes(o.address());
        w.natural(o.value().size());
        for (const auto &[token, qty]: o.value())
            w.var_bytes(token).natural(qty);
        w.var_bytes(o.datum());
    }

    static void write_ref(canonical_writer &w, const output_ref &ref)
    {
        w.raw(ref.hash).natural(ref.index);
    }

    byte_string canonical_bytes(const output &o)
    {
        canonical_writer w;
        write_output(w, o);
        return w.take();
    }

    byte_string canonical_bytes(const tx &t)
    {
        canonical_writer w;
        w.natural(t.inputs().size());
        for (const auto &in: t.inputs()) {
            write_ref(w, in.ref);
            write_output(w, in.spent);
        }
        w.natural(t.outputs().size());
        for (const auto &o: t.outputs())
            write_output(w, o);
        w.natural(t.validity().start.value).natural(t.validity().end.value);
        w.var_bytes(t.additional_data());
        return w.take();
    }

    byte_string canonical_bytes(const utxo_set &u)
    {
        canonical_writer w;
        w.natural(u.size());
        for (const auto &[ref, o]: u) {
            write_ref(w, ref);
            write_output(w, o);
        }
        return w.take();
    }

    tx_hash hash_tx(const tx &t)
    {
        return t.hash();
    }

    digest32 state_digest(const utxo_set &u)
    {
        return sha256(canonical_bytes(u));
    }

    std::map<std::uint64_t, output> to_map(const std::uint64_t start_ix, const std::vector<output> &outs)
    {
        std::map<std::uint64_t, output> res;
        for (std::size_t k = 0; k < outs.size(); ++k)
            res.emplace_hint(res.end(), start_ix + k, outs[k]);
        return res;
    }

    utxo_set mk_outs(const tx &t)
    {
        utxo_set::map_type entries;
        for (auto &[ix, o]: to_map(0, t.outputs()))
            entries.emplace(output_ref { t.hash(), static_cast<std::uint32_t>(ix) }, std::move(o));
        return utxo_set { std::move(entries) };
    }

    std::set<output_ref> get_orefs(const tx &t)
    {
        std::set<output_ref> res;
        for (const auto &in: t.inputs())
            res.emplace_hint(res.end(), in.ref);
        return res;
    }

    std::string_view diagnostic_name(const tx_rejection r)
    {
        switch (r) {
            case tx_rejection::none: return "ok";
            case tx_rejection::empty_inputs: return "empty-inputs";
            case tx_rejection::slot_out_of_interval: return "slot-out-of-interval";
            case tx_rejection::missing_input: return "missing-input";
            case tx_rejection::input_mismatch: return "input-mismatch";
            case tx_rejection::additional_checks: return "additional-checks";
        }
        return "unknown";
    }

    tx_check check_tx(const slot q, const utxo_set &u, const tx &t, const ledger_rules &rules)
    {
        if (t.inputs().empty())
            return { tx_rejection::empty_inputs, "transaction has no inputs" };
        if (!t.validity().contains(q))
            return { tx_rejection::slot_out_of_interval,
                "slot " + std::to_string(q.value) + " outside [" + std::to_string(t.validity().start.value)
                    + ", " + std::to_string(t.validity().end.value) + ")" };
        for (const auto &in: t.inputs()) {
            const auto *o = u.find(in.ref);
            if (!o)
                return { tx_rejection::missing_input, to_string(in.ref) };
            if (*o != in.spent)
                return { tx_rejection::input_mismatch, to_string(in.ref) };
        }
        if (!rules.accepts(q, u, t))
            return { tx_rejection::additional_checks, rules.name };
        return {};
    }

    utxo_set apply_tx(const utxo_set &u, const tx &t)
    {
        auto entries = u.entries();
        for (const auto &in: t.inputs())
            entries.erase(in.ref);
        const auto created = mk_outs(t);
        for (const auto &[ref, o]: created) {
            if (!entries.emplace(ref, o).second)
                throw key_collision_error("output " + to_string(ref) + " is already unspent");
        }
        return utxo_set { std::move(entries) };
    }

    step_result step_ledger(const slot q, const utxo_set &u, const tx &t, const ledger_rules &rules)
    {
        auto check = check_tx(q, u, t, rules);
        if (!check)
            return { std::nullopt, std::move(check) };
        return { ledger_step { q, u, t, apply_tx(u, t) }, {} };
    }
}
