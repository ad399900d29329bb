#include <utxolab/codec.hpp>
#include <utxolab/contract.hpp>

#include <fstream>
#include <sstream>

namespace utxolab {
    namespace {
        const json &field(const json &j, const char *name)
        {
            if (!j.is_object())
                throw parse_error(std::string { "expected an object holding '" } + name + "'");
            const auto it = j.find(name);
            if (it == j.end())
                throw parse_error(std::string { "missing field '" } + name + "'");
            return *it;
        }

        std::uint64_t natural_field(const json &j, const char *name)
        {
            const auto &v = field(j, name);
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
                throw parse_error(std::string { "field '" } + name + "' must be a non-negative integer");
            return v.get<std::uint64_t>();
        }

        const std::string &string_field(const json &j, const char *name)
        {
            const auto &v = field(j, name);
            if (!v.is_string())
                throw parse_error(std::string { "field '" } + name + "' must be a string");
            return v.get_ref<const std::string &>();
        }

        const json &array_field(const json &j, const char *name)
        {
            const auto &v = field(j, name);
            if (!v.is_array())
                throw parse_error(std::string { "field '" } + name + "' must be an array");
            return v;
        }

        byte_string hex_field(const json &j, const char *name)
        {
            try {
                return from_hex(string_field(j, name));
            } catch (const parse_error &ex) {
                throw parse_error(std::string { "field '" } + name + "': " + ex.what());
            }
        }

        vertex_id hex_vertex(const json &v)
        {
            if (!v.is_string())
                throw parse_error("vertex ids must be hex strings");
            try {
                const auto b = from_hex(v.get_ref<const std::string &>());
                return { b.begin(), b.end() };
            } catch (const parse_error &ex) {
                throw parse_error(std::string { "vertex id: " } + ex.what());
            }
        }

        std::string vertex_hex(const vertex_id &v)
        {
            return to_hex(as_bytes(v));
        }

        // converts precondition failures of value constructors into parse errors
        template <typename F>
        auto guarded(F &&f)
        {
            try {
                return f();
            } catch (const precondition_error &ex) {
                throw parse_error(ex.what());
            }
        }
    }

    json to_json(const output_ref &ref)
    {
        return { { "tx", to_hex(ref.hash) }, { "index", ref.index } };
    }

    json to_json(const output &o)
    {
        json value = json::object();
        for (const auto &[token, qty]: o.value())
            value[token] = qty;
        return { { "address", to_hex(o.address()) }, { "value", std::move(value) }, { "datum", to_hex(o.datum()) } };
    }

    json to_json(const tx &t)
    {
        json inputs = json::array(), outputs = json::array();
        for (const auto &in: t.inputs())
            inputs.push_back({ { "ref", to_json(in.ref) }, { "spent", to_json(in.spent) } });
        for (const auto &o: t.outputs())
            outputs.push_back(to_json(o));
        return {
            { "hash", to_hex(t.hash()) },
            { "inputs", std::move(inputs) },
            { "outputs", std::move(outputs) },
            { "validity", { { "start", t.validity().start.value }, { "end", t.validity().end.value } } },
            { "data", to_hex(t.additional_data()) },
        };
    }

    json to_json(const utxo_set &u)
    {
        json res = json::array();
        for (const auto &[ref, o]: u)
            res.push_back({ { "ref", to_json(ref) }, { "output", to_json(o) } });
        return res;
    }

    json to_json(const ledger_step &s)
    {
        return { { "slot", s.env.value }, { "from", to_json(s.from) }, { "tx", to_json(s.input) }, { "to", to_json(s.to) } };
    }

    json to_json(const simple_graph &g)
    {
        json vertices = json::array(), edges = json::array(), initial = json::array();
        for (const auto &v: g.vertices())
            vertices.push_back(vertex_hex(v));
        for (const auto &e: g.edges())
            edges.push_back(json::array({ vertex_hex(e.from), vertex_hex(e.to) }));
        for (const auto &v: g.initial())
            initial.push_back(vertex_hex(v));
        return {
            { "version", schema_version },
            { "kind", "graph" },
            { "vertices", std::move(vertices) },
            { "edges", std::move(edges) },
            { "initial", std::move(initial) },
        };
    }

    json to_json(const trace_prefix &p)
    {
        json states = json::array(), lift = json::array();
        for (const auto &s: p.states)
            states.push_back(vertex_hex(s));
        for (const auto &l: p.lift)
            lift.push_back({ { "environment", l.environment }, { "input", l.input } });
        json res { { "states", std::move(states) }, { "lift", std::move(lift) } };
        if (p.identity)
            res["identity"] = *p.identity;
        return res;
    }

    output_ref output_ref_from_json(const json &j)
    {
        const auto hash = string_field(j, "tx");
        const auto index = natural_field(j, "index");
        if (index > UINT32_MAX)
            throw parse_error("output index exceeds 2^32 - 1");
        return guarded([&] { return output_ref { digest32_from_hex(hash), static_cast<std::uint32_t>(index) }; });
    }

    output output_from_json(const json &j)
    {
        token_map value;
        const auto &v = field(j, "value");
        if (!v.is_object())
            throw parse_error("field 'value' must be an object");
        for (const auto &[token, qty]: v.items()) {
            if (!qty.is_number_unsigned())
                throw parse_error("token quantities must be non-negative integers");
            value[token] = qty.get<std::uint64_t>();
        }
        return output { hex_field(j, "address"), std::move(value), hex_field(j, "datum") };
    }

    tx tx_from_json(const json &j)
    {
        std::vector<tx_input> inputs;
        for (const auto &in: array_field(j, "inputs"))
            inputs.push_back({ output_ref_from_json(field(in, "ref")), output_from_json(field(in, "spent")) });
        std::vector<output> outputs;
        for (const auto &o: array_field(j, "outputs"))
            outputs.push_back(output_from_json(o));
        const auto &validity = field(j, "validity");
        const validity_interval interval { slot { natural_field(validity, "start") }, slot { natural_field(validity, "end") } };
        auto t = guarded([&] { return tx { std::move(inputs), std::move(outputs), interval, hex_field(j, "data") }; });
        if (j.contains("hash") && string_field(j, "hash") != to_hex(t.hash()))
            throw parse_error("recorded transaction hash does not match its contents");
        return t;
    }

    utxo_set utxo_set_from_json(const json &j)
    {
        if (!j.is_array())
            throw parse_error("a UTxO set must be an array of entries");
        utxo_set::map_type entries;
        for (const auto &e: j) {
            if (!entries.emplace(output_ref_from_json(field(e, "ref")), output_from_json(field(e, "output"))).second)
                throw parse_error("duplicate output reference in UTxO set");
        }
        return utxo_set { std::move(entries) };
    }

    simple_graph graph_from_json(const json &j)
    {
        expect_document(j, "graph");
        vertex_set vertices, initial;
        std::set<edge> edges;
        for (const auto &v: array_field(j, "vertices"))
            vertices.emplace(hex_vertex(v));
        for (const auto &e: array_field(j, "edges")) {
            if (!e.is_array() || e.size() != 2)
                throw parse_error("edges must be [from, to] pairs");
            edges.insert({ hex_vertex(e[0]), hex_vertex(e[1]) });
        }
        for (const auto &v: array_field(j, "initial"))
            initial.emplace(hex_vertex(v));
        return guarded([&] { return simple_graph { std::move(vertices), std::move(edges), std::move(initial) }; });
    }

    trace_prefix trace_prefix_from_json(const json &j)
    {
        trace_prefix p;
        for (const auto &s: array_field(j, "states"))
            p.states.push_back(hex_vertex(s));
        for (const auto &l: array_field(j, "lift"))
            p.lift.push_back({ string_field(l, "environment"), string_field(l, "input") });
        if (j.contains("identity"))
            p.identity = string_field(j, "identity");
        guarded([&] { check_shape(p); return 0; });
        return p;
    }

    ledger_rules rules_from_name(const std::string &name)
    {
        if (name == "default")
            return {};
        if (constexpr std::string_view prefix = "nft-policy:"; name.starts_with(prefix) && name.size() > prefix.size())
            return nft_policy(name.substr(prefix.size()));
        throw parse_error("unknown ledger rules '" + name + "'");
    }

    json to_json(const ledger_context &ctx, const annotated_run &run)
    {
        json genesis = json::array(), initial = json::array(), states = json::array(), steps = json::array();
        for (const auto &g: ctx.genesis)
            genesis.push_back(to_json(g));
        for (const auto &u: ctx.initial_utxos)
            initial.push_back(to_json(u));
        const auto prefix = run.prefix();
        for (const auto &s: prefix.states)
            states.push_back(vertex_hex(s));
        for (const auto &s: run.steps())
            steps.push_back({ { "slot", s.env.value }, { "tx", to_json(s.input) } });
        return {
            { "version", schema_version },
            { "kind", "ledger-trace" },
            { "rules", ctx.rules.name },
            { "initial_slots", { { "first", ctx.initial_slots.first.value }, { "last", ctx.initial_slots.last.value } } },
            { "genesis", std::move(genesis) },
            { "initial_utxos", std::move(initial) },
            { "trace", { { "states", std::move(states) }, { "steps", std::move(steps) } } },
        };
    }

    trace_file trace_file_from_json(const json &j)
    {
        expect_document(j, "ledger-trace");
        trace_file f;
        f.context.rules = rules_from_name(string_field(j, "rules"));
        const auto &slots = field(j, "initial_slots");
        f.context.initial_slots = { slot { natural_field(slots, "first") }, slot { natural_field(slots, "last") } };
        if (f.context.initial_slots.last < f.context.initial_slots.first)
            throw parse_error("empty initial slot range");
        for (const auto &g: array_field(j, "genesis"))
            f.context.genesis.push_back(tx_from_json(g));
        for (const auto &u: array_field(j, "initial_utxos"))
            f.context.initial_utxos.push_back(utxo_set_from_json(u));
        const auto &trace = field(j, "trace");
        for (const auto &s: array_field(trace, "states"))
            f.prefix.states.push_back(hex_vertex(s));
        for (const auto &s: array_field(trace, "steps")) {
            f.steps.push_back({ slot { natural_field(s, "slot") }, tx_from_json(field(s, "tx")) });
            f.prefix.lift.push_back(ledger_label(f.steps.back().q, f.steps.back().t));
        }
        if (f.prefix.states.size() != f.steps.size() + 1)
            throw parse_error("a trace with " + std::to_string(f.steps.size()) + " steps needs "
                + std::to_string(f.steps.size() + 1) + " states");
        return f;
    }

    annotated_run unchecked_run(const trace_file &f)
    {
        if (f.context.initial_utxos.empty())
            throw parse_error("trace file lists no initial UTxO sets");
        const utxo_set *u0 = &f.context.initial_utxos.front();
        for (const auto &u: f.context.initial_utxos) {
            if (utxo_vertex_id(u) == f.prefix.states.front())
                u0 = &u;
        }
        std::vector<ledger_step> steps;
        utxo_set current = *u0;
        for (const auto &[q, t]: f.steps) {
            steps.push_back(make_unchecked_step(q, current, t));
            current = steps.back().to;
        }
        return annotated_run { *u0, std::move(steps) };
    }

    std::string dump(const json &j)
    {
        return j.dump() + "\n";
    }

    json parse_json(const std::string &text)
    {
        try {
            return json::parse(text);
        } catch (const json::exception &ex) {
            throw parse_error(ex.what());
        }
    }

    std::string read_text_file(const std::filesystem::path &path)
    {
        std::ifstream in { path, std::ios::binary };
        if (!in)
            throw parse_error("cannot read " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    json read_json_file(const std::filesystem::path &path)
    {
        try {
            return parse_json(read_text_file(path));
        } catch (const parse_error &ex) {
            throw parse_error(path.string() + ": " + ex.what());
        }
    }

    void write_text_file(const std::filesystem::path &path, const std::string &text)
    {
        std::ofstream out { path, std::ios::binary | std::ios::trunc };
        out << text;
        if (!out)
            throw error("cannot write " + path.string());
    }

    void expect_document(const json &j, const std::string_view kind)
    {
        const auto version = natural_field(j, "version");
        if (version != schema_version)
            throw parse_error("unsupported schema version " + std::to_string(version));
        if (string_field(j, "kind") != kind)
            throw parse_error("expected a '" + std::string { kind } + "' document");
    }
}
