#include "cli.hpp"

#include <CLI11.hpp>
#include <utxolab/codec.hpp>
#include <utxolab/contract.hpp>
#include <utxolab/ledger_graph.hpp>
#include <utxolab/properties.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

namespace fs = std::filesystem;

namespace utxolab::cli {
    namespace {
        struct usage_error: error {
            using error::error;
        };

        const token_id nft_token = "nft";

        struct options {
            std::string format = "json";
            std::string out {};
            std::uint64_t seed = 0;
            std::size_t depth = 6;
            std::size_t count = 10;
            std::size_t universe = 4;
            std::string slots = "0:3";
            std::string rules = "nft-policy";
            std::vector<std::string> files {};
            std::string run {};
            std::string monitor = "all";
            bool enumerate = false;
            std::size_t cap = 1000;
            std::string name {};
            bool induce = false;
            bool nonexpanding = false;
            std::size_t pairs = 100;
            std::string which = "lambda";
        };

        class report {
        public:
            explicit report(std::string command): _command { std::move(command) } {}

            void verdict(std::string check, std::string subject, const bool clean, json witness = nullptr)
            {
                _clean = _clean && clean;
                json v { { "check", std::move(check) }, { "subject", std::move(subject) },
                    { "status", clean ? "clean" : "violation" } };
                if (!witness.is_null())
                    v["witness"] = std::move(witness);
                _verdicts.push_back(std::move(v));
            }

            void detail(const std::string &key, json value) { _details[key] = std::move(value); }
            void input(std::string_view bytes) { _inputs.var_bytes(bytes); }
            bool clean() const { return _clean; }

            json to_json() const
            {
                json res { { "command", _command }, { "verdicts", _verdicts } };
                if (!_details.empty())
                    res["details"] = _details;
                res["inputs_digest"] = to_hex(sha256(_inputs.bytes()));
                return res;
            }

            void print(std::ostream &out, const std::string &format) const
            {
                if (format == "json") {
                    out << dump(to_json());
                    return;
                }
                out << _command << "\n";
                for (const auto &v: _verdicts) {
                    out << "  " << v["status"].get<std::string>() << "  " << v["check"].get<std::string>();
                    if (const auto &s = v["subject"].get_ref<const std::string &>(); !s.empty())
                        out << "  " << s;
                    if (v.contains("witness"))
                        out << "  " << v["witness"].dump();
                    out << "\n";
                }
                for (const auto &[key, value]: _details.items())
                    out << "  " << key << ": " << value.dump() << "\n";
                out << "  inputs_digest: " << to_hex(sha256(_inputs.bytes())) << "\n";
            }
        private:
            std::string _command;
            json _verdicts = json::array();
            json _details = json::object();
            canonical_writer _inputs {};
            bool _clean = true;
        };

        int finish(const report &r, const options &o, std::ostream &out)
        {
            r.print(out, o.format);
            return r.clean() ? exit_code::clean : exit_code::violation;
        }

        slot_range parse_slot_range(const std::string &text)
        {
            const auto colon = text.find(':');
            if (colon == std::string::npos)
                throw usage_error("slot range must look like FIRST:LAST");
            try {
                const slot_range r { slot { std::stoull(text.substr(0, colon)) }, slot { std::stoull(text.substr(colon + 1)) } };
                if (r.last < r.first)
                    throw usage_error("slot range " + text + " is empty");
                return r;
            } catch (const std::logic_error &) {
                throw usage_error("invalid slot range " + text);
            }
        }

        fs::path output_dir(const options &o)
        {
            if (!o.out.empty())
                return o.out;
            if (const char *env = std::getenv(out_env); env && *env)
                return env;
            return "out";
        }

        struct loaded_trace {
            std::string path;
            std::string text;
            trace_file file;
        };

        loaded_trace load_trace(const std::string &path)
        {
            auto text = read_text_file(path);
            try {
                auto f = trace_file_from_json(parse_json(text));
                return { path, std::move(text), std::move(f) };
            } catch (const parse_error &ex) {
                throw parse_error(path + ": " + ex.what());
            }
        }

        std::vector<std::string> sorted(std::vector<std::string> paths)
        {
            std::sort(paths.begin(), paths.end());
            return paths;
        }

        json check_witness(const trace_check &c)
        {
            json w { { "diagnostic", c.diagnostic }, { "detail", c.detail } };
            if (c.step)
                w["step"] = *c.step;
            return w;
        }

        json pair_witness(const pair_verdict &v)
        {
            if (v.clean())
                return nullptr;
            return { { "i", v.violation->first }, { "j", v.violation->second } };
        }

        json index_sets(const std::vector<std::set<std::size_t>> &sets)
        {
            json res = json::array();
            for (const auto &s: sets)
                res.push_back(s);
            return res;
        }

        std::string layered(const tx_poset &poset, const std::vector<std::size_t> &order)
        {
            std::string res = "(";
            for (std::size_t k = 0; k < order.size(); ++k) {
                if (k > 0)
                    res += poset.levels[order[k]] != poset.levels[order[k - 1]] ? " | " : ",";
                res += std::to_string(order[k]);
            }
            return res + ")";
        }

        int cmd_trace_gen(const options &o, std::ostream &out)
        {
            if (o.depth == 0)
                throw usage_error("--depth must be at least 1");
            if (o.universe == 0)
                throw usage_error("--universe must be at least 1");
            ledger_rules rules;
            if (o.rules == "nft-policy")
                rules = nft_policy(nft_token);
            else if (o.rules != "default")
                throw usage_error("--rules must be 'default' or 'nft-policy'");
            const auto range = parse_slot_range(o.slots);
            const auto ctx = genesis_context({ make_genesis_tx(o.universe, 1'000'000, o.seed) }, range, rules);
            generator_config config;
            config.nft = nft_token;
            const auto traces = generate_valid_traces(ctx, random_tx_generator(config), o.depth, o.count, o.seed);

            const auto dir = output_dir(o);
            fs::create_directories(dir);
            json files = json::array();
            for (std::size_t i = 0; i < traces.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "trace-%04zu.json", i);
                const auto text = dump(to_json(ctx, traces[i].run));
                write_text_file(dir / name, text);
                files.push_back({ { "name", name }, { "sha256", to_hex(sha256(as_bytes(text))) },
                    { "states", traces[i].run.size() + 1 }, { "exhausted", traces[i].exhausted } });
            }
            const json manifest {
                { "version", schema_version },
                { "kind", "manifest" },
                { "seed", o.seed },
                { "depth", o.depth },
                { "count", o.count },
                { "universe", o.universe },
                { "initial_slots", { { "first", range.first.value }, { "last", range.last.value } } },
                { "rules", rules.name },
                { "files", std::move(files) },
            };
            const auto text = dump(manifest);
            write_text_file(dir / "manifest.json", text);
            if (o.format == "json")
                out << text;
            else
                out << "wrote " << traces.size() << " traces and manifest.json to " << dir.string() << "\n";
            return exit_code::clean;
        }

        int cmd_trace_validate(const options &o, std::ostream &out)
        {
            report r { "trace validate" };
            for (const auto &path: sorted(o.files)) {
                const auto t = load_trace(path);
                r.input(t.text);
                const auto c = validate_trace_prefix(t.file.context, t.file.prefix, t.file.steps);
                r.verdict("valid-trace", path, c.ok, c.ok ? json(nullptr) : check_witness(c));
            }
            return finish(r, o, out);
        }

        int cmd_trace_dist(const options &o, std::ostream &out)
        {
            if (o.files.size() != 2)
                throw usage_error("trace dist needs exactly two trace files");
            report r { "trace dist" };
            const auto a = load_trace(o.files[0]), b = load_trace(o.files[1]);
            r.input(a.text);
            r.input(b.text);
            const auto d = ultra_dist(a.file.prefix, b.file.prefix);
            r.detail("distance", to_string(d));
            r.detail("exact", d.exact());
            r.detail("value", d.value());
            return finish(r, o, out);
        }

        int cmd_trace_monitor(const options &o, std::ostream &out)
        {
            std::vector<safety_monitor> monitors;
            if (o.monitor == "replay" || o.monitor == "all")
                monitors.push_back(replay_monitor());
            if (o.monitor == "trivial-update" || o.monitor == "all")
                monitors.push_back(trivial_update_monitor());
            if (monitors.empty())
                throw usage_error("--monitor must be replay, trivial-update or all");
            report r { "trace monitor" };
            r.input(o.monitor);
            for (const auto &path: sorted(o.files)) {
                const auto t = load_trace(path);
                r.input(t.text);
                for (const auto &m: monitors) {
                    const auto v = monitor_trace(m, t.file.prefix);
                    r.verdict(m.name, path, v.clean(), v.clean() ? json(nullptr) : json { { "violated_at", *v.violated_at } });
                }
            }
            return finish(r, o, out);
        }

        int cmd_props_check(const options &o, std::ostream &out)
        {
            const auto t = load_trace(o.run);
            report r { "props check" };
            r.input(t.text);
            const auto c = validate_trace_prefix(t.file.context, t.file.prefix, t.file.steps);
            r.verdict("valid-trace", o.run, c.ok, c.ok ? json(nullptr) : check_witness(c));
            const auto run = unchecked_run(t.file);
            const auto wf = check_well_founded(run.initial(), t.file.context.genesis);
            r.verdict("well-founded", o.run, wf.ok,
                wf.ok ? json(nullptr) : json { { "ref", to_string(*wf.witness) }, { "reason", wf.reason } });
            const auto replay = check_replay_protection(run);
            r.verdict("replay-protection", o.run, replay.clean(), pair_witness(replay));
            const auto trivial = check_trivial_update_protection(run);
            r.verdict("trivial-update-protection", o.run, trivial.clean(), pair_witness(trivial));
            const auto disjoint = check_disjointness(run);
            r.verdict("disjointness", o.run, disjoint.clean,
                disjoint.clean ? json(nullptr) : json { { "clause", disjoint.clause }, { "detail", disjoint.witness } });
            return finish(r, o, out);
        }

        int cmd_props_canon(const options &o, std::ostream &out)
        {
            const auto t = load_trace(o.run);
            report r { "props canon" };
            r.input(t.text);
            r.input(o.enumerate ? "enumerate:" + std::to_string(o.cap) : "");
            const auto c = validate_trace_prefix(t.file.context, t.file.prefix, t.file.steps);
            r.verdict("valid-trace", o.run, c.ok, c.ok ? json(nullptr) : check_witness(c));
            if (!c.ok)
                return finish(r, o, out);
            const auto run = unchecked_run(t.file);
            const auto poset = build_tx_poset(run);
            const auto canon = canonical_presentation(poset);
            r.detail("depends_on", index_sets(poset.depends_on));
            r.detail("hasse", index_sets(poset.hasse));
            r.detail("levels", poset.levels);
            r.detail("canonical", canon);
            r.detail("presentation", layered(poset, canon));
            if (o.enumerate) {
                const auto audit = audit_permutations(run, o.cap, t.file.context.rules);
                r.detail("permutations", audit.replay_valid);
                r.detail("truncated", audit.reachable.truncated);
                json discrepancies = json::array();
                for (const auto &[seq, why]: audit.discrepancies)
                    discrepancies.push_back({ { "order", seq }, { "diagnostic", why } });
                r.verdict("permutations-replay", o.run, audit.discrepancies.empty(),
                    audit.discrepancies.empty() ? json(nullptr) : std::move(discrepancies));
                r.verdict("permutations-commute", o.run, audit.finals_agree);
            }
            return finish(r, o, out);
        }

        int cmd_contract_list(const options &o, std::ostream &out)
        {
            report r { "contract list" };
            json contracts = json::array();
            for (const auto &h: contract_registry())
                contracts.push_back({ { "name", h.name }, { "description", h.description }, { "rules", h.rules.name } });
            r.detail("contracts", std::move(contracts));
            return finish(r, o, out);
        }

        int cmd_contract_check(const options &o, std::ostream &out)
        {
            const auto *h = find_contract(o.name);
            if (!h)
                throw usage_error("unknown contract '" + o.name + "'");
            if (o.files.empty())
                throw usage_error("contract check needs --traces");
            report r { "contract check" };
            r.input(o.name);
            r.input((o.induce ? "induce" : "") + std::string { o.nonexpanding ? ":nonexpanding:" : "" }
                + std::to_string(o.pairs) + ":" + std::to_string(o.seed));
            const auto paths = sorted(o.files);
            std::vector<annotated_run> runs;
            std::vector<std::string> subjects;
            for (const auto &path: paths) {
                const auto t = load_trace(path);
                r.input(t.text);
                const auto c = validate_trace_prefix(t.file.context, t.file.prefix, t.file.steps);
                if (!c.ok) {
                    r.verdict("valid-trace", path, false, check_witness(c));
                    continue;
                }
                runs.push_back(unchecked_run(t.file));
                subjects.push_back(path);
            }
            const auto rep = h->check(runs);
            for (std::size_t i = 0; i < runs.size(); ++i) {
                json failures = json::array();
                for (const auto &f: rep.failures) {
                    if (f.trace != i)
                        continue;
                    json w { { "diagnostic", f.diagnostic }, { "detail", f.detail } };
                    if (f.step)
                        w["step"] = *f.step;
                    failures.push_back(std::move(w));
                }
                const bool ok = failures.empty();
                r.verdict("step-correctness", subjects[i], ok, ok ? json(nullptr) : std::move(failures));
            }
            r.detail("steps_checked", rep.steps_checked);
            r.detail("steps_vacuous", rep.steps_vacuous);
            if (o.induce) {
                const auto dir = output_dir(o);
                fs::create_directories(dir);
                for (std::size_t i = 0; i < runs.size(); ++i) {
                    try {
                        const auto induced = h->induce(runs[i]);
                        json values = json::array();
                        for (const auto &v: induced.states)
                            values.push_back(printable(v));
                        const json doc { { "version", schema_version }, { "kind", "contract-trace" }, { "contract", h->name },
                            { "source", fs::path(subjects[i]).filename().string() }, { "values", std::move(values) },
                            { "trace", to_json(induced) } };
                        write_text_file(dir / (fs::path(subjects[i]).stem().string() + "." + h->name + ".json"), dump(doc));
                        r.verdict("induced-trace-valid", subjects[i], true);
                    } catch (const projection_error &ex) {
                        r.verdict("induced-trace-valid", subjects[i], false, ex.what());
                    }
                }
            }
            if (o.nonexpanding && !runs.empty()) {
                rng_type rng { o.seed };
                std::vector<trace_prefix> prefixes;
                for (const auto &run: runs)
                    prefixes.push_back(run.prefix());
                std::vector<std::pair<trace_prefix, trace_prefix>> sample;
                for (std::size_t k = 0; k < o.pairs; ++k) {
                    const auto &a = prefixes[draw(rng, prefixes.size())];
                    const auto &b = prefixes[draw(rng, prefixes.size())];
                    auto ha = a.head(1 + draw(rng, a.length())), hb = b.head(1 + draw(rng, b.length()));
                    ha.lift.clear();
                    hb.lift.clear();
                    sample.emplace_back(std::move(ha), std::move(hb));
                }
                const auto ne = check_non_expanding(h->state_hom(runs), sample);
                r.verdict("non-expanding", "", ne.clean(), ne.clean() ? json(nullptr) : json(ne.violations));
                r.detail("pairs_checked", ne.pairs_checked);
                r.detail("pairs_inconclusive", ne.pairs_inconclusive);
                r.detail("pairs_skipped", ne.pairs_skipped);
            }
            return finish(r, o, out);
        }

        std::string dot_graph(const simple_graph &g)
        {
            const auto quote = [](const vertex_id &v) { return "\"" + printable(v) + "\""; };
            std::string res = "digraph G {\n";
            for (const auto &v: g.vertices())
                res += "  " + quote(v) + (g.is_initial(v) ? " [shape=doublecircle];\n" : ";\n");
            for (const auto &e: g.edges())
                res += "  " + quote(e.from) + " -> " + quote(e.to) + ";\n";
            return res + "}\n";
        }

        int cmd_graph_dump(const options &o, std::ostream &out)
        {
            std::shared_ptr<const simple_graph> g;
            if (o.which == "lambda" || o.which == "lambda-prime") {
                if (o.run.empty())
                    throw usage_error("graph dump --which " + o.which + " needs --run");
                const auto t = load_trace(o.run);
                const auto &ctx = t.file.context;
                if (ctx.initial_slots.last.value - ctx.initial_slots.first.value >= 64)
                    throw usage_error("initial slot range too large to enumerate");
                std::set<slot> initial_slots, slot_universe;
                for (auto q = ctx.initial_slots.first.value; q <= ctx.initial_slots.last.value; ++q)
                    initial_slots.insert(slot { q });
                slot_universe = initial_slots;
                std::vector<tx> universe;
                for (const auto &[q, tx]: t.file.steps) {
                    slot_universe.insert(q);
                    if (std::find(universe.begin(), universe.end(), tx) == universe.end())
                        universe.push_back(tx);
                }
                const auto lambda = build_ledger_graph(ctx.initial_utxos, initial_slots, universe, slot_universe, ctx.rules);
                g = o.which == "lambda" ? lambda.graph : project_ledger_graph(lambda).graph;
            } else if (o.which == "gamma" || o.which == "gamma-prime") {
                const auto *h = find_contract(o.name.empty() ? "nft" : o.name);
                if (!h)
                    throw usage_error("unknown contract '" + o.name + "'");
                const auto graphs = h->graphs();
                g = o.which == "gamma" ? graphs.gamma : graphs.gamma_prime;
            } else {
                throw usage_error("--which must be lambda, lambda-prime, gamma or gamma-prime");
            }
            const auto text = o.format == "dot" ? dot_graph(*g) : dump(to_json(*g));
            if (!o.out.empty())
                write_text_file(o.out, text);
            else
                out << text;
            return exit_code::clean;
        }
    }

    int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err)
    {
        options o;
        CLI::App app { "Executable UTxO ledger semantics, trace properties and structured contracts", "utxolab" };
        app.require_subcommand(1);
        app.fallthrough();
        app.add_option("--format", o.format, "report format")->check(CLI::IsMember({ "json", "text", "dot" }));

        auto *trace = app.add_subcommand("trace", "generate and inspect ledger traces")->require_subcommand(1);
        auto *gen = trace->add_subcommand("gen", "write seeded valid traces and a manifest");
        gen->add_option("--seed", o.seed);
        gen->add_option("--depth", o.depth, "states per trace");
        gen->add_option("--count", o.count, "number of traces");
        gen->add_option("--universe", o.universe, "genesis outputs");
        gen->add_option("--slots", o.slots, "initial slot range FIRST:LAST");
        gen->add_option("--rules", o.rules, "default or nft-policy");
        gen->add_option("--out", o.out, "output directory");
        auto *validate = trace->add_subcommand("validate", "check trace files against the ledger rules");
        validate->add_option("files", o.files)->required();
        auto *dist = trace->add_subcommand("dist", "prefix distance between two traces");
        dist->add_option("files", o.files)->required();
        auto *monitor = trace->add_subcommand("monitor", "run safety monitors over traces");
        monitor->add_option("files", o.files)->required();
        monitor->add_option("--monitor", o.monitor, "replay, trivial-update or all");

        auto *props = app.add_subcommand("props", "ledger safety properties and canonical forms")->require_subcommand(1);
        auto *check = props->add_subcommand("check", "replay, trivial-update and disjointness checks");
        check->add_option("--run", o.run)->required();
        auto *canon = props->add_subcommand("canon", "dependency levels and canonical presentation");
        canon->add_option("--run", o.run)->required();
        canon->add_flag("--enumerate", o.enumerate, "list swap-reachable orders and replay them");
        canon->add_option("--cap", o.cap, "maximum number of orders");

        auto *contract = app.add_subcommand("contract", "structured contracts")->require_subcommand(1);
        auto *list = contract->add_subcommand("list", "registered contracts");
        auto *ccheck = contract->add_subcommand("check", "check a contract along traces");
        ccheck->add_option("--name", o.name)->required();
        ccheck->add_option("--traces", o.files)->required();
        ccheck->add_flag("--induce", o.induce, "write induced contract traces");
        ccheck->add_flag("--nonexpanding", o.nonexpanding, "sample trace pairs and check the induced map");
        ccheck->add_option("--count", o.pairs, "sampled pairs");
        ccheck->add_option("--seed", o.seed);
        ccheck->add_option("--out", o.out, "output directory for induced traces");

        auto *graph = app.add_subcommand("graph", "graph constructions")->require_subcommand(1);
        auto *gdump = graph->add_subcommand("dump", "dump a ledger or contract graph");
        gdump->add_option("--which", o.which, "lambda, lambda-prime, gamma or gamma-prime");
        gdump->add_option("--run", o.run, "trace file supplying the universe");
        gdump->add_option("--name", o.name, "contract name");
        gdump->add_option("--out", o.out, "output file");

        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError &e) {
            return app.exit(e, out, err) == 0 ? exit_code::clean : exit_code::usage;
        }
        try {
            if (gen->parsed())
                return cmd_trace_gen(o, out);
            if (validate->parsed())
                return cmd_trace_validate(o, out);
            if (dist->parsed())
                return cmd_trace_dist(o, out);
            if (monitor->parsed())
                return cmd_trace_monitor(o, out);
            if (check->parsed())
                return cmd_props_check(o, out);
            if (canon->parsed())
                return cmd_props_canon(o, out);
            if (list->parsed())
                return cmd_contract_list(o, out);
            if (ccheck->parsed())
                return cmd_contract_check(o, out);
            if (gdump->parsed())
                return cmd_graph_dump(o, out);
            err << app.help();
            return exit_code::usage;
        } catch (const usage_error &ex) {
            err << "usage error: " << ex.what() << "\n";
            return exit_code::usage;
        } catch (const parse_error &ex) {
            err << "parse error: " << ex.what() << "\n";
            return exit_code::usage;
        } catch (const projection_error &ex) {
            err << "projection error: " << ex.what() << "\n";
            return exit_code::violation;
        } catch (const invariant_error &ex) {
            err << "internal error: " << ex.what() << "\n";
            return exit_code::internal;
        } catch (const error &ex) {
            err << "error: " << ex.what() << "\n";
            return exit_code::usage;
        } catch (const fs::filesystem_error &ex) {
            err << "error: " << ex.what() << "\n";
            return exit_code::usage;
        } catch (const std::exception &ex) {
            err << "internal error: " << ex.what() << "\n";
            return exit_code::internal;
        }
    }
}
