#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>
#include <utxolab/ledger_graph.hpp>
#include <utxolab/ledger_trace.hpp>

// Structured contracts (spec, π, κ): a contract state machine, a partial projection of
// ledger states onto contract states and a total projection of transactions onto inputs.
namespace utxolab {
    struct projection_error: error {
        using error::error;
    };

    // Deterministic contract steps over a fixed singleton environment.
    template <typename S, typename I>
    struct contract_spec {
        std::function<std::optional<S>(const S &, const I &)> step;
        std::function<bool(const S &)> is_initial;
    };

    template <typename S, typename I>
    struct structured_contract {
        std::string name;
        contract_spec<S, I> spec;
        // nullopt outside Def π
        std::function<std::optional<S>(const utxo_set &)> pi;
        std::function<I(const tx &)> kappa;
        // stable ids of states and inputs, used for graph vertices and serialized contract traces
        std::function<std::string(const S &)> state_id;
        std::function<std::string(const I &)> input_name;
    };

    enum class step_verdict {
        holds,
        vacuous,
        to_state_unprojectable,
        contract_step_mismatch
    };

    std::string_view diagnostic_name(step_verdict v);

    struct step_correctness {
        step_verdict verdict = step_verdict::holds;
        std::string detail {};

        bool ok() const { return verdict == step_verdict::holds || verdict == step_verdict::vacuous; }
        std::string_view diagnostic() const { return diagnostic_name(verdict); }
    };

    template <typename S, typename I>
    step_correctness check_step_correctness(const structured_contract<S, I> &sc, const ledger_step &st)
    {
        const auto from = sc.pi(st.from);
        if (!from)
            return { step_verdict::vacuous, "from-state outside the projection domain" };
        const auto to = sc.pi(st.to);
        if (!to)
            return { step_verdict::to_state_unprojectable, "to-state outside the projection domain" };
        const auto input = sc.kappa(st.input);
        const auto expected = sc.spec.step(*from, input);
        if (!expected)
            return { step_verdict::contract_step_mismatch, "contract rejects input " + sc.input_name(input)
                + " in state " + sc.state_id(*from) };
        if (sc.state_id(*expected) != sc.state_id(*to))
            return { step_verdict::contract_step_mismatch, "contract moves " + sc.state_id(*from) + " to "
                + sc.state_id(*expected) + " but the ledger state projects to " + sc.state_id(*to) };
        return {};
    }

    struct contract_failure {
        std::size_t trace = 0;
        // step index; nullopt for failures about the initial state
        std::optional<std::size_t> step {};
        std::string diagnostic;
        std::string detail {};
    };

    struct contract_report {
        std::size_t traces_checked = 0;
        std::size_t steps_checked = 0;
        std::size_t steps_vacuous = 0;
        std::vector<contract_failure> failures {};

        bool clean() const { return failures.empty(); }
    };

    // Step correctness along every run, plus the initial-state conditions and the pointwise
    // commuting square σ′ ∘ φ = ψ ∘ σ with σ landing on contract-graph vertices and edges.
    template <typename S, typename I>
    contract_report check_contract_on_traces(const structured_contract<S, I> &sc, std::span<const annotated_run> runs)
    {
        contract_report rep;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const auto &run = runs[r];
            ++rep.traces_checked;
            const auto fail = [&](std::optional<std::size_t> k, std::string diag, std::string detail) {
                rep.failures.push_back({ r, k, std::move(diag), std::move(detail) });
            };
            if (const auto s0 = sc.pi(run.initial()); !s0)
                fail(std::nullopt, "initial-state-unprojectable", "u0 outside the projection domain");
            else if (!sc.spec.is_initial(*s0))
                fail(std::nullopt, "initial-state-not-initial", "u0 projects to " + sc.state_id(*s0));
            for (std::size_t k = 0; k < run.size(); ++k) {
                const auto &st = run.steps()[k];
                ++rep.steps_checked;
                const auto c = check_step_correctness(sc, st);
                if (c.verdict == step_verdict::vacuous)
                    ++rep.steps_vacuous;
                if (!c.ok()) {
                    fail(k, std::string { c.diagnostic() }, c.detail);
                    continue;
                }
                const auto s = sc.pi(st.from);
                if (!s)
                    continue;
                // σ(q,u,t) = (π u, κ t) must be a vertex of Γ, and ψ(σ v) = π u = σ′(φ v)
                const auto i = sc.kappa(st.input);
                const auto next = sc.spec.step(*s, i);
                if (!next) {
                    fail(k, "sigma-outside-gamma", "no contract step from " + sc.state_id(*s) + " on " + sc.input_name(i));
                    continue;
                }
                const auto via_phi = sc.pi(st.from);
                if (!via_phi || sc.state_id(*via_phi) != sc.state_id(*s))
                    fail(k, "square-not-commuting", "projections disagree on step " + std::to_string(k));
                // σ preserves the edge to the next ledger vertex
                if (k + 1 < run.size()) {
                    const auto s_next = sc.pi(run.steps()[k + 1].from);
                    if (!s_next || sc.state_id(*s_next) != sc.state_id(*next))
                        fail(k, "sigma-edge-not-preserved", "no contract edge into the image of step " + std::to_string(k + 1));
                }
            }
        }
        return rep;
    }

    template <typename S, typename I>
    struct induced_trace {
        std::vector<S> states {};
        std::vector<I> inputs {};
        trace_prefix prefix {};
    };

    // The pointwise image of a run under π, with lift labels mapped through κ.
    template <typename S, typename I>
    induced_trace<S, I> induce_trace_map(const structured_contract<S, I> &sc, const annotated_run &run)
    {
        induced_trace<S, I> res;
        for (std::size_t k = 0; k <= run.size(); ++k) {
            auto s = sc.pi(run.state(k));
            if (!s)
                throw projection_error("state " + std::to_string(k) + " lies outside the projection domain of " + sc.name);
            res.prefix.states.push_back(sc.state_id(*s));
            res.states.push_back(std::move(*s));
        }
        for (const auto &st: run.steps()) {
            auto i = sc.kappa(st.input);
            res.prefix.lift.push_back({ "*", sc.input_name(i) });
            res.inputs.push_back(std::move(i));
        }
        return res;
    }

    template <typename S, typename I>
    bool validate_contract_trace(const structured_contract<S, I> &sc, const induced_trace<S, I> &trace)
    {
        if (trace.states.empty() || trace.inputs.size() + 1 != trace.states.size() || !sc.spec.is_initial(trace.states[0]))
            return false;
        for (std::size_t k = 0; k < trace.inputs.size(); ++k) {
            const auto next = sc.spec.step(trace.states[k], trace.inputs[k]);
            if (!next || sc.state_id(*next) != sc.state_id(trace.states[k + 1]))
                return false;
        }
        return true;
    }

    // vertex id of the pair (s, i) in Γ
    std::string contract_pair_id(std::string_view state, std::string_view input);

    struct contract_graphs {
        std::shared_ptr<const simple_graph> gamma;
        std::shared_ptr<const simple_graph> gamma_prime;
        partial_sieve_hom psi;
    };

    // Γ over pairs (s, i) with step(s, i) defined, Γ′ its state projection and ψ(s, i) = s.
    template <typename S, typename I>
    contract_graphs build_contract_graphs(const structured_contract<S, I> &sc, std::span<const S> states,
        std::span<const I> inputs)
    {
        struct pair_info {
            std::string state;
            std::string next;
        };
        std::map<vertex_id, pair_info> pairs;
        vertex_set w, w_initial, w_prime, w_prime_initial;
        for (const auto &s: states) {
            for (const auto &i: inputs) {
                const auto next = sc.spec.step(s, i);
                if (!next)
                    continue;
                auto id = contract_pair_id(sc.state_id(s), sc.input_name(i));
                pairs.emplace(id, pair_info { sc.state_id(s), sc.state_id(*next) });
                w.emplace(id);
                w_prime.emplace(sc.state_id(s));
                if (sc.spec.is_initial(s)) {
                    w_initial.emplace(id);
                    w_prime_initial.emplace(sc.state_id(s));
                }
            }
        }
        std::set<edge> f, f_prime;
        for (const auto &[from, info]: pairs) {
            for (const auto &[to, to_info]: pairs) {
                if (to_info.state == info.next)
                    f.insert({ from, to });
            }
            if (w_prime.contains(info.next))
                f_prime.insert({ info.state, info.next });
        }
        auto gamma = std::make_shared<const simple_graph>(std::move(w), std::move(f), std::move(w_initial));
        auto gamma_prime = std::make_shared<const simple_graph>(std::move(w_prime), std::move(f_prime), std::move(w_prime_initial));
        std::map<vertex_id, vertex_id> table;
        for (const auto &[id, info]: pairs)
            table.emplace(id, info.state);
        auto psi = partial_sieve_hom::from_table(std::move(table), gamma, gamma_prime);
        return { std::move(gamma), std::move(gamma_prime), std::move(psi) };
    }

    struct square_homs {
        partial_sieve_hom sigma;
        partial_sieve_hom sigma_prime;
    };

    // σ(q,u,t) = (π u, κ t) on Λ and σ′(u) = π u on Λ′, defined where π is.
    template <typename S, typename I>
    square_homs build_square_homs(const structured_contract<S, I> &sc, const ledger_graph &lambda,
        const ledger_projection &lambda_prime, const contract_graphs &graphs)
    {
        std::map<vertex_id, vertex_id> sigma, sigma_prime;
        for (const auto &[id, v]: lambda.vertices) {
            if (const auto s = sc.pi(v.u))
                sigma.emplace(id, contract_pair_id(sc.state_id(*s), sc.input_name(sc.kappa(v.t))));
        }
        for (const auto &[id, u]: lambda_prime.states) {
            if (const auto s = sc.pi(u))
                sigma_prime.emplace(id, sc.state_id(*s));
        }
        return { partial_sieve_hom::from_table(std::move(sigma), lambda.graph, graphs.gamma),
            partial_sieve_hom::from_table(std::move(sigma_prime), lambda_prime.graph, graphs.gamma_prime) };
    }

    // Maps ledger state ids of the given runs to contract state ids.
    template <typename S, typename I>
    partial_sieve_hom contract_state_hom(const structured_contract<S, I> &sc, std::span<const annotated_run> runs)
    {
        std::map<vertex_id, vertex_id> table;
        for (const auto &run: runs) {
            for (std::size_t k = 0; k <= run.size(); ++k) {
                const auto &u = run.state(k);
                if (const auto s = sc.pi(u))
                    table.emplace(utxo_vertex_id(u), sc.state_id(*s));
            }
        }
        return partial_sieve_hom::from_table(std::move(table));
    }

    // Type-erased contract instance for the command line.
    struct contract_handle {
        std::string name;
        std::string description;
        // ledger rules under which the contract is a structured contract
        ledger_rules rules;
        std::function<contract_report(std::span<const annotated_run>)> check;
        // contract traces; throws projection_error
        std::function<trace_prefix(const annotated_run &)> induce;
        std::function<partial_sieve_hom(std::span<const annotated_run>)> state_hom;
        std::function<contract_graphs()> graphs;
    };

    template <typename S, typename I>
    contract_handle erase_contract(structured_contract<S, I> sc, std::string description, ledger_rules rules,
        std::vector<S> states, std::vector<I> inputs)
    {
        auto shared = std::make_shared<const structured_contract<S, I>>(std::move(sc));
        contract_handle h;
        h.name = shared->name;
        h.description = std::move(description);
        h.rules = std::move(rules);
        h.check = [shared](std::span<const annotated_run> runs) { return check_contract_on_traces(*shared, runs); };
        h.induce = [shared](const annotated_run &run) {
            const auto induced = induce_trace_map(*shared, run);
            if (!validate_contract_trace(*shared, induced))
                throw projection_error("induced trace is not a valid " + shared->name + " trace");
            return induced.prefix;
        };
        h.state_hom = [shared](std::span<const annotated_run> runs) { return contract_state_hom(*shared, runs); };
        h.graphs = [shared, states = std::move(states), inputs = std::move(inputs)] {
            return build_contract_graphs<S, I>(*shared, states, inputs);
        };
        return h;
    }

    enum class nft_input {
        mint,
        burn,
        noop
    };

    std::string_view to_string(nft_input i);

    using nft_contract = structured_contract<std::uint64_t, nft_input>;

    // total quantity of `token` over all outputs
    std::uint64_t token_supply(const utxo_set &u, const token_id &token);
    // outputs minus spent inputs, in units of `token`
    std::int64_t token_delta(const tx &t, const token_id &token);

    // π(u) = total supply of the token, κ(t) classifies its delta; supply may not exceed one.
    nft_contract make_nft_contract(const token_id &token);
    // Minting policy: the delta is in {-1, 0, 1} and the supply after the step is at most one.
    ledger_rules nft_policy(const token_id &token);

    std::vector<contract_handle> contract_registry();
    // nullptr for unknown names
    const contract_handle *find_contract(std::string_view name);
}
