#include <utxolab/properties.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace utxolab {
    well_founded_check check_well_founded(const utxo_set &u0, std::span<const tx> genesis)
    {
        std::map<tx_hash, const tx *> by_hash;
        for (const auto &t: genesis)
            by_hash.emplace(t.hash(), &t);
        for (const auto &[ref, o]: u0) {
            const auto it = by_hash.find(ref.hash);
            if (it == by_hash.end())
                return { false, ref, "no known transaction produced this entry" };
            const auto &origin = *it->second;
            if (!origin.inputs().empty())
                return { false, ref, "producing transaction has inputs" };
            if (ref.index >= origin.outputs().size() || origin.outputs()[ref.index] != o)
                return { false, ref, "entry differs from the producing transaction's output" };
        }
        return {};
    }

    pair_verdict check_replay_protection(const annotated_run &run)
    {
        std::map<tx_hash, std::vector<std::size_t>> seen;
        const auto &steps = run.steps();
        for (std::size_t j = 0; j < steps.size(); ++j) {
            auto &earlier = seen[steps[j].input.hash()];
            for (const auto i: earlier) {
                if (steps[i].input == steps[j].input)
                    return { std::pair { i, j } };
            }
            earlier.push_back(j);
        }
        return {};
    }

    pair_verdict check_trivial_update_protection(const annotated_run &run)
    {
        std::map<digest32, std::vector<std::size_t>> seen;
        for (std::size_t j = 0; j <= run.size(); ++j) {
            auto &earlier = seen[state_digest(run.state(j))];
            for (const auto i: earlier) {
                if (run.state(i) == run.state(j))
                    return { std::pair { i, j } };
            }
            earlier.push_back(j);
        }
        return {};
    }

    static std::string set_name(const std::size_t owner)
    {
        return owner == 0 ? "u0" : "c" + std::to_string(owner - 1);
    }

    disjointness_verdict check_disjointness(const annotated_run &run)
    {
        // owners: 0 is u0, k + 1 is c_k
        std::map<output_ref, std::size_t> created_by;
        for (const auto &ref: run.initial().keys())
            created_by.emplace(ref, 0);
        for (std::size_t k = 0; k < run.size(); ++k) {
            for (const auto &ref: run.created(k)) {
                const auto [it, fresh] = created_by.emplace(ref, k + 1);
                if (!fresh)
                    return { false, "created-sets-overlap", set_name(it->second) + " and " + set_name(k + 1) + " share " + to_string(ref) };
            }
        }
        std::map<output_ref, std::size_t> consumed_by;
        for (std::size_t k = 0; k < run.size(); ++k) {
            for (const auto &ref: run.consumed(k)) {
                const auto [it, fresh] = consumed_by.emplace(ref, k);
                if (!fresh)
                    return { false, "consumed-sets-overlap", "r" + std::to_string(it->second) + " and r" + std::to_string(k) + " share " + to_string(ref) };
            }
        }
        for (std::size_t k = 0; k < run.size(); ++k) {
            const auto &u = run.state(k);
            const auto r = run.consumed(k);
            for (const auto &ref: r) {
                if (!u.contains(ref))
                    return { false, "consumed-not-in-state", "r" + std::to_string(k) + " contains " + to_string(ref) };
            }
            for (const auto &ref: run.created(k)) {
                if (u.contains(ref) && !r.contains(ref))
                    return { false, "created-meets-survivors", "c" + std::to_string(k) + " contains live " + to_string(ref) };
            }
        }
        return {};
    }

    static std::vector<tx_hash> sorted_hashes(const annotated_run &run)
    {
        std::vector<tx_hash> res;
        for (const auto &s: run.steps())
            res.push_back(s.input.hash());
        std::sort(res.begin(), res.end());
        return res;
    }

    bool check_commutativity(const annotated_run &a, const annotated_run &b)
    {
        if (a.initial() != b.initial())
            throw precondition_error("commutativity check needs runs from the same initial state");
        if (sorted_hashes(a) != sorted_hashes(b))
            throw precondition_error("commutativity check needs runs over the same transactions");
        return a.final_state() == b.final_state();
    }

    bool tx_poset::comparable(const std::size_t i, const std::size_t j) const
    {
        return closure.at(i).contains(j) || closure.at(j).contains(i);
    }

    tx_poset build_tx_poset(std::span<const std::set<output_ref>> consumed, std::span<const std::set<output_ref>> created)
    {
        if (consumed.size() != created.size())
            throw precondition_error("consumed and created sets must have the same count");
        const auto n = consumed.size();
        tx_poset p;
        p.depends_on.resize(n);
        std::map<output_ref, std::size_t> creator;
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto &ref: created[j])
                creator.emplace(ref, j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto &ref: consumed[i]) {
                if (const auto it = creator.find(ref); it != creator.end())
                    p.depends_on[i].emplace(it->second);
            }
        }
        p.closure.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::deque<std::size_t> todo(p.depends_on[i].begin(), p.depends_on[i].end());
            while (!todo.empty()) {
                const auto j = todo.front();
                todo.pop_front();
                if (!p.closure[i].emplace(j).second)
                    continue;
                todo.insert(todo.end(), p.depends_on[j].begin(), p.depends_on[j].end());
            }
            if (p.closure[i].contains(i))
                throw invariant_error("transaction " + std::to_string(i) + " depends on itself");
        }
        p.hasse.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto j: p.closure[i]) {
                const bool covered = std::none_of(p.closure[i].begin(), p.closure[i].end(),
                    [&](const std::size_t k) { return k != j && p.closure[k].contains(j); });
                if (covered)
                    p.hasse[i].emplace(j);
            }
        }
        // longest Hasse path down to a level-0 index; closure sizes give a topological order
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](const auto a, const auto b) {
            return p.closure[a].size() < p.closure[b].size();
        });
        p.levels.assign(n, 0);
        for (const auto i: order) {
            for (const auto j: p.hasse[i])
                p.levels[i] = std::max(p.levels[i], p.levels[j] + 1);
        }
        return p;
    }

    tx_poset build_tx_poset(const annotated_run &run)
    {
        std::vector<std::set<output_ref>> consumed, created;
        for (std::size_t i = 0; i < run.size(); ++i) {
            consumed.push_back(run.consumed(i));
            created.push_back(run.created(i));
        }
        return build_tx_poset(consumed, created);
    }

    std::vector<std::size_t> canonical_presentation(const tx_poset &poset)
    {
        std::vector<std::size_t> res(poset.size());
        std::iota(res.begin(), res.end(), 0);
        std::stable_sort(res.begin(), res.end(), [&](const auto a, const auto b) {
            return poset.levels[a] < poset.levels[b];
        });
        return res;
    }

    permutation_set enumerate_valid_permutations(const tx_poset &poset, const std::size_t cap)
    {
        permutation_set res;
        std::set<std::vector<std::size_t>> seen;
        std::deque<std::vector<std::size_t>> frontier;
        const auto visit = [&](std::vector<std::size_t> seq) {
            if (seen.contains(seq))
                return;
            if (seen.size() >= cap) {
                res.truncated = true;
                return;
            }
            seen.emplace(seq);
            frontier.push_back(std::move(seq));
        };
        visit(canonical_presentation(poset));
        while (!frontier.empty() && !res.truncated) {
            auto seq = std::move(frontier.front());
            frontier.pop_front();
            for (std::size_t p = 0; p + 1 < seq.size(); ++p) {
                if (poset.comparable(seq[p], seq[p + 1]))
                    continue;
                auto next = seq;
                std::swap(next[p], next[p + 1]);
                visit(std::move(next));
            }
        }
        res.sequences.assign(seen.begin(), seen.end());
        return res;
    }

    replay_result replay_sequence(const utxo_set &u0, std::span<const slot> slots, std::span<const tx> txs,
        const ledger_rules &rules)
    {
        if (slots.size() != txs.size())
            throw precondition_error("replay needs one slot per transaction");
        if (!std::is_sorted(slots.begin(), slots.end()))
            throw precondition_error("replay slots must be non-decreasing");
        std::vector<ledger_step> steps;
        steps.reserve(txs.size());
        utxo_set current = u0;
        for (std::size_t k = 0; k < txs.size(); ++k) {
            try {
                auto res = step_ledger(slots[k], current, txs[k], rules);
                if (!res.ok())
                    return { std::nullopt, k, std::string { res.check.diagnostic() } };
                current = res.step->to;
                steps.push_back(std::move(*res.step));
            } catch (const key_collision_error &) {
                return { std::nullopt, k, "key-collision" };
            }
        }
        return { annotated_run { u0, std::move(steps) } };
    }

    std::optional<std::vector<slot>> assign_slots(std::span<const tx> txs, const slot floor)
    {
        std::vector<slot> res;
        if (txs.empty())
            return res;
        slot lo = floor, hi { UINT64_MAX };
        for (const auto &t: txs) {
            lo = std::max(lo, t.validity().start);
            hi = std::min(hi, t.validity().end);
        }
        if (lo < hi)
            return std::vector<slot>(txs.size(), lo);
        slot current = floor;
        for (const auto &t: txs) {
            current = std::max(current, t.validity().start);
            if (!(current < t.validity().end))
                return std::nullopt;
            res.push_back(current);
        }
        return res;
    }

    replay_result replay_permutation(const annotated_run &run, std::span<const std::size_t> order,
        const ledger_rules &rules)
    {
        std::vector<std::size_t> sorted(order.begin(), order.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted.size() != run.size() || sorted[i] != i)
                throw precondition_error("order is not a permutation of the run's transactions");
        }
        if (sorted.size() != run.size())
            throw precondition_error("order is not a permutation of the run's transactions");
        std::vector<tx> txs;
        txs.reserve(order.size());
        for (const auto i: order)
            txs.push_back(run.steps()[i].input);
        const slot floor = run.size() > 0 ? run.steps().front().env : slot {};
        const auto slots = assign_slots(txs, floor);
        if (!slots)
            return { std::nullopt, 0, "no-slot-assignment" };
        return replay_sequence(run.initial(), *slots, txs, rules);
    }

    permutation_audit audit_permutations(const annotated_run &run, const std::size_t cap, const ledger_rules &rules)
    {
        permutation_audit audit;
        audit.reachable = enumerate_valid_permutations(build_tx_poset(run), cap);
        for (const auto &seq: audit.reachable.sequences) {
            auto replay = replay_permutation(run, seq, rules);
            if (!replay.ok()) {
                audit.discrepancies.emplace_back(seq, replay.diagnostic + " at position " + std::to_string(replay.failed_index));
                continue;
            }
            if (replay.run->final_state() != run.final_state())
                audit.finals_agree = false;
            audit.replay_valid.push_back(seq);
        }
        return audit;
    }
}
