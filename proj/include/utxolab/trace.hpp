#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>
#include <utxolab/graph.hpp>

// Finite heads of infinite execution traces and the prefix ultrametric on them.
namespace utxolab {
    struct lift_label {
        std::string environment;
        std::string input;

        bool operator==(const lift_label &) const = default;
    };

    // lift[k] labels the transition leaving states[k]. A prefix read from a trace carries
    // states.size() - 1 labels; a head cut from a longer trace keeps the outgoing label of
    // its last state, so it may carry states.size() labels.
    struct trace_prefix {
        std::vector<vertex_id> states {};
        std::vector<lift_label> lift {};
        // set when this prefix is the complete representation of a known trace object
        std::optional<std::string> identity {};

        std::size_t length() const { return states.size(); }
        bool has_lift() const { return !lift.empty(); }
        trace_prefix head(std::size_t n) const;
    };

    // Throws precondition_error when the prefix is empty or the lift length is inconsistent.
    void check_shape(const trace_prefix &p);

    // Either an exact value in {0} ∪ {2^-k}, or an upper bound 2^-n when the observed
    // prefixes agree on their shared length n.
    struct ultra_distance {
        enum class kind { zero, exact, bound };

        kind type = kind::zero;
        std::size_t exponent = 0;

        static ultra_distance zero() { return { kind::zero, 0 }; }
        static ultra_distance exact_power(const std::size_t k) { return { kind::exact, k }; }
        static ultra_distance upper_bound(const std::size_t n) { return { kind::bound, n }; }

        bool exact() const { return type != kind::bound; }
        double value() const;
        bool operator==(const ultra_distance &) const = default;
    };

    // Orders distances by their value (or bound); zero is the smallest.
    std::strong_ordering compare_magnitude(const ultra_distance &a, const ultra_distance &b);
    std::string to_string(const ultra_distance &d);

    ultra_distance ultra_dist(const trace_prefix &a, const trace_prefix &b);

    struct ultrametric_report {
        std::size_t triples_checked = 0;
        std::size_t triples_skipped = 0;
        std::vector<std::string> violations {};

        bool clean() const { return violations.empty(); }
    };

    // Symmetry, strong triangle inequality and the isosceles property over all triples.
    ultrametric_report check_ultrametric_axioms(std::span<const trace_prefix> samples);

    struct rational {
        std::uint64_t num = 1;
        std::uint64_t den = 1;
    };

    // parses "3/10", "0.3" or "1"
    rational parse_rational(std::string_view text);
    // ⌊-log2 r⌋ in exact arithmetic, clamped at 0 for r >= 1
    std::size_t grid_exponent(const rational &r);

    struct ball_result {
        std::vector<std::size_t> members {};
        std::vector<std::size_t> undecided {};
    };

    // Candidates sharing the ⌊-log2 r⌋-state head with the center.
    ball_result ball_members(const trace_prefix &center, const rational &radius, std::span<const trace_prefix> candidates);

    // Applies a vertex map state by state; nullopt if a state lies outside its domain.
    std::optional<trace_prefix> push_forward(const partial_sieve_hom &hom, const trace_prefix &p);

    struct non_expansion_report {
        std::size_t pairs_checked = 0;
        std::size_t pairs_inconclusive = 0;
        std::size_t pairs_skipped = 0;
        std::vector<std::string> violations {};

        bool clean() const { return violations.empty(); }
    };

    non_expansion_report check_non_expanding(const partial_sieve_hom &hom,
        std::span<const std::pair<trace_prefix, trace_prefix>> pairs);

    // A safety property given by a monotone bad-prefix predicate.
    struct safety_monitor {
        std::string name;
        std::function<bool(const trace_prefix &)> bad_prefix;
    };

    struct monitor_verdict {
        std::optional<std::size_t> violated_at {};

        bool clean() const { return !violated_at; }
    };

    monitor_verdict monitor_trace(const safety_monitor &m, const trace_prefix &p);
    // true iff no head of a sample is bad while a longer head of it is not
    bool verify_monotone(const safety_monitor &m, std::span<const trace_prefix> samples);

    safety_monitor replay_monitor();
    safety_monitor trivial_update_monitor();
    safety_monitor state_monitor(std::string name, vertex_id forbidden);

    struct lift_search {
        bool found = false;
        vertex_path witness {};

        explicit operator bool() const { return found; }
    };

    // Looks for a source path v0 -> ... -> vn from an initial vertex mapping onto the first n+1 target states.
    lift_search has_truncated_lift(const trace_prefix &target, const partial_sieve_hom &hom, std::size_t n);
    lift_search has_truncated_lift(const trace_prefix &target, const intensional_graph &source,
        const partial_sieve_hom &hom, std::size_t n);
}
