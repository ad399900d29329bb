#pragma once

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>
#include <utxolab/bytes.hpp>

// Simple directed graphs with initial vertices and partial sieve-defined homomorphisms between them.
namespace utxolab {
    // Opaque vertex identity; ledger-derived ids hold raw digest bytes.
    using vertex_id = std::string;
    using vertex_set = std::set<vertex_id>;
    using vertex_path = std::vector<vertex_id>;

    struct edge {
        vertex_id from;
        vertex_id to;

        auto operator<=>(const edge &) const = default;
    };

    // At most one edge per ordered pair; self-loops are allowed.
    class simple_graph {
    public:
        simple_graph() = default;
        simple_graph(vertex_set vertices, std::set<edge> edges, vertex_set initial = {});

        const vertex_set &vertices() const { return _vertices; }
        const std::set<edge> &edges() const { return _edges; }
        const vertex_set &initial() const { return _initial; }
        const vertex_set &successors(const vertex_id &v) const;

        bool has_vertex(const vertex_id &v) const { return _vertices.contains(v); }
        bool has_edge(const vertex_id &from, const vertex_id &to) const { return _edges.contains(edge { from, to }); }
        bool is_initial(const vertex_id &v) const { return _initial.contains(v); }

        bool operator==(const simple_graph &o) const
        {
            return _vertices == o._vertices && _edges == o._edges && _initial == o._initial;
        }
    private:
        vertex_set _vertices {};
        std::set<edge> _edges {};
        vertex_set _initial {};
        std::map<vertex_id, vertex_set> _succ {};
    };

    // The full subgraph on a vertex subset; initial vertices are restricted accordingly.
    simple_graph full_subgraph(const simple_graph &g, const vertex_set &subset);

    // A possibly infinite graph given by closures. Every successor must satisfy contains().
    struct intensional_graph {
        std::function<bool(const vertex_id &)> contains;
        std::function<std::vector<vertex_id>(const vertex_id &)> successors;
        std::function<bool(const vertex_id &)> is_initial;
        // nullopt when the initial vertices cannot be enumerated finitely
        std::optional<std::function<std::vector<vertex_id>()>> initial_vertices {};

        static intensional_graph of(std::shared_ptr<const simple_graph> g);
    };

    // A vertex map defined on a sieve of the source graph. The domain predicate is the
    // set of vertices where the map returns a value. Source and target are optional
    // anchors used for precondition checks.
    class partial_sieve_hom {
    public:
        using map_fn = std::function<std::optional<vertex_id>(const vertex_id &)>;

        explicit partial_sieve_hom(map_fn map, std::shared_ptr<const simple_graph> source = {},
            std::shared_ptr<const simple_graph> target = {});

        static partial_sieve_hom from_table(std::map<vertex_id, vertex_id> table,
            std::shared_ptr<const simple_graph> source = {}, std::shared_ptr<const simple_graph> target = {});
        static partial_sieve_hom identity(std::shared_ptr<const simple_graph> g);

        std::optional<vertex_id> operator()(const vertex_id &v) const { return _map(v); }
        bool in_domain(const vertex_id &v) const { return _map(v).has_value(); }
        // the domain restricted to the anchored source vertices
        vertex_set domain() const;

        const std::shared_ptr<const simple_graph> &source() const { return _source; }
        const std::shared_ptr<const simple_graph> &target() const { return _target; }
    private:
        map_fn _map;
        std::shared_ptr<const simple_graph> _source;
        std::shared_ptr<const simple_graph> _target;
    };

    // every edge leaving the subset stays inside it
    bool is_sieve(const simple_graph &g, const vertex_set &subset);
    vertex_set intersect_sieves(const simple_graph &g, const vertex_set &s1, const vertex_set &s2);

    struct hom_check {
        bool ok = true;
        std::string clause {};
        std::string witness {};

        explicit operator bool() const { return ok; }
    };

    hom_check check_hom(const simple_graph &source, const simple_graph &target, const partial_sieve_hom &hom);

    // g ∘ f with Def(g ∘ f) = Def f ∩ f⁻¹(Def g)
    partial_sieve_hom compose_homs(const partial_sieve_hom &f, const partial_sieve_hom &g);

    // All paths with `depth` vertices starting at an initial vertex.
    std::set<vertex_path> enumerate_paths(const simple_graph &g, std::size_t depth);
    std::set<vertex_path> enumerate_paths(const intensional_graph &g, std::size_t depth);

    // Printable form of a vertex id: kept verbatim when it is plain text, hex otherwise.
    std::string printable(const vertex_id &v);
}
