#include <utxolab/graph.hpp>

#include <algorithm>
#include <cctype>

namespace utxolab {
    simple_graph::simple_graph(vertex_set vertices, std::set<edge> edges, vertex_set initial):
        _vertices { std::move(vertices) }, _edges { std::move(edges) }, _initial { std::move(initial) }
    {
        for (const auto &e: _edges) {
            if (!_vertices.contains(e.from) || !_vertices.contains(e.to))
                throw precondition_error("edge endpoint is not a vertex: " + printable(e.from) + " -> " + printable(e.to));
            _succ[e.from].emplace(e.to);
        }
        for (const auto &v: _initial) {
            if (!_vertices.contains(v))
                throw precondition_error("initial vertex is not a vertex: " + printable(v));
        }
    }

    const vertex_set &simple_graph::successors(const vertex_id &v) const
    {
        static const vertex_set none {};
        const auto it = _succ.find(v);
        return it == _succ.end() ? none : it->second;
    }

    simple_graph full_subgraph(const simple_graph &g, const vertex_set &subset)
    {
        vertex_set vertices, initial;
        for (const auto &v: subset) {
            if (!g.has_vertex(v))
                throw precondition_error("subset vertex not in graph: " + printable(v));
            vertices.emplace(v);
            if (g.is_initial(v))
                initial.emplace(v);
        }
        std::set<edge> edges;
        for (const auto &e: g.edges()) {
            if (subset.contains(e.from) && subset.contains(e.to))
                edges.emplace(e);
        }
        return { std::move(vertices), std::move(edges), std::move(initial) };
    }

    intensional_graph intensional_graph::of(std::shared_ptr<const simple_graph> g)
    {
        intensional_graph res;
        res.contains = [g](const vertex_id &v) { return g->has_vertex(v); };
        res.successors = [g](const vertex_id &v) {
            const auto &succ = g->successors(v);
            return std::vector<vertex_id>(succ.begin(), succ.end());
        };
        res.is_initial = [g](const vertex_id &v) { return g->is_initial(v); };
        res.initial_vertices = [g] { return std::vector<vertex_id>(g->initial().begin(), g->initial().end()); };
        return res;
    }

    partial_sieve_hom::partial_sieve_hom(map_fn map, std::shared_ptr<const simple_graph> source,
            std::shared_ptr<const simple_graph> target):
        _map { std::move(map) }, _source { std::move(source) }, _target { std::move(target) }
    {
        if (!_map)
            throw precondition_error("a homomorphism requires a vertex map");
    }

    partial_sieve_hom partial_sieve_hom::from_table(std::map<vertex_id, vertex_id> table,
        std::shared_ptr<const simple_graph> source, std::shared_ptr<const simple_graph> target)
    {
        auto shared = std::make_shared<const std::map<vertex_id, vertex_id>>(std::move(table));
        return partial_sieve_hom {
            [shared](const vertex_id &v) -> std::optional<vertex_id> {
                const auto it = shared->find(v);
                if (it == shared->end())
                    return std::nullopt;
                return it->second;
            },
            std::move(source), std::move(target)
        };
    }

    partial_sieve_hom partial_sieve_hom::identity(std::shared_ptr<const simple_graph> g)
    {
        return partial_sieve_hom {
            [g](const vertex_id &v) -> std::optional<vertex_id> {
                if (!g->has_vertex(v))
                    return std::nullopt;
                return v;
            },
            g, g
        };
    }

    vertex_set partial_sieve_hom::domain() const
    {
        if (!_source)
            throw unsupported_error("the domain of an unanchored homomorphism cannot be enumerated");
        vertex_set res;
        for (const auto &v: _source->vertices()) {
            if (in_domain(v))
                res.emplace_hint(res.end(), v);
        }
        return res;
    }

    static const edge *escaping_edge(const simple_graph &g, const vertex_set &subset)
    {
        for (const auto &e: g.edges()) {
            if (subset.contains(e.from) && !subset.contains(e.to))
                return &e;
        }
        return nullptr;
    }

    bool is_sieve(const simple_graph &g, const vertex_set &subset)
    {
        for (const auto &v: subset) {
            if (!g.has_vertex(v))
                throw precondition_error("subset vertex not in graph: " + printable(v));
        }
        return escaping_edge(g, subset) == nullptr;
    }

    vertex_set intersect_sieves(const simple_graph &g, const vertex_set &s1, const vertex_set &s2)
    {
        if (!is_sieve(g, s1) || !is_sieve(g, s2))
            throw precondition_error("intersect_sieves requires both arguments to be sieves");
        vertex_set res;
        std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::inserter(res, res.end()));
        return res;
    }

    static std::string edge_text(const vertex_id &from, const vertex_id &to)
    {
        return printable(from) + " -> " + printable(to);
    }

    hom_check check_hom(const simple_graph &source, const simple_graph &target, const partial_sieve_hom &hom)
    {
        vertex_set domain;
        for (const auto &v: source.vertices()) {
            const auto image = hom(v);
            if (!image)
                continue;
            if (!target.has_vertex(*image))
                return { false, "image-outside-target", printable(v) + " |-> " + printable(*image) };
            domain.emplace(v);
        }
        for (const auto &v: source.initial()) {
            if (!domain.contains(v))
                return { false, "initial-outside-domain", printable(v) };
            if (!target.is_initial(*hom(v)))
                return { false, "initial-not-preserved", printable(v) + " |-> " + printable(*hom(v)) };
        }
        if (const auto *e = escaping_edge(source, domain))
            return { false, "not-a-sieve", edge_text(e->from, e->to) };
        for (const auto &e: source.edges()) {
            if (!domain.contains(e.from))
                continue;
            const auto from = *hom(e.from), to = *hom(e.to);
            if (!target.has_edge(from, to))
                return { false, "edge-not-preserved", edge_text(e.from, e.to) + " maps to missing " + edge_text(from, to) };
        }
        return {};
    }

    partial_sieve_hom compose_homs(const partial_sieve_hom &f, const partial_sieve_hom &g)
    {
        if (f.target() && g.source() && f.target() != g.source() && !(*f.target() == *g.source()))
            throw precondition_error("compose_homs: target of f differs from source of g");
        return partial_sieve_hom {
            [f, g](const vertex_id &v) -> std::optional<vertex_id> {
                const auto mid = f(v);
                if (!mid)
                    return std::nullopt;
                return g(*mid);
            },
            f.source(), g.target()
        };
    }

    template<typename Succ>
    static void extend_paths(vertex_path &current, const std::size_t depth, const Succ &successors,
        std::set<vertex_path> &out)
    {
        if (current.size() == depth) {
            out.emplace(current);
            return;
        }
        for (const auto &next: successors(current.back())) {
            current.push_back(next);
            extend_paths(current, depth, successors, out);
            current.pop_back();
        }
    }

    std::set<vertex_path> enumerate_paths(const simple_graph &g, const std::size_t depth)
    {
        if (depth == 0)
            throw precondition_error("path depth must be at least 1");
        std::set<vertex_path> res;
        const auto succ = [&](const vertex_id &v) -> const vertex_set & { return g.successors(v); };
        for (const auto &v: g.initial()) {
            vertex_path current { v };
            extend_paths(current, depth, succ, res);
        }
        return res;
    }

    std::set<vertex_path> enumerate_paths(const intensional_graph &g, const std::size_t depth)
    {
        if (depth == 0)
            throw precondition_error("path depth must be at least 1");
        if (!g.initial_vertices)
            throw unsupported_error("initial vertices of this graph are not finitely enumerable");
        std::set<vertex_path> res;
        for (const auto &v: (*g.initial_vertices)()) {
            if (!g.contains(v) || !g.is_initial(v))
                throw invariant_error("enumerated initial vertex is not an initial vertex: " + printable(v));
            vertex_path current { v };
            extend_paths(current, depth, g.successors, res);
        }
        return res;
    }

    std::string printable(const vertex_id &v)
    {
        const bool plain = !v.empty() && std::all_of(v.begin(), v.end(), [](const unsigned char c) {
            return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || c == '|';
        });
        return plain ? v : to_hex(as_bytes(v));
    }
}
