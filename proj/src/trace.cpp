#include <utxolab/trace.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>

namespace utxolab {
    trace_prefix trace_prefix::head(const std::size_t n) const
    {
        if (n >= states.size())
            return *this;
        trace_prefix res;
        res.states.assign(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(n));
        res.lift.assign(lift.begin(), lift.begin() + static_cast<std::ptrdiff_t>(std::min(n, lift.size())));
        return res;
    }

    void check_shape(const trace_prefix &p)
    {
        if (p.states.empty())
            throw precondition_error("a trace prefix needs at least one state");
        if (p.has_lift() && p.lift.size() != p.states.size() - 1 && p.lift.size() != p.states.size())
            throw precondition_error("lift has " + std::to_string(p.lift.size()) + " labels for "
                + std::to_string(p.states.size()) + " states");
    }

    double ultra_distance::value() const
    {
        return type == kind::zero ? 0.0 : std::ldexp(1.0, -static_cast<int>(exponent));
    }

    std::strong_ordering compare_magnitude(const ultra_distance &a, const ultra_distance &b)
    {
        const bool az = a.type == ultra_distance::kind::zero, bz = b.type == ultra_distance::kind::zero;
        if (az || bz)
            return bz <=> az;
        // larger exponent means a smaller value
        return b.exponent <=> a.exponent;
    }

    std::string to_string(const ultra_distance &d)
    {
        switch (d.type) {
            case ultra_distance::kind::zero: return "0";
            case ultra_distance::kind::exact: return "2^-" + std::to_string(d.exponent);
            case ultra_distance::kind::bound: return "<=2^-" + std::to_string(d.exponent);
        }
        return "?";
    }

    ultra_distance ultra_dist(const trace_prefix &a, const trace_prefix &b)
    {
        const auto n = std::min(a.length(), b.length());
        for (std::size_t k = 0; k < n; ++k) {
            if (a.states[k] != b.states[k])
                return ultra_distance::exact_power(k);
        }
        if (a.identity && b.identity && *a.identity == *b.identity && a.states == b.states)
            return ultra_distance::zero();
        return ultra_distance::upper_bound(n);
    }

    ultrametric_report check_ultrametric_axioms(std::span<const trace_prefix> samples)
    {
        ultrametric_report rep;
        const auto n = samples.size();
        std::vector<std::vector<ultra_distance>> d(n, std::vector<ultra_distance>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                d[i][j] = ultra_dist(samples[i], samples[j]);
                if (j < i && d[i][j] != d[j][i])
                    rep.violations.emplace_back("asymmetric distance between samples " + std::to_string(j)
                        + " and " + std::to_string(i));
            }
        }
        const auto le = [](const auto &a, const auto &b) { return compare_magnitude(a, b) <= 0; };
        const auto max_of = [&](const auto &a, const auto &b) { return le(a, b) ? b : a; };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t k = j + 1; k < n; ++k) {
                    const auto &xy = d[i][j], &yz = d[j][k], &xz = d[i][k];
                    if (!xy.exact() || !yz.exact() || !xz.exact()) {
                        ++rep.triples_skipped;
                        continue;
                    }
                    ++rep.triples_checked;
                    const auto where = " in triple (" + std::to_string(i) + ", " + std::to_string(j) + ", "
                        + std::to_string(k) + ")";
                    if (!le(xz, max_of(xy, yz)) || !le(xy, max_of(xz, yz)) || !le(yz, max_of(xy, xz)))
                        rep.violations.emplace_back("strong triangle inequality fails" + where);
                    std::array<ultra_distance, 3> sides { xy, yz, xz };
                    std::sort(sides.begin(), sides.end(), [](const auto &a, const auto &b) {
                        return compare_magnitude(a, b) < 0;
                    });
                    if (sides[1] != sides[2])
                        rep.violations.emplace_back("triangle is not isosceles" + where);
                }
            }
        }
        return rep;
    }

    static std::uint64_t parse_u64(std::string_view s, std::string_view whole)
    {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc {} || ptr != s.data() + s.size() || s.empty())
            throw parse_error("invalid rational: " + std::string { whole });
        return v;
    }

    rational parse_rational(std::string_view text)
    {
        rational r;
        if (const auto slash = text.find('/'); slash != std::string_view::npos) {
            r = { parse_u64(text.substr(0, slash), text), parse_u64(text.substr(slash + 1), text) };
        } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
            const auto frac = text.substr(dot + 1);
            if (frac.size() > 18)
                throw parse_error("too many decimal digits: " + std::string { text });
            std::uint64_t den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i)
                den *= 10;
            const auto whole = dot == 0 ? 0 : parse_u64(text.substr(0, dot), text);
            r = { whole * den + (frac.empty() ? 0 : parse_u64(frac, text)), den };
        } else {
            r = { parse_u64(text, text), 1 };
        }
        if (r.num == 0 || r.den == 0)
            throw parse_error("radius must be a positive rational: " + std::string { text });
        return r;
    }

    std::size_t grid_exponent(const rational &r)
    {
        if (r.num == 0 || r.den == 0)
            throw precondition_error("radius must be a positive rational");
        // largest n with 2^n * num <= den
        std::size_t n = 0;
        unsigned __int128 scaled = r.num;
        while ((scaled << 1) <= r.den) {
            scaled <<= 1;
            ++n;
        }
        return n;
    }

    ball_result ball_members(const trace_prefix &center, const rational &radius, std::span<const trace_prefix> candidates)
    {
        const auto n = grid_exponent(radius);
        if (center.length() < n)
            throw precondition_error("ball center is shorter than the radius head length " + std::to_string(n));
        ball_result res;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto &c = candidates[i];
            if (c.length() < n) {
                res.undecided.push_back(i);
                continue;
            }
            if (std::equal(center.states.begin(), center.states.begin() + static_cast<std::ptrdiff_t>(n), c.states.begin()))
                res.members.push_back(i);
        }
        return res;
    }

    std::optional<trace_prefix> push_forward(const partial_sieve_hom &hom, const trace_prefix &p)
    {
        trace_prefix res;
        res.states.reserve(p.states.size());
        for (const auto &s: p.states) {
            auto image = hom(s);
            if (!image)
                return std::nullopt;
            res.states.push_back(std::move(*image));
        }
        return res;
    }

    non_expansion_report check_non_expanding(const partial_sieve_hom &hom,
        std::span<const std::pair<trace_prefix, trace_prefix>> pairs)
    {
        non_expansion_report rep;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto &[a, b] = pairs[i];
            const auto fa = push_forward(hom, a), fb = push_forward(hom, b);
            if (!fa || !fb) {
                ++rep.pairs_skipped;
                continue;
            }
            const auto src = ultra_dist(a, b), img = ultra_dist(*fa, *fb);
            const auto tag = "pair " + std::to_string(i) + ": image " + to_string(img) + " vs source " + to_string(src);
            if (src.type == ultra_distance::kind::exact) {
                // an image bound at or below the source distance still settles the inequality
                if (compare_magnitude(img, src) <= 0) {
                    ++rep.pairs_checked;
                } else if (img.exact()) {
                    ++rep.pairs_checked;
                    rep.violations.push_back(tag);
                } else {
                    ++rep.pairs_inconclusive;
                }
            } else if (img.type == ultra_distance::kind::exact) {
                // equal source states cannot have distinct images
                ++rep.pairs_checked;
                rep.violations.push_back(tag);
            } else {
                ++rep.pairs_inconclusive;
            }
        }
        return rep;
    }

    monitor_verdict monitor_trace(const safety_monitor &m, const trace_prefix &p)
    {
        for (std::size_t n = 0; n < p.length(); ++n) {
            if (m.bad_prefix(p.head(n + 1)))
                return { n };
        }
        return {};
    }

    bool verify_monotone(const safety_monitor &m, std::span<const trace_prefix> samples)
    {
        for (const auto &s: samples) {
            bool seen_bad = false;
            for (std::size_t n = 1; n <= s.length(); ++n) {
                const bool bad = m.bad_prefix(s.head(n));
                if (seen_bad && !bad)
                    return false;
                seen_bad = bad;
            }
        }
        return true;
    }

    safety_monitor replay_monitor()
    {
        return { "replay", [](const trace_prefix &p) {
            std::set<std::string> seen;
            for (const auto &l: p.lift) {
                if (!seen.emplace(l.input).second)
                    return true;
            }
            return false;
        } };
    }

    safety_monitor trivial_update_monitor()
    {
        return { "trivial-update", [](const trace_prefix &p) {
            const std::set<vertex_id> distinct(p.states.begin(), p.states.end());
            return distinct.size() != p.states.size();
        } };
    }

    safety_monitor state_monitor(std::string name, vertex_id forbidden)
    {
        return { std::move(name), [forbidden = std::move(forbidden)](const trace_prefix &p) {
            return std::find(p.states.begin(), p.states.end(), forbidden) != p.states.end();
        } };
    }

    lift_search has_truncated_lift(const trace_prefix &target, const partial_sieve_hom &hom, const std::size_t n)
    {
        if (!hom.source())
            throw unsupported_error("truncated lift search needs a homomorphism anchored at an explicit source graph");
        return has_truncated_lift(target, intensional_graph::of(hom.source()), hom, n);
    }

    lift_search has_truncated_lift(const trace_prefix &target, const intensional_graph &source,
        const partial_sieve_hom &hom, const std::size_t n)
    {
        if (target.length() < n + 1)
            throw precondition_error("target prefix is shorter than n + 1 states");
        if (!source.initial_vertices)
            throw unsupported_error("initial vertices of the source graph are not finitely enumerable");
        std::set<std::pair<vertex_id, std::size_t>> dead;
        vertex_path path;
        const std::function<bool(const vertex_id &, std::size_t)> search = [&](const vertex_id &v, const std::size_t k) {
            path.push_back(v);
            if (k == n)
                return true;
            for (const auto &next: source.successors(v)) {
                if (dead.contains({ next, k + 1 }) || hom(next) != target.states[k + 1])
                    continue;
                if (search(next, k + 1))
                    return true;
                dead.emplace(next, k + 1);
            }
            path.pop_back();
            return false;
        };
        for (const auto &v0: (*source.initial_vertices)()) {
            if (hom(v0) == target.states[0] && search(v0, 0))
                return { true, path };
        }
        return {};
    }
}
