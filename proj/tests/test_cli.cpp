#include <doctest.h>

#include "support/fixtures.hpp"

#include <cli.hpp>
#include <utxolab/codec.hpp>

#include <filesystem>
#include <sstream>
#include <unistd.h>

using namespace utxolab;
using namespace utxolab::testing;
namespace fs = std::filesystem;

namespace {
    struct temp_dir {
        fs::path path;

        explicit temp_dir(const std::string &tag)
        {
            path = fs::temp_directory_path() / ("utxolab-test-" + tag + "-" + std::to_string(::getpid()));
            fs::remove_all(path);
            fs::create_directories(path);
        }

        ~temp_dir() { fs::remove_all(path); }

        std::string operator/(const std::string &name) const { return (path / name).string(); }
    };

    struct cli_result {
        int code;
        std::string out;
        std::string err;

        json doc() const { return parse_json(out); }
    };

    cli_result run(std::vector<std::string> args)
    {
        std::ostringstream out, err;
        const int code = cli::run_cli(std::move(args), out, err);
        return { code, out.str(), err.str() };
    }

    json find_verdict(const json &doc, const std::string &check)
    {
        for (const auto &v: doc["verdicts"]) {
            if (v["check"] == check)
                return v;
        }
        return nullptr;
    }
}

TEST_CASE("codec round trips")
{
    const auto ctx = small_genesis(3, 5, nft_policy("nft"));
    generator_config config;
    config.nft = "nft";
    const auto runs = generated_runs(ctx, 6, 5, 5, config);
    for (const auto &r: runs) {
        for (const auto &t: r.transactions())
            CHECK(tx_from_json(parse_json(dump(to_json(t)))) == t);
        CHECK(utxo_set_from_json(to_json(r.final_state())) == r.final_state());
        const auto f = trace_file_from_json(parse_json(dump(to_json(ctx, r))));
        CHECK(f.prefix.states == r.prefix().states);
        CHECK(f.context.rules.name == ctx.rules.name);
        CHECK(f.context.initial_utxos == ctx.initial_utxos);
        CHECK(unchecked_run(f).prefix().states == r.prefix().states);
    }
    const simple_graph g { { "a", "b" }, { { "a", "b" } }, { "a" } };
    const auto back = graph_from_json(to_json(g));
    CHECK(back.vertices() == g.vertices());
    CHECK(back.edges() == g.edges());
    CHECK(back.initial() == g.initial());
}

TEST_CASE("codec rejects malformed documents")
{
    const auto t = golden_tx();
    auto j = to_json(t);
    j["hash"] = std::string(64, '0');
    CHECK_THROWS_AS(tx_from_json(j), parse_error);

    auto doc = to_json(simple_graph { { "a" }, {}, {} });
    doc["version"] = 99;
    CHECK_THROWS_AS(graph_from_json(doc), parse_error);
    CHECK_THROWS_AS(expect_document(doc, "graph"), parse_error);
    CHECK_THROWS_AS(parse_json("{\"version\":"), parse_error);
    CHECK_THROWS_AS(rules_from_name("strict"), parse_error);
    CHECK(rules_from_name("nft-policy:nft").name == "nft-policy:nft");
}

TEST_CASE("trace gen")
{
    const temp_dir dir { "gen" };
    SUBCASE("zero traces writes only the manifest")
    {
        const auto r = run({ "trace", "gen", "--seed", "3", "--count", "0", "--out", dir / "zero" });
        CHECK(r.code == 0);
        CHECK(r.doc()["files"].empty());
        CHECK(std::distance(fs::directory_iterator(dir.path / "zero"), fs::directory_iterator {}) == 1);
    }
    SUBCASE("same seed gives identical files")
    {
        const auto a = run({ "trace", "gen", "--seed", "9", "--count", "4", "--out", dir / "a" });
        const auto b = run({ "trace", "gen", "--seed", "9", "--count", "4", "--out", dir / "b" });
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        for (const auto &f: a.doc()["files"]) {
            const auto name = f["name"].get<std::string>();
            CHECK(read_text_file(dir / ("a/" + name)) == read_text_file(dir / ("b/" + name)));
        }
        const auto c = run({ "trace", "gen", "--seed", "10", "--count", "4", "--out", dir / "c" });
        CHECK(c.out != a.out);
    }
    SUBCASE("generated files validate")
    {
        REQUIRE(run({ "trace", "gen", "--seed", "1", "--count", "5", "--depth", "8", "--out", dir / "v" }).code == 0);
        std::vector<std::string> args { "trace", "validate" };
        for (int i = 0; i < 5; ++i)
            args.push_back(dir / ("v/trace-000" + std::to_string(i) + ".json"));
        const auto r = run(args);
        CHECK(r.code == 0);
        CHECK(r.doc()["verdicts"].size() == 5);
        CHECK(run({ "trace", "monitor", dir / "v/trace-0000.json" }).code == 0);
        const auto d = run({ "trace", "dist", dir / "v/trace-0000.json", dir / "v/trace-0001.json" });
        CHECK(d.code == 0);
        CHECK(d.doc()["details"]["exact"].is_boolean());
    }
    SUBCASE("bad options")
    {
        CHECK(run({ "trace", "gen", "--depth", "0", "--out", dir / "x" }).code == 2);
        CHECK(run({ "trace", "gen", "--rules", "strict", "--out", dir / "x" }).code == 2);
        CHECK(run({ "trace", "gen", "--slots", "5:1", "--out", dir / "x" }).code == 2);
        CHECK(run({ "bogus" }).code == 2);
        CHECK(run({}).code == 2);
    }
}

TEST_CASE("trace validate on corrupted files")
{
    const temp_dir dir { "corrupt" };
    REQUIRE(run({ "trace", "gen", "--seed", "2", "--count", "30", "--depth", "6", "--slots", "2:3", "--out", dir.path.string() }).code == 0);
    const auto path = dir / "trace-0000.json";
    auto doc = read_json_file(path);

    SUBCASE("truncated file")
    {
        const auto text = read_text_file(path);
        write_text_file(dir / "cut.json", text.substr(0, text.size() / 2));
        const auto r = run({ "trace", "validate", dir / "cut.json" });
        CHECK(r.code == 2);
        CHECK(r.err.find("parse error") != std::string::npos);
        CHECK(run({ "trace", "validate", dir / "missing.json" }).code == 2);
    }
    SUBCASE("decreasing slots")
    {
        auto &steps = doc["trace"]["steps"];
        REQUIRE(steps.size() >= 2);
        steps[1]["slot"] = steps[0]["slot"].get<std::uint64_t>() - 1;
        write_text_file(dir / "slots.json", dump(doc));
        const auto r = run({ "trace", "validate", dir / "slots.json" });
        CHECK(r.code == 1);
        CHECK(r.doc()["verdicts"][0]["witness"]["diagnostic"] == "slots-decreasing");
    }
}

TEST_CASE("props canon on the eight-transaction fixture")
{
    const temp_dir dir { "canon" };
    const auto f = make_dependency_fixture();
    write_text_file(dir / "fixture.json", dump(to_json(f.context, f.run)));
    const auto r = run({ "props", "canon", "--run", dir / "fixture.json", "--enumerate" });
    REQUIRE(r.code == 0);
    const auto d = r.doc()["details"];
    CHECK(d["levels"] == json::array({ 0, 0, 1, 0, 2, 2, 1, 3 }));
    CHECK(d["presentation"] == "(0,1,3 | 2,6 | 4,5 | 7)");
    CHECK(d["canonical"] == json::array({ 0, 1, 3, 2, 6, 4, 5, 7 }));
    CHECK(d["truncated"] == false);
    CHECK(d["permutations"].size() > 1);

    const auto text = run({ "--format", "text", "props", "canon", "--run", dir / "fixture.json" });
    CHECK(text.code == 0);
    CHECK(text.out.find("presentation") != std::string::npos);
}

TEST_CASE("props check on a run with a repeated transaction")
{
    const temp_dir dir { "props" };
    const auto ctx = small_genesis(3, 17);
    const auto runs = generated_runs(ctx, 6, 20, 17);
    const auto it = std::find_if(runs.begin(), runs.end(), [](const auto &r) { return r.size() >= 2; });
    REQUIRE(it != runs.end());
    std::vector<ledger_step> steps(it->steps().begin(), it->steps().begin() + 2);
    steps.push_back(make_unchecked_step(steps.back().env, steps.back().to, steps[0].input));
    const annotated_run corrupted { it->initial(), std::move(steps) };
    write_text_file(dir / "dup.json", dump(to_json(ctx, corrupted)));
    write_text_file(dir / "ok.json", dump(to_json(ctx, *it)));

    const auto r = run({ "props", "check", "--run", dir / "dup.json" });
    CHECK(r.code == 1);
    const auto replay = find_verdict(r.doc(), "replay-protection");
    REQUIRE_FALSE(replay.is_null());
    CHECK(replay["witness"] == json { { "i", 0 }, { "j", 2 } });
    CHECK(find_verdict(r.doc(), "valid-trace")["status"] == "violation");

    const auto ok = run({ "props", "check", "--run", dir / "ok.json" });
    CHECK(ok.code == 0);
    CHECK(ok.doc()["verdicts"].size() == 5);
}

TEST_CASE("contract commands")
{
    const temp_dir dir { "contract" };
    REQUIRE(run({ "trace", "gen", "--seed", "4", "--count", "12", "--depth", "8", "--out", dir / "traces" }).code == 0);
    std::vector<std::string> args { "contract", "check", "--name", "nft", "--traces" };
    for (const auto &e: fs::directory_iterator(dir.path / "traces")) {
        if (e.path().filename() != "manifest.json")
            args.push_back(e.path().string());
    }

    CHECK(run({ "contract", "list" }).doc()["details"]["contracts"][0]["name"] == "nft");
    SUBCASE("clean traces")
    {
        const auto r = run(args);
        CHECK(r.code == 0);
        CHECK(r.doc()["verdicts"].size() == 12);
    }
    SUBCASE("induced traces and sampled pairs")
    {
        for (const auto *a: { "--induce", "--nonexpanding", "--count", "100", "--out" })
            args.emplace_back(a);
        args.push_back(dir / "induced");
        const auto r = run(args);
        CHECK(r.code == 0);
        const auto ne = find_verdict(r.doc(), "non-expanding");
        REQUIRE_FALSE(ne.is_null());
        CHECK(ne["status"] == "clean");
        CHECK(r.doc()["details"]["pairs_checked"].get<std::size_t>() + r.doc()["details"]["pairs_skipped"].get<std::size_t>()
            + r.doc()["details"]["pairs_inconclusive"].get<std::size_t>() == 100);
        const auto induced = read_json_file(dir / "induced/trace-0000.nft.json");
        CHECK(induced["kind"] == "contract-trace");
    }
    SUBCASE("unknown contract")
    {
        args[3] = "nope";
        CHECK(run(args).code == 2);
    }
    SUBCASE("graph dumps")
    {
        const auto g = run({ "graph", "dump", "--which", "gamma-prime" });
        CHECK(g.code == 0);
        CHECK(g.doc()["edges"].size() == 4);
        const auto dot = run({ "--format", "dot", "graph", "dump", "--which", "gamma" });
        CHECK(dot.out.rfind("digraph", 0) == 0);
        const auto lp = run({ "graph", "dump", "--which", "lambda-prime", "--run", dir / "traces/trace-0000.json" });
        CHECK(lp.code == 0);
        CHECK_FALSE(lp.doc()["vertices"].empty());
        CHECK(run({ "graph", "dump", "--which", "lambda" }).code == 2);
    }
}
