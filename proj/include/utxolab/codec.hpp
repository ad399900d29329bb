#pragma once

#include <filesystem>
#include <string>
#include <json.hpp>
#include <utxolab/ledger_trace.hpp>

// JSON forms of ledger values, graphs and trace files. Byte strings are lower-case hex.
namespace utxolab {
    using json = nlohmann::ordered_json;

    inline constexpr int schema_version = 1;

    json to_json(const output_ref &ref);
    json to_json(const output &o);
    json to_json(const tx &t);
    json to_json(const utxo_set &u);
    json to_json(const ledger_step &s);
    json to_json(const simple_graph &g);
    json to_json(const trace_prefix &p);

    // All readers throw parse_error on malformed input.
    output_ref output_ref_from_json(const json &j);
    output output_from_json(const json &j);
    tx tx_from_json(const json &j);
    utxo_set utxo_set_from_json(const json &j);
    simple_graph graph_from_json(const json &j);
    trace_prefix trace_prefix_from_json(const json &j);

    // Resolves a rules name written by rules_name(): "default" or "nft-policy:TOKEN".
    ledger_rules rules_from_name(const std::string &name);

    // A ledger trace file: the context, the recorded states and the lift as (slot, tx) steps.
    struct trace_file {
        ledger_context context;
        trace_prefix prefix;
        std::vector<ledger_input> steps;
    };

    json to_json(const ledger_context &ctx, const annotated_run &run);
    trace_file trace_file_from_json(const json &j);

    // Rebuilds the run from the recorded steps by plain set updates, without validity checks.
    annotated_run unchecked_run(const trace_file &f);

    // Compact one-line-per-document text with a trailing newline.
    std::string dump(const json &j);
    json parse_json(const std::string &text);
    json read_json_file(const std::filesystem::path &path);
    std::string read_text_file(const std::filesystem::path &path);
    void write_text_file(const std::filesystem::path &path, const std::string &text);

    // Checks the version and kind fields of a document.
    void expect_document(const json &j, std::string_view kind);
}
