#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace utxolab::cli {
    enum exit_code : int {
        clean = 0,
        violation = 1,
        usage = 2,
        internal = 3
    };

    // Environment variable naming the default output directory of `trace gen` and `contract check --induce`.
    inline constexpr const char *out_env = "UTXOLAB_OUT";

    // Runs one command line (without the program name) and returns its exit code.
    int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err);
}
