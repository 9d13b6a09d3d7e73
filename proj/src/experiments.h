// Named experiments: every figure- or table-like result the library can
// reproduce is a named run taking a key=value configuration and returning
// CSV text plus a human-readable summary. The CLI maps each subcommand onto
// one of these names and writes the returned CSVs to disk; nothing here
// touches the filesystem, so runs are testable in-process.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace epiconf::experiments {

// Flat configuration: keys are the CLI flag names without the leading
// dashes ("model", "theta", "nsim", "tol-updating-rel", ...). Values are
// uninterpreted strings; each experiment parses what it needs and rejects
// what it cannot read with a ConfigError.
using Config = std::map<std::string, std::string>;

struct RunResult {
    // 0 success; 1 configuration error; 2 assertion failure (accept mode).
    int exit_code = 0;
    // Human-readable report; the CLI prints it to stdout.
    std::string summary;
    // (file name, file content) pairs, CSV unless noted. Identical config
    // (seed included) produces byte-identical contents.
    std::vector<std::pair<std::string, std::string>> outputs;
    // Set when exit_code != 0.
    std::string error;
};

// Registered experiment names, sorted.
std::vector<std::string> names();

// Runs a named experiment. Never throws: configuration problems (unknown
// name, missing seed on a stochastic run, malformed numbers) come back as
// exit_code 1, failed acceptance assertions as exit_code 2.
RunResult run(const std::string& name, const Config& config);

// Parses "key = value" lines: '#' starts a comment, blanks are skipped,
// whitespace around keys and values is trimmed, later keys override earlier
// ones. Throws ConfigError on a line with no '='.
Config parse_config_text(const std::string& text);

}  // namespace epiconf::experiments
