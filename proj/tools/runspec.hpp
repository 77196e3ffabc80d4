// Run configuration for the CLI: key=value config files, flag precedence,
// canonical serialization for the self-describing CSV headers. Pure text
// handling, no dependency on the numeric core.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bicm_cli {

// Inclusive start:step:stop grid; a bare number is a one-point grid.
struct Grid {
    double start = 0.0;
    double step = 0.0;
    double stop = 0.0;
    bool single = false;

    static Grid parse(const std::string& text);
    std::vector<double> values() const;
    std::string str() const;
};

struct RunSpec {
    std::string command;
    std::string constellation = "qam16"; // built-in name or file:PATH
    std::string labeling = "brgc";       // brgc | file (file constellations)
    std::string channel = "rayleigh";    // awgn | rayleigh
    std::vector<double> snr_db = {5.0};
    std::vector<std::string> metrics;    // command-dependent defaults
    std::vector<std::string> families;
    Grid rates = Grid{0.25, 0.25, 3.75, false};
    std::string ext_model = "none";      // none | perfect | gaussian
    double ext_sigma = 0.0;
    std::string backend = "mc";          // mc | gh
    long samples = 200000;
    int gh_nodes = 32;
    unsigned long long seed = 1;
    int block_length = 4;                // validate
    double rate = 0.5;                   // validate
    long trials = 100000;                // validate
    std::string out;                     // output path; never serialized
};

// Canonical %.17g double formatting used for both headers and data rows so
// a CSV regenerates byte-identically from its own header.
std::string format_double(double v);

std::vector<std::string> split_list(const std::string& csv);
std::string join_list(const std::vector<std::string>& items);

// Applies one key=value pair; throws std::runtime_error on unknown keys or
// malformed values.
void apply_key_value(RunSpec& spec, const std::string& key, const std::string& value);

// Applies a config stream: `# key=value` or bare `key=value` lines; other
// lines (column headers, data rows) are ignored. Errors carry
// "<source>:<line>:" prefixes.
void apply_config_text(RunSpec& spec, std::istream& in, const std::string& source_name);
void apply_config_file(RunSpec& spec, const std::string& path);

// Full effective configuration in canonical order (includes the command,
// excludes the output path).
std::vector<std::pair<std::string, std::string>> serialize(const RunSpec& spec);

} // namespace bicm_cli
