#include "runspec.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bicm_cli {

namespace {

double parse_double(const std::string& text) {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::runtime_error("malformed number: " + text);
    return v;
}

long parse_long(const std::string& text) {
    std::size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size()) throw std::runtime_error("malformed integer: " + text);
    return v;
}

unsigned long long parse_u64(const std::string& text) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::runtime_error("malformed integer: " + text);
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    for (const std::string& item : split_list(csv)) out.push_back(parse_double(item));
    if (out.empty()) throw std::runtime_error("expected at least one value");
    return out;
}

} // namespace

Grid Grid::parse(const std::string& text) {
    Grid g;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        g.start = g.stop = parse_double(text);
        g.step = 1.0;
        g.single = true;
        return g;
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::runtime_error("grid must be start:step:stop");
    g.start = parse_double(text.substr(0, c1));
    g.step = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    g.stop = parse_double(text.substr(c2 + 1));
    if (!(g.step > 0.0)) throw std::runtime_error("grid step must be positive");
    if (g.stop < g.start) throw std::runtime_error("grid stop must be >= start");
    return g;
}

std::vector<double> Grid::values() const {
    if (single) return {start};
    std::vector<double> out;
    const long n = std::lround((stop - start) / step);
    for (long k = 0; k <= n; ++k) {
        const double v = start + static_cast<double>(k) * step;
        if (v <= stop + 0.5 * step) out.push_back(v);
    }
    return out;
}

std::string Grid::str() const {
    if (single) return format_double(start);
    return format_double(start) + ":" + format_double(step) + ":" + format_double(stop);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

void apply_key_value(RunSpec& spec, const std::string& key, const std::string& value) {
    if (key == "command") spec.command = value;
    else if (key == "constellation") spec.constellation = value;
    else if (key == "labeling") spec.labeling = value;
    else if (key == "channel") spec.channel = value;
    else if (key == "snr_db") spec.snr_db = parse_doubles(value);
    else if (key == "metrics") spec.metrics = split_list(value);
    else if (key == "families") spec.families = split_list(value);
    else if (key == "rates") spec.rates = Grid::parse(value);
    else if (key == "ext_model") spec.ext_model = value;
    else if (key == "ext_sigma") spec.ext_sigma = parse_double(value);
    else if (key == "backend") spec.backend = value;
    else if (key == "samples") spec.samples = parse_long(value);
    else if (key == "gh_nodes") spec.gh_nodes = static_cast<int>(parse_long(value));
    else if (key == "seed") spec.seed = parse_u64(value);
    else if (key == "block_length") spec.block_length = static_cast<int>(parse_long(value));
    else if (key == "rate") spec.rate = parse_double(value);
    else if (key == "trials") spec.trials = parse_long(value);
    else if (key == "version") { /* informational */ }
    else throw std::runtime_error("unknown configuration key: " + key);
}

void apply_config_text(RunSpec& spec, std::istream& in, const std::string& source_name) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = trim(line);
        const bool commented = !body.empty() && body[0] == '#';
        if (commented) body = trim(body.substr(1));
        const auto eq = body.find('=');
        if (eq == std::string::npos) continue; // column header or data row
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) continue;
        try {
            apply_key_value(spec, key, value);
        } catch (const std::exception& e) {
            throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_config_file(RunSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    apply_config_text(spec, in, path);
}

std::vector<std::pair<std::string, std::string>> serialize(const RunSpec& spec) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("command", spec.command);
    kv.emplace_back("constellation", spec.constellation);
    kv.emplace_back("labeling", spec.labeling);
    kv.emplace_back("channel", spec.channel);
    kv.emplace_back("snr_db", join_doubles(spec.snr_db));
    kv.emplace_back("metrics", join_list(spec.metrics));
    kv.emplace_back("families", join_list(spec.families));
    kv.emplace_back("rates", spec.rates.str());
    kv.emplace_back("ext_model", spec.ext_model);
    kv.emplace_back("ext_sigma", format_double(spec.ext_sigma));
    kv.emplace_back("backend", spec.backend);
    kv.emplace_back("samples", std::to_string(spec.samples));
    kv.emplace_back("gh_nodes", std::to_string(spec.gh_nodes));
    kv.emplace_back("seed", std::to_string(spec.seed));
    kv.emplace_back("block_length", std::to_string(spec.block_length));
    kv.emplace_back("rate", format_double(spec.rate));
    kv.emplace_back("trials", std::to_string(spec.trials));
    return kv;
}

} // namespace bicm_cli
