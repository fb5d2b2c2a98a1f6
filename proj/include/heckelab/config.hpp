#pragma once

/**
 * CLI configuration: built-in defaults, overridden by a plain key=value
 * config file, overridden by environment variables, overridden by flags.
 */

#include <cstdlib>
#include <fstream>
#include <map>
#include <string>

#include "heckelab/errors.hpp"

namespace heckelab::config {

struct Config {
    int default_precision = 32;
    std::string default_format = "json"; // json | csv
    std::string output_dir = ".";
    unsigned threads = 1;
};

inline void validate(const Config& c) {
    if (c.default_precision < 1) throw ZeroInput("precision must be >= 1");
    if (c.default_format != "json" && c.default_format != "csv")
        throw ZeroInput("format must be json or csv");
}

// key=value lines; '#' starts a comment; unknown keys are ignored.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

inline void apply_overrides(Config& c, const std::map<std::string, std::string>& kv) {
    if (auto it = kv.find("default_precision"); it != kv.end())
        c.default_precision = std::stoi(it->second);
    if (auto it = kv.find("default_format"); it != kv.end())
        c.default_format = it->second;
    if (auto it = kv.find("output_dir"); it != kv.end()) c.output_dir = it->second;
    if (auto it = kv.find("threads"); it != kv.end())
        c.threads = static_cast<unsigned>(std::stoul(it->second));
}

// Built-ins, then the config file (HECKELAB_CONFIG or ./heckelab.conf), then
// HECKELAB_* environment variables. Flags are applied by the CLI afterwards.
inline Config load(const std::string& explicit_path = "") {
    Config c;
    std::string path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("HECKELAB_CONFIG")) path = env;
    }
    if (path.empty()) path = "heckelab.conf";
    if (std::ifstream f(path); f.good()) apply_overrides(c, parse_key_values(f));
    std::map<std::string, std::string> env_kv;
    if (const char* v = std::getenv("HECKELAB_PRECISION")) env_kv["default_precision"] = v;
    if (const char* v = std::getenv("HECKELAB_FORMAT")) env_kv["default_format"] = v;
    if (const char* v = std::getenv("HECKELAB_OUTPUT_DIR")) env_kv["output_dir"] = v;
    if (const char* v = std::getenv("HECKELAB_THREADS")) env_kv["threads"] = v;
    apply_overrides(c, env_kv);
    validate(c);
    return c;
}

} // namespace heckelab::config
