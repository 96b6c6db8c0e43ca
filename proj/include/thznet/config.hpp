// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration. The file format is flat `key = value` text with
// dotted section names and `#` comments; every key is optional and falls back
// to the SimConfig defaults. See configs/example.conf.
#pragma once

#include "thznet/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thznet::config {

inline constexpr const char *kEnvPrefix = "THZNET_";

/// Malformed input: carries the offending line (1-based, 0 when not from a
/// file) and key.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string origin, int line, std::string key, const std::string &what);
    const std::string &origin() const { return origin_; }
    int line() const { return line_; }
    const std::string &key() const { return key_; }

private:
    std::string origin_;
    int line_;
    std::string key_;
};

/// Well-formed input that violates one or more invariants.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string> &problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct Sweep {
    std::string parameter;           // any simulation key, e.g. traffic.packet_interval
    std::vector<std::string> values; // applied through set_value
};

struct ExperimentSpec {
    SimConfig base;
    std::vector<std::uint64_t> seeds{1};
    std::vector<Protocol> protocols{std::begin(kAllProtocols), std::end(kAllProtocols)};
    std::optional<Sweep> sweep;
    std::filesystem::path output = "results";
    unsigned threads = 0; // 0: hardware concurrency
};

/// Every simulation key in registry order.
const std::vector<std::string> &simulation_keys();

bool is_simulation_key(std::string_view key);

/// Throws std::invalid_argument on an unknown key or unparsable value.
void set_value(SimConfig &config, std::string_view key, std::string_view value);

/// Round-trippable text form of a simulation key's current value.
std::string get_value(const SimConfig &config, std::string_view key);

/// THZNET_ + key upper-cased with dots as underscores.
std::string env_name(std::string_view key);

/// Parses config text without validating it.
ExperimentSpec parse(std::string_view text, const std::string &origin = "<string>");

/// Applies every `THZNET_*` variable that names a known key. `lookup`
/// defaults to std::getenv.
void apply_env(ExperimentSpec &spec, const std::function<const char *(const char *)> &lookup = {});

std::vector<std::string> violations(const ExperimentSpec &spec);
void validate(const ExperimentSpec &spec);

/// parse + apply_env + validate.
ExperimentSpec load_config(const std::filesystem::path &path);

/// Full `key = value` listing of a spec, readable by parse.
std::string dump(const ExperimentSpec &spec);

} // namespace thznet::config
