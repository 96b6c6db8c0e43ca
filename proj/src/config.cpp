// SPDX-License-Identifier: Apache-2.0
#include "thznet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

namespace thznet::config {

namespace {

using Ref = std::variant<double *, std::size_t *, int *, bool *, swipt::Spectrum *>;

struct Entry {
    const char *key;
    Ref (*ref)(SimConfig &);
};

// clang-format off
const Entry kEntries[] = {
    {"network.width",               [](SimConfig &c) -> Ref { return &c.network.width; }},
    {"network.height",              [](SimConfig &c) -> Ref { return &c.network.height; }},
    {"network.nc_x",                [](SimConfig &c) -> Ref { return &c.network.nc.x; }},
    {"network.nc_y",                [](SimConfig &c) -> Ref { return &c.network.nc.y; }},
    {"network.node_count",          [](SimConfig &c) -> Ref { return &c.network.node_count; }},
    {"channel.f_low",               [](SimConfig &c) -> Ref { return &c.channel.f_low; }},
    {"channel.f_high",              [](SimConfig &c) -> Ref { return &c.channel.f_high; }},
    {"channel.delta_f",             [](SimConfig &c) -> Ref { return &c.channel.delta_f; }},
    {"channel.k_abs",               [](SimConfig &c) -> Ref { return &c.channel.k_abs; }},
    {"channel.t0",                  [](SimConfig &c) -> Ref { return &c.channel.T0; }},
    {"channel.kb",                  [](SimConfig &c) -> Ref { return &c.channel.KB; }},
    {"channel.light_speed",         [](SimConfig &c) -> Ref { return &c.channel.c; }},
    {"energy.initial",              [](SimConfig &c) -> Ref { return &c.energy.initial; }},
    {"energy.death_threshold",      [](SimConfig &c) -> Ref { return &c.energy.death_threshold; }},
    {"energy.phi",                  [](SimConfig &c) -> Ref { return &c.energy.phi; }},
    {"energy.t_bit",                [](SimConfig &c) -> Ref { return &c.energy.t_bit; }},
    {"energy.tx_power",             [](SimConfig &c) -> Ref { return &c.energy.tx_power; }},
    {"energy.reference_distance",   [](SimConfig &c) -> Ref { return &c.energy.reference_distance; }},
    {"harvest.a",                   [](SimConfig &c) -> Ref { return &c.harvest.A; }},
    {"harvest.b",                   [](SimConfig &c) -> Ref { return &c.harvest.B; }},
    {"harvest.ps",                  [](SimConfig &c) -> Ref { return &c.harvest.Ps; }},
    {"harvest.nc_power",            [](SimConfig &c) -> Ref { return &c.harvest.nc_power; }},
    {"clustering.p",                [](SimConfig &c) -> Ref { return &c.clustering.p; }},
    {"clustering.a",                [](SimConfig &c) -> Ref { return &c.clustering.a; }},
    {"clustering.b",                [](SimConfig &c) -> Ref { return &c.clustering.b; }},
    {"clustering.r0",               [](SimConfig &c) -> Ref { return &c.clustering.R0; }},
    {"frame.duration",              [](SimConfig &c) -> Ref { return &c.frame.duration; }},
    {"frame.wet_fraction",          [](SimConfig &c) -> Ref { return &c.frame.wet_fraction; }},
    {"frame.slot_per_packet",       [](SimConfig &c) -> Ref { return &c.frame.slot_per_packet; }},
    {"frame.control_bytes",         [](SimConfig &c) -> Ref { return &c.frame.control_bytes; }},
    {"traffic.packet_interval",     [](SimConfig &c) -> Ref { return &c.packet_interval; }},
    {"traffic.packet_bytes",        [](SimConfig &c) -> Ref { return &c.frame.packet_bytes; }},
    {"swipt.tol",                   [](SimConfig &c) -> Ref { return &c.swipt.tol; }},
    {"swipt.max_iter",              [](SimConfig &c) -> Ref { return &c.swipt.max_iter; }},
    {"swipt.member_budget_fraction",[](SimConfig &c) -> Ref { return &c.swipt.member_budget_fraction; }},
    {"swipt.spectrum",              [](SimConfig &c) -> Ref { return &c.swipt.spectrum; }},
    {"routing.neighbor_range",      [](SimConfig &c) -> Ref { return &c.routing.neighbor_range; }},
    {"routing.leach_direct",        [](SimConfig &c) -> Ref { return &c.routing.leach_direct; }},
    {"routing.relay_min_fraction",  [](SimConfig &c) -> Ref { return &c.routing.relay_min_fraction; }},
    {"sim.rounds",                  [](SimConfig &c) -> Ref { return &c.rounds; }},
};
// clang-format on

const Entry *find_entry(std::string_view key)
{
    for (const auto &e : kEntries)
        if (key == e.key)
            return &e;
    return nullptr;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty())
            out.push_back(item);
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text)
{
    T v{};
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw std::invalid_argument(std::string(key) + ": cannot parse '" + std::string(text) + "' as a number");
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::uint64_t> parse_seeds(std::string_view key, std::string_view text)
{
    std::vector<std::uint64_t> seeds;
    for (auto item : split_list(text)) {
        const auto dots = item.find("..");
        if (dots == std::string_view::npos) {
            seeds.push_back(parse_number<std::uint64_t>(key, item));
            continue;
        }
        const auto lo = parse_number<std::uint64_t>(key, trim(item.substr(0, dots)));
        const auto hi = parse_number<std::uint64_t>(key, trim(item.substr(dots + 2)));
        if (hi < lo)
            throw std::invalid_argument(std::string(key) + ": empty range '" + std::string(item) + "'");
        for (auto s = lo; s <= hi; ++s)
            seeds.push_back(s);
    }
    return seeds;
}

std::vector<Protocol> parse_protocols(std::string_view key, std::string_view text)
{
    std::vector<Protocol> out;
    for (auto item : split_list(text)) {
        if (item == "all") {
            out.assign(std::begin(kAllProtocols), std::end(kAllProtocols));
            continue;
        }
        const auto p = parse_protocol(item);
        if (!p)
            throw std::invalid_argument(std::string(key) + ": unknown protocol '" + std::string(item) +
                                        "' (LEACH, EBACC, PS-EBCNF, TS-EBCNF)");
        out.push_back(*p);
    }
    return out;
}

void set_experiment_value(ExperimentSpec &spec, std::string_view key, std::string_view value)
{
    if (key == "experiment.seeds") {
        spec.seeds = parse_seeds(key, value);
    } else if (key == "experiment.protocols") {
        spec.protocols = parse_protocols(key, value);
    } else if (key == "experiment.output") {
        spec.output = std::string(value);
    } else if (key == "experiment.threads") {
        spec.threads = parse_number<unsigned>(key, value);
    } else if (key == "sweep.parameter") {
        if (!spec.sweep)
            spec.sweep.emplace();
        spec.sweep->parameter = std::string(value);
    } else if (key == "sweep.values") {
        if (!spec.sweep)
            spec.sweep.emplace();
        spec.sweep->values.clear();
        for (auto v : split_list(value))
            spec.sweep->values.emplace_back(v);
    } else {
        set_value(spec.base, key, value);
    }
}

const char *const kExperimentKeys[] = {"experiment.seeds",  "experiment.protocols", "experiment.output",
                                       "experiment.threads", "sweep.parameter",      "sweep.values"};

} // namespace

ParseError::ParseError(std::string origin, int line, std::string key, const std::string &what)
    : std::runtime_error(origin + ":" + std::to_string(line) + (key.empty() ? "" : ": " + key) + ": " + what),
      origin_(std::move(origin)), line_(line), key_(std::move(key))
{
}

static std::string join_problems(const std::vector<std::string> &problems)
{
    std::string msg = "invalid configuration:";
    for (const auto &p : problems)
        msg += "\n  " + p;
    return msg;
}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument(join_problems(problems)), problems_(std::move(problems))
{
}

const std::vector<std::string> &simulation_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &e : kEntries)
            k.emplace_back(e.key);
        return k;
    }();
    return keys;
}

bool is_simulation_key(std::string_view key)
{
    return find_entry(key) != nullptr;
}

void set_value(SimConfig &config, std::string_view key, std::string_view value)
{
    const Entry *e = find_entry(key);
    if (!e)
        throw std::invalid_argument("unknown key '" + std::string(key) + "'");
    value = trim(value);
    std::visit(
        [&](auto *target) {
            using T = std::remove_pointer_t<decltype(target)>;
            if constexpr (std::is_same_v<T, bool>) {
                if (value == "true" || value == "1")
                    *target = true;
                else if (value == "false" || value == "0")
                    *target = false;
                else
                    throw std::invalid_argument(std::string(key) + ": expected true or false, got '" +
                                                std::string(value) + "'");
            } else if constexpr (std::is_same_v<T, swipt::Spectrum>) {
                if (value == "band_center")
                    *target = swipt::Spectrum::BandCenter;
                else if (value == "full_band")
                    *target = swipt::Spectrum::FullBand;
                else
                    throw std::invalid_argument(std::string(key) + ": expected band_center or full_band, got '" +
                                                std::string(value) + "'");
            } else {
                *target = parse_number<T>(key, value);
            }
        },
        e->ref(config));
}

std::string get_value(const SimConfig &config, std::string_view key)
{
    const Entry *e = find_entry(key);
    if (!e)
        throw std::invalid_argument("unknown key '" + std::string(key) + "'");
    SimConfig copy = config;
    return std::visit(
        [](auto *v) -> std::string {
            using T = std::remove_pointer_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>)
                return *v ? "true" : "false";
            else if constexpr (std::is_same_v<T, swipt::Spectrum>)
                return *v == swipt::Spectrum::BandCenter ? "band_center" : "full_band";
            else if constexpr (std::is_same_v<T, double>)
                return format_double(*v);
            else
                return std::to_string(*v);
        },
        e->ref(copy));
}

std::string env_name(std::string_view key)
{
    std::string name = kEnvPrefix;
    for (char ch : key)
        name += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return name;
}

ExperimentSpec parse(std::string_view text, const std::string &origin)
{
    ExperimentSpec spec;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(origin, line_no, "", "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(origin, line_no, "", "missing key before '='");
        if (!seen.insert(std::string(key)).second)
            throw ParseError(origin, line_no, std::string(key), "duplicate key");
        try {
            set_experiment_value(spec, key, value);
        } catch (const std::invalid_argument &ex) {
            throw ParseError(origin, line_no, std::string(key), ex.what());
        }
    }
    return spec;
}

void apply_env(ExperimentSpec &spec, const std::function<const char *(const char *)> &lookup)
{
    auto get = [&](const std::string &name) -> const char * {
        return lookup ? lookup(name.c_str()) : std::getenv(name.c_str());
    };
    auto apply = [&](const std::string &key) {
        const std::string name = env_name(key);
        if (const char *v = get(name)) {
            try {
                set_experiment_value(spec, key, v);
            } catch (const std::invalid_argument &ex) {
                throw ParseError(name, 0, key, ex.what());
            }
        }
    };
    for (const auto &key : simulation_keys())
        apply(key);
    for (const char *key : kExperimentKeys)
        apply(key);
}

std::vector<std::string> violations(const ExperimentSpec &spec)
{
    std::vector<std::string> out = spec.base.violations();
    if (spec.seeds.empty())
        out.emplace_back("experiment.seeds must not be empty");
    if (spec.protocols.empty())
        out.emplace_back("experiment.protocols must not be empty");
    if (spec.output.empty())
        out.emplace_back("experiment.output must not be empty");
    if (spec.sweep) {
        const auto &sw = *spec.sweep;
        if (!is_simulation_key(sw.parameter)) {
            out.push_back("sweep.parameter: unknown key '" + sw.parameter + "'");
        } else if (sw.values.empty()) {
            out.emplace_back("sweep.values must not be empty");
        } else {
            for (const auto &v : sw.values) {
                SimConfig c = spec.base;
                try {
                    set_value(c, sw.parameter, v);
                } catch (const std::invalid_argument &ex) {
                    out.push_back(std::string("sweep.values: ") + ex.what());
                    continue;
                }
                for (const auto &p : c.violations())
                    out.push_back("sweep.values: " + sw.parameter + " = " + v + ": " + p);
            }
        }
    }
    return out;
}

void validate(const ExperimentSpec &spec)
{
    auto problems = violations(spec);
    if (!problems.empty())
        throw ValidationError(std::move(problems));
}

ExperimentSpec load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    ExperimentSpec spec = parse(ss.str(), path.string());
    apply_env(spec);
    validate(spec);
    return spec;
}

std::string dump(const ExperimentSpec &spec)
{
    std::ostringstream out;
    std::string seeds;
    for (auto s : spec.seeds)
        seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
    std::string protocols;
    for (auto p : spec.protocols)
        protocols += std::string(protocols.empty() ? "" : ",") + to_string(p);
    out << "experiment.seeds = " << seeds << '\n';
    out << "experiment.protocols = " << protocols << '\n';
    out << "experiment.output = " << spec.output.string() << '\n';
    out << "experiment.threads = " << spec.threads << '\n';
    if (spec.sweep) {
        std::string values;
        for (const auto &v : spec.sweep->values)
            values += (values.empty() ? "" : ",") + v;
        out << "sweep.parameter = " << spec.sweep->parameter << '\n';
        out << "sweep.values = " << values << '\n';
    }
    for (const auto &key : simulation_keys())
        out << key << " = " << get_value(spec.base, key) << '\n';
    return out.str();
}

} // namespace thznet::config
