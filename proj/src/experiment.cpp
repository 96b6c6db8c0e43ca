// SPDX-License-Identifier: Apache-2.0
#include "thznet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace thznet::experiment {

namespace {

std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T>
std::string fmt_opt(const std::optional<T> &v)
{
    if (!v)
        return "";
    if constexpr (std::is_floating_point_v<T>)
        return fmt(*v);
    else
        return std::to_string(*v);
}

template <class T>
T field(std::string_view s, int line)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("rounds csv line " + std::to_string(line) + ": bad field '" + std::string(s) + "'");
    return v;
}

std::string sanitize(std::string_view s)
{
    std::string out;
    for (char ch : s)
        out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+') ? ch : '_';
    return out;
}

} // namespace

std::vector<Job> expand(const config::ExperimentSpec &spec, Mode mode)
{
    std::vector<Protocol> protocols = spec.protocols;
    if (mode == Mode::Compare)
        protocols.assign(std::begin(kAllProtocols), std::end(kAllProtocols));

    std::vector<std::optional<std::string>> values{std::nullopt};
    if (mode == Mode::Sweep) {
        if (!spec.sweep)
            throw std::invalid_argument("sweep mode needs sweep.parameter and sweep.values in the config");
        values.assign(spec.sweep->values.begin(), spec.sweep->values.end());
    }

    std::vector<Job> jobs;
    for (const auto &value : values) {
        SimConfig base = spec.base;
        if (value)
            config::set_value(base, spec.sweep->parameter, *value);
        for (auto p : protocols)
            for (auto seed : spec.seeds) {
                Job job{{p, seed, value}, base};
                job.config.protocol = p;
                job.config.seed = seed;
                jobs.push_back(std::move(job));
            }
    }
    return jobs;
}

RunSummary summarize(const RunKey &key, std::span<const metrics::RoundMetrics> rounds, std::size_t nodes,
                     double horizon_s)
{
    RunSummary s;
    s.key = key;
    s.nodes = nodes;
    s.horizon_s = horizon_s;
    s.lifetime = metrics::network_lifetime(rounds);
    s.survivors = rounds.empty() ? nodes : nodes - rounds.back().dead_count;
    s.success_rate = metrics::transmission_success_rate(rounds);
    s.throughput = horizon_s > 0.0 ? metrics::average_throughput(rounds, horizon_s) : 0.0;
    s.overhead_ratio = metrics::control_overhead_ratio(rounds);
    return s;
}

std::optional<double> median(std::vector<std::optional<double>> values)
{
    if (values.empty())
        return std::nullopt;
    std::sort(values.begin(), values.end(), [](const auto &a, const auto &b) {
        if (!a || !b)
            return a.has_value() && !b.has_value();
        return *a < *b;
    });
    const std::size_t n = values.size();
    const auto &lo = values[(n - 1) / 2];
    const auto &hi = values[n / 2];
    if (!lo || !hi)
        return std::nullopt;
    return 0.5 * (*lo + *hi);
}

std::string rounds_file_name(const RunKey &key, const std::optional<std::string> &sweep_parameter)
{
    std::string name = std::string(to_string(key.protocol)) + "_seed" + std::to_string(key.seed);
    if (key.sweep_value && sweep_parameter)
        name += "_" + sanitize(*sweep_parameter) + "=" + sanitize(*key.sweep_value);
    return name + ".csv";
}

void write_rounds_csv(std::ostream &out, std::span<const metrics::RoundMetrics> rounds)
{
    out << kRoundsHeader << '\n';
    for (const auto &r : rounds)
        out << r.round << ',' << r.dead_count << ',' << fmt(r.avg_residual_fraction) << ',' << r.packets_generated
            << ',' << r.packets_delivered << ',' << r.delivered_bits << ',' << r.control_bytes << ','
            << r.total_bytes << '\n';
}

std::vector<metrics::RoundMetrics> read_rounds_csv(std::istream &in)
{
    std::vector<metrics::RoundMetrics> rounds;
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line) || line != kRoundsHeader)
        throw std::runtime_error("rounds csv: unexpected header");
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string_view> f;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 8)
            throw std::runtime_error("rounds csv line " + std::to_string(line_no) + ": expected 8 fields");
        metrics::RoundMetrics r;
        r.round = field<int>(f[0], line_no);
        r.dead_count = field<std::size_t>(f[1], line_no);
        r.avg_residual_fraction = field<double>(f[2], line_no);
        r.packets_generated = field<std::uint64_t>(f[3], line_no);
        r.packets_delivered = field<std::uint64_t>(f[4], line_no);
        r.delivered_bits = field<std::uint64_t>(f[5], line_no);
        r.control_bytes = field<std::uint64_t>(f[6], line_no);
        r.total_bytes = field<std::uint64_t>(f[7], line_no);
        rounds.push_back(r);
    }
    return rounds;
}

void write_summary_csv(std::ostream &out, std::span<const RunSummary> runs,
                       const std::optional<std::string> &sweep_parameter)
{
    out << kSummaryHeader << '\n';
    const std::string param = sweep_parameter.value_or("");
    auto prefix = [&](const RunKey &k) {
        return std::string(to_string(k.protocol)) + ',' + (k.sweep_value ? param : "") + ',' +
               k.sweep_value.value_or("") + ',';
    };
    std::size_t i = 0;
    while (i < runs.size()) {
        std::size_t j = i;
        while (j < runs.size() && runs[j].key.protocol == runs[i].key.protocol &&
               runs[j].key.sweep_value == runs[i].key.sweep_value)
            ++j;
        std::vector<std::optional<double>> life, surv, succ, thr, ovh;
        for (std::size_t k = i; k < j; ++k) {
            const auto &r = runs[k];
            out << prefix(r.key) << r.key.seed << ',' << r.nodes << ',' << fmt(r.horizon_s) << ','
                << fmt_opt(r.lifetime) << ',' << r.survivors << ',' << fmt_opt(r.success_rate) << ','
                << fmt(r.throughput) << ',' << fmt_opt(r.overhead_ratio) << '\n';
            life.push_back(r.lifetime ? std::optional<double>(*r.lifetime) : std::nullopt);
            surv.emplace_back(static_cast<double>(r.survivors));
            succ.push_back(r.success_rate);
            thr.emplace_back(r.throughput);
            ovh.push_back(r.overhead_ratio);
        }
        const auto &first = runs[i];
        out << prefix(first.key) << "median," << first.nodes << ',' << fmt(first.horizon_s) << ','
            << fmt_opt(median(life)) << ',' << fmt_opt(median(surv)) << ',' << fmt_opt(median(succ)) << ','
            << fmt_opt(median(thr)) << ',' << fmt_opt(median(ovh)) << '\n';
        i = j;
    }
}

Result run_experiment(const config::ExperimentSpec &spec, Mode mode)
{
    config::validate(spec);
    const auto jobs = expand(spec, mode);
    const std::optional<std::string> param =
        mode == Mode::Sweep ? std::optional<std::string>(spec.sweep->parameter) : std::nullopt;

    std::filesystem::create_directories(spec.output);
    Result result;
    result.runs.resize(jobs.size());
    result.files.resize(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                const auto &job = jobs[i];
                const auto trace = run_simulation(job.config);
                const auto path = spec.output / rounds_file_name(job.key, param);
                std::ofstream out(path, std::ios::binary);
                write_rounds_csv(out, trace.rounds);
                if (!out)
                    throw std::runtime_error("cannot write " + path.string());
                result.files[i] = path;
                result.runs[i] = summarize(job.key, trace.rounds, job.config.network.node_count, trace.horizon_s);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);

    const auto summary = spec.output / "summary.csv";
    std::ofstream out(summary, std::ios::binary);
    write_summary_csv(out, result.runs, param);
    if (!out)
        throw std::runtime_error("cannot write " + summary.string());
    result.files.push_back(summary);
    return result;
}

} // namespace thznet::experiment
