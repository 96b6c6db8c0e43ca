// SPDX-License-Identifier: Apache-2.0
#include "thznet/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace thznet::metrics {

std::optional<int> network_lifetime(std::span<const RoundMetrics> rounds)
{
    for (const auto &r : rounds)
        if (r.dead_count > 0)
            return r.round;
    return std::nullopt;
}

double avg_remaining_energy(std::span<const double> residuals, double e_init)
{
    if (residuals.empty() || !(e_init > 0.0))
        throw std::invalid_argument("avg_remaining_energy: need n >= 1 and E_init > 0");
    const double sum = std::accumulate(residuals.begin(), residuals.end(), 0.0);
    return sum / (static_cast<double>(residuals.size()) * e_init);
}

Totals totals(std::span<const RoundMetrics> rounds)
{
    Totals t;
    for (const auto &r : rounds) {
        t.generated += r.packets_generated;
        t.delivered += r.packets_delivered;
        t.delivered_bits += r.delivered_bits;
        t.control_bytes += r.control_bytes;
        t.total_bytes += r.total_bytes;
    }
    return t;
}

std::optional<double> transmission_success_rate(std::span<const RoundMetrics> rounds)
{
    const auto t = totals(rounds);
    if (t.generated == 0)
        return std::nullopt;
    return static_cast<double>(t.delivered) / static_cast<double>(t.generated);
}

double average_throughput(std::span<const RoundMetrics> rounds, double horizon_s)
{
    if (!(horizon_s > 0.0))
        throw std::invalid_argument("average_throughput: horizon must be positive");
    return static_cast<double>(totals(rounds).delivered_bits) / horizon_s;
}

std::optional<double> control_overhead_ratio(std::span<const RoundMetrics> rounds)
{
    const auto t = totals(rounds);
    if (t.total_bytes == 0)
        return std::nullopt;
    return static_cast<double>(t.control_bytes) / static_cast<double>(t.total_bytes);
}

} // namespace thznet::metrics
