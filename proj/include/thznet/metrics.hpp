// SPDX-License-Identifier: Apache-2.0
//
// Evaluation quantities over a simulation trace: lifetime, average remaining
// energy, delivery ratio, throughput and control overhead.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace thznet::metrics {

/// Per-round snapshot. Counters are this round's values; dead_count and
/// avg_residual_fraction describe the network at the end of the round.
struct RoundMetrics {
    int round = 0;
    std::size_t dead_count = 0;
    double avg_residual_fraction = 1.0;
    std::uint64_t packets_generated = 0;
    std::uint64_t packets_delivered = 0;
    std::uint64_t delivered_bits = 0;
    std::uint64_t control_bytes = 0;
    std::uint64_t total_bytes = 0;

    // Energy audit, J. Not part of the CSV schema.
    double energy_debited = 0.0;
    double energy_credited = 0.0;
    double residual_total = 0.0;
};

/// First round with a dead node, or none within the horizon.
std::optional<int> network_lifetime(std::span<const RoundMetrics> rounds);

/// sum(E_res) / (n E_init).
double avg_remaining_energy(std::span<const double> residuals, double e_init);

/// D_r / D_t over the whole trace; none when nothing was generated.
std::optional<double> transmission_success_rate(std::span<const RoundMetrics> rounds);

/// Delivered bits over a horizon of `horizon_s` simulated seconds.
double average_throughput(std::span<const RoundMetrics> rounds, double horizon_s);

/// Control bytes over all bytes; none on zero traffic.
std::optional<double> control_overhead_ratio(std::span<const RoundMetrics> rounds);

struct Totals {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t delivered_bits = 0;
    std::uint64_t control_bytes = 0;
    std::uint64_t total_bytes = 0;
};

Totals totals(std::span<const RoundMetrics> rounds);

} // namespace thznet::metrics
