// SPDX-License-Identifier: Apache-2.0
//
// Round/frame state machine: deployment, packet generation, election, frame
// build, WET and SWIPT transfers, intra/inter-cluster forwarding, energy
// debits and credits, death detection.
#pragma once

#include "thznet/channel.hpp"
#include "thznet/clustering.hpp"
#include "thznet/energy.hpp"
#include "thznet/frame.hpp"
#include "thznet/geometry.hpp"
#include "thznet/metrics.hpp"
#include "thznet/rng.hpp"
#include "thznet/swipt.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thznet {

enum class Protocol { LEACH, EBACC, PS_EBCNF, TS_EBCNF };

const char *to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);
bool harvests(Protocol p); // WET + SWIPT
inline constexpr Protocol kAllProtocols[] = {Protocol::LEACH, Protocol::EBACC, Protocol::PS_EBCNF,
                                             Protocol::TS_EBCNF};

struct NetworkConfig {
    double width = 0.01;  // m
    double height = 0.01; // m
    Point nc{0.011, 0.005};
    std::size_t node_count = 100;
};

struct EnergyConfig {
    double initial = 20e-6;            // E_init, J
    double death_threshold = 1.4e-13;  // delta, J
    double phi = 22e-9;                // J per received packet
    double t_bit = 1e-6;               // s
    double tx_power = 2e-4;            // W at the reference distance
    double reference_distance = 1e-3;  // m
};

struct HarvestConfig {
    double A = 6400.0;
    double B = 0.003;         // W
    double Ps = 1e-5;         // W
    double nc_power = 1000.0; // W
};

struct ClusteringConfig {
    double p = 0.1;
    double a = 0.2;
    double b = 0.2;
    double R0 = 2e-3; // m
};

struct FrameConfig {
    double duration = 0.1;         // s
    double wet_fraction = 0.1;     // share of the frame spent on WET
    double slot_per_packet = 1e-3; // s
    std::size_t control_bytes = 16;
    std::size_t packet_bytes = 128;
};

struct SwiptConfig {
    double tol = 1e-6;
    int max_iter = 100;
    double member_budget_fraction = 0.0; // share of stored energy a member adds to its WET harvest for SWIPT
    swipt::Spectrum spectrum = swipt::Spectrum::BandCenter;
};

struct RoutingConfig {
    double neighbor_range = 3e-3;    // m
    bool leach_direct = true;        // LEACH heads send straight to the NC
    double relay_min_fraction = 0.1; // heads below this share of E_init are not used as relays
};

struct SimConfig {
    NetworkConfig network;
    channel::ChannelParams channel;
    EnergyConfig energy;
    HarvestConfig harvest;
    ClusteringConfig clustering;
    FrameConfig frame;
    SwiptConfig swipt;
    RoutingConfig routing;
    Protocol protocol = Protocol::EBACC;
    double packet_interval = 0.1; // s
    int rounds = 3000;
    std::uint64_t seed = 1;
    bool record_events = false;

    std::vector<std::string> violations() const;
    void validate() const;
};

struct PacketRecord {
    NodeId origin = 0;
    int created_round = 0;
};

/// One standard-size packet on the air; after fusion it carries many records.
struct Bundle {
    std::vector<PacketRecord> packets;
};

enum class Role { Member, Head, Nc };

struct NodeState {
    NodeId id = 0;
    Point position;
    double residual = 0.0;
    double capacity = 0.0;
    bool alive = true;
    Role role = Role::Member;
    std::deque<Bundle> pending;
    std::optional<int> last_head_round;
    std::optional<int> death_round;
};

enum class EventKind { Death, Delivery, PacketLost };

struct Event {
    int round = 0;
    EventKind kind = EventKind::Death;
    NodeId node = 0;
    int created_round = 0; // Delivery / PacketLost only
};

struct SimState {
    std::vector<NodeState> nodes;
    Rng election_rng{0};
    std::uint64_t swipt_invocations = 0;
    std::uint64_t packets_lost = 0;
    std::vector<Event> events;
};

struct SimTrace {
    std::vector<metrics::RoundMetrics> rounds;
    std::vector<NodeState> final_nodes;
    std::vector<Event> events;
    std::uint64_t swipt_invocations = 0;
    std::uint64_t packets_lost = 0;
    double initial_energy_total = 0.0;
    double horizon_s = 0.0; // configured rounds x frame duration
};

/// Uniform deployment from the seed; every node starts full.
std::vector<NodeState> deploy(const SimConfig &config);

SimState initial_state(const SimConfig &config);

/// Packets a live node generates in round r with one packet per interval.
std::uint64_t packets_in_round(int round, double frame_duration, double interval);

/// Transmit energy of one packet over a hop of length d with link-adaptive PSD.
double hop_tx_energy(double d, const SimConfig &config);

/// Greedy geographic next hop for every head: the head or NC within range
/// that is nearest the NC and strictly closer than the sender; the NC when
/// nothing qualifies. Heads below routing.relay_min_fraction of E_init are
/// skipped. Returns nullopt for the NC.
std::vector<std::optional<NodeId>> next_hops(const std::vector<NodeState> &nodes,
                                             const clustering::ClusterPartition &partition,
                                             const SimConfig &config);

metrics::RoundMetrics run_round(SimState &state, const SimConfig &config, int round);

SimTrace run_simulation(const SimConfig &config);

} // namespace thznet
