// SPDX-License-Identifier: Apache-2.0
#include "thznet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace thznet {

namespace {

constexpr std::uint64_t kElectionStream = 0x9E3779B97F4A7C15ULL;

// Energy book for one round. Debits and credits are recorded as the exact
// change in the residual so the audit identity holds to rounding.
class Ledger {
public:
    Ledger(SimState &state, const SimConfig &config, int round) : state_(state), config_(config), round_(round) {}

    /// Pays `amount` from `n`. A debit larger than the residual drains the
    /// node, kills it and reports failure.
    bool debit(NodeState &n, double amount)
    {
        if (!n.alive)
            return false;
        if (amount <= 0.0)
            return true;
        const double before = n.residual;
        if (amount > before) {
            n.residual = 0.0;
            debited_ += before;
            kill(n);
            return false;
        }
        n.residual = before - amount;
        debited_ += before - n.residual;
        if (n.residual <= config_.energy.death_threshold)
            kill(n);
        return true;
    }

    /// Adds up to `amount`, never above capacity. Returns what was added.
    double credit(NodeState &n, double amount)
    {
        if (!n.alive || amount <= 0.0)
            return 0.0;
        const double before = n.residual;
        n.residual = std::min(n.capacity, before + amount);
        credited_ += n.residual - before;
        return n.residual - before;
    }

    void kill(NodeState &n)
    {
        if (!n.alive)
            return;
        n.alive = false;
        n.death_round = round_;
        if (config_.record_events)
            state_.events.push_back({round_, EventKind::Death, n.id, 0});
        for (const auto &b : n.pending)
            lose(b);
        n.pending.clear();
    }

    void lose(const Bundle &b)
    {
        state_.packets_lost += b.packets.size();
        if (config_.record_events)
            for (const auto &p : b.packets)
                state_.events.push_back({round_, EventKind::PacketLost, p.origin, p.created_round});
    }

    double debited() const { return static_cast<double>(debited_); }
    double credited() const { return static_cast<double>(credited_); }

private:
    SimState &state_;
    const SimConfig &config_;
    int round_;
    long double debited_ = 0.0L;
    long double credited_ = 0.0L;
};

double loss_noise(double d, const channel::ChannelParams &ch)
{
    return channel::loss_noise_product(ch.band_center(), d, ch);
}

} // namespace

const char *to_string(Protocol p)
{
    switch (p) {
    case Protocol::LEACH: return "LEACH";
    case Protocol::EBACC: return "EBACC";
    case Protocol::PS_EBCNF: return "PS-EBCNF";
    case Protocol::TS_EBCNF: return "TS-EBCNF";
    }
    return "?";
}

std::optional<Protocol> parse_protocol(std::string_view s)
{
    for (auto p : kAllProtocols)
        if (s == to_string(p))
            return p;
    return std::nullopt;
}

bool harvests(Protocol p)
{
    return p == Protocol::PS_EBCNF || p == Protocol::TS_EBCNF;
}

std::vector<std::string> SimConfig::violations() const
{
    std::vector<std::string> out = channel.violations();
    auto require = [&](bool ok, const char *msg) {
        if (!ok)
            out.emplace_back(msg);
    };
    require(network.node_count >= 1, "network.node_count must be >= 1");
    require(network.width > 0.0, "network.width must be > 0");
    require(network.height > 0.0, "network.height must be > 0");
    require(packet_interval > 0.0, "traffic.packet_interval must be > 0");
    require(rounds >= 0, "sim.rounds must be >= 0");
    require(energy.initial > 0.0, "energy.initial must be > 0");
    require(energy.death_threshold >= 0.0 && energy.death_threshold < energy.initial,
            "energy.death_threshold must lie in [0, energy.initial)");
    require(energy.phi >= 0.0, "energy.phi must be >= 0");
    require(energy.t_bit >= 0.0, "energy.t_bit must be >= 0");
    require(energy.tx_power >= 0.0, "energy.tx_power must be >= 0");
    require(energy.reference_distance > 0.0, "energy.reference_distance must be > 0");
    require(harvest.A > 0.0, "harvest.a must be > 0");
    require(harvest.B > 0.0, "harvest.b must be > 0");
    require(harvest.Ps > 0.0, "harvest.ps must be > 0");
    require(harvest.nc_power >= 0.0, "harvest.nc_power must be >= 0");
    require(clustering.p > 0.0 && clustering.p < 1.0, "clustering.p must lie in (0,1)");
    require(clustering.a >= 0.0 && clustering.a <= 1.0, "clustering.a must lie in [0,1]");
    require(clustering.b >= 0.0 && clustering.b <= 1.0, "clustering.b must lie in [0,1]");
    require(clustering.R0 > 0.0, "clustering.r0 must be > 0");
    require(frame.duration > 0.0, "frame.duration must be > 0");
    require(frame.wet_fraction > 0.0 && frame.wet_fraction < 1.0, "frame.wet_fraction must lie in (0,1)");
    require(frame.slot_per_packet > 0.0, "frame.slot_per_packet must be > 0");
    require(frame.control_bytes > 0, "frame.control_bytes must be > 0");
    require(frame.packet_bytes > 0, "traffic.packet_bytes must be > 0");
    require(swipt.tol > 0.0, "swipt.tol must be > 0");
    require(swipt.max_iter >= 1, "swipt.max_iter must be >= 1");
    require(swipt.member_budget_fraction >= 0.0 && swipt.member_budget_fraction <= 1.0,
            "swipt.member_budget_fraction must lie in [0,1]");
    require(routing.neighbor_range > 0.0, "routing.neighbor_range must be > 0");
    require(routing.relay_min_fraction >= 0.0 && routing.relay_min_fraction <= 1.0,
            "routing.relay_min_fraction must be in [0, 1]");
    return out;
}

void SimConfig::validate() const
{
    const auto v = violations();
    if (v.empty())
        return;
    std::string msg = "invalid configuration:";
    for (const auto &s : v)
        msg += "\n  " + s;
    throw std::invalid_argument(msg);
}

std::vector<NodeState> deploy(const SimConfig &config)
{
    Rng rng(config.seed);
    std::vector<NodeState> nodes(config.network.node_count);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto &n = nodes[i];
        n.id = static_cast<NodeId>(i);
        n.position.x = rng.uniform(0.0, config.network.width);
        n.position.y = rng.uniform(0.0, config.network.height);
        n.capacity = config.energy.initial;
        n.residual = config.energy.initial;
    }
    return nodes;
}

SimState initial_state(const SimConfig &config)
{
    config.validate();
    SimState s;
    s.nodes = deploy(config);
    s.election_rng = Rng(config.seed ^ kElectionStream);
    return s;
}

std::uint64_t packets_in_round(int round, double frame_duration, double interval)
{
    auto upto = [&](int r) {
        return static_cast<std::uint64_t>(std::floor(static_cast<double>(r) * frame_duration / interval + 1e-9));
    };
    return upto(round + 1) - upto(round);
}

double hop_tx_energy(double d, const SimConfig &config)
{
    const auto &ch = config.channel;
    const double reference = loss_noise(config.energy.reference_distance, ch);
    const double scale = d > config.energy.reference_distance ? loss_noise(d, ch) / reference : 1.0;
    energy::ConsumptionParams params;
    params.bits_per_packet = 8.0 * static_cast<double>(config.frame.packet_bytes);
    params.psd = config.energy.tx_power / ch.bandwidth() * scale;
    params.delta_f = ch.delta_f;
    params.t_bit = config.energy.t_bit;
    params.phi = config.energy.phi;
    return energy::tx_energy(params);
}

std::vector<std::optional<NodeId>> next_hops(const std::vector<NodeState> &nodes,
                                             const clustering::ClusterPartition &partition, const SimConfig &config)
{
    const Point nc = config.network.nc;
    const bool direct = config.protocol == Protocol::LEACH && config.routing.leach_direct;
    std::vector<std::optional<NodeId>> hops;
    for (const auto &c : partition.clusters) {
        const Point here = nodes[c.head].position;
        const double own = distance(here, nc);
        std::optional<NodeId> best;
        if (!direct && own > config.routing.neighbor_range) {
            double best_d = own;
            for (const auto &other : partition.clusters) {
                if (other.head == c.head)
                    continue;
                const Point there = nodes[other.head].position;
                const double to_nc = distance(there, nc);
                if (to_nc < best_d && distance(here, there) <= config.routing.neighbor_range &&
                    nodes[other.head].residual >= config.routing.relay_min_fraction * config.energy.initial) {
                    best_d = to_nc;
                    best = other.head;
                }
            }
        }
        hops.push_back(best);
    }
    return hops;
}

metrics::RoundMetrics run_round(SimState &state, const SimConfig &config, int round)
{
    auto &nodes = state.nodes;
    const double e_init = config.energy.initial;
    const std::size_t n = nodes.size();
    metrics::RoundMetrics m;
    m.round = round;

    Ledger ledger(state, config, round);
    std::uint64_t control = 0;
    std::uint64_t data = 0;
    const std::uint64_t packet_bytes = config.frame.packet_bytes;
    const std::uint64_t bits_per_packet = 8 * packet_bytes;

    auto finish = [&] {
        double total = 0.0;
        for (auto &node : nodes)
            if (node.alive && node.residual <= config.energy.death_threshold)
                ledger.kill(node);
        for (const auto &node : nodes) {
            total += node.residual;
            if (!node.alive)
                ++m.dead_count;
        }
        m.residual_total = total;
        m.avg_residual_fraction = total / (static_cast<double>(n) * e_init);
        m.control_bytes = control;
        m.total_bytes = control + data;
        m.delivered_bits = m.packets_delivered * bits_per_packet;
        m.energy_debited = ledger.debited();
        m.energy_credited = ledger.credited();
        return m;
    };

    const bool any_alive = std::any_of(nodes.begin(), nodes.end(), [](const NodeState &x) { return x.alive; });
    if (!any_alive)
        return finish();

    // (1) traffic
    const std::uint64_t fresh = packets_in_round(round, config.frame.duration, config.packet_interval);
    for (auto &node : nodes) {
        node.role = Role::Member;
        if (!node.alive)
            continue;
        for (std::uint64_t k = 0; k < fresh; ++k)
            node.pending.push_back(Bundle{{PacketRecord{node.id, round}}});
        m.packets_generated += fresh;
    }

    // (2) election
    std::vector<clustering::CandidateState> candidates(n);
    for (std::size_t i = 0; i < n; ++i) {
        candidates[i].node_id = nodes[i].id;
        candidates[i].position = nodes[i].position;
        candidates[i].residual = nodes[i].residual;
        candidates[i].alive = nodes[i].alive;
        candidates[i].last_head_round = nodes[i].last_head_round;
    }
    clustering::ElectionResult election;
    if (config.protocol == Protocol::LEACH) {
        election = clustering::leach_elect(candidates, state.election_rng, config.clustering.p, round,
                                           config.frame.control_bytes);
    } else {
        clustering::ElectionParams ep;
        ep.p = config.clustering.p;
        ep.a = config.clustering.a;
        ep.b = config.clustering.b;
        ep.R0 = config.clustering.R0;
        ep.e_max = e_init;
        ep.nc = config.network.nc;
        ep.message_bytes = config.frame.control_bytes;
        election = clustering::ebacc_elect(candidates, state.election_rng, ep, round);
    }
    control += election.control_bytes();
    for (std::size_t i = 0; i < n; ++i)
        nodes[i].last_head_round = candidates[i].last_head_round;
    const auto &partition = election.partition;
    for (const auto &c : partition.clusters)
        nodes[c.head].role = Role::Head;

    // (3) frame: WET, wake-up code, slot application and allocation
    const double t_wet = config.frame.wet_fraction * config.frame.duration;
    std::vector<double> harvested(n, 0.0);
    if (harvests(config.protocol)) {
        std::vector<frame::WetTarget> targets(n);
        for (std::size_t i = 0; i < n; ++i)
            targets[i] = {nodes[i].position, nodes[i].residual, nodes[i].alive};
        const energy::HarvestParams hp(config.harvest.A, config.harvest.B, config.harvest.Ps);
        const auto gained =
            frame::wet_phase(targets, config.network.nc, config.harvest.nc_power, t_wet, config.channel, hp, e_init);
        for (std::size_t i = 0; i < n; ++i) {
            harvested[i] = nodes[i].alive ? energy::harvested_energy(
                                                1.0, 1.0 / channel::path_loss(config.channel.band_center(),
                                                                              distance(nodes[i].position,
                                                                                       config.network.nc),
                                                                              config.channel),
                                                config.harvest.nc_power, t_wet, hp)
                                          : 0.0;
            ledger.credit(nodes[i], gained[i]);
        }
    }
    control += config.frame.control_bytes; // wake-up code

    std::map<NodeId, std::size_t> pending;
    std::vector<Point> positions(n);
    for (std::size_t i = 0; i < n; ++i) {
        positions[i] = nodes[i].position;
        if (nodes[i].alive)
            pending[nodes[i].id] = nodes[i].pending.size();
    }
    const auto requests = frame::collect_slot_requests(partition, pending, positions, config.frame.control_bytes);
    frame::FrameParams fp;
    fp.t_wet = t_wet;
    fp.slot_per_packet = config.frame.slot_per_packet;
    fp.control_bytes = config.frame.control_bytes;
    fp.data_bytes = config.frame.packet_bytes;
    const auto schedule = frame::allocate_slots(requests, fp);
    control += schedule.control_bytes;

    // (4)-(5) data phase, cluster windows in schedule order
    const auto hops = next_hops(nodes, partition, config);
    std::map<NodeId, std::optional<NodeId>> hop_of;
    for (std::size_t k = 0; k < partition.clusters.size(); ++k)
        hop_of[partition.clusters[k].head] = hops[k];

    const swipt::RateModel rate_model{config.channel, config.swipt.spectrum};
    const auto mechanism = config.protocol == Protocol::TS_EBCNF ? swipt::Mechanism::TS : swipt::Mechanism::PS;
    const double phi = config.energy.phi;

    for (const auto &slot : schedule.cluster_slots) {
        NodeState &head = nodes[slot.head];
        if (!head.alive)
            continue;
        const auto hop = hop_of.at(slot.head);
        const Point target = hop ? nodes[*hop].position : config.network.nc;
        const double d_p = std::max(distance(head.position, target), 1e-9);
        const double forward_cost = hop_tx_energy(d_p, config);

        const auto ms = schedule.member_slots.find(slot.head);
        static const std::vector<frame::MemberSlot> none;
        const auto &member_slots = ms == schedule.member_slots.end() ? none : ms->second;

        // SWIPT planning for the cluster
        std::map<NodeId, double> transfer;
        if (harvests(config.protocol) && !member_slots.empty()) {
            swipt::ClusterLinkState link;
            link.ch_id = head.id;
            link.ch_residual = head.residual;
            link.d_p = d_p;
            link.t_cc = slot.duration;
            link.t_wet = t_wet;
            link.t_sc = slot.member_window / static_cast<double>(member_slots.size());
            std::size_t incoming = 0;
            for (const auto &s : member_slots) {
                const NodeState &q = nodes[s.node];
                if (!q.alive)
                    continue;
                const double d = std::max(distance(q.position, head.position), 1e-9);
                const double cost = hop_tx_energy(d, config) * static_cast<double>(q.pending.size());
                link.members.push_back(
                    {q.id, config.swipt.member_budget_fraction * q.residual, cost, harvested[q.id], d});
                incoming += q.pending.size();
            }
            link.ch_consumption = phi * static_cast<double>(incoming) + forward_cost;
            const auto coeffs =
                swipt::optimize_coefficients(link, rate_model, mechanism, config.swipt.tol, config.swipt.max_iter);
            ++state.swipt_invocations;
            control += coeffs.per_member.size() * config.frame.control_bytes;

            double planned = 0.0;
            for (const auto &member : link.members) {
                const auto it = coeffs.per_member.find(member.id);
                if (it == coeffs.per_member.end())
                    continue;
                const double surplus = member.residual + member.harvested - member.consumption;
                transfer[member.id] = (1.0 - it->second) * std::max(0.0, surplus);
                planned += transfer[member.id];
            }
            const double headroom = std::max(0.0, head.capacity - head.residual + link.ch_consumption);
            if (planned > headroom && planned > 0.0)
                for (auto &[id, e] : transfer)
                    e *= headroom / planned;
        }

        std::vector<Bundle> received;
        for (const auto &s : member_slots) {
            if (!head.alive)
                break;
            NodeState &q = nodes[s.node];
            if (!q.alive)
                continue;
            const double cost = hop_tx_energy(std::max(distance(q.position, head.position), 1e-9), config);
            while (!q.pending.empty() && q.alive && head.alive) {
                // the head only admits what it can still afford to receive and forward
                if (head.residual - phi - forward_cost <= config.energy.death_threshold)
                    break;
                Bundle b = std::move(q.pending.front());
                q.pending.pop_front();
                if (!ledger.debit(q, cost)) {
                    ledger.lose(b);
                    break;
                }
                data += packet_bytes;
                if (!ledger.debit(head, phi)) {
                    ledger.lose(b);
                    break;
                }
                received.push_back(std::move(b));
            }
            if (const auto it = transfer.find(q.id); it != transfer.end() && q.alive && head.alive) {
                const double limit = std::min(q.residual - 2.0 * config.energy.death_threshold,
                                              head.capacity - head.residual);
                const double amount = std::min(it->second, limit);
                if (amount > 0.0) {
                    ledger.debit(q, amount);
                    ledger.credit(head, amount);
                }
            }
        }
        if (!head.alive) {
            for (const auto &b : received)
                ledger.lose(b);
            continue;
        }

        // fusion and forwarding
        Bundle fused;
        for (auto &b : head.pending)
            fused.packets.insert(fused.packets.end(), b.packets.begin(), b.packets.end());
        head.pending.clear();
        for (auto &b : received)
            fused.packets.insert(fused.packets.end(), b.packets.begin(), b.packets.end());
        if (fused.packets.empty())
            continue;
        if (!ledger.debit(head, forward_cost)) {
            ledger.lose(fused);
            continue;
        }
        data += packet_bytes;
        if (!hop) {
            m.packets_delivered += fused.packets.size();
            if (config.record_events)
                for (const auto &p : fused.packets)
                    state.events.push_back({round, EventKind::Delivery, p.origin, p.created_round});
            continue;
        }
        NodeState &relay = nodes[*hop];
        if (!ledger.debit(relay, phi)) {
            ledger.lose(fused);
            continue;
        }
        relay.pending.push_back(std::move(fused));
    }

    return finish();
}

SimTrace run_simulation(const SimConfig &config)
{
    SimState state = initial_state(config);
    SimTrace trace;
    trace.initial_energy_total = config.energy.initial * static_cast<double>(config.network.node_count);
    trace.horizon_s = static_cast<double>(config.rounds) * config.frame.duration;
    for (int r = 0; r < config.rounds; ++r) {
        trace.rounds.push_back(run_round(state, config, r));
        if (trace.rounds.back().dead_count == state.nodes.size())
            break;
    }
    trace.final_nodes = std::move(state.nodes);
    trace.events = std::move(state.events);
    trace.swipt_invocations = state.swipt_invocations;
    trace.packets_lost = state.packets_lost;
    return trace;
}

} // namespace thznet
