// SPDX-License-Identifier: Apache-2.0
#include "thznet/frame.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace thznet::frame {

double FrameSchedule::end() const
{
    if (cluster_slots.empty())
        return t_wet;
    const auto &last = cluster_slots.back();
    return last.start + last.duration;
}

RequestTable collect_slot_requests(const clustering::ClusterPartition &partition,
                                   const std::map<NodeId, std::size_t> &pending, std::span<const Point> positions,
                                   std::size_t control_packet_bytes)
{
    auto amount_of = [&](NodeId id) {
        const auto it = pending.find(id);
        return it == pending.end() ? std::size_t{0} : it->second;
    };

    RequestTable table;
    for (const auto &cluster : partition.clusters) {
        ClusterRequest req;
        req.head = cluster.head;
        req.head_amount = amount_of(cluster.head);
        for (auto id : cluster.members) {
            const std::size_t amount = amount_of(id);
            req.members.push_back({id, positions[id], amount});
            req.member_total += amount;
            table.control_messages += 2; // RTS + CTS
        }
        table.control_messages += 2; // CH RTS to NC + CTS
        table.clusters.push_back(std::move(req));
    }
    std::sort(table.clusters.begin(), table.clusters.end(),
              [](const ClusterRequest &a, const ClusterRequest &b) { return a.head < b.head; });
    table.control_bytes = table.control_messages * control_packet_bytes;
    return table;
}

FrameSchedule allocate_slots(const RequestTable &requests, const FrameParams &params)
{
    FrameSchedule schedule;
    schedule.t_wet = params.t_wet;
    schedule.control_bytes = requests.control_bytes;

    double clock = params.t_wet;
    for (const auto &req : requests.clusters) {
        if (req.total() == 0)
            continue;
        ClusterSlot slot;
        slot.head = req.head;
        slot.start = clock;
        slot.duration = params.slot_per_packet * static_cast<double>(req.total());
        slot.member_window = params.slot_per_packet * static_cast<double>(req.member_total);

        auto &members = schedule.member_slots[req.head];
        double t = clock;
        for (const auto &m : req.members) {
            if (m.amount == 0)
                continue;
            const double d = params.slot_per_packet * static_cast<double>(m.amount);
            members.push_back({m.node, t, d});
            t += d;
        }
        clock += slot.duration;
        schedule.cluster_slots.push_back(slot);
    }
    return schedule;
}

std::vector<double> wet_phase(std::span<const WetTarget> nodes, Point nc, double nc_power, double t_wet,
                              const channel::ChannelParams &channel, const energy::HarvestParams &harvest,
                              double capacity)
{
    std::vector<double> gained(nodes.size(), 0.0);
    const double f = channel.band_center();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto &n = nodes[i];
        if (!n.alive)
            continue;
        const double h2 = 1.0 / channel::path_loss(f, distance(n.position, nc), channel);
        const double e = energy::harvested_energy(1.0, h2, nc_power, t_wet, harvest);
        gained[i] = std::clamp(e, 0.0, std::max(0.0, capacity - n.residual));
    }
    return gained;
}

std::string dump_schedule(const FrameSchedule &schedule)
{
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-8s %14s %14s\n", "slot", "owner", "start_s", "duration_s");
    out << line;
    std::snprintf(line, sizeof line, "%-10s %-8s %14.6e %14.6e\n", "WET", "NC", 0.0, schedule.t_wet);
    out << line;
    for (const auto &c : schedule.cluster_slots) {
        std::snprintf(line, sizeof line, "%-10s %-8u %14.6e %14.6e\n", "T_cc", c.head, c.start, c.duration);
        out << line;
        const auto it = schedule.member_slots.find(c.head);
        if (it == schedule.member_slots.end())
            continue;
        for (const auto &m : it->second) {
            std::snprintf(line, sizeof line, "  %-8s %-8u %14.6e %14.6e\n", "T_sc", m.node, m.start, m.duration);
            out << line;
        }
    }
    out << "control_bytes " << schedule.control_bytes << "\ndata_bytes " << schedule.data_bytes << '\n';
    return out.str();
}

} // namespace thznet::frame
