// SPDX-License-Identifier: Apache-2.0
//
// Frame construction: WET slot, RTS/CTS slot application and the two-stage
// TDMA allocation (cluster windows from the NC, member slots from each CH).
#pragma once

#include "thznet/channel.hpp"
#include "thznet/clustering.hpp"
#include "thznet/energy.hpp"
#include "thznet/geometry.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace thznet::frame {

struct FrameParams {
    double t_wet = 0.01;             // s
    double slot_per_packet = 1e-3;   // s
    std::size_t control_bytes = 16;  // per RTS/CTS/etc.
    std::size_t data_bytes = 128;    // per data packet
};

struct SlotRequest {
    NodeId node = 0;
    Point position;
    std::size_t amount = 0; // packets
};

struct ClusterRequest {
    NodeId head = 0;
    std::size_t head_amount = 0;
    std::vector<SlotRequest> members;
    std::size_t member_total = 0;
    std::size_t total() const { return member_total + head_amount; }
};

struct RequestTable {
    std::vector<ClusterRequest> clusters; // ascending head id
    std::size_t control_messages = 0;
    std::size_t control_bytes = 0;
};

struct MemberSlot {
    NodeId node = 0;
    double start = 0.0;
    double duration = 0.0;
};

struct ClusterSlot {
    NodeId head = 0;
    double start = 0.0;
    double duration = 0.0;      // T_cc, the whole cluster window
    double member_window = 0.0; // leading part of the window used by member slots
};

struct FrameSchedule {
    double t_wet = 0.0;
    std::vector<ClusterSlot> cluster_slots;
    std::map<NodeId, std::vector<MemberSlot>> member_slots; // keyed by head id
    std::size_t control_bytes = 0;
    std::size_t data_bytes = 0;

    double end() const;
};

/// Every member sends an RTS carrying (position, amount) and gets a CTS; each
/// CH then runs one RTS/CTS exchange with the NC for the cluster total.
RequestTable collect_slot_requests(const clustering::ClusterPartition &partition,
                                   const std::map<NodeId, std::size_t> &pending, std::span<const Point> positions,
                                   std::size_t control_packet_bytes);

/// Stage 1: cluster windows proportional to cluster totals, in ascending head
/// id. Stage 2: member slots proportional to each member's amount; members
/// and clusters with nothing to send get no slot.
FrameSchedule allocate_slots(const RequestTable &requests, const FrameParams &params);

struct WetTarget {
    Point position;
    double residual = 0.0;
    bool alive = true;
};

/// Energy credited to each target during the WET slot (rho = 1), never more
/// than the headroom below `capacity`. Dead targets get nothing.
std::vector<double> wet_phase(std::span<const WetTarget> nodes, Point nc, double nc_power, double t_wet,
                              const channel::ChannelParams &channel, const energy::HarvestParams &harvest,
                              double capacity);

/// Ordered slot table for debugging.
std::string dump_schedule(const FrameSchedule &schedule);

} // namespace thznet::frame
