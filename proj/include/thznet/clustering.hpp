// SPDX-License-Identifier: Apache-2.0
//
// Cluster-head election: the energy/distance-weighted competition scheme
// (EBACC) and the LEACH baseline. Both produce a ClusterPartition plus an
// ordered control-message trace used for overhead accounting.
#pragma once

#include "thznet/geometry.hpp"
#include "thznet/rng.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

namespace thznet::clustering {

enum class Status { Sleeping, Candidate, Head, Member, Withdrawn };

struct CandidateState {
    NodeId node_id = 0;
    Point position;
    double residual = 0.0;           // e_i, J
    double competition_radius = 0.0; // R_a, m
    std::set<NodeId> neighbor_chs;   // S_CH
    Status status = Status::Sleeping;
    bool alive = true;
    std::optional<int> last_head_round; // LEACH rotation memory
};

struct Cluster {
    NodeId head = 0;
    std::vector<NodeId> members;
};

struct ClusterPartition {
    std::vector<Cluster> clusters; // ascending head id
    std::vector<NodeId> unattached;
    int round = 0;
};

enum class MessageKind { CompeteHead, GiveUp, NoMoreCh, ChAdv, JoinCluster };

const char *to_string(MessageKind kind);

struct ControlMessage {
    MessageKind kind;
    NodeId sender;
    std::size_t bytes;
};

struct ElectionResult {
    ClusterPartition partition;
    std::vector<ControlMessage> trace;
    std::size_t control_bytes() const;
    std::size_t count(MessageKind kind) const;
};

struct ElectionParams {
    double p = 0.1;       // desired head fraction
    double a = 0.2;       // distance weight in the competition radius
    double b = 0.2;       // energy weight in the competition radius
    double R0 = 2e-3;     // maximum competition radius, m
    double e_max = 0.0;   // battery capacity, J
    Point nc{0.011, 0.005};
    std::size_t message_bytes = 16;
};

class EmptyNetwork : public std::runtime_error {
public:
    EmptyNetwork() : std::runtime_error("election requires at least one live node") {}
};

/// ceil(1/p): the rotation period shared by both thresholds.
int rotation_period(double p);

/// p / (1 - p (r mod ceil(1/p))), clamped to [0,1].
double leach_threshold(double p, int round);

/// Rotation threshold scaled by (d_max - d_nc) / (d_max - d_min), clamped to
/// [0,1]; the distance factor is 1 when d_max == d_min.
double candidate_threshold(int round, double p, double d_max, double d_min, double d_nc);

/// (1 - a (d_max - d_nc)/(d_max - d_min) - b (e_max - e_i)/e_max) R0, clamped to [0, R0].
double competition_radius(double d_max, double d_min, double d_nc, double e_i, double e_max, double a, double b,
                          double R0);

/// One uniform draw per live node in ascending id order, then candidates
/// compete by residual energy (ties to the lower id) inside
/// d(a,b) < max(R_a, R_b); winners advertise and every other live node
/// joins its nearest head.
ElectionResult ebacc_elect(std::span<CandidateState> nodes, Rng &rng, const ElectionParams &params, int round);

/// Classic LEACH with epoch rotation: a node that already led in the current
/// epoch of ceil(1/p) rounds is ineligible.
ElectionResult leach_elect(std::span<CandidateState> nodes, Rng &rng, double p, int round,
                           std::size_t message_bytes = 16);

/// Distances from each live node to the NC: {min, max}.
std::pair<double, double> nc_distance_range(std::span<const CandidateState> nodes, Point nc);

} // namespace thznet::clustering
