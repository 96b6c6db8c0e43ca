// SPDX-License-Identifier: Apache-2.0
#include "thznet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace thznet::clustering {

namespace {

std::vector<std::size_t> live_in_id_order(std::span<const CandidateState> nodes)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].alive)
            idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return nodes[a].node_id < nodes[b].node_id; });
    return idx;
}

// Higher residual wins; equal residual goes to the lower id.
bool outranks(const CandidateState &a, const CandidateState &b)
{
    if (a.residual != b.residual)
        return a.residual > b.residual;
    return a.node_id < b.node_id;
}

void draft_if_headless(std::span<CandidateState> nodes, const std::vector<std::size_t> &live)
{
    for (auto i : live)
        if (nodes[i].status == Status::Head)
            return;
    auto best = *std::min_element(live.begin(), live.end(),
                                  [&](auto a, auto b) { return outranks(nodes[a], nodes[b]); });
    nodes[best].status = Status::Head;
}

// CH_ADV from every head, nearest-head JOIN from everyone else.
ElectionResult form_clusters(std::span<CandidateState> nodes, const std::vector<std::size_t> &live, int round,
                             std::size_t message_bytes, std::vector<ControlMessage> trace)
{
    ElectionResult result;
    result.partition.round = round;

    std::vector<std::size_t> heads;
    for (auto i : live)
        if (nodes[i].status == Status::Head)
            heads.push_back(i);
    for (auto h : heads) {
        trace.push_back({MessageKind::ChAdv, nodes[h].node_id, message_bytes});
        result.partition.clusters.push_back({nodes[h].node_id, {}});
    }

    for (auto i : live) {
        if (nodes[i].status == Status::Head)
            continue;
        std::size_t chosen = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < heads.size(); ++k) {
            const double d = distance(nodes[i].position, nodes[heads[k]].position);
            if (d < best) {
                best = d;
                chosen = k;
            }
        }
        nodes[i].status = Status::Member;
        result.partition.clusters[chosen].members.push_back(nodes[i].node_id);
        trace.push_back({MessageKind::JoinCluster, nodes[i].node_id, message_bytes});
    }

    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!nodes[i].alive)
            result.partition.unattached.push_back(nodes[i].node_id);
    std::sort(result.partition.unattached.begin(), result.partition.unattached.end());
    for (auto &c : result.partition.clusters)
        std::sort(c.members.begin(), c.members.end());
    std::sort(result.partition.clusters.begin(), result.partition.clusters.end(),
              [](const Cluster &a, const Cluster &b) { return a.head < b.head; });
    result.trace = std::move(trace);
    return result;
}

} // namespace

const char *to_string(MessageKind kind)
{
    switch (kind) {
    case MessageKind::CompeteHead: return "COMPETE_HEAD_MSG";
    case MessageKind::GiveUp: return "GIVE_UP_MSG";
    case MessageKind::NoMoreCh: return "NOMORE_CH_MSG";
    case MessageKind::ChAdv: return "CH_ADV_MSG";
    case MessageKind::JoinCluster: return "JOIN_CLUSTER_MSG";
    }
    return "?";
}

std::size_t ElectionResult::control_bytes() const
{
    return std::accumulate(trace.begin(), trace.end(), std::size_t{0},
                           [](std::size_t s, const ControlMessage &m) { return s + m.bytes; });
}

std::size_t ElectionResult::count(MessageKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(trace.begin(), trace.end(), [&](const ControlMessage &m) { return m.kind == kind; }));
}

int rotation_period(double p)
{
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("head fraction p must lie in (0,1]");
    return static_cast<int>(std::ceil(1.0 / p - 1e-12));
}

double leach_threshold(double p, int round)
{
    const int period = rotation_period(p);
    const double denom = 1.0 - p * static_cast<double>(round % period);
    if (denom <= 0.0)
        return 1.0;
    return std::clamp(p / denom, 0.0, 1.0);
}

double candidate_threshold(int round, double p, double d_max, double d_min, double d_nc)
{
    const double span = d_max - d_min;
    const double factor = span > 0.0 ? std::clamp((d_max - d_nc) / span, 0.0, 1.0) : 1.0;
    return std::clamp(leach_threshold(p, round) * factor, 0.0, 1.0);
}

double competition_radius(double d_max, double d_min, double d_nc, double e_i, double e_max, double a, double b,
                          double R0)
{
    const double span = d_max - d_min;
    const double near_penalty = span > 0.0 ? (d_max - d_nc) / span : 0.0;
    const double energy_penalty = e_max > 0.0 ? (e_max - e_i) / e_max : 0.0;
    return std::clamp((1.0 - a * near_penalty - b * energy_penalty) * R0, 0.0, R0);
}

std::pair<double, double> nc_distance_range(std::span<const CandidateState> nodes, Point nc)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto &n : nodes) {
        if (!n.alive)
            continue;
        const double d = distance(n.position, nc);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

ElectionResult ebacc_elect(std::span<CandidateState> nodes, Rng &rng, const ElectionParams &params, int round)
{
    const auto live = live_in_id_order(nodes);
    if (live.empty())
        throw EmptyNetwork();
    const auto [d_min, d_max] = nc_distance_range(nodes, params.nc);

    std::vector<ControlMessage> trace;
    std::vector<std::size_t> candidates;
    for (auto i : live) {
        auto &n = nodes[i];
        n.neighbor_chs.clear();
        n.competition_radius = 0.0;
        const double d_nc = distance(n.position, params.nc);
        const double rho = rng.uniform();
        if (rho < candidate_threshold(round, params.p, d_max, d_min, d_nc)) {
            n.status = Status::Candidate;
            n.competition_radius =
                competition_radius(d_max, d_min, d_nc, n.residual, params.e_max, params.a, params.b, params.R0);
            candidates.push_back(i);
            trace.push_back({MessageKind::CompeteHead, n.node_id, params.message_bytes});
        } else {
            n.status = Status::Sleeping;
        }
    }

    for (auto i : candidates)
        for (auto j : candidates) {
            if (i == j)
                continue;
            const double reach = std::max(nodes[i].competition_radius, nodes[j].competition_radius);
            if (distance(nodes[i].position, nodes[j].position) < reach)
                nodes[i].neighbor_chs.insert(nodes[j].node_id);
        }

    std::vector<std::size_t> index_of_id;
    for (auto i : candidates) {
        if (nodes[i].node_id >= index_of_id.size())
            index_of_id.resize(nodes[i].node_id + 1, nodes.size());
        index_of_id[nodes[i].node_id] = i;
    }

    // Synchronous exchange: a candidate that outranks every remaining
    // neighbour claims headship (GIVE_UP_MSG); its neighbours answer with
    // NOMORE_CH_MSG and drop out, and everyone else prunes them from S_CH.
    std::vector<std::size_t> undecided = candidates;
    while (!undecided.empty()) {
        std::vector<std::size_t> winners;
        for (auto i : undecided) {
            bool top = true;
            for (auto id : nodes[i].neighbor_chs)
                if (outranks(nodes[index_of_id[id]], nodes[i])) {
                    top = false;
                    break;
                }
            if (top)
                winners.push_back(i);
        }
        std::vector<std::size_t> withdrawn;
        for (auto w : winners) {
            nodes[w].status = Status::Head;
            trace.push_back({MessageKind::GiveUp, nodes[w].node_id, params.message_bytes});
            for (auto id : nodes[w].neighbor_chs) {
                auto &loser = nodes[index_of_id[id]];
                if (loser.status == Status::Candidate) {
                    loser.status = Status::Withdrawn;
                    withdrawn.push_back(index_of_id[id]);
                    trace.push_back({MessageKind::NoMoreCh, loser.node_id, params.message_bytes});
                }
            }
        }
        for (auto i : candidates)
            for (auto w : withdrawn)
                nodes[i].neighbor_chs.erase(nodes[w].node_id);
        std::erase_if(undecided, [&](auto i) { return nodes[i].status != Status::Candidate; });
    }

    draft_if_headless(nodes, live);
    return form_clusters(nodes, live, round, params.message_bytes, std::move(trace));
}

ElectionResult leach_elect(std::span<CandidateState> nodes, Rng &rng, double p, int round,
                           std::size_t message_bytes)
{
    const auto live = live_in_id_order(nodes);
    if (live.empty())
        throw EmptyNetwork();
    const int period = rotation_period(p);
    const double threshold = leach_threshold(p, round);

    for (auto i : live) {
        auto &n = nodes[i];
        n.neighbor_chs.clear();
        n.competition_radius = 0.0;
        const double rho = rng.uniform();
        const bool eligible = !n.last_head_round || *n.last_head_round / period < round / period;
        n.status = eligible && rho < threshold ? Status::Head : Status::Sleeping;
    }
    draft_if_headless(nodes, live);
    for (auto i : live)
        if (nodes[i].status == Status::Head)
            nodes[i].last_head_round = round;
    return form_clusters(nodes, live, round, message_bytes, {});
}

} // namespace thznet::clustering
