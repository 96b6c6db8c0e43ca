// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations for tests. They are written from the model
// equations directly, in long double where it matters, and share no code
// with the library beyond plain data types and the seeded Rng.
#pragma once

#include "thznet/clustering.hpp"
#include "thznet/geometry.hpp"
#include "thznet/rng.hpp"
#include "thznet/swipt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

inline long double spreading(long double f, long double d, long double c = 3e8L)
{
    const long double x = 4.0L * kPi * f * d / c;
    return x * x;
}

inline long double absorption(long double k, long double d)
{
    return std::exp(k * d);
}

inline long double noise(long double k, long double d, long double T0, long double KB = 1.380649e-23L)
{
    return KB * T0 * (1.0L - std::exp(-k * d));
}

inline long double loss_noise(const thznet::channel::ChannelParams &p, long double f, long double d)
{
    return spreading(f, d, p.c) * absorption(p.k_abs, d) * noise(p.k_abs, d, p.T0, p.KB);
}

/// Per-subchannel summation with a flat PSD over the band.
inline long double capacity(const thznet::channel::ChannelParams &p, long double d, long double psd)
{
    const long double width = static_cast<long double>(p.f_high) - p.f_low;
    const int n = static_cast<int>(std::lround(width / p.delta_f));
    long double sum = 0.0L;
    for (int i = 0; i < n; ++i) {
        const long double f = p.f_low + (i + 0.5L) * p.delta_f;
        sum += p.delta_f * std::log2(1.0L + psd / loss_noise(p, f, d));
    }
    return sum;
}

/// Band-centre slot rate: (1/T) log2(1 + E / (PL N)).
inline long double slot_rate(const thznet::channel::ChannelParams &p, long double energy, long double d,
                             long double slot)
{
    if (energy <= 0.0L)
        return 0.0L;
    const long double fc = 0.5L * (static_cast<long double>(p.f_low) + p.f_high);
    return std::log2(1.0L + energy / loss_noise(p, fc, d)) / slot;
}

/// Max over a single shared coefficient c in {0, step, ..., 1} of
/// min(member rates at c, CH rate with the freed member energy).
inline long double shared_coefficient_grid(const thznet::swipt::ClusterLinkState &s,
                                           const thznet::channel::ChannelParams &p, thznet::swipt::Mechanism mech,
                                           long double step = 1e-3L)
{
    const int n = static_cast<int>(std::lround(1.0L / step));
    long double best = 0.0L;
    for (int k = 0; k <= n; ++k) {
        const long double c = k * step;
        long double rate = 1e300L;
        long double freed = 0.0L;
        bool any = false;
        for (const auto &m : s.members) {
            const long double e = static_cast<long double>(m.residual) + m.harvested - m.consumption;
            if (e <= 0.0L)
                continue;
            any = true;
            freed += (1.0L - c) * e;
            const long double r = mech == thznet::swipt::Mechanism::PS ? slot_rate(p, c * e, m.distance, s.t_sc)
                                                                       : c * slot_rate(p, e, m.distance, s.t_sc);
            rate = std::min(rate, r);
        }
        const long double ch_e = static_cast<long double>(s.ch_residual) + s.ch_harvested + freed - s.ch_consumption;
        rate = std::min(rate, slot_rate(p, ch_e, s.d_p, s.t_cc));
        best = std::max(best, rate);
        if (!any)
            break;
    }
    return best;
}

struct Election {
    std::map<thznet::NodeId, std::vector<thznet::NodeId>> clusters; // head -> sorted members
};

/// Brute-force EBACC: replay the draws, rank candidates by (energy desc, id
/// asc), accept greedily when no accepted head lies within max(R_a, R_b),
/// draft the richest node if nobody was accepted, join nearest heads.
inline Election ebacc(std::span<const thznet::clustering::CandidateState> nodes, thznet::Rng rng,
                      const thznet::clustering::ElectionParams &prm, int round)
{
    using thznet::distance;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].alive)
            live.push_back(i);
    std::sort(live.begin(), live.end(), [&](auto a, auto b) { return nodes[a].node_id < nodes[b].node_id; });

    double d_min = 1e300, d_max = 0.0;
    for (auto i : live) {
        d_min = std::min(d_min, distance(nodes[i].position, prm.nc));
        d_max = std::max(d_max, distance(nodes[i].position, prm.nc));
    }
    const int period = static_cast<int>(std::ceil(1.0 / prm.p - 1e-12));
    const double denom = 1.0 - prm.p * (round % period);
    const double leach = denom > 0.0 ? std::min(1.0, prm.p / denom) : 1.0;

    struct Cand {
        std::size_t idx;
        double radius;
    };
    std::vector<Cand> cands;
    for (auto i : live) {
        const double d = distance(nodes[i].position, prm.nc);
        const double near = d_max > d_min ? (d_max - d) / (d_max - d_min) : 0.0;
        const double t = leach * (d_max > d_min ? near : 1.0);
        const double rho = rng.uniform();
        if (rho < t) {
            double r = (1.0 - prm.a * near - prm.b * (prm.e_max - nodes[i].residual) / prm.e_max) * prm.R0;
            cands.push_back({i, std::clamp(r, 0.0, prm.R0)});
        }
    }
    std::sort(cands.begin(), cands.end(), [&](const Cand &x, const Cand &y) {
        const auto &a = nodes[x.idx];
        const auto &b = nodes[y.idx];
        return a.residual != b.residual ? a.residual > b.residual : a.node_id < b.node_id;
    });
    std::vector<Cand> heads;
    for (const auto &c : cands) {
        bool clear = true;
        for (const auto &h : heads)
            if (distance(nodes[c.idx].position, nodes[h.idx].position) < std::max(c.radius, h.radius))
                clear = false;
        if (clear)
            heads.push_back(c);
    }
    if (heads.empty()) {
        std::size_t best = live.front();
        for (auto i : live)
            if (nodes[i].residual > nodes[best].residual)
                best = i;
        heads.push_back({best, 0.0});
    }

    Election out;
    std::vector<std::size_t> head_idx;
    for (const auto &h : heads) {
        out.clusters[nodes[h.idx].node_id];
        head_idx.push_back(h.idx);
    }
    std::sort(head_idx.begin(), head_idx.end(), [&](auto a, auto b) { return nodes[a].node_id < nodes[b].node_id; });
    for (auto i : live) {
        if (out.clusters.count(nodes[i].node_id))
            continue;
        std::size_t pick = head_idx.front();
        for (auto h : head_idx)
            if (distance(nodes[i].position, nodes[h].position) < distance(nodes[i].position, nodes[pick].position))
                pick = h;
        out.clusters[nodes[pick].node_id].push_back(nodes[i].node_id);
    }
    for (auto &[h, m] : out.clusters)
        std::sort(m.begin(), m.end());
    return out;
}

inline Election from_partition(const thznet::clustering::ClusterPartition &p)
{
    Election e;
    for (const auto &c : p.clusters) {
        auto m = c.members;
        std::sort(m.begin(), m.end());
        e.clusters[c.head] = m;
    }
    return e;
}

} // namespace oracle
