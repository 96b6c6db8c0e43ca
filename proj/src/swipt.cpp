// SPDX-License-Identifier: Apache-2.0
#include "thznet/swipt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace thznet::swipt {

namespace {

double surplus(const MemberLink &m)
{
    return m.residual + m.harvested - m.consumption;
}

double ch_energy(const ClusterLinkState &state, double extra)
{
    return state.ch_residual + state.ch_harvested + extra - state.ch_consumption;
}

double ch_rate_or_zero(const ClusterLinkState &state, const RateModel &model, double extra)
{
    const double e = ch_energy(state, extra);
    return e > 0.0 ? slot_rate(e, state.d_p, state.t_cc, model) : 0.0;
}

// Smallest PS share alpha whose rate reaches `target`.
double invert_ps(double target, const MemberLink &m, const ClusterLinkState &state, const RateModel &model)
{
    const double e = surplus(m);
    if (target <= 0.0)
        return 0.0;
    if (model.spectrum == Spectrum::BandCenter) {
        const double ln = channel::loss_noise_product(model.channel.band_center(), m.distance, model.channel);
        return std::expm1(target * state.t_sc * std::numbers::ln2) * ln / e;
    }
    if (slot_rate(e, m.distance, state.t_sc, model) < target)
        return 1.0 + std::numeric_limits<double>::epsilon();
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (slot_rate(mid * e, m.distance, state.t_sc, model) >= target ? hi : lo) = mid;
    }
    return hi;
}

double invert(Mechanism mech, double target, const MemberLink &m, const ClusterLinkState &state,
              const RateModel &model)
{
    if (mech == Mechanism::PS)
        return invert_ps(target, m, state, model);
    const double full = slot_rate(surplus(m), m.distance, state.t_sc, model);
    return full > 0.0 ? target / full : 1.0;
}

} // namespace

const char *to_string(Mechanism m)
{
    return m == Mechanism::TS ? "TS" : "PS";
}

const MemberLink &ClusterLinkState::member(NodeId q) const
{
    for (const auto &m : members)
        if (m.id == q)
            return m;
    throw std::invalid_argument("node " + std::to_string(q) + " is not a member of cluster " + std::to_string(ch_id));
}

std::vector<std::string> ClusterLinkState::violations() const
{
    std::vector<std::string> out;
    auto non_negative = [&](double v, const char *what) {
        if (!(v >= 0.0))
            out.emplace_back(std::string(what) + " must be >= 0");
    };
    non_negative(ch_residual, "ch_residual");
    non_negative(ch_harvested, "ch_harvested");
    non_negative(ch_consumption, "ch_consumption");
    if (!(d_p > 0.0))
        out.emplace_back("d_p must be > 0");
    if (!(t_sc > 0.0) || !(t_cc > 0.0) || !(t_wet > 0.0))
        out.emplace_back("slot durations must be > 0");
    for (const auto &m : members) {
        if (m.id == ch_id)
            out.emplace_back("cluster head listed as its own member");
        non_negative(m.residual, "member residual");
        non_negative(m.consumption, "member consumption");
        non_negative(m.harvested, "member harvested");
        if (!(m.distance > 0.0))
            out.emplace_back("member distance must be > 0");
    }
    return out;
}

double slot_rate(double energy, double distance, double slot, const RateModel &model)
{
    if (!(slot > 0.0))
        throw std::domain_error("slot_rate: slot must be positive");
    if (energy < 0.0)
        throw EnergyDeficit("slot_rate: negative slot energy");
    if (energy == 0.0)
        return 0.0;
    const auto &ch = model.channel;
    if (model.spectrum == Spectrum::BandCenter)
        return std::log2(1.0 + energy / channel::loss_noise_product(ch.band_center(), distance, ch)) / slot;
    const std::size_t n = ch.subchannel_count();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += std::log2(1.0 + energy / channel::loss_noise_product(ch.subchannel_center(i), distance, ch));
    return sum / static_cast<double>(n) / slot;
}

double member_power(NodeId q, const ClusterLinkState &state)
{
    const double e = surplus(state.member(q));
    if (e < 0.0)
        throw EnergyDeficit("member " + std::to_string(q) + " cannot cover its consumption");
    return e / state.t_sc;
}

double member_rate_no_swipt(NodeId q, const ClusterLinkState &state, const RateModel &model)
{
    const double p = member_power(q, state);
    return slot_rate(state.t_sc * p, state.member(q).distance, state.t_sc, model);
}

double ch_rate(const ClusterLinkState &state, const RateModel &model, double extra_energy)
{
    const double e = ch_energy(state, extra_energy);
    if (e < 0.0)
        throw EnergyDeficit("cluster head " + std::to_string(state.ch_id) + " cannot cover its consumption");
    return slot_rate(e, state.d_p, state.t_cc, model);
}

double ts_member_rate(NodeId q, double beta_q, const ClusterLinkState &state, const RateModel &model)
{
    if (!(beta_q >= 0.0 && beta_q <= 1.0))
        throw std::domain_error("ts_member_rate: beta must lie in [0,1]");
    return beta_q * member_rate_no_swipt(q, state, model);
}

double ps_member_rate(NodeId q, double alpha_q, const ClusterLinkState &state, const RateModel &model)
{
    if (!(alpha_q >= 0.0 && alpha_q <= 1.0))
        throw std::domain_error("ps_member_rate: alpha must lie in [0,1]");
    const double p = member_power(q, state);
    return slot_rate(alpha_q * state.t_sc * p, state.member(q).distance, state.t_sc, model);
}

double member_rate(Mechanism m, NodeId q, double coef, const ClusterLinkState &state, const RateModel &model)
{
    return m == Mechanism::TS ? ts_member_rate(q, coef, state, model) : ps_member_rate(q, coef, state, model);
}

double ch_transfer_energy(const SwiptCoefficients &coeffs, const ClusterLinkState &state)
{
    double total = 0.0;
    for (const auto &[id, coef] : coeffs.per_member) {
        const double e = surplus(state.member(id));
        if (e > 0.0)
            total += (1.0 - coef) * e;
    }
    return total;
}

double cluster_rate_no_swipt(const ClusterLinkState &state, const RateModel &model)
{
    double rate = ch_rate(state, model, 0.0);
    for (const auto &m : state.members)
        if (surplus(m) >= 0.0)
            rate = std::min(rate, member_rate_no_swipt(m.id, state, model));
    return rate;
}

double swipt_rate(const SwiptCoefficients &coeffs, const ClusterLinkState &state, const RateModel &model)
{
    double rate = ch_rate_or_zero(state, model, ch_transfer_energy(coeffs, state));
    for (const auto &[id, coef] : coeffs.per_member)
        rate = std::min(rate, member_rate(coeffs.mechanism, id, coef, state, model));
    return rate;
}

SwiptCoefficients optimize_coefficients(const ClusterLinkState &state, const RateModel &model, Mechanism mechanism,
                                        double tol, int max_iter)
{
    if (const auto v = state.violations(); !v.empty())
        throw std::invalid_argument("optimize_coefficients: " + v.front());

    SwiptCoefficients result;
    result.mechanism = mechanism;

    std::vector<const MemberLink *> live;
    for (const auto &m : state.members)
        if (surplus(m) > 0.0)
            live.push_back(&m);
    if (live.empty()) {
        result.achieved_rate = ch_rate_or_zero(state, model, 0.0);
        return result;
    }

    double required = std::numeric_limits<double>::infinity();
    for (const auto *m : live) {
        result.per_member[m->id] = 1.0;
        required = std::min(required, slot_rate(surplus(*m), m->distance, state.t_sc, model));
    }

    double ch = ch_rate_or_zero(state, model, 0.0);
    SwiptCoefficients best = result;
    best.achieved_rate = std::min(required, ch);

    SwiptCoefficients current = result;
    int iter = 0;
    bool converged = true;
    while (ch < required) {
        if (iter == max_iter) {
            converged = false;
            break;
        }
        for (const auto *m : live)
            current.per_member[m->id] = std::clamp(invert(mechanism, required, *m, state, model), 0.0, 1.0);
        ch = ch_rate_or_zero(state, model, ch_transfer_energy(current, state));
        ++iter;

        current.achieved_rate = swipt_rate(current, state, model);
        if (current.achieved_rate > best.achieved_rate)
            best = current;

        const double previous = required;
        required = 0.5 * (ch + required);
        if (std::abs(required - previous) <= tol * previous)
            break;
    }
    best.iterations = iter;
    best.converged = converged;
    return best;
}

} // namespace thznet::swipt
