// SPDX-License-Identifier: Apache-2.0
//
// Per-cluster SWIPT link rates under time switching (TS) and power splitting
// (PS), and the iterative max-min coefficient search.
//
// Every rate here has the form (1/T) log2(1 + E / (PL N)) where E is the
// energy a node can spend in its slot of length T. Since T*P is that energy,
// rates depend on the slot only through the 1/T prefactor.
#pragma once

#include "thznet/channel.hpp"
#include "thznet/geometry.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace thznet::swipt {

/// Raised when a node's energy cannot cover its fixed consumption.
class EnergyDeficit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MemberLink {
    NodeId id = 0;
    double residual = 0.0;    // E_q, J
    double consumption = 0.0; // E_q^con, J
    double harvested = 0.0;   // E_q^har, J
    double distance = 0.0;    // d_qp, m
};

struct ClusterLinkState {
    NodeId ch_id = 0;
    std::vector<MemberLink> members;
    double ch_residual = 0.0;    // E_p
    double ch_harvested = 0.0;   // E_p^har
    double ch_consumption = 0.0; // E_p^con
    double d_p = 0.0;            // CH to next hop, m
    double t_sc = 0.0;           // member slot, s
    double t_cc = 0.0;           // CH slot, s
    double t_wet = 0.0;          // s

    const MemberLink &member(NodeId q) const;
    std::vector<std::string> violations() const;
};

enum class Mechanism { TS, PS };

const char *to_string(Mechanism m);

enum class Spectrum {
    BandCenter, // single-frequency form at the band centre
    FullBand,   // mean of log2 terms over all subchannel centres
};

struct RateModel {
    channel::ChannelParams channel;
    Spectrum spectrum = Spectrum::BandCenter;
};

struct SwiptCoefficients {
    Mechanism mechanism = Mechanism::PS;
    std::map<NodeId, double> per_member; // beta_q (TS) or alpha_q (PS), in [0,1]
    double achieved_rate = 0.0;          // bit/s
    int iterations = 0;
    bool converged = true; // false: max_iter hit, best iterate returned
};

/// (1/T) log2(1 + energy / (PL(f,d) N(f,d))) under the model's spectrum rule.
double slot_rate(double energy, double distance, double slot, const RateModel &model);

/// (E_q + E_q^har - E_q^con) / T_sc. Throws EnergyDeficit when negative.
double member_power(NodeId q, const ClusterLinkState &state);

double member_rate_no_swipt(NodeId q, const ClusterLinkState &state, const RateModel &model);

/// CH rate with extra_energy received over SWIPT; extra = 0 is the no-SWIPT rate.
double ch_rate(const ClusterLinkState &state, const RateModel &model, double extra_energy);

/// beta_q * R_q: information flows during beta_q T_sc at the full-slot rate.
/// Throws std::domain_error for beta_q outside [0,1].
double ts_member_rate(NodeId q, double beta_q, const ClusterLinkState &state, const RateModel &model);

/// (1/T_sc) log2(1 + alpha_q T_sc P_q / (PL N)).
double ps_member_rate(NodeId q, double alpha_q, const ClusterLinkState &state, const RateModel &model);

/// Sum over members of (1 - coef_i) P_i T_sc. Members in deficit contribute 0.
double ch_transfer_energy(const SwiptCoefficients &coeffs, const ClusterLinkState &state);

double cluster_rate_no_swipt(const ClusterLinkState &state, const RateModel &model);

/// Member rate for a coefficient under either mechanism.
double member_rate(Mechanism m, NodeId q, double coef, const ClusterLinkState &state, const RateModel &model);

/// min(min member rate, CH rate after transfer) for a coefficient set.
double swipt_rate(const SwiptCoefficients &coeffs, const ClusterLinkState &state, const RateModel &model);

/// Iterative max-min search over per-member coefficients. Each step sets
/// every member to the smallest information share that still meets the
/// running required rate, moves the freed energy to the CH and averages the
/// required rate with the CH rate.
SwiptCoefficients optimize_coefficients(const ClusterLinkState &state, const RateModel &model, Mechanism mechanism,
                                        double tol = 1e-6, int max_iter = 100);

} // namespace thznet::swipt
