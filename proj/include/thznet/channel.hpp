// SPDX-License-Identifier: Apache-2.0
//
// Terahertz link model: spreading and molecular absorption loss, absorption
// noise, and the multi-subchannel Shannon capacity. All functions are pure.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace thznet::channel {

struct ChannelParams {
    double f_low = 0.5e12;         // Hz
    double f_high = 1.5e12;        // Hz
    double delta_f = 0.01e12;      // subchannel width, Hz
    double k_abs = 0.25;           // molecular absorption factor, 1/m
    double T0 = 296.0;             // reference temperature, K
    double KB = 1.380649e-23;      // J/K
    double c = 3.0e8;              // m/s

    /// Empty when every invariant holds, otherwise one message per violation.
    std::vector<std::string> violations() const;
    void validate() const;

    std::size_t subchannel_count() const;
    /// Midpoint of bin i: f_low + (i + 1/2) * delta_f.
    double subchannel_center(std::size_t i) const;
    double band_center() const { return 0.5 * (f_low + f_high); }
    double bandwidth() const { return f_high - f_low; }
};

struct LinkBudget {
    double distance = 0.0; // m
    double tx_power = 0.0; // W
    double psd = 0.0;      // W/Hz

    /// Flat spectrum over the configured band.
    static LinkBudget flat(double distance, double tx_power, const ChannelParams &params);
};

/// (4 pi f d / c)^2. Throws std::domain_error for f <= 0 or d <= 0.
double spreading_loss(double f, double d, const ChannelParams &params);

/// e^{k_abs d}; d must be >= 0.
double absorption_loss(double f, double d, const ChannelParams &params);

double path_loss(double f, double d, const ChannelParams &params);

/// K_B T0 (1 - e^{-k_abs d}), W/Hz.
double noise_psd(double f, double d, const ChannelParams &params);

/// PL(f,d) * N(f,d): the energy-normalising denominator shared by every rate
/// expression. Throws std::domain_error when it degenerates to zero.
double loss_noise_product(double f, double d, const ChannelParams &params);

/// Sum over subchannels of delta_f * log2(1 + S / (PL N)), bit/s.
double channel_capacity(const LinkBudget &budget, const ChannelParams &params);

} // namespace thznet::channel
