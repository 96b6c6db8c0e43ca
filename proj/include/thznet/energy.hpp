// SPDX-License-Identifier: Apache-2.0
//
// Consumption (transmit/receive) and nonlinear logistic harvesting.
#pragma once

#include <string>
#include <vector>

namespace thznet::energy {

struct ConsumptionParams {
    double bits_per_packet = 1024.0;
    double psd = 0.0;          // W/Hz
    double delta_f = 0.01e12;  // Hz
    double t_bit = 1e-6;       // s
    double phi = 22e-9;        // J per received packet
};

/// k * delta_f * S * T_bit.
double tx_energy(const ConsumptionParams &params);

/// tx_energy + receives * phi; receives = 1 is the single-reception form.
double total_consumption(const ConsumptionParams &params, double receives);

class HarvestParams {
public:
    HarvestParams() = default;
    HarvestParams(double A, double B, double Ps);

    double A() const { return A_; }
    double B() const { return B_; }
    double Ps() const { return Ps_; }
    /// 1 / (1 + e^{A B}); derived on demand so it cannot go stale.
    double gamma() const;

    std::vector<std::string> violations() const;

private:
    double A_ = 6400.0;
    double B_ = 0.003;  // W
    double Ps_ = 1e-6;  // W
};

/// Logistic exponent clamp; A = 6400 overflows a double for modest powers.
inline constexpr double kLogisticClamp = 500.0;

/// 1 / (1 + e^{-A (rho h2 P - B)}).
double logistic_psi(double rho, double h2, double P, const HarvestParams &params);

/// T Ps (psi - gamma) / (1 - gamma), clipped into [0, T Ps].
double harvested_energy(double rho, double h2, double P, double T, const HarvestParams &params);

} // namespace thznet::energy
