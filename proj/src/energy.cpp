// SPDX-License-Identifier: Apache-2.0
#include "thznet/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thznet::energy {

double tx_energy(const ConsumptionParams &params)
{
    return params.bits_per_packet * params.delta_f * params.psd * params.t_bit;
}

double total_consumption(const ConsumptionParams &params, double receives)
{
    if (receives < 0.0)
        throw std::invalid_argument("total_consumption: negative reception count");
    return tx_energy(params) + receives * params.phi;
}

HarvestParams::HarvestParams(double A, double B, double Ps) : A_(A), B_(B), Ps_(Ps)
{
    const auto v = violations();
    if (!v.empty())
        throw std::invalid_argument(v.front());
}

double HarvestParams::gamma() const
{
    return 1.0 / (1.0 + std::exp(std::min(A_ * B_, kLogisticClamp)));
}

std::vector<std::string> HarvestParams::violations() const
{
    std::vector<std::string> out;
    if (!(A_ > 0.0))
        out.emplace_back("harvest.a must be > 0");
    if (!(B_ > 0.0))
        out.emplace_back("harvest.b must be > 0");
    if (!(Ps_ > 0.0))
        out.emplace_back("harvest.ps must be > 0");
    return out;
}

double logistic_psi(double rho, double h2, double P, const HarvestParams &params)
{
    const double exponent = std::clamp(-params.A() * (rho * h2 * P - params.B()), -kLogisticClamp, kLogisticClamp);
    return 1.0 / (1.0 + std::exp(exponent));
}

double harvested_energy(double rho, double h2, double P, double T, const HarvestParams &params)
{
    if (T < 0.0)
        throw std::invalid_argument("harvested_energy: negative duration");
    const double gamma = params.gamma();
    const double fraction = (logistic_psi(rho, h2, P, params) - gamma) / (1.0 - gamma);
    return T * params.Ps() * std::clamp(fraction, 0.0, 1.0);
}

} // namespace thznet::energy
