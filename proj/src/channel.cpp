// SPDX-License-Identifier: Apache-2.0
#include "thznet/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thznet::channel {

std::vector<std::string> ChannelParams::violations() const
{
    std::vector<std::string> out;
    if (!(f_low > 0.0))
        out.emplace_back("channel.f_low must be > 0");
    if (!(f_high > f_low))
        out.emplace_back("channel.f_high must exceed channel.f_low");
    if (!(delta_f > 0.0)) {
        out.emplace_back("channel.delta_f must be > 0");
    } else if (f_high > f_low) {
        const double bins = (f_high - f_low) / delta_f;
        if (std::abs(bins - std::round(bins)) > 1e-9 * bins || std::round(bins) < 1.0)
            out.emplace_back("channel band must be an integer multiple of channel.delta_f");
    }
    if (!(k_abs >= 0.0))
        out.emplace_back("channel.k_abs must be >= 0");
    if (!(T0 > 0.0))
        out.emplace_back("channel.t0 must be > 0");
    if (!(KB > 0.0))
        out.emplace_back("channel.boltzmann must be > 0");
    if (!(c > 0.0))
        out.emplace_back("channel.light_speed must be > 0");
    return out;
}

void ChannelParams::validate() const
{
    const auto v = violations();
    if (!v.empty())
        throw std::invalid_argument(v.front());
}

std::size_t ChannelParams::subchannel_count() const
{
    return static_cast<std::size_t>(std::llround((f_high - f_low) / delta_f));
}

double ChannelParams::subchannel_center(std::size_t i) const
{
    return f_low + (static_cast<double>(i) + 0.5) * delta_f;
}

LinkBudget LinkBudget::flat(double distance, double tx_power, const ChannelParams &params)
{
    return {distance, tx_power, tx_power / params.bandwidth()};
}

double spreading_loss(double f, double d, const ChannelParams &params)
{
    if (!(f > 0.0) || !(d > 0.0))
        throw std::domain_error("spreading_loss: frequency and distance must be positive");
    const double x = 4.0 * std::numbers::pi * f * d / params.c;
    return x * x;
}

double absorption_loss(double /*f*/, double d, const ChannelParams &params)
{
    if (!(d >= 0.0))
        throw std::domain_error("absorption_loss: distance must be non-negative");
    return std::exp(params.k_abs * d);
}

double path_loss(double f, double d, const ChannelParams &params)
{
    return spreading_loss(f, d, params) * absorption_loss(f, d, params);
}

double noise_psd(double /*f*/, double d, const ChannelParams &params)
{
    if (!(d >= 0.0))
        throw std::domain_error("noise_psd: distance must be non-negative");
    return params.KB * params.T0 * -std::expm1(-params.k_abs * d);
}

double loss_noise_product(double f, double d, const ChannelParams &params)
{
    const double n = noise_psd(f, d, params);
    if (!(n > 0.0))
        throw std::domain_error("degenerate noise: zero absorption noise makes the SNR unbounded");
    return path_loss(f, d, params) * n;
}

double channel_capacity(const LinkBudget &budget, const ChannelParams &params)
{
    if (!(budget.distance > 0.0))
        throw std::domain_error("channel_capacity: distance must be positive");
    if (budget.psd < 0.0 || budget.tx_power < 0.0)
        throw std::domain_error("channel_capacity: negative power");
    if (budget.psd == 0.0)
        return 0.0;
    double sum = 0.0;
    const std::size_t n = params.subchannel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double f = params.subchannel_center(i);
        sum += params.delta_f * std::log2(1.0 + budget.psd / loss_noise_product(f, budget.distance, params));
    }
    return sum;
}

} // namespace thznet::channel
