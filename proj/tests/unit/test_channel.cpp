// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "../oracles.hpp"
#include "thznet/channel.hpp"
#include "thznet/rng.hpp"

#include <cmath>
#include <stdexcept>

using namespace thznet::channel;

namespace {

bool rel_close(long double a, long double b, long double tol)
{
    return std::fabs(a - b) <= tol * std::fabs(b);
}

} // namespace

TEST_CASE("spreading loss")
{
    ChannelParams p;
    CHECK(rel_close(spreading_loss(1e12, 1.0, p), oracle::spreading(1e12L, 1.0L), 1e-12L));
    CHECK(spreading_loss(1e12, 1.0, p) == doctest::Approx(1.7546e9).epsilon(1e-4));
    CHECK(spreading_loss(1e12, 1e-3, p) == doctest::Approx(1754.6).epsilon(1e-4));
    for (double f : {0.5e12, 0.9e12, 1.4e12})
        CHECK(spreading_loss(f, 2e-3, p) / spreading_loss(f, 1e-3, p) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS_AS(spreading_loss(0.0, 1e-3, p), std::domain_error);
    CHECK_THROWS_AS(spreading_loss(1e12, 0.0, p), std::domain_error);
}

TEST_CASE("absorption loss")
{
    ChannelParams p;
    CHECK(absorption_loss(1e12, 1e-3, p) == doctest::Approx(1.000250).epsilon(1e-7));
    CHECK(absorption_loss(1e12, 4.0, p) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    p.k_abs = 0.0;
    CHECK(absorption_loss(1e12, 3.0, p) == 1.0);
    CHECK(path_loss(1e12, 3.0, p) == spreading_loss(1e12, 3.0, p));
}

TEST_CASE("path loss is the product of its parts")
{
    ChannelParams p;
    CHECK(path_loss(1e12, 1e-3, p) == doctest::Approx(1755.0).epsilon(1e-4));
    thznet::Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double f = rng.uniform(p.f_low, p.f_high);
        const double d = rng.uniform(1e-5, 0.1);
        const double want = spreading_loss(f, d, p) * absorption_loss(f, d, p);
        REQUIRE(path_loss(f, d, p) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("absorption noise")
{
    ChannelParams p;
    CHECK(noise_psd(1e12, 0.0, p) == 0.0);
    CHECK(rel_close(noise_psd(1e12, 1e-3, p), oracle::noise(0.25L, 1e-3L, 296.0L), 1e-12L));
    CHECK(noise_psd(1e12, 1e-3, p) == doctest::Approx(1.021e-24).epsilon(1e-3));
    const double ceiling = p.KB * p.T0;
    CHECK(noise_psd(1e12, 1e4, p) == doctest::Approx(ceiling).epsilon(1e-12));
    thznet::Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double n = noise_psd(1e12, rng.uniform(0.0, 50.0), p);
        CHECK(n >= 0.0);
        CHECK(n < ceiling);
    }
}

TEST_CASE("subchannel centres sit inside the band")
{
    ChannelParams p;
    REQUIRE(p.subchannel_count() == 100);
    CHECK(p.subchannel_center(0) == doctest::Approx(0.505e12));
    for (std::size_t i = 0; i < p.subchannel_count(); ++i) {
        CHECK(p.subchannel_center(i) > p.f_low);
        CHECK(p.subchannel_center(i) < p.f_high);
    }
}

TEST_CASE("capacity")
{
    ChannelParams p;
    CHECK(channel_capacity(LinkBudget{1e-3, 0.0, 0.0}, p) == 0.0);

    SUBCASE("one subchannel at unit SNR carries delta_f")
    {
        ChannelParams one = p;
        one.f_low = 1e12 - 0.5 * one.delta_f;
        one.f_high = 1e12 + 0.5 * one.delta_f;
        const double psd = loss_noise_product(1e12, 1e-3, one);
        CHECK(channel_capacity(LinkBudget{1e-3, 0.0, psd}, one) == doctest::Approx(one.delta_f).epsilon(1e-12));
    }

    SUBCASE("flat budget matches the summation oracle")
    {
        const auto budget = LinkBudget::flat(1e-3, 1e-4, p);
        CHECK(budget.psd == doctest::Approx(1e-4 / 1e12));
        CHECK(rel_close(channel_capacity(budget, p), oracle::capacity(p, 1e-3L, budget.psd), 1e-9L));
    }

    SUBCASE("non-increasing in distance")
    {
        thznet::Rng rng(11);
        for (int i = 0; i < 200; ++i) {
            const double d1 = rng.uniform(1e-4, 2e-2);
            const double d2 = rng.uniform(1e-4, 2e-2);
            const double near = std::min(d1, d2), far = std::max(d1, d2);
            CHECK(channel_capacity(LinkBudget::flat(near, 1e-4, p), p) >=
                  channel_capacity(LinkBudget::flat(far, 1e-4, p), p));
        }
    }
}

TEST_CASE("parameter validation")
{
    ChannelParams p;
    CHECK(p.violations().empty());
    p.f_high = p.f_low;
    CHECK_FALSE(p.violations().empty());
    CHECK_THROWS(p.validate());
}
