// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "../oracles.hpp"
#include "thznet/rng.hpp"
#include "thznet/swipt.hpp"

#include <cmath>

using namespace thznet::swipt;

namespace {

// One member at 1 mm with 1e-12 J of surplus over a 1 ms slot (1 nW).
ClusterLinkState fixture()
{
    ClusterLinkState s;
    s.ch_id = 0;
    s.members = {{1, 1e-12, 0.0, 0.0, 1e-3}};
    s.ch_residual = 1e-12;
    s.d_p = 2e-3;
    s.t_sc = 1e-3;
    s.t_cc = 2e-3;
    s.t_wet = 1e-2;
    return s;
}

ClusterLinkState random_cluster(thznet::Rng &rng, int members)
{
    ClusterLinkState s;
    s.ch_id = 0;
    for (int i = 1; i <= members; ++i)
        s.members.push_back({static_cast<thznet::NodeId>(i), rng.uniform(1e-13, 1e-9), 0.0, rng.uniform(0.0, 1e-10),
                             rng.uniform(2e-4, 3e-3)});
    s.ch_residual = rng.uniform(1e-13, 1e-9);
    s.d_p = rng.uniform(1e-3, 8e-3);
    s.t_sc = 1e-3;
    s.t_cc = rng.uniform(1e-3, 5e-3);
    s.t_wet = 1e-2;
    return s;
}

SwiptCoefficients uniform_coefficients(const ClusterLinkState &s, Mechanism m, double c)
{
    SwiptCoefficients out;
    out.mechanism = m;
    for (const auto &mem : s.members)
        out.per_member[mem.id] = c;
    return out;
}

} // namespace

TEST_CASE("member power")
{
    auto s = fixture();
    CHECK(member_power(1, s) == doctest::Approx(1e-9));
    s.members[0].consumption = 1e-12;
    CHECK(member_power(1, s) == 0.0);
    s.members[0].consumption = 2e-12;
    CHECK_THROWS_AS(member_power(1, s), EnergyDeficit);
}

TEST_CASE("member rate without SWIPT matches the single-expression oracle")
{
    const RateModel model;
    auto s = fixture();
    const long double want = oracle::slot_rate(model.channel, 1e-12L, 1e-3L, 1e-3L);
    CHECK(member_rate_no_swipt(1, s, model) == doctest::Approx(static_cast<double>(want)).epsilon(1e-9));
    s.members[0].residual = 0.0;
    CHECK(member_rate_no_swipt(1, s, model) == 0.0);
}

TEST_CASE("CH rate")
{
    const RateModel model;
    auto s = fixture();
    s.ch_consumption = s.ch_residual;
    CHECK(ch_rate(s, model, 0.0) == 0.0);
    s.ch_consumption = 0.0;
    const long double want = oracle::slot_rate(model.channel, 2e-12L, 2e-3L, 2e-3L);
    CHECK(ch_rate(s, model, 1e-12) == doctest::Approx(static_cast<double>(want)).epsilon(1e-9));
    CHECK(ch_rate(s, model, 1e-12) > ch_rate(s, model, 0.0));
}

TEST_CASE("time switching")
{
    const RateModel model;
    const auto s = fixture();
    const double r = member_rate_no_swipt(1, s, model);
    CHECK(ts_member_rate(1, 1.0, s, model) == r);
    CHECK(ts_member_rate(1, 0.5, s, model) == doctest::Approx(0.5 * r).epsilon(1e-15));
    CHECK(ts_member_rate(1, 0.0, s, model) == 0.0);
    CHECK_THROWS_AS(ts_member_rate(1, 1.5, s, model), std::domain_error);
}

TEST_CASE("power splitting")
{
    const RateModel model;
    const auto s = fixture();
    CHECK(ps_member_rate(1, 0.0, s, model) == 0.0);
    CHECK(ps_member_rate(1, 1.0, s, model) == member_rate_no_swipt(1, s, model));
    const long double want = oracle::slot_rate(model.channel, 0.3e-12L, 1e-3L, 1e-3L);
    CHECK(ps_member_rate(1, 0.3, s, model) == doctest::Approx(static_cast<double>(want)).epsilon(1e-9));
}

TEST_CASE("transfer energy")
{
    ClusterLinkState s = fixture();
    s.members.push_back({2, 3e-12, 0.0, 0.0, 1e-3});
    CHECK(ch_transfer_energy(uniform_coefficients(s, Mechanism::PS, 1.0), s) == 0.0);
    CHECK(ch_transfer_energy(uniform_coefficients(s, Mechanism::PS, 0.0), s) == doctest::Approx(4e-12));
    SwiptCoefficients mixed;
    mixed.per_member = {{1, 0.25}, {2, 0.75}};
    CHECK(ch_transfer_energy(mixed, s) == doctest::Approx(0.75e-12 + 0.25 * 3e-12));
}

TEST_CASE("cluster rate is the minimum")
{
    const RateModel model;
    ClusterLinkState s = fixture();
    s.members.clear();
    SwiptCoefficients none;
    CHECK(swipt_rate(none, s, model) == ch_rate(s, model, 0.0));

    s = fixture();
    s.members.push_back({2, 5e-12, 0.0, 0.0, 2e-3});
    s.members.push_back({3, 2e-12, 0.0, 1e-13, 5e-4});
    SwiptCoefficients c;
    c.mechanism = Mechanism::PS;
    c.per_member = {{1, 0.9}, {2, 0.4}, {3, 0.7}};
    const double extra = 0.1e-12 + 0.6 * 5e-12 + 0.3 * 2.1e-12;
    const long double want = std::min({oracle::slot_rate(model.channel, 0.9e-12L, 1e-3L, 1e-3L),
                                       oracle::slot_rate(model.channel, 0.4L * 5e-12L, 2e-3L, 1e-3L),
                                       oracle::slot_rate(model.channel, 0.7L * 2.1e-12L, 5e-4L, 1e-3L),
                                       oracle::slot_rate(model.channel, 1e-12L + extra, 2e-3L, 2e-3L)});
    CHECK(swipt_rate(c, s, model) == doctest::Approx(static_cast<double>(want)).epsilon(1e-9));
}

TEST_CASE("monotone trade-off per member")
{
    const RateModel model;
    thznet::Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        const auto s = random_cluster(rng, 3);
        for (auto m : {Mechanism::TS, Mechanism::PS}) {
            auto hi = uniform_coefficients(s, m, 0.8);
            auto lo = hi;
            lo.per_member[2] = 0.3;
            CHECK(member_rate(m, 2, 0.3, s, model) <= member_rate(m, 2, 0.8, s, model));
            CHECK(ch_rate(s, model, ch_transfer_energy(lo, s)) >= ch_rate(s, model, ch_transfer_energy(hi, s)));
        }
    }
}

TEST_CASE("optimizer edge cases")
{
    const RateModel model;
    ClusterLinkState s = fixture();
    s.members.clear();
    const auto alone = optimize_coefficients(s, model, Mechanism::PS);
    CHECK(alone.per_member.empty());
    CHECK(alone.achieved_rate == ch_rate(s, model, 0.0));

    // A rich CH close to its next hop already outpaces the member.
    s = fixture();
    s.ch_residual = 1e-6;
    s.d_p = 1e-4;
    for (auto m : {Mechanism::TS, Mechanism::PS}) {
        const auto c = optimize_coefficients(s, model, m);
        CHECK(c.per_member.at(1) == 1.0);
        CHECK(c.achieved_rate == member_rate_no_swipt(1, s, model));
    }
}

TEST_CASE("optimizer against the shared-coefficient grid")
{
    const RateModel model;
    thznet::Rng rng(2024);
    for (int i = 0; i < 30; ++i) {
        const auto s = random_cluster(rng, 2 + i % 4);
        for (auto m : {Mechanism::TS, Mechanism::PS}) {
            const auto c = optimize_coefficients(s, model, m);
            const auto grid = oracle::shared_coefficient_grid(s, model.channel, m);
            CHECK(c.achieved_rate >= 0.99 * static_cast<double>(grid));
            for (const auto &[id, v] : c.per_member) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
            CHECK(c.achieved_rate == doctest::Approx(swipt_rate(c, s, model)).epsilon(1e-12));
        }
    }
}

TEST_CASE("optimizer never loses to no transfer and is deterministic")
{
    const RateModel model;
    thznet::Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        const auto s = random_cluster(rng, 1 + i % 5);
        for (auto m : {Mechanism::TS, Mechanism::PS}) {
            const auto a = optimize_coefficients(s, model, m);
            const auto b = optimize_coefficients(s, model, m);
            CHECK(a.per_member == b.per_member);
            CHECK(a.achieved_rate == b.achieved_rate);
            const double base = swipt_rate(uniform_coefficients(s, m, 1.0), s, model);
            CHECK(a.achieved_rate >= base * (1.0 - 1e-6));
        }
    }
}

TEST_CASE("full-band spectrum")
{
    RateModel model;
    model.spectrum = Spectrum::FullBand;
    const auto s = fixture();
    long double sum = 0.0L;
    for (std::size_t i = 0; i < model.channel.subchannel_count(); ++i)
        sum += std::log2(1.0L + 1e-12L / oracle::loss_noise(model.channel, model.channel.subchannel_center(i), 1e-3L));
    const long double want = sum / model.channel.subchannel_count() / 1e-3L;
    CHECK(member_rate_no_swipt(1, s, model) == doctest::Approx(static_cast<double>(want)).epsilon(1e-9));
}
