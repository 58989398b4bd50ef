// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "twoway/analytic.hpp"
#include "twoway/feedback.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace twoway;

namespace {

// Reference configuration used throughout: 3 antennas, 2 feedback bits,
// asymmetric traffic over a 1 MHz band split 0.94 / 0.06.
const PathLoss kPl{4.0, 5.0};
const TrafficSpec kTraffic{1024.0, 56.0};
const BandwidthSplit kBand{1.0e6, 0.94e6};
const FeedbackSpec kFs{2.0, 0.5};
const AntennaConfig kAc{3};

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0));
}

} // namespace

TEST_CASE("quantization_gain pinned values", "[feedback]") {
    CHECK(quantization_gain(FeedbackSpec{64.0, 1.0}, AntennaConfig{1}) == 1.0);
    CHECK(quantization_gain(FeedbackSpec{4.0, 1.0}, AntennaConfig{2}) == 0.75);
    CHECK_THAT(quantization_gain(FeedbackSpec{2.0, 1.0}, AntennaConfig{3}),
               WithinRel(0.2928932188134525, 1e-14));
    CHECK_THAT(quantization_gain(kFs, kAc), WithinRel(0.6464466094067263, 1e-14));
}

TEST_CASE("quantization_gain rejects vacuous or invalid parameters", "[feedback]") {
    CHECK_THROWS_AS(quantization_gain(FeedbackSpec{1.0, 1.0}, AntennaConfig{2}),
                    std::domain_error);
    CHECK_THROWS_AS(quantization_gain(FeedbackSpec{0.5, 0.5}, AntennaConfig{2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(quantization_gain(FeedbackSpec{2.0, 0.0}, AntennaConfig{2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(quantization_gain(FeedbackSpec{2.0, 1.5}, AntennaConfig{2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(quantization_gain(kFs, AntennaConfig{0}), std::invalid_argument);
}

TEST_CASE("quantization_gain grows with the bit budget and shrinks with antennas",
          "[feedback]") {
    double prev = 0.0;
    for (double b = 1.0; b <= 4096.0; b *= 2.0) {
        const double g = quantization_gain(FeedbackSpec{b, 0.5}, kAc);
        CHECK(g > prev);
        CHECK(g < 1.0);
        prev = g;
    }
    for (int n = 3; n <= 12; ++n) {
        CHECK(quantization_gain(kFs, AntennaConfig{n}) <
              quantization_gain(kFs, AntennaConfig{n - 1}));
    }
}

TEST_CASE("beamforming_signal_factor dyadic values at alpha = 4", "[feedback]") {
    // With alpha = 4 the factor reduces to C(2n-2, n-1) / 4^(n-1).
    const double expected[] = {1.0, 0.5, 0.375, 0.3125, 0.2734375};
    for (int n = 1; n <= 5; ++n)
        CHECK_THAT(beamforming_signal_factor(AntennaConfig{n}, 4.0),
                   WithinRel(expected[n - 1], 1e-14));
}

TEST_CASE("beamforming_signal_factor matches the gamma-function closed form",
          "[feedback]") {
    for (double alpha : {2.5, 3.0, 4.0, 6.0, 8.0}) {
        const double delta = 2.0 / alpha;
        for (int n = 1; n <= 16; ++n) {
            const double closed = std::exp(std::lgamma(n - delta) - std::lgamma(double(n)) -
                                           std::lgamma(1.0 - delta));
            CHECK_THAT(beamforming_signal_factor(AntennaConfig{n}, alpha),
                       WithinRel(closed, 1e-12));
        }
    }
}

TEST_CASE("beamforming_interference_factor matches direct Beta quadrature",
          "[feedback]") {
    for (double alpha : {3.0, 4.0}) {
        const double delta = 2.0 / alpha;
        for (int n : {1, 2, 3, 5}) {
            // the k = 0 term is B(delta, n - delta); its second argument
            // falls below the quadrature's 1/2 domain floor when n = 1 and
            // alpha < 4
            if (n - delta < 0.5)
                continue;
            double sum = 0.0;
            for (int k = 0; k < n; ++k)
                sum += binomial(n, k) *
                       testsupport::beta_quadrature(delta + k, n - delta + k);
            const double expected = 2.0 * std::numbers::pi / alpha * sum;
            CHECK_THAT(beamforming_interference_factor(AntennaConfig{n}, alpha),
                       WithinRel(expected, 1e-9));
        }
    }
}

TEST_CASE("beamforming_interference_factor pinned values", "[feedback]") {
    CHECK_THAT(beamforming_interference_factor(AntennaConfig{2}, 4.0),
               WithinRel(3.0842513753404246, 1e-13));
    CHECK_THAT(beamforming_interference_factor(AntennaConfig{3}, 4.0),
               WithinRel(2.530049956333942, 1e-13));
}

TEST_CASE("beamforming_constant collapses to the one-way constant at n = 1",
          "[feedback]") {
    for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
        CHECK_THAT(beamforming_constant(AntennaConfig{1}, alpha),
                   WithinRel(interference_constant_lower(alpha), 1e-10));
    }
}

TEST_CASE("beamforming_constant pinned values and conventions", "[feedback]") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK_THAT(beamforming_constant(AntennaConfig{2}, 4.0),
               WithinRel(5.0 * pi2 / 32.0, 1e-13));
    CHECK_THAT(beamforming_constant(AntennaConfig{2}, 4.0),
               WithinRel(1.5421256876702123, 1e-13));
    CHECK_THAT(beamforming_constant(kAc, 4.0), WithinRel(0.9487687336252283, 1e-13));
    CHECK_THAT(beamforming_constant(kAc, 3.0), WithinRel(0.5481190628816718, 1e-13));
    CHECK_THAT(beamforming_constant(AntennaConfig{5}, 4.0),
               WithinRel(0.5561878097862994, 1e-13));
    for (int n : {1, 2, 3, 7}) {
        const double prod = beamforming_constant(AntennaConfig{n}, 4.0);
        CHECK_THAT(beamforming_constant(AntennaConfig{n}, 4.0, C4Convention::reciprocal),
                   WithinRel(1.0 / prod, 1e-14));
    }
}

TEST_CASE("array gain outpaces the falling outage constant", "[feedback]") {
    // n^delta / c4 grows with n, which is what makes more antennas pay off.
    for (double alpha : {3.0, 4.0, 6.0}) {
        const double delta = 2.0 / alpha;
        double prev = 0.0;
        for (int n = 1; n <= 12; ++n) {
            const double figure =
                std::pow(double(n), delta) / beamforming_constant(AntennaConfig{n}, alpha);
            CHECK(figure > prev);
            prev = figure;
        }
    }
}

TEST_CASE("the reduced-distance Beta identity ties the factors together",
          "[feedback]") {
    // c1 * signal_factor equals (2*pi/alpha) * B(n - delta, delta); the Beta
    // integral is evaluated by quadrature, independent of any series here.
    for (int n : {1, 2, 3, 4, 6}) {
        const double delta = 0.5;
        const double quad = 2.0 * std::numbers::pi / 4.0 *
                            testsupport::beta_quadrature(n - delta, delta);
        CHECK_THAT(interference_constant_lower(4.0) *
                       beamforming_signal_factor(AntennaConfig{n}, 4.0),
                   WithinRel(quad, 1e-9));
    }
    for (int n : {2, 3, 5}) {
        const double delta = 2.0 / 3.0;
        const double quad = 2.0 * std::numbers::pi / 3.0 *
                            testsupport::beta_quadrature(n - delta, delta);
        CHECK_THAT(interference_constant_lower(3.0) *
                       beamforming_signal_factor(AntennaConfig{n}, 3.0),
                   WithinRel(quad, 1e-9));
    }
}

TEST_CASE("feedback_threshold pinned values and forms", "[feedback]") {
    CHECK_THAT(feedback_threshold(kFs, kBand.f_rt(), kPl),
               WithinRel(625.0144407330869, 1e-13));
    CHECK_THAT(feedback_threshold(kFs, kBand.f_rt(), kPl, FeedbackSirForm::mi_consistent),
               WithinRel(0.014440733086913519, 1e-13));
    CHECK_THROWS_AS(feedback_threshold(kFs, 0.0, kPl), std::invalid_argument);
    CHECK_THROWS_AS(feedback_threshold(kFs, -1.0, kPl), std::invalid_argument);
    // the conservative form dominates the mi-consistent one by exactly d^alpha
    const double diff = feedback_threshold(kFs, kBand.f_rt(), kPl) -
                        feedback_threshold(kFs, kBand.f_rt(), kPl,
                                           FeedbackSirForm::mi_consistent);
    CHECK_THAT(diff, WithinRel(std::pow(kPl.d, kPl.alpha), 1e-12));
}

TEST_CASE("feedback_success_lower linear bound behaviour", "[feedback]") {
    const double beta1 = sir_threshold(kTraffic.b_tr, kBand.f_tr, kPl);
    const double gamma = quantization_gain(kFs, kAc);
    const double beta3_mi =
        feedback_threshold(kFs, kBand.f_rt(), kPl, FeedbackSirForm::mi_consistent);
    const double beta3_cons = feedback_threshold(kFs, kBand.f_rt(), kPl);

    const ProbabilityBound at_zero =
        feedback_success_lower(NetworkDensity{0.0}, beta1, beta3_mi, gamma, kAc, 4.0);
    CHECK(at_zero.value == 1.0);
    CHECK_FALSE(at_zero.clamped);

    const ProbabilityBound mi =
        feedback_success_lower(NetworkDensity{0.1}, beta1, beta3_mi, gamma, kAc, 4.0);
    CHECK_THAT(mi.value, WithinRel(1.0 - 0.1 * 0.533942282361395, 1e-12));
    CHECK_FALSE(mi.clamped);

    const ProbabilityBound cons =
        feedback_success_lower(NetworkDensity{0.01}, beta1, beta3_cons, gamma, kAc, 4.0);
    CHECK_THAT(cons.value, WithinRel(1.0 - 0.01 * 14.162572051031574, 1e-12));

    const ProbabilityBound floored =
        feedback_success_lower(NetworkDensity{10.0}, beta1, beta3_cons, gamma, kAc, 4.0);
    CHECK(floored.value == 0.0);
    CHECK(floored.clamped);

    CHECK_THROWS_AS(
        feedback_success_lower(NetworkDensity{0.1}, beta1, beta3_mi, 0.0, kAc, 4.0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        feedback_success_lower(NetworkDensity{0.1}, -1.0, beta3_mi, gamma, kAc, 4.0),
        std::invalid_argument);
}

TEST_CASE("feedback_success_lower reduces to the one-way expansion", "[feedback]") {
    // with one antenna, no quantisation loss and no feedback threshold the
    // bound is the first-order expansion of the exact one-way curve
    const double beta = 0.7;
    for (double lambda : {1e-4, 1e-3, 5e-3}) {
        const ProbabilityBound pb = feedback_success_lower(NetworkDensity{lambda}, beta,
                                                           0.0, 1.0, AntennaConfig{1}, 4.0);
        const double x =
            interference_constant_lower(4.0) * lambda * std::sqrt(beta);
        CHECK_THAT(pb.value, WithinRel(1.0 - x, 1e-12));
        const double exact = one_way_success(NetworkDensity{lambda}, beta, 4.0);
        CHECK(pb.value <= exact);
        CHECK(exact - pb.value <= x * x);
    }
}

TEST_CASE("feedback_tc_lower pinned reference configuration", "[feedback]") {
    const OutageTarget ot{0.1};
    const FeedbackBound fb = feedback_tc_lower(ot, kTraffic, kBand, kFs, kAc, kPl);
    CHECK_THAT(fb.gamma, WithinRel(0.6464466094067263, 1e-13));
    CHECK_THAT(fb.beta3, WithinRel(625.0144407330869, 1e-13));
    CHECK_THAT(fb.c4, WithinRel(0.9487687336252283, 1e-13));
    CHECK_THAT(fb.tc_lower, WithinRel(6.507292578489459e-06, 1e-12));
    const FeedbackBound mi =
        feedback_tc_lower(ot, kTraffic, kBand, kFs, kAc, kPl, FeedbackSirForm::mi_consistent);
    CHECK(mi.tc_lower > fb.tc_lower);
}

TEST_CASE("feedback_tc_lower with one antenna matches the direct formula",
          "[feedback]") {
    const OutageTarget ot{0.1};
    const FeedbackSpec fs{8.0, 0.5};
    const FeedbackBound fb = feedback_tc_lower(ot, kTraffic, kBand, fs, AntennaConfig{1}, kPl);
    const double beta1 = sir_threshold(kTraffic.b_tr, kBand.f_tr, kPl);
    const double beta3 = feedback_threshold(fs, kBand.f_rt(), kPl);
    const double direct = 0.1 * 0.9 /
                          (interference_constant_lower(4.0) *
                           (std::sqrt(beta1) + std::sqrt(beta3))) *
                          (kTraffic.b_tr / kBand.f_total);
    CHECK(fb.gamma == 1.0);
    CHECK_THAT(fb.tc_lower, WithinRel(direct, 1e-12));
}

TEST_CASE("feedback bit budget has an interior optimum", "[feedback]") {
    const OutageTarget ot{0.1};
    int best_b = 0;
    double best_tc = 0.0;
    double tc1 = 0.0, tc40 = 0.0, tc256 = 0.0;
    for (int b = 1; b <= 256; ++b) {
        const FeedbackSpec fs{double(b), 0.5};
        const double tc = feedback_tc_lower(ot, kTraffic, kBand, fs, kAc, kPl).tc_lower;
        if (tc > best_tc) {
            best_tc = tc;
            best_b = b;
        }
        if (b == 1)
            tc1 = tc;
        if (b == 40)
            tc40 = tc;
        if (b == 256)
            tc256 = tc;
    }
    CHECK(best_b == 75);
    CHECK_THAT(best_tc, WithinRel(6.541753865952891e-06, 1e-12));
    CHECK_THAT(tc1, WithinRel(6.477982987222739e-06, 1e-12));
    CHECK_THAT(tc40, WithinRel(6.5409676709830795e-06, 1e-12));
    CHECK_THAT(tc256, WithinRel(6.537580113144028e-06, 1e-12));
    CHECK(tc1 < best_tc);
    CHECK(tc256 < best_tc);
}

TEST_CASE("genie beamforming reference dominates the feedback bound", "[feedback]") {
    const OutageTarget ot{0.1};
    const double genie =
        oneway_beamforming_tc(ot, kTraffic.b_tr, kBand.f_total, kBand.f_total, kAc, kPl);
    CHECK_THAT(genie, WithinRel(0.00025255905475650957, 1e-12));
    for (int b = 1; b <= 256; b *= 2) {
        const FeedbackSpec fs{double(b), 0.5};
        CHECK(feedback_tc_lower(ot, kTraffic, kBand, fs, kAc, kPl).tc_lower < genie);
    }
}

TEST_CASE("oneway_beamforming_tc matches its defining expression", "[feedback]") {
    const OutageTarget ot{0.05};
    const double bits = 512.0;
    const double band = 2.0e6;
    for (int n : {1, 2, 4}) {
        const double beta = sir_threshold(bits, band, kPl);
        const double expected = 0.05 * 0.95 * std::sqrt(double(n)) /
                                (beamforming_constant(AntennaConfig{n}, 4.0) *
                                 std::sqrt(beta)) *
                                (bits / band);
        CHECK_THAT(oneway_beamforming_tc(ot, bits, band, band, AntennaConfig{n}, kPl),
                   WithinRel(expected, 1e-13));
    }
    CHECK_THROWS_AS(oneway_beamforming_tc(ot, bits, band, 0.0, kAc, kPl),
                    std::invalid_argument);
}
