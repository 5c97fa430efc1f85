#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "convac/analysis.hpp"

using namespace convac;

namespace {

NetworkSpec spec_of(int h, int m, std::vector<LayerSpec> layers) {
    return NetworkSpec{h, m, std::move(layers)};
}

}  // namespace

TEST_CASE("total stride multiplies the layer strides") {
    const NetworkSpec spec =
        spec_of(16, 2, {{1, 1, 4, true}, {2, 2, 4, true}, {1, 1, 4, true}, {2, 2, 4, true}});
    const std::vector<long long> want{1, 1, 2, 2, 4};
    for (int l = 0; l <= 4; ++l) CHECK(total_stride(spec, l) == want[static_cast<std::size_t>(l)]);
    CHECK_THROWS_AS(total_stride(spec, 5), std::invalid_argument);
    CHECK_THROWS_AS(total_stride(spec, -1), std::invalid_argument);
}

TEST_CASE("single-layer receptive field is the window itself") {
    const NetworkSpec spec = spec_of(8, 2, {{5, 3, 4, true}});
    CHECK(total_receptive(spec, 1) == 5);
    CHECK_THROWS_AS(total_receptive(spec, 0), std::invalid_argument);
}

TEST_CASE("non-overlapping networks have receptive field equal to stride") {
    const NetworkSpec spec = spec_of(8, 2, {{2, 2, 4, true}, {2, 2, 4, true}, {2, 2, 4, true}});
    for (int l = 1; l <= 3; ++l) CHECK(total_receptive(spec, l) == total_stride(spec, l));
}

TEST_CASE("receptive field is monotone in every window") {
    const NetworkSpec spec = spec_of(16, 2, {{3, 1, 4, true}, {2, 2, 4, true}, {3, 1, 4, true}});
    for (int grow = 0; grow < 3; ++grow) {
        NetworkSpec bigger = spec;
        bigger.layers[static_cast<std::size_t>(grow)].r += 1;
        for (int l = grow + 1; l <= 3; ++l)
            CHECK(total_receptive(bigger, l) >= total_receptive(spec, l));
    }
}

TEST_CASE("alpha-minimal field on a single layer picks the smallest window above alpha") {
    const NetworkSpec spec = spec_of(8, 2, {{7, 1, 4, true}}
    );
    const AlphaMinResult got = alpha_min_receptive(spec, 1, 3);
    CHECK(got.feasible);
    CHECK(got.value == 4);
    CHECK(got.windows == std::vector<int>{4});
}

TEST_CASE("alpha-minimal field on a non-overlapping prefix is all or nothing") {
    const NetworkSpec spec = spec_of(8, 2, {{2, 2, 4, true}, {2, 2, 4, true}});
    const AlphaMinResult feasible = alpha_min_receptive(spec, 2, 3);
    CHECK(feasible.feasible);
    CHECK(feasible.value == 4);
    const AlphaMinResult infeasible = alpha_min_receptive(spec, 2, 4);
    CHECK_FALSE(infeasible.feasible);
}

TEST_CASE("alpha-minimal witnesses take overlap as early as possible") {
    const NetworkSpec spec = spec_of(8, 2, {{2, 1, 4, true}, {3, 1, 4, true}, {2, 2, 4, true}});
    const AlphaMinResult got = alpha_min_receptive(spec, 3, 2);
    CHECK(got.feasible);
    CHECK(got.value == 3);
    CHECK(got.windows == std::vector<int>{2, 1, 2});
}

TEST_CASE("bound report on a non-overlapping network is the trivial base") {
    const NetworkSpec spec = spec_of(4, 3, {{2, 2, 5, true}, {2, 2, 4, true}});
    const BoundReport report = rank_lower_bound(spec);
    CHECK(report.t_s == std::vector<long long>{2, 4});
    CHECK(report.t_r == std::vector<long long>{2, 4});
    CHECK(report.valid_layers == std::vector<int>{2});
    const BoundCandidate& best = report.best_candidate();
    CHECK(best.layer == 2);
    CHECK(best.alpha_min == 4);
    CHECK(best.exponent == 1);
    CHECK(best.base == 2);  // min{M=3, D2=4, floor(min(5,4)/2)=2}
    CHECK(best.value == 2);
}

TEST_CASE("first-layer window above H/2 with stride 1 gives the half-squared exponent") {
    const NetworkSpec spec = spec_of(4, 2, {{3, 1, 2, true}, {4, 4, 1, true}});
    const BoundReport report = rank_lower_bound(spec);
    const BoundCandidate& first = report.candidates.front();
    CHECK(first.layer == 1);
    CHECK(first.alpha_min == 3);
    CHECK(first.exponent == 8);  // H^2 / 2 at stride 1
}

TEST_CASE("exponent follows the pair-count arithmetic for larger strides") {
    // Window above H/2 at stride 2 on H=8: floor((8-5)/2)+1 = 2 rows of pairs,
    // ceil(8/2) = 4 window columns.
    const NetworkSpec spec = spec_of(8, 2, {{5, 2, 2, true}, {4, 4, 1, true}});
    const BoundReport report = rank_lower_bound(spec);
    const BoundCandidate& first = report.candidates.front();
    CHECK(first.alpha_min == 5);
    CHECK(first.exponent == 8);
}

TEST_CASE("bound value is the exact power of the base") {
    const NetworkSpec spec = conv_pool_spec(5, 32, 64);
    const BoundReport report = rank_lower_bound(spec);
    const BoundCandidate& best = report.best_candidate();
    CHECK(best.layer == 5);
    CHECK(best.t_s == 4);
    CHECK(best.alpha_min == 17);
    CHECK(best.exponent == 32);
    CHECK(best.base == 64);
    CHECK(best.value == bigint_pow(BigInt(64), 32));
    CHECK(report.best_candidate().log10_value == doctest::Approx(32 * std::log10(64.0)));
}

TEST_CASE("bound requires an even collapsing spec") {
    CHECK_THROWS_AS(rank_lower_bound(spec_of(3, 2, {{3, 3, 2, true}})), std::invalid_argument);
    CHECK_THROWS_AS(rank_lower_bound(spec_of(4, 2, {{2, 2, 2, true}})), std::invalid_argument);
}

TEST_CASE("conv-pool pattern detection") {
    CHECK(match_conv_pool(conv_pool_spec(5, 32, 4)).has_value());
    CHECK(match_conv_pool(conv_pool_spec(5, 32, 4))->b == 5);
    NetworkSpec off = conv_pool_spec(3, 16, 4);
    off.layers[1].s = 1;
    CHECK_FALSE(match_conv_pool(off).has_value());
    NetworkSpec thin = conv_pool_spec(3, 16, 4);
    thin.layers[2].d = 4;  // below 2M
    CHECK_FALSE(match_conv_pool(thin).has_value());
}

TEST_CASE("conv-pool bounds: the M=64, B=5 reference point") {
    const ConvPoolBound bound = conv_pool_bound(5, 32, 64);
    CHECK(bound.first_block == 3);
    CHECK(bound.exact_exponent == 32);
    CHECK(bound.exact_value >= bigint_pow(BigInt(64), 20));
    CHECK(bound.exact_value == bigint_pow(BigInt(64), 32));
}

TEST_CASE("closed-form exponent approaches its window limit as H grows") {
    // (2B-1)^2/2 from below: monotone in H and within 1% at H = 2^14.
    const int b = 5;
    const Rational limit(static_cast<long>(2 * b - 1) * (2 * b - 1), 2);
    Rational previous(0);
    for (int h : {32, 1024, 16384}) {
        const Rational tau = conv_pool_bound(b, h, 4).closed_form_exponent;
        CHECK(tau > previous);
        CHECK(tau < limit);
        previous = tau;
    }
    CHECK(limit - previous < limit / 100);
}

TEST_CASE("conv-pool bound rejects a non-dyadic H") {
    CHECK_THROWS_AS(conv_pool_bound(3, 24, 4), std::invalid_argument);
}

TEST_CASE("stacked 3x3 layers act like one 5x5 window") {
    CHECK(vgg_effective_b(2, 3) == 5);
    CHECK(vgg_effective_b(1, 7) == 7);
    CHECK(vgg_effective_b(4, 1) == 1);
    CHECK_THROWS_AS(vgg_effective_b(0, 3), std::invalid_argument);
}
