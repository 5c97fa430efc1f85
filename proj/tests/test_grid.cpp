#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "convac/constructions.hpp"
#include "convac/grid.hpp"
#include "convac/linalg.hpp"
#include "convac/verify.hpp"

using namespace convac;

TEST_CASE("standard partitions at H=2 unroll to the documented modes") {
    const IndexPartition lr = left_right_partition(2);
    CHECK(lr.p == std::vector<int>{0, 2});
    CHECK(lr.q == std::vector<int>{1, 3});
    const IndexPartition tb = top_bottom_partition(2);
    CHECK(tb.p == std::vector<int>{0, 1});
    CHECK(tb.q == std::vector<int>{2, 3});
    CHECK_THROWS_AS(left_right_partition(3), std::invalid_argument);
}

TEST_CASE("custom partitions validate their cover") {
    CHECK_THROWS_AS(position_partition(2, {{0, 0}, {0, 1}}, {{0, 1}, {1, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(position_partition(2, {{0, 0}}, {{0, 1}, {1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(position_partition(2, {{0, 0}, {2, 0}}, {{0, 1}, {1, 1}}),
                    std::invalid_argument);
    const IndexPartition ok = position_partition(2, {{0, 0}, {1, 0}}, {{0, 1}, {1, 1}});
    CHECK(ok.p == std::vector<int>{0, 2});
}

TEST_CASE("exactly three even partitions of the 2x2 grid") {
    const std::vector<IndexPartition> parts = even_partitions(2);
    CHECK(parts.size() == 3);
    for (const IndexPartition& part : parts) {
        CHECK(part.even());
        CHECK(part.p.front() == 0);
    }
}

TEST_CASE("grid tensor of a single 1x1 layer lists bias plus weight") {
    // H=1, one 1x1 layer: entry d is b + w_d.
    NetworkSpec spec{1, 3, {{1, 1, 1, true}}};
    NetworkParams<Rational> params;
    params.layers.push_back(LayerParams<Rational>::make(true, 1, 1, 3, 1));
    Kernel<Rational>& kernel = params.layers[0].at(0);
    kernel.b.at({0, 0}) = Rational(1, 2);
    kernel.w.at({0, 0, 0}) = 1;
    kernel.w.at({1, 0, 0}) = 2;
    kernel.w.at({2, 0, 0}) = 3;
    const DenseTensor<Rational> grid =
        grid_tensor(spec, params, Matrix<Rational>::identity(3), 0);
    CHECK(grid.dims == std::vector<int>{3});
    CHECK(grid.data[0] == Rational(3, 2));
    CHECK(grid.data[1] == Rational(5, 2));
    CHECK(grid.data[2] == Rational(7, 2));
}

TEST_CASE("global product of channel 0 against the direct formula") {
    // One full-window layer picking channel 0: with F = I, the entry is 1 when
    // every position selects template 0 and 0 otherwise.
    NetworkSpec spec{2, 2, {{2, 2, 1, true}}};
    NetworkParams<Rational> params;
    params.layers.push_back(select_channel_layer(2, 1, 2));
    const DenseTensor<Rational> grid =
        grid_tensor(spec, params, Matrix<Rational>::identity(2), 0);
    for (long long flat = 0; flat < grid.size(); ++flat)
        CHECK(grid.data[static_cast<std::size_t>(flat)] == (flat == 0 ? 1 : 0));
}

TEST_CASE("grid tensor with F is the operator applied to the coefficients tensor") {
    // The identity needs score functions that are multilinear in the
    // representation outputs, which is the bias-free non-overlapping shape.
    for (std::uint64_t seed : {3u, 4u, 5u, 6u}) {
        const SampledNetwork net = sample_vanilla_network(seed, true);
        Matrix<Rational> f(net.spec.m, net.spec.m);
        std::mt19937_64 rng(seed + 99);
        do {
            for (Rational& v : f.data) v = make_rational(static_cast<long>(rng() % 7) - 3, 2);
        } while (!is_nonsingular(f));
        const DenseTensor<Rational> coeff =
            grid_tensor(net.spec, net.params, Matrix<Rational>::identity(net.spec.m), 0);
        const DenseTensor<Rational> direct = grid_tensor(net.spec, net.params, f, 0);
        const DenseTensor<Rational> mapped = apply_operator(
            coeff, std::vector<Matrix<Rational>>(static_cast<std::size_t>(coeff.order()), f));
        CHECK(direct == mapped);
    }
}

TEST_CASE("grid rank does not depend on the representation matrix") {
    for (std::uint64_t seed : {11u, 12u}) {
        const SampledNetwork net = sample_vanilla_network(seed, true);
        Matrix<Rational> f(net.spec.m, net.spec.m);
        std::mt19937_64 rng(seed + 7);
        do {
            for (Rational& v : f.data) v = make_rational(static_cast<long>(rng() % 7) - 3, 2);
        } while (!is_nonsingular(f));
        const DenseTensor<Rational> base =
            grid_tensor(net.spec, net.params, Matrix<Rational>::identity(net.spec.m), 0);
        const DenseTensor<Rational> mapped = grid_tensor(net.spec, net.params, f, 0);
        CHECK(rank_exact(matricize(base, left_right_partition(net.spec.h))) ==
              rank_exact(matricize(mapped, left_right_partition(net.spec.h))));
        CHECK(rank_exact(matricize(base, top_bottom_partition(net.spec.h))) ==
              rank_exact(matricize(mapped, top_bottom_partition(net.spec.h))));
    }
}

TEST_CASE("relabeling templates permutes the grid tensor") {
    const NetworkSpec spec{2, 2, {{2, 2, 2, true}}};
    const NetworkParams<Rational> params = random_params(spec, 13);
    Matrix<Rational> swap(2, 2);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    const DenseTensor<Rational> base = grid_tensor(spec, params, Matrix<Rational>::identity(2), 0);
    const DenseTensor<Rational> permuted = grid_tensor(spec, params, swap, 0);
    for (int d0 = 0; d0 < 2; ++d0)
        for (int d1 = 0; d1 < 2; ++d1)
            for (int d2 = 0; d2 < 2; ++d2)
                for (int d3 = 0; d3 < 2; ++d3)
                    CHECK(permuted.at({d0, d1, d2, d3}) ==
                          base.at({1 - d0, 1 - d1, 1 - d2, 1 - d3}));
}

TEST_CASE("grid preconditions: cap, singular F, non-collapsing specs") {
    NetworkSpec spec{2, 2, {{2, 2, 1, true}}};
    NetworkParams<Rational> params;
    params.layers.push_back(channel_sum_layer(2, 1, 2));
    GridOptions tiny;
    tiny.cap = 8;
    CHECK_THROWS_AS(grid_tensor(spec, params, Matrix<Rational>::identity(2), 0, tiny),
                    CapExceededError);
    CHECK_THROWS_AS(grid_tensor(spec, params, Matrix<Rational>(2, 2), 0), std::invalid_argument);

    NetworkSpec open{2, 2, {{1, 1, 1, true}}};
    NetworkParams<Rational> open_params;
    open_params.layers.push_back(channel_sum_layer(2, 1, 1));
    CHECK_THROWS_AS(grid_tensor(open, open_params, Matrix<Rational>::identity(2), 0),
                    std::invalid_argument);
}

TEST_CASE("multi-threaded enumeration matches single-threaded exactly") {
    const NetworkSpec spec{2, 3, {{2, 1, 2, true}, {2, 2, 1, true}}};
    const NetworkParams<Rational> params = random_params(spec, 17);
    GridOptions one;
    GridOptions four;
    four.threads = 4;
    const Matrix<Rational> f = Matrix<Rational>::identity(3);
    CHECK(grid_tensor(spec, params, f, 0, one) == grid_tensor(spec, params, f, 0, four));

    const NetworkParams<double> dparams = params_to_double(params);
    const Matrix<double> df = matrix_to_double(f);
    CHECK(grid_tensor(spec, dparams, df, 0, one) == grid_tensor(spec, dparams, df, 0, four));
}

TEST_CASE("non-overlapping rank stays within the next-to-last channel count") {
    // A reduced sweep; the verification suite runs the full one.
    VerifyOptions options;
    options.trials = 12;
    options.seed = 19;
    const SuiteResult result = run_suite("lemma1", options);
    for (const CaseResult& c : result.cases) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.pass);
    }
}
