#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "convac/constructions.hpp"
#include "convac/grid.hpp"
#include "convac/linalg.hpp"
#include "convac/verify.hpp"

using namespace convac;

namespace {

int construction_rank(const ConstructionNetwork& net, const IndexPartition& part) {
    const DenseTensor<Rational> grid =
        grid_tensor(net.spec, net.params, Matrix<Rational>::identity(net.spec.m), 0);
    return rank_exact(matricize(grid, part));
}

}  // namespace

TEST_CASE("pair matrices have rank equal to the active channel count") {
    for (int m : {2, 3, 4})
        for (int d = 1; d <= m; ++d)
            for (bool merged : {false, true}) {
                const Matrix<Rational> a = claim3_pair_matrix(m, d, Rational(1), merged);
                CHECK(rank_exact(a) == d);
                // The off-diagonal of the active block cancels exactly.
                if (d >= 2) CHECK(a(0, 1) == 0);
            }
}

TEST_CASE("smallest pair construction reaches rank 4") {
    const ConstructionNetwork net = claim3_network(Claim3Config{2, 2, 2, 1, 2});
    CHECK(net.exponent == 2);
    CHECK(net.expected_rank == 4);
    CHECK(construction_rank(net, left_right_partition(2)) == 4);
}

TEST_CASE("pair construction with a clipped right window") {
    // S does not divide R-1: the clipped windows contribute rank-1 factors.
    const ConstructionNetwork net = claim3_network(Claim3Config{2, 2, 2, 2, 2});
    CHECK(net.exponent == 1);
    CHECK(construction_rank(net, left_right_partition(2)) == 2);
}

TEST_CASE("pair construction grid entries expand to the pair-matrix product") {
    // At H=2 the matricization factors into one pair matrix per row; with
    // alpha = 1 those are exactly the identity, so entry (d1,d2,d3,d4) is
    // [d1=d2][d3=d4].
    const ConstructionNetwork net = claim3_network(Claim3Config{2, 2, 2, 1, 2});
    const Matrix<Rational> pair = claim3_pair_matrix(2, 2, Rational(1), true);
    const DenseTensor<Rational> grid =
        grid_tensor(net.spec, net.params, Matrix<Rational>::identity(2), 0);
    for (int d1 = 0; d1 < 2; ++d1)
        for (int d2 = 0; d2 < 2; ++d2)
            for (int d3 = 0; d3 < 2; ++d3)
                for (int d4 = 0; d4 < 2; ++d4)
                    CHECK(grid.at({d1, d2, d3, d4}) == pair(d1, d2) * pair(d3, d4));
}

TEST_CASE("vertical pair construction matches the top-bottom partition") {
    Claim3Config config{2, 2, 2, 1, 2, Axis::vertical};
    const ConstructionNetwork net = claim3_network(config);
    CHECK(construction_rank(net, top_bottom_partition(2)) == 4);
    // Against the mismatched partition the pairs fall on one side only.
    CHECK(construction_rank(net, left_right_partition(2)) == 1);
}

TEST_CASE("pair construction with a non-identity representation matrix") {
    Claim3Config config{2, 2, 2, 1, 2};
    config.f = Matrix<Rational>(2, 2);
    config.f(0, 0) = 1;
    config.f(0, 1) = 1;
    config.f(1, 0) = Rational(1, 2);
    config.f(1, 1) = -1;
    REQUIRE(is_nonsingular(config.f));
    const ConstructionNetwork net = claim3_network(config);
    const DenseTensor<Rational> grid = grid_tensor(net.spec, net.params, config.f, 0);
    CHECK(rank_exact(matricize(grid, left_right_partition(2))) == 4);
}

TEST_CASE("pair construction rejects undersized windows") {
    CHECK_THROWS_AS(claim3_network(Claim3Config{4, 2, 2, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(claim3_network(Claim3Config{2, 2, 2, 1, 3}), std::invalid_argument);
    NetworkSpec one_layer{2, 2, {{2, 1, 2, true}}};
    CHECK_THROWS_AS(claim3_params(one_layer, Axis::horizontal), std::invalid_argument);
}

TEST_CASE("alpha scaling does not change the attained rank") {
    for (const Rational& alpha : {Rational(1), Rational(2), Rational(-1, 2)}) {
        Claim3Config config{2, 2, 2, 1, 2};
        config.alpha = alpha;
        const ConstructionNetwork net = claim3_network(config);
        CHECK(construction_rank(net, left_right_partition(2)) == 4);
    }
}

TEST_CASE("compiled stacks reproduce the big-window layer exactly") {
    VerifyOptions options;
    options.seed = 3;
    const SuiteResult result = run_suite("claim4", options);
    for (const CaseResult& c : result.cases) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.pass);
    }
}

TEST_CASE("single-layer stack embeds the window directly") {
    // L = 1 degenerates to window shrinking.
    const int h = 4, m = 2;
    AnchorPairLayer psi;
    psi.r = 3;
    psi.s = 1;
    psi.active = 1;
    psi.a = Matrix<Rational>(m, 1);
    psi.a(0, 0) = Rational(1, 2);
    psi.a(1, 0) = Rational(-1);
    psi.beta = {Rational(2)};
    const std::vector<LayerSpec> phi{{4, 1, 2, true}};
    const Claim4Compiled compiled = claim4_compile(h, m, phi, psi);
    const NetworkSpec phi_spec{h, m, phi};
    const NetworkSpec psi_spec{h, m, {compiled.psi_layer}};
    const NetworkParams<Rational> psi_params{{compiled.psi_params}};
    for (int t = 0; t < 20; ++t) {
        const DenseTensor<Rational> input = random_tensor({m, h, h}, 900 + t);
        const DenseTensor<Rational> phi_out =
            forward_network(phi_spec, compiled.phi_params, input);
        const DenseTensor<Rational> psi_out = forward_network(psi_spec, psi_params, input);
        for (int y = 0; y < phi_out.dims[1]; ++y)
            for (int x = 0; x < phi_out.dims[2]; ++x) {
                CHECK(phi_out.at({0, y, x}) == psi_out.at({0, y, x}));
                CHECK(phi_out.at({1, y, x}) == 0);
            }
    }
}

TEST_CASE("claim4 validates its arithmetic preconditions") {
    const int h = 4, m = 2;
    AnchorPairLayer psi;
    psi.r = 3;
    psi.s = 2;
    psi.active = 2;
    psi.a = Matrix<Rational>(m, 2);
    psi.beta = {Rational(1), Rational(1)};

    // Wrong stride.
    CHECK_THROWS_AS(claim4_compile(h, m, {{2, 1, 4, true}, {2, 1, 4, true}}, psi),
                    std::invalid_argument);
    // Receptive field stuck at H/2.
    CHECK_THROWS_AS(claim4_compile(h, m, {{2, 2, 4, true}, {1, 1, 4, true}}, psi),
                    std::invalid_argument);
    // Too few channels for the two halves.
    CHECK_THROWS_AS(claim4_compile(h, m, {{2, 1, 3, true}, {2, 2, 2, true}}, psi),
                    std::invalid_argument);
}

TEST_CASE("full-window construction reaches the even-partition rank") {
    VerifyOptions options;
    const SuiteResult result = run_suite("thm3", options);
    for (const CaseResult& c : result.cases) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.pass);
    }
}

TEST_CASE("full-window construction validates the partition and channels") {
    Theorem3Config config;
    config.h = 2;
    config.m = 2;
    config.d1 = 2;
    config.side_p = {{0, 0}, {0, 1}};
    config.side_q = {{1, 0}};  // uneven
    CHECK_THROWS_AS(theorem3_network(config), std::invalid_argument);

    config.side_q = {{1, 0}, {1, 1}};
    config.d1 = 1;  // below M
    CHECK_THROWS_AS(theorem3_network(config), std::invalid_argument);

    config.d1 = 2;
    config.shared = true;  // shared mode needs M * H^2
    CHECK_THROWS_AS(theorem3_network(config), std::invalid_argument);
}

TEST_CASE("random parameters are reproducible and respect sharing") {
    const NetworkSpec spec{4, 2, {{3, 1, 2, false}, {4, 4, 1, true}}};
    const NetworkParams<Rational> a = random_params(spec, 123);
    const NetworkParams<Rational> b = random_params(spec, 123);
    const NetworkParams<Rational> c = random_params(spec, 124);
    CHECK(a.layers[0].positions == 4);
    CHECK(a.layers[0].kernels.size() == 4 * 4 * 2);
    REQUIRE(a.layers.size() == b.layers.size());
    bool equal = true;
    bool different = false;
    for (std::size_t l = 0; l < a.layers.size(); ++l)
        for (std::size_t k = 0; k < a.layers[l].kernels.size(); ++k) {
            equal = equal && a.layers[l].kernels[k].w == b.layers[l].kernels[k].w &&
                    a.layers[l].kernels[k].b == b.layers[l].kernels[k].b;
            different = different || !(a.layers[l].kernels[k].w == c.layers[l].kernels[k].w);
        }
    CHECK(equal);
    CHECK(different);
}

TEST_CASE("genericity in miniature: random seeds reach the full rank") {
    VerifyOptions options;
    options.trials = 20;
    options.seed = 2024;
    const SuiteResult result = run_suite("thm1", options);
    for (const CaseResult& c : result.cases) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.pass);
    }
}
