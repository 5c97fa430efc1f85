#include "convac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "convac/analysis.hpp"
#include "convac/constructions.hpp"
#include "convac/grid.hpp"
#include "convac/linalg.hpp"

namespace convac {

namespace {

std::vector<Rational> default_grid() {
    std::vector<Rational> grid;
    for (int v : {-3, -2, -1, 1, 2, 3}) grid.push_back(make_rational(v, 2));
    return grid;
}

struct RankOutcome {
    int exact = -1;
    int numeric = -1;
};

// Exact-mode ranks of the matricized grid tensor under each partition, plus
// the float-mode ranks of the same fixture when cross-mode checking is on.
// The grid tensor is enumerated once per scalar mode.
std::vector<RankOutcome> grid_ranks(const NetworkSpec& spec, const NetworkParams<Rational>& params,
                                    const Matrix<Rational>& f,
                                    const std::vector<IndexPartition>& parts,
                                    const VerifyOptions& options) {
    GridOptions go{options.cap, options.threads};
    std::vector<RankOutcome> out(parts.size());
    const DenseTensor<Rational> grid = grid_tensor(spec, params, f, 0, go);
    for (std::size_t i = 0; i < parts.size(); ++i)
        out[i].exact = rank_exact(matricize(grid, parts[i]));
    if (options.cross_mode) {
        const DenseTensor<double> fgrid =
            grid_tensor(spec, params_to_double(params), matrix_to_double(f), 0, go);
        for (std::size_t i = 0; i < parts.size(); ++i)
            out[i].numeric = rank_numeric(matricize(fgrid, parts[i]), options.tol);
    }
    return out;
}

RankOutcome grid_rank(const NetworkSpec& spec, const NetworkParams<Rational>& params,
                      const Matrix<Rational>& f, const IndexPartition& part,
                      const VerifyOptions& options) {
    return grid_ranks(spec, params, f, {part}, options).front();
}

CaseResult rank_case(const std::string& name, const RankOutcome& got, const BigInt& expected) {
    CaseResult result;
    result.name = name;
    result.pass = BigInt(got.exact) == expected;
    result.cross_ok = got.numeric < 0 || got.numeric == got.exact;
    std::ostringstream detail;
    detail << "rank " << got.exact;
    if (got.numeric >= 0) detail << " (float " << got.numeric << ")";
    detail << ", expected " << expected.get_str();
    result.detail = detail.str();
    return result;
}

bool outputs_match(const DenseTensor<Rational>& wide, const DenseTensor<Rational>& narrow) {
    if (wide.dims[1] != narrow.dims[1] || wide.dims[2] != narrow.dims[2]) return false;
    if (wide.dims[0] < narrow.dims[0]) return false;
    for (int c = 0; c < wide.dims[0]; ++c)
        for (int y = 0; y < wide.dims[1]; ++y)
            for (int x = 0; x < wide.dims[2]; ++x) {
                const Rational& got = wide.at({c, y, x});
                if (c < narrow.dims[0]) {
                    if (got != narrow.at({c, y, x})) return false;
                } else if (got != 0) {
                    return false;
                }
            }
    return true;
}

// ---- prop1: window shrinking / layer insertion preserves the function ----

SuiteResult suite_prop1(const VerifyOptions& options) {
    SuiteResult suite{"prop1", {}};
    struct Pair {
        std::string name;
        NetworkSpec a, b;
        std::vector<int> mapping;
    };
    std::vector<Pair> pairs;
    pairs.push_back({"grow-1x1-to-3x3",
                     NetworkSpec{3, 2, {{3, 1, 2, true}}},
                     NetworkSpec{3, 2, {{1, 1, 2, true}}},
                     {0}});
    pairs.push_back({"grow-2x2-to-3x3-stride-2",
                     NetworkSpec{4, 2, {{3, 2, 3, true}}},
                     NetworkSpec{4, 2, {{2, 2, 3, true}}},
                     {0}});
    pairs.push_back({"insert-identity-before",
                     NetworkSpec{4, 2, {{2, 1, 2, true}, {3, 2, 3, true}}},
                     NetworkSpec{4, 2, {{2, 2, 3, true}}},
                     {-1, 0}});
    pairs.push_back({"insert-identity-between",
                     NetworkSpec{4, 3, {{2, 2, 2, true}, {2, 1, 4, true}, {3, 2, 3, true}}},
                     NetworkSpec{4, 3, {{2, 2, 2, true}, {3, 2, 3, true}}},
                     {0, -1, 1}});
    pairs.push_back({"unshared-window-growth",
                     NetworkSpec{4, 2, {{3, 2, 2, false}}},
                     NetworkSpec{4, 2, {{2, 2, 2, false}}},
                     {0}});

    const int inputs = 50;
    for (const Pair& pair : pairs) {
        const NetworkParams<Rational> pb = random_params(pair.b, options.seed);
        const NetworkParams<Rational> pa = lift_params(pair.a, pair.b, pb, pair.mapping);
        bool all = true;
        std::string detail;
        for (int t = 0; t < inputs; ++t) {
            const DenseTensor<Rational> input =
                random_tensor({pair.b.m, pair.b.h, pair.b.h}, options.seed * 1000 + t);
            const DenseTensor<Rational> out_b = forward_network(pair.b, pb, input);
            const DenseTensor<Rational> out_a = forward_network(pair.a, pa, input);
            if (!outputs_match(out_a, out_b)) {
                all = false;
                detail = "mismatch on input " + std::to_string(t);
                break;
            }
        }
        suite.cases.push_back({pair.name, all, true, all ? "50/50 inputs equal" : detail});
    }

    // Composing identity layers stays the identity.
    {
        NetworkSpec spec{3, 2, {{1, 1, 2, true}, {3, 1, 2, true}, {2, 1, 3, true}}};
        NetworkParams<Rational> params;
        params.layers.push_back(identity_layer<Rational>(2, 2, 1));
        params.layers.push_back(identity_layer<Rational>(2, 2, 3));
        params.layers.push_back(identity_layer<Rational>(2, 3, 2));
        bool all = true;
        for (int t = 0; t < inputs && all; ++t) {
            const DenseTensor<Rational> input = random_tensor({2, 3, 3}, options.seed + 77 * t);
            const DenseTensor<Rational> out = forward_network(spec, params, input);
            all = outputs_match(out, input);
        }
        suite.cases.push_back({"identity-chain", all, true, all ? "identity preserved" : "mismatch"});
    }
    return suite;
}

// ---- lemma1: non-overlapping networks have rank at most D^(L-1) ----

SuiteResult suite_lemma1(const VerifyOptions& options) {
    SuiteResult suite{"lemma1", {}};
    std::mt19937_64 rng(options.seed);
    int bound_failures = 0;
    int cross_failures = 0;
    std::ostringstream failed_seeds;
    for (int t = 0; t < options.trials; ++t) {
        const std::uint64_t spec_seed = rng();
        const SampledNetwork sampled = sample_vanilla_network(spec_seed, false);
        const NetworkSpec& spec = sampled.spec;
        const NetworkParams<Rational>& params = sampled.params;
        const long long limit = sampled.next_to_last;
        const Matrix<Rational> f = Matrix<Rational>::identity(spec.m);
        const std::vector<RankOutcome> got =
            grid_ranks(spec, params, f,
                       {left_right_partition(spec.h), top_bottom_partition(spec.h)}, options);
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (got[i].exact > limit) {
                ++bound_failures;
                failed_seeds << " " << spec_seed << (i == 0 ? "/left-right" : "/top-bottom");
            }
            if (got[i].numeric >= 0 && got[i].numeric != got[i].exact) ++cross_failures;
        }
    }
    std::ostringstream detail;
    detail << options.trials << " specs, " << bound_failures << " bound violations";
    if (options.cross_mode) detail << ", " << cross_failures << " float disagreements";
    if (bound_failures > 0) detail << " (seeds:" << failed_seeds.str() << ")";
    CaseResult result{"rank-upper-bound-sweep", bound_failures == 0, cross_failures == 0,
                      detail.str()};
    suite.cases.push_back(std::move(result));
    return suite;
}

// ---- thm1: rank attainment and genericity of the overlap lower bound ----

SuiteResult suite_thm1(const VerifyOptions& options) {
    SuiteResult suite{"thm1", {}};

    struct Fixture {
        int h, m, r, s, d;
    };
    for (const Fixture& fx : std::vector<Fixture>{
             {2, 2, 2, 1, 2}, {4, 2, 3, 1, 2}, {4, 2, 3, 2, 2}, {2, 2, 2, 2, 2}, {4, 2, 3, 3, 2}}) {
        Claim3Config config{fx.h, fx.m, fx.r, fx.s, fx.d, Axis::horizontal};
        const ConstructionNetwork net = claim3_network(config);
        const RankOutcome got = grid_rank(net.spec, net.params, Matrix<Rational>::identity(fx.m),
                                          left_right_partition(fx.h), options);
        std::ostringstream name;
        name << "pair-construction-H" << fx.h << "-R" << fx.r << "-S" << fx.s;
        suite.cases.push_back(rank_case(name.str(), got, net.expected_rank));
    }

    // Vertical orientation against the top-bottom partition.
    {
        Claim3Config config{2, 2, 2, 1, 2, Axis::vertical};
        const ConstructionNetwork net = claim3_network(config);
        const RankOutcome got = grid_rank(net.spec, net.params, Matrix<Rational>::identity(2),
                                          top_bottom_partition(2), options);
        suite.cases.push_back(rank_case("pair-construction-vertical", got, net.expected_rank));
    }

    // Genericity sweep: random parameters on the H=2 pair-layer shape reach the
    // full rank on both standard partitions for all but (at most) a stray seed.
    // The rank-deficient parameter sets form a hypersurface; a coarse value
    // grid lands on it at a rate near degree/|grid| (the 6-value default
    // measures around forty percent here), so the sweep draws from plus or
    // minus {1..200}/2 to keep that rate well under one percent.
    {
        const NetworkSpec spec{2, 2, {{2, 1, 2, true}, {2, 2, 1, true}}};
        const Matrix<Rational> f = Matrix<Rational>::identity(2);
        std::vector<Rational> fine_grid;
        for (int k = 1; k <= 200; ++k) {
            fine_grid.push_back(make_rational(k, 2));
            fine_grid.push_back(make_rational(-k, 2));
        }
        int hits = 0;
        std::ostringstream failed;
        VerifyOptions exact_only = options;
        exact_only.cross_mode = false;
        for (int t = 0; t < options.trials; ++t) {
            const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(t);
            const NetworkParams<Rational> params = random_params(spec, seed, fine_grid);
            const std::vector<RankOutcome> got = grid_ranks(
                spec, params, f, {left_right_partition(2), top_bottom_partition(2)}, exact_only);
            if (got[0].exact == 4 && got[1].exact == 4)
                ++hits;
            else
                failed << " " << seed;
        }
        std::ostringstream detail;
        detail << hits << "/" << options.trials << " seeds reach rank 4";
        if (hits < options.trials) detail << " (failing seeds:" << failed.str() << ")";
        suite.cases.push_back(
            {"genericity-sweep", hits >= options.trials - (options.trials / 100), true,
             detail.str()});
    }

    // Pipeline: compile the H=4 pair layer onto a two-layer stack and check the
    // stack's grid tensor reaches the reported bound.
    {
        const int h = 4, m = 2;
        const std::vector<LayerSpec> phi{{2, 1, 4, true}, {2, 2, 4, true}};
        const ConstructionNetwork psi_net = claim3_network(Claim3Config{h, m, 3, 2, 2});
        AnchorPairLayer psi;
        psi.r = 3;
        psi.s = 2;
        psi.active = 2;
        psi.axis = Axis::horizontal;
        psi.a = Matrix<Rational>(m, 2);
        for (int mm = 0; mm < m; ++mm)
            for (int c = 0; c < 2; ++c) psi.a(mm, c) = (mm == c) ? Rational(-1) : Rational(0);
        psi.beta.assign(2, Rational(1));
        const Claim4Compiled compiled = claim4_compile(h, m, phi, psi);

        NetworkSpec full{h, m, phi};
        full.layers.push_back({2, 2, 1, true});
        NetworkParams<Rational> params = compiled.phi_params;
        params.layers.push_back(channel_sum_layer(4, 1, 2));

        const BoundReport report = rank_lower_bound(full);
        const RankOutcome got = grid_rank(full, params, Matrix<Rational>::identity(m),
                                          left_right_partition(h), options);
        const BigInt expected = report.best_candidate().value;
        CaseResult result = rank_case("compiled-stack-reaches-bound", got, expected);
        result.pass = result.pass && expected == psi_net.expected_rank;
        suite.cases.push_back(std::move(result));
    }
    return suite;
}

// ---- claim4: the multi-layer simulation of one big-window layer ----

SuiteResult suite_claim4(const VerifyOptions& options) {
    SuiteResult suite{"claim4", {}};
    struct Stack {
        std::string name;
        std::vector<LayerSpec> phi;
        Axis axis;
    };
    const std::vector<Stack> stacks{
        {"two-layer", {{2, 1, 4, true}, {2, 2, 2, true}}, Axis::horizontal},
        {"wide-first", {{3, 1, 4, true}, {2, 2, 2, true}}, Axis::horizontal},
        {"three-layer", {{2, 1, 4, true}, {3, 1, 4, true}, {2, 2, 2, true}}, Axis::horizontal},
        {"two-layer-vertical", {{2, 1, 4, true}, {2, 2, 2, true}}, Axis::vertical},
    };
    const int h = 4, m = 2;
    const std::vector<Rational> grid = default_grid();

    for (const Stack& stack : stacks) {
        NetworkSpec phi_spec{h, m, stack.phi};
        int active = stack.phi.back().d;
        for (std::size_t l = 0; l + 1 < stack.phi.size(); ++l)
            active = std::min(active, stack.phi[l].d / 2);

        std::mt19937_64 rng(options.seed + 13);
        AnchorPairLayer psi;
        psi.s = static_cast<int>(total_stride(phi_spec, phi_spec.depth()));
        psi.r = static_cast<int>(
            alpha_min_receptive(phi_spec, phi_spec.depth(), h / 2).value);
        psi.active = active;
        psi.axis = stack.axis;
        psi.a = Matrix<Rational>(m, active);
        for (int mm = 0; mm < m; ++mm)
            for (int c = 0; c < active; ++c)
                psi.a(mm, c) = grid[static_cast<std::size_t>(rng() % grid.size())];
        for (int c = 0; c < active; ++c)
            psi.beta.push_back(grid[static_cast<std::size_t>(rng() % grid.size())]);

        const Claim4Compiled compiled = claim4_compile(h, m, stack.phi, psi);
        const NetworkSpec psi_spec{h, m, {compiled.psi_layer}};
        const NetworkParams<Rational> psi_params{{compiled.psi_params}};
        const NetworkParams<Rational>& phi_params = compiled.phi_params;

        bool all = true;
        std::string detail = "50/50 inputs equal, zero past channel " + std::to_string(active);
        for (int t = 0; t < 50; ++t) {
            const DenseTensor<Rational> input =
                random_tensor({m, h, h}, options.seed * 31 + static_cast<std::uint64_t>(t));
            const DenseTensor<Rational> phi_out = forward_network(phi_spec, phi_params, input);
            const DenseTensor<Rational> psi_out = forward_network(psi_spec, psi_params, input);
            if (!outputs_match(phi_out, psi_out)) {
                all = false;
                detail = "mismatch on input " + std::to_string(t);
                break;
            }
        }
        suite.cases.push_back({stack.name, all, true, detail});
    }
    return suite;
}

// ---- thm3: full-window constructions for every even partition ----

SuiteResult suite_thm3(const VerifyOptions& options) {
    SuiteResult suite{"thm3", {}};
    const int h = 2;
    for (int m : {2, 3}) {
        const std::vector<IndexPartition> partitions = even_partitions(h);
        int index = 0;
        for (const IndexPartition& part : partitions) {
            std::vector<std::pair<int, int>> side_p, side_q;
            for (int mode : part.p) side_p.emplace_back(mode / h, mode % h);
            for (int mode : part.q) side_q.emplace_back(mode / h, mode % h);

            Theorem3Config config;
            config.h = h;
            config.m = m;
            config.d1 = m;
            config.shared = false;
            config.side_p = side_p;
            config.side_q = side_q;
            const ConstructionNetwork net = theorem3_network(config);
            const RankOutcome got =
                grid_rank(net.spec, net.params, Matrix<Rational>::identity(m), part, options);
            suite.cases.push_back(rank_case("unshared-M" + std::to_string(m) + "-partition" +
                                                std::to_string(index),
                                            got, net.expected_rank));

            Theorem3Config shared = config;
            shared.shared = true;
            shared.d1 = m * h * h;
            const ConstructionNetwork snet = theorem3_network(shared);
            const RankOutcome sgot =
                grid_rank(snet.spec, snet.params, Matrix<Rational>::identity(m), part, options);
            suite.cases.push_back(rank_case("shared-M" + std::to_string(m) + "-partition" +
                                                std::to_string(index),
                                            sgot, snet.expected_rank));
            ++index;
        }
    }
    return suite;
}

// ---- prop2: closed forms for the alternating conv-pool family ----

SuiteResult suite_prop2(const VerifyOptions& options) {
    (void)options;
    SuiteResult suite{"prop2", {}};
    const int m = 3;

    {
        bool ok = true;
        std::string detail = "all strides and receptive fields match";
        for (int b = 1; b <= 7 && ok; ++b)
            for (int levels = 1; levels <= 6 && ok; ++levels) {
                const NetworkSpec spec = conv_pool_spec(b, 1 << levels, m);
                for (int l = 1; l <= levels && ok; ++l) {
                    const long long ts = total_stride(spec, 2 * l - 1);
                    const long long tr = total_receptive(spec, 2 * l - 1);
                    const long long want_ts = 1LL << (l - 1);
                    const long long want_tr = static_cast<long long>(2 * b - 1) * want_ts - b + 1;
                    if (ts != want_ts || tr != want_tr) {
                        ok = false;
                        detail = "mismatch at B=" + std::to_string(b) +
                                 " L=" + std::to_string(levels) + " l=" + std::to_string(l);
                    }
                }
            }
        suite.cases.push_back({"stride-receptive-closed-forms", ok, true, detail});
    }

    {
        bool ok = true;
        std::string detail = "alpha-minimal field is alpha+1 on the dyadic ranges";
        for (int b = 2; b <= 7 && ok; ++b)
            for (int levels = 1; levels <= 6 && ok; ++levels) {
                const NetworkSpec spec = conv_pool_spec(b, 1 << levels, m);
                for (int l = 1; l <= levels && ok; ++l)
                    for (long long alpha = 1LL << (l - 1); alpha <= (1LL << l) - 2 && ok; ++alpha) {
                        const AlphaMinResult got = alpha_min_receptive(spec, 2 * l - 1, alpha);
                        if (!got.feasible || got.value != alpha + 1) {
                            ok = false;
                            detail = "mismatch at B=" + std::to_string(b) + " l=" +
                                     std::to_string(l) + " alpha=" + std::to_string(alpha);
                        }
                    }
            }
        suite.cases.push_back({"alpha-minimal-closed-form", ok, true, detail});
    }

    {
        bool ok = true;
        std::string detail = "bound equals the block closed form for every (B, L)";
        for (int b = 1; b <= 7 && ok; ++b)
            for (int levels = 1; levels <= 6 && ok; ++levels) {
                const int h = 1 << levels;
                const NetworkSpec spec = conv_pool_spec(b, h, m);
                const BoundReport report = rank_lower_bound(spec);
                const ConvPoolBound closed = conv_pool_bound(b, h, m);
                BigInt want = closed.exact_value;
                if (b >= 2) {
                    // Independent route: first block with (2B-1)2^(l-1)-B+1 > H/2.
                    const int first =
                        1 + static_cast<int>(std::floor(std::log2(
                                (static_cast<double>(h) + 2 * b - 2) / (2 * b - 1))));
                    const long long exponent = 1LL << (2 * levels - 2 * first + 1);
                    want = bigint_pow(BigInt(m), static_cast<unsigned long>(exponent));
                }
                if (report.best_candidate().value != want || closed.exact_value != want) {
                    ok = false;
                    detail = "mismatch at B=" + std::to_string(b) + " L=" + std::to_string(levels);
                }
            }
        suite.cases.push_back({"bound-matches-explicit-spec", ok, true, detail});
    }

    {
        const ConvPoolBound bound = conv_pool_bound(5, 32, 64);
        const BigInt reference = bigint_pow(BigInt(64), 20);
        const bool ok = bound.exact_value >= reference && vgg_effective_b(2, 3) == 5;
        suite.cases.push_back({"m64-b5-h32-at-least-64pow20", ok, true,
                               "bound 64^" + std::to_string(bound.exact_exponent) +
                                   ", needs >= 64^20; stacked 3x3 pair acts as B=5"});
    }
    return suite;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"prop1", "lemma1", "thm1", "claim4", "thm3", "prop2"};
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& options) {
    if (name == "prop1") return suite_prop1(options);
    if (name == "lemma1") return suite_lemma1(options);
    if (name == "thm1") return suite_thm1(options);
    if (name == "claim4") return suite_claim4(options);
    if (name == "thm3") return suite_thm3(options);
    if (name == "prop2") return suite_prop2(options);
    throw std::invalid_argument("unknown suite: " + name);
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options) {
    std::vector<SuiteResult> out;
    for (const std::string& name : suite_names()) out.push_back(run_suite(name, options));
    return out;
}

std::vector<int> derive_lift_mapping(const NetworkSpec& a, const NetworkSpec& b) {
    std::vector<int> mapping;
    int next = 0;
    for (int i = 0; i < a.depth(); ++i) {
        const LayerSpec& la = a.layers[static_cast<std::size_t>(i)];
        const bool can_match = next < b.depth() &&
                               la.s == b.layers[static_cast<std::size_t>(next)].s &&
                               la.r >= b.layers[static_cast<std::size_t>(next)].r &&
                               la.d >= b.layers[static_cast<std::size_t>(next)].d;
        if (can_match) {
            mapping.push_back(next++);
        } else if (la.s == 1) {
            mapping.push_back(-1);
        } else {
            throw std::invalid_argument("architectures cannot be aligned: stride-" +
                                        std::to_string(la.s) + " layer " + std::to_string(i + 1) +
                                        " of A has no counterpart in B");
        }
    }
    if (next != b.depth())
        throw std::invalid_argument("architectures cannot be aligned: B has unmatched layers");
    return mapping;
}

DenseTensor<Rational> random_tensor(const std::vector<int>& dims, std::uint64_t seed) {
    static const std::vector<Rational> grid = default_grid();
    std::mt19937_64 rng(seed);
    DenseTensor<Rational> out(dims);
    for (Rational& value : out.data) value = grid[static_cast<std::size_t>(rng() % grid.size())];
    return out;
}

SampledNetwork sample_vanilla_network(std::uint64_t seed, bool zero_bias) {
    static const std::vector<std::pair<int, int>> combos{{2, 2}, {2, 3}, {4, 2}};
    std::mt19937_64 rng(seed);
    // Unit-magnitude parameters: products over the 16 grid positions otherwise
    // span so many orders of magnitude that genuinely non-zero singular values
    // sink below any fixed relative rank threshold, which would make the
    // float-mode twin runs meaningless.
    auto draw = [&]() { return rng() % 2 == 0 ? Rational(1) : Rational(-1); };
    auto channels = [&]() { return 1 + static_cast<int>(rng() % 4); };

    const auto [h, m] = combos[static_cast<std::size_t>(rng() % combos.size())];
    std::vector<int> strides;
    if (h == 2)
        strides = {2};
    else
        strides = (rng() % 2 == 0) ? std::vector<int>{4} : std::vector<int>{2, 2};

    SampledNetwork net;
    net.spec = NetworkSpec{h, m, {}};
    auto& layers = net.spec.layers;
    std::vector<char> kinds;  // 'c' mixing conv, 'p' per-channel pool, 'g' mixing pool, 'r' readout
    int carried = m;
    for (int s : strides) {
        if (rng() % 2 == 0) {
            layers.push_back({1, 1, channels(), true});
            kinds.push_back('c');
            carried = layers.back().d;
        }
        if (rng() % 2 == 0) {
            layers.push_back({s, s, carried, true});  // per-channel product pooling
            kinds.push_back('p');
        } else {
            layers.push_back({s, s, channels(), true});
            kinds.push_back('g');
            carried = layers.back().d;
        }
    }
    net.next_to_last = carried;
    layers.push_back({1, 1, channels(), true});
    kinds.push_back('r');

    for (std::size_t l = 0; l < layers.size(); ++l) {
        const LayerSpec& layer = layers[l];
        const int d_in = net.spec.in_channels(static_cast<int>(l));
        LayerParams<Rational> lp = LayerParams<Rational>::make(true, layer.d, 1, d_in, layer.r);
        for (int c = 0; c < layer.d; ++c) {
            Kernel<Rational>& kernel = lp.at(c);
            if (kinds[l] == 'p') {
                for (int j = 0; j < layer.r; ++j)
                    for (int i = 0; i < layer.r; ++i) kernel.w.at({c, j, i}) = 1;
            } else {
                for (Rational& w : kernel.w.data) w = draw();
                if (kinds[l] != 'r' && !zero_bias)
                    for (Rational& b : kernel.b.data) b = draw();
            }
        }
        net.params.layers.push_back(std::move(lp));
    }
    return net;
}

}  // namespace convac
