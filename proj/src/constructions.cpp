#include "convac/constructions.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "convac/grid.hpp"
#include "convac/linalg.hpp"

namespace convac {

namespace {

std::pair<int, int> far_anchor(Axis axis, int window) {
    return axis == Axis::horizontal ? std::pair<int, int>{0, window - 1}
                                    : std::pair<int, int>{window - 1, 0};
}

Matrix<Rational> representation_or_identity(const Matrix<Rational>& f, int m) {
    if (f.rows == 0 && f.cols == 0) return Matrix<Rational>::identity(m);
    if (f.rows != m || f.cols != m)
        throw std::invalid_argument("representation matrix must be M x M");
    return f;
}

void fill_bias(Kernel<Rational>& kernel, const Rational& value) {
    for (Rational& b : kernel.b.data) b = value;
}

}  // namespace

LayerParams<Rational> materialize_anchor_pair(const AnchorPairLayer& psi, int out_channels) {
    if (psi.r < 2) throw std::invalid_argument("anchor-pair layer needs a window of at least 2");
    if (psi.active < 1 || out_channels < psi.active)
        throw std::invalid_argument("anchor-pair layer needs 1 <= active <= output channels");
    if (psi.a.cols != psi.active || static_cast<int>(psi.beta.size()) != psi.active)
        throw std::invalid_argument("anchor-pair channel map shape mismatch");
    const int d_in = psi.a.rows;
    const auto [aj, ai] = far_anchor(psi.axis, psi.r);

    LayerParams<Rational> params =
        LayerParams<Rational>::make(true, out_channels, 1, d_in, psi.r);
    for (int c = 0; c < psi.active; ++c) {
        Kernel<Rational>& kernel = params.at(c);
        fill_bias(kernel, Rational(1));
        kernel.b.at({0, 0}) = psi.beta[static_cast<std::size_t>(c)];
        kernel.b.at({aj, ai}) = psi.beta[static_cast<std::size_t>(c)];
        for (int m = 0; m < d_in; ++m) {
            kernel.w.at({m, 0, 0}) = psi.a(m, c);
            kernel.w.at({m, aj, ai}) = psi.a(m, c);
        }
    }
    // Channels past `active` keep all-zero weights and biases and evaluate to 0.
    return params;
}

LayerParams<Rational> channel_sum_layer(int d_in, int d_out, int r) {
    LayerParams<Rational> params = LayerParams<Rational>::make(true, d_out, 1, d_in, r);
    for (int c = 0; c < d_out; ++c) {
        Kernel<Rational>& kernel = params.at(c);
        for (Rational& w : kernel.w.data) w = 1;
    }
    return params;
}

LayerParams<Rational> select_channel_layer(int d_in, int d_out, int r) {
    LayerParams<Rational> params = LayerParams<Rational>::make(true, d_out, 1, d_in, r);
    for (int c = 0; c < d_out; ++c) {
        Kernel<Rational>& kernel = params.at(c);
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i) kernel.w.at({0, j, i}) = 1;
    }
    return params;
}

NetworkParams<Rational> claim3_params(const NetworkSpec& spec, Axis axis, const Rational& alpha,
                                      const Matrix<Rational>& f) {
    spec.validate();
    if (spec.depth() < 2)
        throw std::invalid_argument("the construction needs at least one layer after the pair layer");
    if (spec.h % 2 != 0) throw std::invalid_argument("the construction requires an even H");
    const LayerSpec& first = spec.layers.front();
    if (2 * first.r <= spec.h)
        throw std::invalid_argument("first-layer window must exceed H/2");
    if (first.r > spec.h) throw std::invalid_argument("first-layer window must not exceed H");
    if (alpha == 0) throw std::invalid_argument("alpha must be non-zero");

    const Matrix<Rational> rep = representation_or_identity(f, spec.m);
    const Matrix<Rational> finv = invert_exact(rep);
    const int active = std::min(spec.m, first.d);
    const Rational beta = Rational(2) * alpha / active;

    AnchorPairLayer psi;
    psi.r = first.r;
    psi.s = first.s;
    psi.active = active;
    psi.axis = axis;
    psi.a = Matrix<Rational>(spec.m, active);
    psi.beta.assign(static_cast<std::size_t>(active), beta);
    for (int m = 0; m < spec.m; ++m)
        for (int c = 0; c < active; ++c) psi.a(m, c) = -alpha * finv(m, c);

    NetworkParams<Rational> params;
    params.layers.push_back(materialize_anchor_pair(psi, first.d));

    const std::vector<int> sizes = spec.spatial_sizes();
    for (int l = 1; l < spec.depth(); ++l) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(l)];
        if (layer.r != layer.s || sizes[static_cast<std::size_t>(l)] % layer.s != 0)
            throw std::invalid_argument("tail layers must tile their input exactly");
        const int d_in = spec.in_channels(l);
        params.layers.push_back(l == 1 ? channel_sum_layer(d_in, layer.d, layer.r)
                                       : select_channel_layer(d_in, layer.d, layer.r));
    }
    return params;
}

long long claim3_exponent(int h, int r, int s) {
    const long long pairs = std::max<long long>(0, (h - r) / s + 1);
    return pairs * ceil_div(h, s);
}

ConstructionNetwork claim3_network(const Claim3Config& config) {
    if (config.d < 1 || config.d > config.m)
        throw std::invalid_argument("need 1 <= D <= M for the canonical network");
    NetworkSpec spec{config.h, config.m, {}};
    spec.layers.push_back({config.r, config.s, config.d, true});
    const int h1 = ceil_div(config.h, config.s);
    spec.layers.push_back({h1, h1, 1, true});

    ConstructionNetwork out;
    out.spec = spec;
    out.params = claim3_params(spec, config.axis, config.alpha, config.f);
    out.active = config.d;
    out.exponent = claim3_exponent(config.h, config.r, config.s);
    out.expected_rank =
        bigint_pow(BigInt(config.d), static_cast<unsigned long>(out.exponent));
    return out;
}

Matrix<Rational> claim3_pair_matrix(int m, int d, const Rational& alpha, bool merged_tail) {
    if (d < 1 || d > m) throw std::invalid_argument("need 1 <= D <= M");
    const Rational beta = Rational(2) * alpha / d;
    const Rational pair_diag = d * beta * beta - 2 * alpha * beta + alpha * alpha;
    const Rational pair_off = d * beta * beta - 2 * alpha * beta;
    const Rational one_hit = d * beta * beta - alpha * beta;
    const Rational no_hit = d * beta * beta;

    Matrix<Rational> out(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Rational pair = (i < d && j < d) ? (i == j ? pair_diag : pair_off)
                            : (i < d || j < d) ? one_hit
                                               : no_hit;
            if (merged_tail) {
                // The trailing clipped window contributes its own factor, a
                // function of the column index alone.
                pair *= (j < d ? one_hit : no_hit);
            }
            out(i, j) = pair;
        }
    return out;
}

Claim4Compiled claim4_compile(int h, int in_channels, const std::vector<LayerSpec>& phi,
                              const AnchorPairLayer& psi) {
    if (phi.empty()) throw std::invalid_argument("the stack must have at least one layer");
    if (in_channels < 1) throw std::invalid_argument("need at least one input channel");
    NetworkSpec stack{h, in_channels, phi};
    stack.validate();
    const int layers = stack.depth();
    const int active = psi.active;
    if (psi.a.rows != in_channels)
        throw std::invalid_argument("channel map must match the stack input channels");
    if (psi.a.cols != active || static_cast<int>(psi.beta.size()) != active)
        throw std::invalid_argument("anchor-pair channel map shape mismatch");
    for (int l = 0; l < layers - 1; ++l)
        if (2 * active > phi[static_cast<std::size_t>(l)].d)
            throw std::invalid_argument("inner layers need at least twice the active channels");
    if (active > phi.back().d)
        throw std::invalid_argument("last layer needs at least the active channels");
    if (psi.s != total_stride(stack, layers))
        throw std::invalid_argument("psi stride must equal the stack's total stride");
    if (2 * total_receptive(stack, layers) <= h)
        throw std::invalid_argument("stack's total receptive field must exceed H/2");

    const AlphaMinResult shrink = alpha_min_receptive(stack, layers, psi.r - 1);
    if (!shrink.feasible || shrink.value != psi.r)
        throw std::invalid_argument("psi window is not an achievable effective receptive field");
    const std::vector<int>& windows = shrink.windows;

    int merge = 0;  // last layer with a non-trivial shrunken window (0-based)
    for (int l = 0; l < layers; ++l)
        if (windows[static_cast<std::size_t>(l)] >= 2) merge = l;
    if (windows[static_cast<std::size_t>(merge)] < 2)
        throw std::invalid_argument("psi window of 1 cannot host an anchor pair");

    // The shifted copy must never be clipped by an intermediate grid: clipping
    // zeroes the factor while the single-layer form keeps its bias.
    const std::vector<int> sizes = stack.spatial_sizes();
    for (int v = 0; v < sizes.back(); ++v) {
        int pos = v;
        for (int l = layers - 1; l >= 1; --l) {
            const int offset = l <= merge ? windows[static_cast<std::size_t>(l)] - 1 : 0;
            pos = pos * phi[static_cast<std::size_t>(l)].s + offset;
            if (pos >= sizes[static_cast<std::size_t>(l)])
                throw std::invalid_argument(
                    "shifted window clipped by an intermediate layer; this stack cannot "
                    "realize the requested window");
        }
    }

    const bool horizontal = psi.axis == Axis::horizontal;
    auto anchor = [&](int window) {
        return horizontal ? std::pair<int, int>{0, window - 1}
                          : std::pair<int, int>{window - 1, 0};
    };

    Claim4Compiled out;
    out.windows = windows;
    out.active = active;
    out.psi_layer = LayerSpec{psi.r, psi.s, active, true};
    out.psi_params = materialize_anchor_pair(psi, active);

    for (int l = 0; l < layers; ++l) {
        const LayerSpec& layer = phi[static_cast<std::size_t>(l)];
        const int d_in = stack.in_channels(l);
        const auto [sj, si] = anchor(windows[static_cast<std::size_t>(l)]);
        LayerParams<Rational> params =
            LayerParams<Rational>::make(true, layer.d, 1, d_in, layer.r);

        if (l == 0 && merge == 0) {
            // Single effective layer: psi embedded directly in the larger window.
            for (int c = 0; c < active; ++c) {
                Kernel<Rational>& kernel = params.at(c);
                fill_bias(kernel, Rational(1));
                kernel.b.at({0, 0}) = psi.beta[static_cast<std::size_t>(c)];
                kernel.b.at({sj, si}) = psi.beta[static_cast<std::size_t>(c)];
                for (int m = 0; m < d_in; ++m) {
                    kernel.w.at({m, 0, 0}) = psi.a(m, c);
                    kernel.w.at({m, sj, si}) = psi.a(m, c);
                }
            }
        } else if (l == 0) {
            // Transform in place into channels [0, active) and shifted into
            // [active, 2*active); everything else is the constant 1.
            for (int c = 0; c < layer.d; ++c) {
                Kernel<Rational>& kernel = params.at(c);
                fill_bias(kernel, Rational(1));
                if (c < active) {
                    kernel.b.at({0, 0}) = psi.beta[static_cast<std::size_t>(c)];
                    for (int m = 0; m < d_in; ++m) kernel.w.at({m, 0, 0}) = psi.a(m, c);
                } else if (c < 2 * active) {
                    kernel.b.at({sj, si}) = psi.beta[static_cast<std::size_t>(c - active)];
                    for (int m = 0; m < d_in; ++m)
                        kernel.w.at({m, sj, si}) = psi.a(m, c - active);
                }
            }
        } else if (l < merge) {
            // Carry the still half, keep shifting the other one inward.
            for (int c = 0; c < layer.d; ++c) {
                Kernel<Rational>& kernel = params.at(c);
                fill_bias(kernel, Rational(1));
                if (c < active) {
                    kernel.b.at({0, 0}) = 0;
                    kernel.w.at({c, 0, 0}) = 1;
                } else if (c < 2 * active) {
                    kernel.b.at({sj, si}) = 0;
                    kernel.w.at({c, sj, si}) = 1;
                }
            }
        } else if (l == merge) {
            // Multiply the two halves; channels past `active` become zero.
            for (int c = 0; c < layer.d; ++c) {
                Kernel<Rational>& kernel = params.at(c);
                if (c >= active) continue;  // all-zero kernel
                fill_bias(kernel, Rational(1));
                kernel.b.at({0, 0}) = 0;
                kernel.w.at({c, 0, 0}) = 1;
                kernel.b.at({sj, si}) = 0;
                kernel.w.at({active + c, sj, si}) = 1;
            }
        } else {
            // Pass the merged product through; keep the rest at zero.
            for (int c = 0; c < layer.d && c < active; ++c) {
                Kernel<Rational>& kernel = params.at(c);
                fill_bias(kernel, Rational(1));
                kernel.b.at({0, 0}) = 0;
                kernel.w.at({c, 0, 0}) = 1;
            }
        }
        out.phi_params.layers.push_back(std::move(params));
    }
    return out;
}

ConstructionNetwork theorem3_network(const Theorem3Config& config) {
    if (config.h < 2 || config.h % 2 != 0)
        throw std::invalid_argument("the construction requires an even H >= 2");
    if (config.m < 1) throw std::invalid_argument("need at least one template");
    const int n = config.h * config.h;
    if (static_cast<int>(config.side_p.size()) != n / 2 ||
        static_cast<int>(config.side_q.size()) != n / 2)
        throw std::invalid_argument("partition sides must each hold half the positions");
    position_partition(config.h, config.side_p, config.side_q);  // validates the cover

    const int needed = config.shared ? config.m * n : config.m;
    if (config.d1 < needed)
        throw std::invalid_argument(config.shared
                                        ? "shared mode needs at least M * H^2 channels"
                                        : "unshared mode needs at least M channels");

    std::vector<std::pair<int, int>> left = config.side_p;
    std::vector<std::pair<int, int>> right = config.side_q;
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    std::map<std::pair<int, int>, std::pair<int, int>> pair_of;  // host -> far position
    for (std::size_t k = 0; k < left.size(); ++k) {
        std::pair<int, int> host = std::min(left[k], right[k]);
        std::pair<int, int> far = std::max(left[k], right[k]);
        if (host.first > far.first || host.second > far.second)
            throw std::invalid_argument(
                "position pairing is not componentwise ordered; the single-window "
                "construction cannot host this partition");
        pair_of[host] = far;
    }

    const Matrix<Rational> rep = representation_or_identity(config.f, config.m);
    const Matrix<Rational> finv = invert_exact(rep);
    const int h = config.h;

    ConstructionNetwork out;
    out.spec = NetworkSpec{h, config.m, {}};
    out.spec.layers.push_back({h, 1, config.d1, config.shared});
    out.spec.layers.push_back({h, h, 1, true});
    out.expected_rank = bigint_pow(BigInt(config.m), static_cast<unsigned long>(n / 2));
    out.exponent = n / 2;
    out.active = config.m;

    auto write_pattern = [&](Kernel<Rational>& kernel, int c, int u, int v) {
        const auto it = pair_of.find({u, v});
        if (it == pair_of.end()) {
            fill_bias(kernel, Rational(1));
            return;
        }
        const int dj = it->second.first - u;
        const int di = it->second.second - v;
        fill_bias(kernel, Rational(1));
        kernel.b.at({0, 0}) = 0;
        kernel.b.at({dj, di}) = 0;
        for (int m = 0; m < config.m; ++m) {
            kernel.w.at({m, 0, 0}) = finv(m, c);
            kernel.w.at({m, dj, di}) = finv(m, c);
        }
    };

    if (!config.shared) {
        LayerParams<Rational> first =
            LayerParams<Rational>::make(false, config.d1, h, config.m, h);
        for (int u = 0; u < h; ++u)
            for (int v = 0; v < h; ++v)
                for (int c = 0; c < config.m; ++c) write_pattern(first.at(c, u, v), c, u, v);
        out.params.layers.push_back(std::move(first));
        out.params.layers.push_back(channel_sum_layer(config.d1, 1, h));
    } else {
        LayerParams<Rational> first =
            LayerParams<Rational>::make(true, config.d1, 1, config.m, h);
        for (int c = 0; c < config.m; ++c)
            for (int u = 0; u < h; ++u)
                for (int v = 0; v < h; ++v)
                    write_pattern(first.at((c * h + u) * h + v), c, u, v);
        out.params.layers.push_back(std::move(first));

        // Each tail window position sums exactly the channels tagged for it.
        LayerParams<Rational> tail = LayerParams<Rational>::make(true, 1, 1, config.d1, h);
        Kernel<Rational>& kernel = tail.at(0);
        for (int c = 0; c < config.m; ++c)
            for (int u = 0; u < h; ++u)
                for (int v = 0; v < h; ++v) kernel.w.at({(c * h + u) * h + v, u, v}) = 1;
        out.params.layers.push_back(std::move(tail));
    }
    return out;
}

NetworkParams<Rational> random_params(const NetworkSpec& spec, std::uint64_t seed,
                                      const std::vector<Rational>& value_grid) {
    spec.validate();
    std::vector<Rational> grid = value_grid;
    if (grid.empty())
        for (int v : {-3, -2, -1, 1, 2, 3}) grid.push_back(make_rational(v, 2));
    std::mt19937_64 rng(seed);
    auto draw = [&]() { return grid[static_cast<std::size_t>(rng() % grid.size())]; };

    const std::vector<int> sizes = spec.spatial_sizes();
    NetworkParams<Rational> params;
    for (int l = 0; l < spec.depth(); ++l) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(l)];
        const int positions = layer.shared ? 1 : sizes[static_cast<std::size_t>(l + 1)];
        LayerParams<Rational> lp = LayerParams<Rational>::make(
            layer.shared, layer.d, sizes[static_cast<std::size_t>(l + 1)], spec.in_channels(l),
            layer.r);
        for (int pu = 0; pu < positions; ++pu)
            for (int pv = 0; pv < positions; ++pv)
                for (int c = 0; c < layer.d; ++c) {
                    Kernel<Rational>& kernel = lp.at(c, pu, pv);
                    for (Rational& w : kernel.w.data) w = draw();
                    for (Rational& b : kernel.b.data) b = draw();
                }
        params.layers.push_back(std::move(lp));
    }
    return params;
}

}  // namespace convac
