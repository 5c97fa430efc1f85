#include "convac/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace convac {

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void check_layer_index(const NetworkSpec& spec, int l, int lowest) {
    if (l < lowest || l > spec.depth())
        throw std::invalid_argument("layer index out of range");
}

constexpr long long kShrinkSearchLimit = 1LL << 22;

}  // namespace

long long total_stride(const NetworkSpec& spec, int l) {
    check_layer_index(spec, l, 0);
    long long prod = 1;
    for (int i = 0; i < l; ++i) prod *= spec.layers[static_cast<std::size_t>(i)].s;
    return prod;
}

long long total_receptive(const NetworkSpec& spec, int l) {
    check_layer_index(spec, l, 1);
    long long value = spec.layers[static_cast<std::size_t>(l - 1)].r * total_stride(spec, l - 1);
    for (int k = 1; k < l; ++k) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(k - 1)];
        value += static_cast<long long>(layer.r - layer.s) * total_stride(spec, k - 1);
    }
    return value;
}

AlphaMinResult alpha_min_receptive(const NetworkSpec& spec, int l, long long alpha) {
    check_layer_index(spec, l, 1);
    if (alpha < 0) throw std::invalid_argument("alpha must be non-negative");

    // With coefficients c_k = T_S^(k-1), the effective receptive field is
    // 1 + sum_k (t_k - 1) c_k, and shrinking below the stride is not allowed,
    // so only the overlap slack (t_k - S^(k)) varies.
    std::vector<long long> coeff(static_cast<std::size_t>(l));
    std::vector<int> slack(static_cast<std::size_t>(l));
    long long base = total_stride(spec, l);
    long long total_slack = 0;
    for (int k = 0; k < l; ++k) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(k)];
        coeff[static_cast<std::size_t>(k)] = total_stride(spec, k);
        if (layer.r < layer.s) {
            // No window in [S, R]; the layer admits no effective receptive field.
            return AlphaMinResult{};
        }
        slack[static_cast<std::size_t>(k)] = layer.r - layer.s;
        total_slack += slack[static_cast<std::size_t>(k)] * coeff[static_cast<std::size_t>(k)];
    }
    if (total_slack > kShrinkSearchLimit)
        throw std::invalid_argument("receptive-field search space too large");

    // reach[k][w]: layers k..l-1 (0-based) can contribute exactly w of slack.
    std::vector<std::vector<char>> reach(static_cast<std::size_t>(l + 1));
    reach[static_cast<std::size_t>(l)] = {1};
    std::vector<long long> suffix_max(static_cast<std::size_t>(l + 1), 0);
    for (int k = l - 1; k >= 0; --k) {
        suffix_max[static_cast<std::size_t>(k)] =
            suffix_max[static_cast<std::size_t>(k + 1)] +
            slack[static_cast<std::size_t>(k)] * coeff[static_cast<std::size_t>(k)];
        std::vector<char> can(static_cast<std::size_t>(suffix_max[static_cast<std::size_t>(k)] + 1), 0);
        const auto& next = reach[static_cast<std::size_t>(k + 1)];
        for (long long w = 0; w < static_cast<long long>(next.size()); ++w) {
            if (!next[static_cast<std::size_t>(w)]) continue;
            for (int t = 0; t <= slack[static_cast<std::size_t>(k)]; ++t)
                can[static_cast<std::size_t>(w + t * coeff[static_cast<std::size_t>(k)])] = 1;
        }
        reach[static_cast<std::size_t>(k)] = std::move(can);
    }

    const auto& all = reach[0];
    long long chosen = -1;
    for (long long w = 0; w < static_cast<long long>(all.size()); ++w) {
        if (all[static_cast<std::size_t>(w)] && base + w > alpha) {
            chosen = w;
            break;
        }
    }
    if (chosen < 0) return AlphaMinResult{};

    // Witness, taking as much overlap as possible in the earliest layers; the
    // multi-layer simulation prefers its shifts close to the input.
    AlphaMinResult result;
    result.feasible = true;
    result.value = base + chosen;
    result.windows.resize(static_cast<std::size_t>(l));
    long long remaining = chosen;
    for (int k = 0; k < l; ++k) {
        const auto& next = reach[static_cast<std::size_t>(k + 1)];
        int picked = -1;
        for (int t = slack[static_cast<std::size_t>(k)]; t >= 0; --t) {
            const long long rest = remaining - t * coeff[static_cast<std::size_t>(k)];
            if (rest >= 0 && rest < static_cast<long long>(next.size()) &&
                next[static_cast<std::size_t>(rest)]) {
                picked = t;
                break;
            }
        }
        if (picked < 0) throw std::logic_error("shrink-search witness reconstruction failed");
        result.windows[static_cast<std::size_t>(k)] =
            spec.layers[static_cast<std::size_t>(k)].s + picked;
        remaining -= picked * coeff[static_cast<std::size_t>(k)];
    }

    // The witness must reproduce the value through the receptive-field formula.
    NetworkSpec shrunk = spec;
    for (int k = 0; k < l; ++k)
        shrunk.layers[static_cast<std::size_t>(k)].r = result.windows[static_cast<std::size_t>(k)];
    if (total_receptive(shrunk, l) != result.value)
        throw std::logic_error("shrink-search witness does not match its value");
    return result;
}

BoundReport rank_lower_bound(const NetworkSpec& spec) {
    spec.validate();
    if (spec.h % 2 != 0) throw std::invalid_argument("rank bound requires an even H");
    if (!spec.collapsing())
        throw std::invalid_argument("rank bound requires a collapsing network");

    BoundReport report;
    for (int l = 1; l <= spec.depth(); ++l) {
        report.t_s.push_back(total_stride(spec, l));
        report.t_r.push_back(total_receptive(spec, l));
    }

    const long long half = spec.h / 2;
    for (int k = 1; k <= spec.depth(); ++k) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(k - 1)];
        if (report.t_r[static_cast<std::size_t>(k - 1)] <= half) continue;
        report.valid_layers.push_back(k);

        const AlphaMinResult alpha = alpha_min_receptive(spec, k, half);
        if (!alpha.feasible) continue;

        long long layer_min = spec.layers[0].d;
        for (int i = 1; i < k; ++i)
            layer_min = std::min<long long>(layer_min, spec.layers[static_cast<std::size_t>(i)].d);

        BoundCandidate cand;
        cand.layer = k;
        cand.t_s = report.t_s[static_cast<std::size_t>(k - 1)];
        cand.t_r = report.t_r[static_cast<std::size_t>(k - 1)];
        cand.alpha_min = alpha.value;
        cand.windows = alpha.windows;
        cand.base = std::min<long long>({static_cast<long long>(spec.m), layer.d, layer_min / 2});
        const long long rows = std::max<long long>(0, floor_div(spec.h - alpha.value, cand.t_s) + 1);
        const long long cols = ceil_div(spec.h, static_cast<int>(cand.t_s));
        cand.exponent = rows * cols;
        cand.value = bigint_pow(BigInt(static_cast<long>(cand.base)),
                                static_cast<unsigned long>(cand.exponent));
        cand.log10_value = cand.value > 0 ? bigint_log10(cand.value) : 0.0;
        report.candidates.push_back(std::move(cand));
    }

    if (report.candidates.empty())
        throw std::invalid_argument("no layer has a total receptive field above H/2");
    report.best = 0;
    for (int i = 1; i < static_cast<int>(report.candidates.size()); ++i)
        if (report.candidates[static_cast<std::size_t>(i)].value >
            report.candidates[static_cast<std::size_t>(report.best)].value)
            report.best = i;
    return report;
}

std::optional<ConvPoolPattern> match_conv_pool(const NetworkSpec& spec) {
    if (spec.depth() < 2 || spec.depth() % 2 != 0) return std::nullopt;
    const int blocks = spec.depth() / 2;
    if (spec.h != (1 << blocks)) return std::nullopt;
    const int b = spec.layers[0].r;
    for (int l = 0; l < spec.depth(); ++l) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(l)];
        if (layer.d < 2 * spec.m) return std::nullopt;
        if (l % 2 == 0 && (layer.r != b || layer.s != 1)) return std::nullopt;
        if (l % 2 == 1 && (layer.r != 2 || layer.s != 2)) return std::nullopt;
    }
    return ConvPoolPattern{b, blocks, spec.m};
}

NetworkSpec conv_pool_spec(int b, int h, int m) {
    if (b < 1 || m < 1) throw std::invalid_argument("B and M must be at least 1");
    int blocks = 0;
    for (int size = h; size > 1; size /= 2, ++blocks)
        if (size % 2 != 0) throw std::invalid_argument("H must be a power of two");
    if (h < 2) throw std::invalid_argument("H must be at least 2");
    NetworkSpec spec{h, m, {}};
    for (int l = 0; l < blocks; ++l) {
        spec.layers.push_back({b, 1, 2 * m, true});
        spec.layers.push_back({2, 2, 2 * m, true});
    }
    return spec;
}

ConvPoolBound conv_pool_bound(int b, int h, int m) {
    if (m < 1) throw std::invalid_argument("M must be at least 1");
    int levels = 0;
    for (int size = h; size > 1; size /= 2, ++levels)
        if (size % 2 != 0) throw std::invalid_argument("H must be a power of two");
    if (h < 2 || b < 1) throw std::invalid_argument("need H >= 2 and B >= 1");

    ConvPoolBound bound;
    if (b == 1) {
        // Every conv block is non-overlapping; only the final collapse
        // qualifies and the bound degenerates to M.
        bound.first_block = 0;
        bound.exact_exponent = 1;
    } else {
        int first = 0;
        for (int l = 1; l <= levels; ++l) {
            const long long t_r = static_cast<long long>(2 * b - 1) * (1LL << (l - 1)) - b + 1;
            if (2 * t_r > h) {
                first = l;
                break;
            }
        }
        if (first == 0) throw std::logic_error("no conv block exceeds half the input");
        bound.first_block = first;
        const long long shift = 2LL * levels - 2LL * first + 1;
        if (shift > 26) throw std::invalid_argument("bound exponent too large to materialize");
        bound.exact_exponent = 1LL << shift;
    }

    bound.closed_form_exponent =
        make_rational(static_cast<long>(2 * b - 1) * (2 * b - 1), 2) *
        make_rational(static_cast<long>(h) * h,
                      static_cast<long>(h + 2 * b - 2) * (h + 2 * b - 2));
    if (Rational(static_cast<long>(bound.exact_exponent)) < bound.closed_form_exponent)
        throw std::logic_error("exact bound fell below its closed form");
    if (5 * (b - 1) <= h &&
        4 * bound.exact_exponent < static_cast<long long>(2 * b - 1) * (2 * b - 1))
        throw std::logic_error("exact bound fell below the quarter-square form");

    bound.exact_value = bigint_pow(BigInt(m), static_cast<unsigned long>(bound.exact_exponent));
    bound.log10_value = m > 1 ? bigint_log10(bound.exact_value) : 0.0;
    return bound;
}

long long vgg_effective_b(int k, int c) {
    if (k < 1 || c < 1) throw std::invalid_argument("need K >= 1 and C >= 1");
    return static_cast<long long>(k) * (c - 1) + 1;
}

}  // namespace convac
