#ifndef CONVAC_ANALYSIS_HPP
#define CONVAC_ANALYSIS_HPP

#include <optional>
#include <vector>

#include "convac/network.hpp"
#include "convac/rational.hpp"

namespace convac {

// Total stride of layer l (1-based; l = 0 gives 1): prod_{i<=l} S^(i).
long long total_stride(const NetworkSpec& spec, int l);

// Total receptive field of layer l (1-based):
//   R^(l) * T_S^(l-1) + sum_{k<l} (R^(k) - S^(k)) * T_S^(k-1).
long long total_receptive(const NetworkSpec& spec, int l);

struct AlphaMinResult {
    bool feasible = false;
    long long value = 0;
    std::vector<int> windows;  // witness t_1..t_l with S^(i) <= t_i <= R^(i)
};

// Smallest effective total receptive field of layer l strictly greater than
// alpha, minimized over per-layer window shrinkages t_i in [S^(i), R^(i)].
// Computed by dynamic programming over the achievable-value set; the witness
// windows are returned and satisfy total_receptive(t) == value.
AlphaMinResult alpha_min_receptive(const NetworkSpec& spec, int l, long long alpha);

struct BoundCandidate {
    int layer = 0;  // 1-based layer index K
    long long t_s = 0;
    long long t_r = 0;
    long long alpha_min = 0;
    std::vector<int> windows;
    long long base = 0;      // min{M, D^(K), floor(min_{l<=K} D^(l) / 2)}
    long long exponent = 0;  // floor((H - alpha_min)/T_S + 1) * ceil(H / T_S)
    BigInt value;            // base^exponent, exact
    double log10_value = 0.0;
};

struct BoundReport {
    std::vector<long long> t_s;  // T_S^(1..L)
    std::vector<long long> t_r;  // T_R^(1..L)
    std::vector<int> valid_layers;
    std::vector<BoundCandidate> candidates;
    int best = -1;  // index into candidates of the maximal bound

    const BoundCandidate& best_candidate() const { return candidates.at(static_cast<std::size_t>(best)); }
};

// Grid-tensor rank lower bound for the standard partitions, maximized over
// every layer K whose total receptive field exceeds H/2. Requires an even H
// and a collapsing spec.
BoundReport rank_lower_bound(const NetworkSpec& spec);

// Blocks of a B x B stride-1 layer followed by a 2 x 2 stride-2 layer.
struct ConvPoolPattern {
    int b = 0;
    int blocks = 0;  // so H = 2^blocks when the network collapses
    int m = 0;
};

// Detects the alternating conv-pool shape; all channel counts must be >= 2M.
std::optional<ConvPoolPattern> match_conv_pool(const NetworkSpec& spec);

struct ConvPoolBound {
    Rational closed_form_exponent;  // (2B-1)^2/2 * (1 + (2B-2)/H)^(-2), as log_M
    long long exact_exponent = 0;   // 2^(2L - 2l + 1) at the first qualifying block
    int first_block = 0;            // 1-based block index l
    BigInt exact_value;             // M^exact_exponent
    double log10_value = 0.0;
};

// Closed-form bound for the alternating conv-pool family with H = 2^L.
// Checks internally that the exact bound dominates the closed form, and for
// B <= H/5 + 1 that it also dominates M^((2B-1)^2 / 4).
ConvPoolBound conv_pool_bound(int b, int h, int m);

// Effective single-conv window of K stacked C x C stride-1 layers: K*(C-1)+1.
long long vgg_effective_b(int k, int c);

// The explicit alternating conv-pool spec (channels = 2M throughout).
NetworkSpec conv_pool_spec(int b, int h, int m);

}  // namespace convac

#endif
