#ifndef CONVAC_CONSTRUCTIONS_HPP
#define CONVAC_CONSTRUCTIONS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "convac/analysis.hpp"
#include "convac/network.hpp"
#include "convac/rational.hpp"
#include "convac/tensor.hpp"

namespace convac {

// Orientation of the anchor pair inside a big window. Horizontal anchors
// (1,1) and (1,R) bridge the left-right partition; vertical anchors (1,1) and
// (R,1) bridge the top-bottom one.
enum class Axis { horizontal, vertical };

// A single big-window layer whose kernels touch only the window origin and the
// far anchor: for active channel c, w(m, anchor) = a(m, c) and the bias is
// beta[c] at both anchors and 1 elsewhere. Channels past `active` are zero.
struct AnchorPairLayer {
    int r = 2;
    int s = 1;
    int active = 1;
    Axis axis = Axis::horizontal;
    Matrix<Rational> a;            // in_channels x active
    std::vector<Rational> beta;    // size active
};

LayerParams<Rational> materialize_anchor_pair(const AnchorPairLayer& psi, int out_channels);

// Tail kernels shared by the rank constructions: a channel sum followed by the
// window product, and a pass-through of channel 0.
LayerParams<Rational> channel_sum_layer(int d_in, int d_out, int r);
LayerParams<Rational> select_channel_layer(int d_in, int d_out, int r);

struct ConstructionNetwork {
    NetworkSpec spec;
    NetworkParams<Rational> params;
    BigInt expected_rank;
    long long exponent = 0;
    int active = 0;  // the D realized by the construction
};

struct Claim3Config {
    int h = 2;
    int m = 2;
    int r = 2;
    int s = 1;
    int d = 2;
    Axis axis = Axis::horizontal;
    Rational alpha = Rational(1);
    Matrix<Rational> f;  // empty -> identity
};

// Rank-attaining parameters for a network whose first layer has R > H/2:
// first-layer kernels pair far-apart template indices through -alpha * F^(-1)
// at the two anchors with bias 2*alpha/D, the second layer sums channels, and
// any later layers carry channel 0 through the remaining window products.
// The matching matricization then has rank D^(floor((H-R)/S)+1) * ceil(H/S).
NetworkParams<Rational> claim3_params(const NetworkSpec& spec, Axis axis,
                                      const Rational& alpha = Rational(1),
                                      const Matrix<Rational>& f = {});

long long claim3_exponent(int h, int r, int s);

// Canonical two-layer claim3 network: the anchor-pair layer plus one collapsing
// product layer.
ConstructionNetwork claim3_network(const Claim3Config& config);

// The pair matrix induced by one window application in the S | (R-1) branch;
// diagonal on the active block, so its rank is exactly the active channel
// count. Used as a direct structural check.
Matrix<Rational> claim3_pair_matrix(int m, int d, const Rational& alpha, bool merged_tail);

struct Claim4Compiled {
    NetworkParams<Rational> phi_params;
    LayerSpec psi_layer;
    LayerParams<Rational> psi_params;
    std::vector<int> windows;  // shrunken per-layer windows realizing psi.r
    int active = 0;
};

// Realizes the big-window anchor-pair layer psi with the multi-layer stack
// phi: the first layer applies the channel map twice (once in place, once
// shifted), middle layers carry one copy while shifting the other inward, and
// the last overlapping layer multiplies the two halves. Requires psi.s equal
// to the stack's total stride and psi.r achievable by shrinking windows.
// Output channels beyond psi.active are exactly zero.
Claim4Compiled claim4_compile(int h, int in_channels, const std::vector<LayerSpec>& phi,
                              const AnchorPairLayer& psi);

struct Theorem3Config {
    int h = 2;
    int m = 2;
    int d1 = 2;          // first-layer channels; >= M unshared, >= M*H^2 shared
    bool shared = false;
    std::vector<std::pair<int, int>> side_p;  // positions (row, col), 0-based
    std::vector<std::pair<int, int>> side_q;
    Matrix<Rational> f;  // empty -> identity
};

// Full-input-window construction whose grid tensor matricizes to rank M^(H^2/2)
// under the given even position partition. Pairs the k-th smallest position of
// each side; every pair must be componentwise ordered so one window can host
// both anchors.
ConstructionNetwork theorem3_network(const Theorem3Config& config);

// Deterministic pseudo-random parameters drawn from a small rational value
// grid, defaulting to {+-1/2, +-1, +-3/2}.
NetworkParams<Rational> random_params(const NetworkSpec& spec, std::uint64_t seed,
                                      const std::vector<Rational>& value_grid = {});

}  // namespace convac

#endif
