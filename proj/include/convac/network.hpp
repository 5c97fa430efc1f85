#ifndef CONVAC_NETWORK_HPP
#define CONVAC_NETWORK_HPP

#include <string>
#include <vector>

#include "convac/rational.hpp"
#include "convac/tensor.hpp"

namespace convac {

// One generalized-convolution layer: an R x R window at stride S fused with
// product pooling, D output channels. `shared` controls whether weights are
// tied across output positions.
struct LayerSpec {
    int r = 1;
    int s = 1;
    int d = 1;
    bool shared = true;

    bool overlapping() const { return r > s; }
};

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

struct NetworkSpec {
    int h = 1;  // representation-layer spatial width/height
    int m = 1;  // representation channels
    std::vector<LayerSpec> layers;

    int depth() const { return static_cast<int>(layers.size()); }

    // H^(0), ..., H^(L) with H^(l) = ceil(H^(l-1) / S^(l)).
    std::vector<int> spatial_sizes() const {
        std::vector<int> sizes{h};
        for (const LayerSpec& layer : layers) sizes.push_back(ceil_div(sizes.back(), layer.s));
        return sizes;
    }

    // Input channel count of layer l (0-based); layer 0 sees the M representation channels.
    int in_channels(int l) const { return l == 0 ? m : layers[static_cast<std::size_t>(l - 1)].d; }
    int out_channels() const { return layers.empty() ? m : layers.back().d; }

    bool collapsing() const { return spatial_sizes().back() == 1; }
    bool non_overlapping() const {
        for (const LayerSpec& layer : layers)
            if (layer.overlapping()) return false;
        return true;
    }

    void validate() const {
        if (h < 1 || m < 1) throw std::invalid_argument("H and M must be at least 1");
        for (const LayerSpec& layer : layers)
            if (layer.r < 1 || layer.s < 1 || layer.d < 1)
                throw std::invalid_argument("layer R, S, D must be at least 1");
    }
};

// Weights and biases for one output channel at one output position:
// w has dims [D_in, R, R], b has dims [R, R].
template <typename T>
struct Kernel {
    DenseTensor<T> w;
    DenseTensor<T> b;
};

template <typename T>
struct LayerParams {
    bool shared = true;
    int channels = 0;
    int positions = 1;  // H_out per axis when unshared, 1 when shared
    std::vector<Kernel<T>> kernels;

    static LayerParams make(bool shared, int channels, int positions, int d_in, int r) {
        LayerParams p;
        p.shared = shared;
        p.channels = channels;
        p.positions = shared ? 1 : positions;
        p.kernels.reserve(static_cast<std::size_t>(p.positions) * p.positions * channels);
        for (int i = 0; i < p.positions * p.positions * channels; ++i)
            p.kernels.push_back(Kernel<T>{DenseTensor<T>({d_in, r, r}), DenseTensor<T>({r, r})});
        return p;
    }

    Kernel<T>& at(int c, int u = 0, int v = 0) {
        const int pu = shared ? 0 : u;
        const int pv = shared ? 0 : v;
        return kernels[(static_cast<std::size_t>(pu) * positions + pv) * channels + c];
    }
    const Kernel<T>& at(int c, int u = 0, int v = 0) const {
        const int pu = shared ? 0 : u;
        const int pv = shared ? 0 : v;
        return kernels[(static_cast<std::size_t>(pu) * positions + pv) * channels + c];
    }
};

template <typename T>
struct NetworkParams {
    std::vector<LayerParams<T>> layers;
};

// Product-pooled GC layer:
//   Y[c,u,v] = prod_{j,i in [R]} ( b[c](j,i) + sum_d w[c](d,j,i) * X[d, uS+j, vS+i] )
// with output positions 0 <= uS, vS < H_in and zero padding past the right and
// bottom boundaries, so fully padded factors reduce to the bias.
template <typename T>
DenseTensor<T> forward_layer(const DenseTensor<T>& input, const LayerSpec& spec,
                             const LayerParams<T>& params) {
    if (input.order() != 3) throw std::invalid_argument("layer input must be channels x H x H");
    const int d_in = input.dims[0];
    const int h_in = input.dims[1];
    if (input.dims[2] != h_in) throw std::invalid_argument("layer input must be square");
    const int h_out = ceil_div(h_in, spec.s);
    if (params.channels != spec.d)
        throw std::invalid_argument("params channel count does not match layer spec");
    if (!params.shared && params.positions != h_out)
        throw std::invalid_argument("unshared params do not cover the output grid");

    DenseTensor<T> out({spec.d, h_out, h_out});
    for (int u = 0; u < h_out; ++u)
        for (int v = 0; v < h_out; ++v)
            for (int c = 0; c < spec.d; ++c) {
                const Kernel<T>& k = params.at(c, u, v);
                if (k.w.dims[0] != d_in || k.w.dims[1] != spec.r)
                    throw std::invalid_argument("kernel shape does not match layer input");
                T product(1);
                for (int j = 0; j < spec.r && product != T(0); ++j)
                    for (int i = 0; i < spec.r; ++i) {
                        const int y = u * spec.s + j;
                        const int x = v * spec.s + i;
                        T factor = k.b.at({j, i});
                        if (y < h_in && x < h_in)
                            for (int d = 0; d < d_in; ++d)
                                factor += k.w.at({d, j, i}) * input.at({d, y, x});
                        product *= factor;
                        if (product == T(0)) break;
                    }
                out.at({c, u, v}) = product;
            }
    return out;
}

template <typename T>
DenseTensor<T> forward_network(const NetworkSpec& spec, const NetworkParams<T>& params,
                               const DenseTensor<T>& rep_output) {
    if (static_cast<int>(params.layers.size()) != spec.depth())
        throw std::invalid_argument("params layer count does not match spec");
    if (rep_output.dims != std::vector<int>{spec.m, spec.h, spec.h})
        throw std::invalid_argument("representation output must be M x H x H");
    DenseTensor<T> current = rep_output;
    for (int l = 0; l < spec.depth(); ++l)
        current = forward_layer(current, spec.layers[static_cast<std::size_t>(l)],
                                params.layers[static_cast<std::size_t>(l)]);
    return current;
}

// Embeds kernels built for a smaller window into a larger one: matching
// coordinates are copied, remaining weights are zero and remaining biases one,
// so the realized function is unchanged.
template <typename T>
LayerParams<T> embed_window(const LayerParams<T>& params, int r_from, int r_to) {
    if (r_to < r_from) throw std::invalid_argument("target window is smaller than source");
    LayerParams<T> out;
    out.shared = params.shared;
    out.channels = params.channels;
    out.positions = params.positions;
    for (const Kernel<T>& k : params.kernels) {
        const int d_in = k.w.dims[0];
        Kernel<T> big{DenseTensor<T>({d_in, r_to, r_to}), DenseTensor<T>({r_to, r_to})};
        for (int j = 0; j < r_to; ++j)
            for (int i = 0; i < r_to; ++i) {
                if (j < r_from && i < r_from) {
                    big.b.at({j, i}) = k.b.at({j, i});
                    for (int d = 0; d < d_in; ++d) big.w.at({d, j, i}) = k.w.at({d, j, i});
                } else {
                    big.b.at({j, i}) = T(1);
                }
            }
        out.kernels.push_back(std::move(big));
    }
    return out;
}

// Identity on the first d_in channels for a stride-1 layer of any window size;
// extra output channels evaluate to zero.
template <typename T>
LayerParams<T> identity_layer(int d_in, int d_out, int r) {
    if (d_out < d_in)
        throw std::invalid_argument("identity layer needs at least as many output channels");
    LayerParams<T> params = LayerParams<T>::make(true, d_out, 1, d_in, r);
    for (int c = 0; c < d_in; ++c) {
        Kernel<T>& k = params.at(c);
        k.w.at({c, 0, 0}) = T(1);
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i)
                if (j != 0 || i != 0) k.b.at({j, i}) = T(1);
    }
    return params;
}

// Realizes network B's parameters on the wider architecture A. mapping[i] is
// the B layer realized by A layer i, or -1 for an inserted stride-1 layer that
// acts as the identity. Output beyond B's channel count is exactly zero.
template <typename T>
NetworkParams<T> lift_params(const NetworkSpec& a, const NetworkSpec& b,
                             const NetworkParams<T>& params_b, const std::vector<int>& mapping) {
    if (static_cast<int>(mapping.size()) != a.depth())
        throw std::invalid_argument("mapping must cover every layer of A");
    NetworkParams<T> out;
    int next_b = 0;
    int carried = b.m;  // live channels entering the current A layer
    if (a.m != b.m) throw std::invalid_argument("representation channel counts differ");
    for (int i = 0; i < a.depth(); ++i) {
        const LayerSpec& la = a.layers[static_cast<std::size_t>(i)];
        const int d_in_a = a.in_channels(i);
        if (mapping[static_cast<std::size_t>(i)] < 0) {
            if (la.s != 1) throw std::invalid_argument("inserted layers must have stride 1");
            if (la.d < carried)
                throw std::invalid_argument("inserted layer has too few channels");
            out.layers.push_back(identity_layer<T>(carried, la.d, la.r));
            continue;
        }
        const int j = mapping[static_cast<std::size_t>(i)];
        if (j != next_b) throw std::invalid_argument("mapping must visit B layers in order");
        if (j >= b.depth()) throw std::invalid_argument("mapping index past the end of B");
        const LayerSpec& lb = b.layers[static_cast<std::size_t>(j)];
        if (la.s != lb.s) throw std::invalid_argument("matched layers must share a stride");
        if (la.r < lb.r) throw std::invalid_argument("matched layer of A has a smaller window");
        if (la.d < lb.d) throw std::invalid_argument("matched layer of A has fewer channels");
        if (carried != b.in_channels(j))
            throw std::invalid_argument("carried channel count does not match B");

        const LayerParams<T>& src = params_b.layers[static_cast<std::size_t>(j)];
        LayerParams<T> grown = embed_window(src, lb.r, la.r);
        // Pad the input-channel axis to A's width; the extra inputs carry zeros.
        LayerParams<T> lifted = LayerParams<T>::make(grown.shared, la.d, grown.positions,
                                                     d_in_a, la.r);
        const int pos = grown.positions;
        for (int u = 0; u < pos; ++u)
            for (int v = 0; v < pos; ++v)
                for (int c = 0; c < la.d; ++c) {
                    Kernel<T>& dst = lifted.at(c, u, v);
                    if (c >= lb.d) continue;  // extra channels stay all-zero
                    const Kernel<T>& s = grown.at(c, u, v);
                    dst.b = s.b;
                    for (int d = 0; d < b.in_channels(j); ++d)
                        for (int jj = 0; jj < la.r; ++jj)
                            for (int ii = 0; ii < la.r; ++ii)
                                dst.w.at({d, jj, ii}) = s.w.at({d, jj, ii});
                }
        out.layers.push_back(std::move(lifted));
        carried = lb.d;
        ++next_b;
    }
    if (next_b != b.depth()) throw std::invalid_argument("mapping does not cover all of B");
    return out;
}

// Scalar-mode conversion helpers (exact parameters drive the float twin runs).
inline double to_scalar_double(const Rational& v) { return rational_to_double(v); }

template <typename From>
DenseTensor<double> tensor_to_double(const DenseTensor<From>& t) {
    DenseTensor<double> out(t.dims);
    for (long long i = 0; i < t.size(); ++i)
        out.data[static_cast<std::size_t>(i)] =
            to_scalar_double(t.data[static_cast<std::size_t>(i)]);
    return out;
}

template <typename From>
Matrix<double> matrix_to_double(const Matrix<From>& m) {
    Matrix<double> out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = to_scalar_double(m.data[i]);
    return out;
}

inline NetworkParams<double> params_to_double(const NetworkParams<Rational>& params) {
    NetworkParams<double> out;
    for (const LayerParams<Rational>& layer : params.layers) {
        LayerParams<double> dl;
        dl.shared = layer.shared;
        dl.channels = layer.channels;
        dl.positions = layer.positions;
        for (const Kernel<Rational>& k : layer.kernels)
            dl.kernels.push_back(Kernel<double>{tensor_to_double(k.w), tensor_to_double(k.b)});
        out.layers.push_back(std::move(dl));
    }
    return out;
}

}  // namespace convac

#endif
