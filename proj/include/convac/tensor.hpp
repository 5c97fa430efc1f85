#ifndef CONVAC_TENSOR_HPP
#define CONVAC_TENSOR_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace convac {

// Dense tensor with row-major storage (last index fastest). The scalar type is
// fixed per tensor, so exact and floating computations cannot mix.
template <typename T>
struct DenseTensor {
    std::vector<int> dims;
    std::vector<T> data;

    DenseTensor() = default;

    explicit DenseTensor(std::vector<int> shape) : dims(std::move(shape)) {
        data.assign(static_cast<std::size_t>(element_count(dims)), T(0));
    }

    DenseTensor(std::vector<int> shape, std::vector<T> values)
        : dims(std::move(shape)), data(std::move(values)) {
        if (static_cast<long long>(data.size()) != element_count(dims))
            throw std::invalid_argument("tensor data size does not match dims");
    }

    static long long element_count(const std::vector<int>& shape) {
        long long n = 1;
        for (int d : shape) {
            if (d <= 0) throw std::invalid_argument("tensor dimension must be positive");
            n *= d;
        }
        return n;
    }

    int order() const { return static_cast<int>(dims.size()); }
    long long size() const { return static_cast<long long>(data.size()); }

    long long offset(std::span<const int> index) const {
        if (static_cast<int>(index.size()) != order())
            throw std::invalid_argument("index order mismatch");
        long long off = 0;
        for (int i = 0; i < order(); ++i) {
            if (index[i] < 0 || index[i] >= dims[i])
                throw std::out_of_range("tensor index out of range");
            off = off * dims[i] + index[i];
        }
        return off;
    }

    T& at(std::initializer_list<int> index) { return data[offset({index.begin(), index.size()})]; }
    const T& at(std::initializer_list<int> index) const {
        return data[offset({index.begin(), index.size()})];
    }
    T& at(std::span<const int> index) { return data[offset(index)]; }
    const T& at(std::span<const int> index) const { return data[offset(index)]; }

    bool operator==(const DenseTensor& other) const = default;
};

template <typename T>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, T(0)) {
        if (r < 0 || c < 0) throw std::invalid_argument("negative matrix shape");
    }
    Matrix(int r, int c, std::vector<T> values) : rows(r), cols(c), data(std::move(values)) {
        if (static_cast<long long>(data.size()) != static_cast<long long>(r) * c)
            throw std::invalid_argument("matrix data size does not match shape");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    T& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const T& operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }

    bool operator==(const Matrix& other) const = default;
};

// Disjoint ordered split of tensor modes (0-based), P for rows and Q for
// columns of the matricization.
struct IndexPartition {
    std::vector<int> p;
    std::vector<int> q;

    static IndexPartition checked(std::vector<int> p, std::vector<int> q, int order) {
        IndexPartition part{std::move(p), std::move(q)};
        if (!std::is_sorted(part.p.begin(), part.p.end()) ||
            !std::is_sorted(part.q.begin(), part.q.end()))
            throw std::invalid_argument("partition sides must be strictly increasing");
        std::vector<bool> seen(static_cast<std::size_t>(order), false);
        for (const auto* side : {&part.p, &part.q}) {
            for (int mode : *side) {
                if (mode < 0 || mode >= order)
                    throw std::invalid_argument("partition mode out of range");
                if (seen[static_cast<std::size_t>(mode)])
                    throw std::invalid_argument("partition sides overlap");
                seen[static_cast<std::size_t>(mode)] = true;
            }
        }
        if (static_cast<int>(part.p.size() + part.q.size()) != order)
            throw std::invalid_argument("partition does not cover all modes");
        return part;
    }

    bool even() const { return p.size() == q.size(); }
};

namespace detail {

// Row-major mixed-radix weights for the selected modes.
inline std::vector<long long> side_strides(const std::vector<int>& modes,
                                           const std::vector<int>& dims) {
    std::vector<long long> strides(modes.size(), 1);
    for (int t = static_cast<int>(modes.size()) - 2; t >= 0; --t)
        strides[t] = strides[t + 1] * dims[modes[t + 1]];
    return strides;
}

inline long long side_extent(const std::vector<int>& modes, const std::vector<int>& dims) {
    long long n = 1;
    for (int mode : modes) n *= dims[mode];
    return n;
}

}  // namespace detail

// Matricization: entry (d_0,...,d_{N-1}) lands in row sum_t d_{p_t} * prod_{t'>t} dim(p_{t'})
// and the analogous column index over Q.
template <typename T>
Matrix<T> matricize(const DenseTensor<T>& tensor, const IndexPartition& part) {
    IndexPartition::checked(part.p, part.q, tensor.order());
    const auto row_strides = detail::side_strides(part.p, tensor.dims);
    const auto col_strides = detail::side_strides(part.q, tensor.dims);
    Matrix<T> out(static_cast<int>(detail::side_extent(part.p, tensor.dims)),
                  static_cast<int>(detail::side_extent(part.q, tensor.dims)));

    std::vector<int> index(static_cast<std::size_t>(tensor.order()), 0);
    for (long long flat = 0; flat < tensor.size(); ++flat) {
        long long row = 0, col = 0;
        for (std::size_t t = 0; t < part.p.size(); ++t) row += index[part.p[t]] * row_strides[t];
        for (std::size_t t = 0; t < part.q.size(); ++t) col += index[part.q[t]] * col_strides[t];
        out(static_cast<int>(row), static_cast<int>(col)) = tensor.data[flat];
        for (int i = tensor.order() - 1; i >= 0; --i) {
            if (++index[i] < tensor.dims[i]) break;
            index[i] = 0;
        }
    }
    return out;
}

// Inverse placement; `dims` restores the original mode sizes.
template <typename T>
DenseTensor<T> unmatricize(const Matrix<T>& matrix, const IndexPartition& part,
                           const std::vector<int>& dims) {
    IndexPartition::checked(part.p, part.q, static_cast<int>(dims.size()));
    DenseTensor<T> out(dims);
    if (detail::side_extent(part.p, dims) != matrix.rows ||
        detail::side_extent(part.q, dims) != matrix.cols)
        throw std::invalid_argument("matrix shape does not match partition");
    const auto row_strides = detail::side_strides(part.p, dims);
    const auto col_strides = detail::side_strides(part.q, dims);

    std::vector<int> index(dims.size(), 0);
    for (long long flat = 0; flat < out.size(); ++flat) {
        long long row = 0, col = 0;
        for (std::size_t t = 0; t < part.p.size(); ++t) row += index[part.p[t]] * row_strides[t];
        for (std::size_t t = 0; t < part.q.size(); ++t) col += index[part.q[t]] * col_strides[t];
        out.data[flat] = matrix(static_cast<int>(row), static_cast<int>(col));
        for (int i = out.order() - 1; i >= 0; --i) {
            if (++index[i] < dims[i]) break;
            index[i] = 0;
        }
    }
    return out;
}

// Kronecker product: A_ij * B_kl at row i*b.rows + k, column j*b.cols + l.
template <typename T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> out(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            for (int k = 0; k < b.rows; ++k)
                for (int l = 0; l < b.cols; ++l)
                    out(i * b.rows + k, j * b.cols + l) = a(i, j) * b(k, l);
    return out;
}

namespace detail {

// Contracts one mode against a factor matrix: out[..., k, ...] = sum_d f(k, d) t[..., d, ...].
template <typename T>
DenseTensor<T> contract_mode(const DenseTensor<T>& tensor, const Matrix<T>& factor, int mode) {
    if (factor.cols != tensor.dims[mode])
        throw std::invalid_argument("operator factor shape mismatch on mode " +
                                    std::to_string(mode));
    std::vector<int> out_dims = tensor.dims;
    out_dims[mode] = factor.rows;
    DenseTensor<T> out(out_dims);

    long long inner = 1;
    for (int i = mode + 1; i < tensor.order(); ++i) inner *= tensor.dims[i];
    long long outer = tensor.size() / (inner * tensor.dims[mode]);

    for (long long a = 0; a < outer; ++a) {
        const long long in_base = a * tensor.dims[mode] * inner;
        const long long out_base = a * factor.rows * inner;
        for (int k = 0; k < factor.rows; ++k)
            for (long long c = 0; c < inner; ++c) {
                T acc(0);
                for (int d = 0; d < tensor.dims[mode]; ++d)
                    acc += factor(k, d) * tensor.data[in_base + d * inner + c];
                out.data[out_base + k * inner + c] = acc;
            }
    }
    return out;
}

}  // namespace detail

// Applies the linear operator F^(0) x ... x F^(N-1):
// out_{k_0..k_{N-1}} = sum_{d_0..d_{N-1}} t_{d_0..d_{N-1}} prod_i F^(i)_{k_i, d_i}.
template <typename T>
DenseTensor<T> apply_operator(const DenseTensor<T>& tensor, const std::vector<Matrix<T>>& factors) {
    if (static_cast<int>(factors.size()) != tensor.order())
        throw std::invalid_argument("need one operator factor per tensor mode");
    DenseTensor<T> out = tensor;
    for (int mode = 0; mode < tensor.order(); ++mode)
        out = detail::contract_mode(out, factors[static_cast<std::size_t>(mode)], mode);
    return out;
}

}  // namespace convac

#endif
