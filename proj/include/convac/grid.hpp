#ifndef CONVAC_GRID_HPP
#define CONVAC_GRID_HPP

#include <algorithm>
#include <thread>
#include <utility>
#include <vector>

#include "convac/linalg.hpp"
#include "convac/network.hpp"
#include "convac/tensor.hpp"

namespace convac {

// Thrown when a requested grid tensor would exceed the enumeration cap.
struct CapExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spatial position (row j, column i), 0-based, mapped to tensor mode j*H + i.
inline int mode_of_position(int h, int row, int col) { return row * h + col; }

// Left-right split: P holds the columns i < H/2, Q the rest. Requires even H.
IndexPartition left_right_partition(int h);

// Top-bottom split: P holds the rows j < H/2, Q the rest. Requires even H.
IndexPartition top_bottom_partition(int h);

// Partition from explicit position sets; both sides together must cover the
// H x H grid exactly once.
IndexPartition position_partition(int h, const std::vector<std::pair<int, int>>& side_p,
                                  const std::vector<std::pair<int, int>>& side_q);

// All unordered even partitions of the H x H positions (mode-index form).
std::vector<IndexPartition> even_partitions(int h);

struct GridOptions {
    long long cap = 1 << 20;
    int threads = 1;
};

namespace detail {

inline void check_grid_preconditions(const NetworkSpec& spec, int channel) {
    spec.validate();
    if (!spec.collapsing())
        throw std::invalid_argument("grid tensor requires a collapsing network");
    if (channel < 0 || channel >= spec.out_channels())
        throw std::invalid_argument("output channel out of range");
}

inline void check_nonsingular(const Matrix<Rational>& f) {
    if (!is_nonsingular(f))
        throw std::invalid_argument("representation matrix must be non-singular");
}

inline void check_nonsingular(const Matrix<double>& f) {
    if (f.rows != f.cols || rank_numeric(f) != f.rows)
        throw std::invalid_argument("representation matrix must be non-singular");
}

}  // namespace detail

// Evaluates the network on every template assignment d in [M]^N (N = H^2,
// row-major over positions) and stores the score of `channel` at (d_1,...,d_N).
// The representation output for an assignment is O[m,j,i] = F(d_(j,i), m), so
// with F = I the result is the network's coefficients tensor.
template <typename T>
DenseTensor<T> grid_tensor(const NetworkSpec& spec, const NetworkParams<T>& params,
                           const Matrix<T>& f, int channel, const GridOptions& options = {}) {
    detail::check_grid_preconditions(spec, channel);
    if (f.rows != spec.m || f.cols != spec.m)
        throw std::invalid_argument("representation matrix must be M x M");
    detail::check_nonsingular(f);

    const int n = spec.h * spec.h;
    const BigInt total_big = bigint_pow(BigInt(spec.m), static_cast<unsigned long>(n));
    if (total_big > BigInt(static_cast<long>(options.cap)))
        throw CapExceededError("grid tensor needs " + total_big.get_str() +
                               " evaluations, above the cap of " + std::to_string(options.cap));
    const long long total = total_big.get_si();

    DenseTensor<T> grid(std::vector<int>(static_cast<std::size_t>(n), spec.m));

    auto worker = [&](long long begin, long long end) {
        std::vector<int> assignment(static_cast<std::size_t>(n), 0);
        long long rest = begin;
        for (int k = n - 1; k >= 0; --k) {
            assignment[static_cast<std::size_t>(k)] = static_cast<int>(rest % spec.m);
            rest /= spec.m;
        }
        DenseTensor<T> rep({spec.m, spec.h, spec.h});
        for (long long flat = begin; flat < end; ++flat) {
            for (int j = 0; j < spec.h; ++j)
                for (int i = 0; i < spec.h; ++i) {
                    const int d = assignment[static_cast<std::size_t>(mode_of_position(spec.h, j, i))];
                    for (int m = 0; m < spec.m; ++m) rep.at({m, j, i}) = f(d, m);
                }
            DenseTensor<T> score = forward_network(spec, params, rep);
            grid.data[static_cast<std::size_t>(flat)] = score.at({channel, 0, 0});
            for (int k = n - 1; k >= 0; --k) {
                if (++assignment[static_cast<std::size_t>(k)] < spec.m) break;
                assignment[static_cast<std::size_t>(k)] = 0;
            }
        }
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1 || total < 1024) {
        worker(0, total);
    } else {
        std::vector<std::thread> pool;
        const long long chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const long long begin = t * chunk;
            const long long end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }
    return grid;
}

}  // namespace convac

#endif
