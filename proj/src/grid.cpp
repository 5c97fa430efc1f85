#include "convac/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace convac {

namespace {

IndexPartition halves(int h, bool by_column) {
    if (h < 2 || h % 2 != 0)
        throw std::invalid_argument("standard partitions require an even H");
    std::vector<int> p, q;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < h; ++i) {
            const int key = by_column ? i : j;
            (key < h / 2 ? p : q).push_back(mode_of_position(h, j, i));
        }
    return IndexPartition::checked(std::move(p), std::move(q), h * h);
}

}  // namespace

IndexPartition left_right_partition(int h) { return halves(h, true); }

IndexPartition top_bottom_partition(int h) { return halves(h, false); }

IndexPartition position_partition(int h, const std::vector<std::pair<int, int>>& side_p,
                                  const std::vector<std::pair<int, int>>& side_q) {
    auto to_modes = [h](const std::vector<std::pair<int, int>>& side) {
        std::vector<int> modes;
        modes.reserve(side.size());
        for (auto [row, col] : side) {
            if (row < 0 || row >= h || col < 0 || col >= h)
                throw std::invalid_argument("partition position out of the H x H grid");
            modes.push_back(mode_of_position(h, row, col));
        }
        std::sort(modes.begin(), modes.end());
        if (std::adjacent_find(modes.begin(), modes.end()) != modes.end())
            throw std::invalid_argument("duplicate position in partition side");
        return modes;
    };
    return IndexPartition::checked(to_modes(side_p), to_modes(side_q), h * h);
}

std::vector<IndexPartition> even_partitions(int h) {
    const int n = h * h;
    if (n % 2 != 0) throw std::invalid_argument("even partitions require an even mode count");
    std::vector<IndexPartition> out;
    // Fix mode 0 on the P side so each unordered split appears once.
    std::vector<int> members;
    const int half = n / 2;
    auto recurse = [&](auto&& self, int next, int chosen) -> void {
        if (chosen == half - 1) {
            std::vector<int> p{0};
            p.insert(p.end(), members.begin(), members.end());
            std::vector<int> q;
            std::vector<bool> in_p(static_cast<std::size_t>(n), false);
            for (int mode : p) in_p[static_cast<std::size_t>(mode)] = true;
            for (int mode = 0; mode < n; ++mode)
                if (!in_p[static_cast<std::size_t>(mode)]) q.push_back(mode);
            out.push_back(IndexPartition::checked(std::move(p), std::move(q), n));
            return;
        }
        for (int mode = next; mode < n; ++mode) {
            members.push_back(mode);
            self(self, mode + 1, chosen + 1);
            members.pop_back();
        }
    };
    recurse(recurse, 1, 0);
    return out;
}

}  // namespace convac
