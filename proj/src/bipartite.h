#ifndef GOALVAR_SRC_BIPARTITE_H
#define GOALVAR_SRC_BIPARTITE_H

#include <cstddef>
#include <vector>

namespace goalvar::detail {

// Maximum bipartite matching by augmenting paths (Kuhn). Rows are tried in
// order, each row's columns in the order given. Returns the owning row of
// every column, or -1.
inline std::vector<int> max_bipartite_matching(
    const std::vector<std::vector<std::size_t>> &adjacency, std::size_t cols) {
    std::vector<int> owner(cols, -1);
    std::vector<char> visited;
    auto augment = [&](auto &&self, std::size_t r) -> bool {
        for (std::size_t c : adjacency[r]) {
            if (visited[c])
                continue;
            visited[c] = 1;
            if (owner[c] < 0 || self(self, static_cast<std::size_t>(owner[c]))) {
                owner[c] = static_cast<int>(r);
                return true;
            }
        }
        return false;
    };
    for (std::size_t r = 0; r < adjacency.size(); ++r) {
        visited.assign(cols, 0);
        augment(augment, r);
    }
    return owner;
}

}  // namespace goalvar::detail

#endif
