#pragma once

#include <vector>

namespace sva {

// Tarjan's strongly connected components. `adj[v]` lists successors of v.
// Components are returned in reverse topological order of the condensation
// (every edge of the condensation goes from a later component to an earlier
// one in the returned list).
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj);

}  // namespace sva
