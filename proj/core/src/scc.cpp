#include "sva/scc.hpp"

#include <algorithm>

namespace sva {

namespace {

struct TarjanState {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> index, low, on_stack;
  std::vector<int> stack;
  std::vector<std::vector<int>>& comps;
  int counter = 0;

  void visit(int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  }
};

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> comps;
  TarjanState st{adj, std::vector<int>(n, -1), std::vector<int>(n, 0),
                 std::vector<int>(n, 0), {}, comps};
  for (int v = 0; v < n; ++v) {
    if (st.index[v] < 0) st.visit(v);
  }
  return comps;
}

}  // namespace sva
