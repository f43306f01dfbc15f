#include "gutscat/collapse.hpp"

#include <numeric>

namespace gutscat {

CollapseResult greedy_collapse(const ChainComplex& cc) {
  std::array<std::vector<char>, 4> alive;
  std::array<std::vector<std::vector<int>>, 4> cofaces;  // with multiplicity
  std::array<std::vector<int>, 4> live_cof;
  for (int k = 0; k < 4; ++k) {
    alive[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(cc.dims[static_cast<std::size_t>(k)]), 1);
    cofaces[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(cc.dims[static_cast<std::size_t>(k)]), {});
    live_cof[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(cc.dims[static_cast<std::size_t>(k)]), 0);
  }
  for (int k = 1; k < 4; ++k)
    for (int t = 0; t < cc.dims[static_cast<std::size_t>(k)]; ++t)
      for (int s : cc.occ[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)]) {
        cofaces[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s)].push_back(t);
        ++live_cof[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s)];
      }

  const auto remove = [&](int k, int c) {
    alive[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] = 0;
    if (k > 0)
      for (int s : cc.occ[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)])
        --live_cof[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s)];
  };

  bool progress = true;
  while (progress) {
    progress = false;
    for (int k = 3; k >= 1; --k) {
      bool again = true;
      while (again) {
        again = false;
        for (int s = 0; s < cc.dims[static_cast<std::size_t>(k - 1)]; ++s) {
          if (!alive[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s)] ||
              live_cof[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s)] != 1)
            continue;
          int tau = -1;
          for (int t : cofaces[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s)])
            if (alive[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)]) tau = t;
          remove(k, tau);
          remove(k - 1, s);
          again = progress = true;
        }
      }
    }
  }

  CollapseResult out;
  for (int k = 0; k < 4; ++k)
    for (char a : alive[static_cast<std::size_t>(k)]) out.remaining[static_cast<std::size_t>(k)] += a;
  // Connectivity of the surviving 1-skeleton.
  std::vector<int> parent(static_cast<std::size_t>(cc.dims[0]));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (int e = 0; e < cc.dims[1]; ++e) {
    if (!alive[1][static_cast<std::size_t>(e)]) continue;
    const auto& vs = cc.occ[1][static_cast<std::size_t>(e)];
    parent[static_cast<std::size_t>(find(vs[0]))] = find(vs[1]);
  }
  int roots = 0;
  for (int v = 0; v < cc.dims[0]; ++v)
    if (alive[0][static_cast<std::size_t>(v)] && find(v) == v) ++roots;
  out.connected = roots == 1;
  return out;
}

}  // namespace gutscat
