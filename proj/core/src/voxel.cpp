#include "gutscat/voxel.hpp"

#include <array>
#include <map>

#include "gutscat/capping.hpp"
#include "gutscat/error.hpp"

namespace gutscat {

namespace {

// Local vertex i sits at offset (i & 1, (i >> 1) & 1, (i >> 2) & 1).
// Faces are listed outward: -x, +x, -y, +y, -z, +z.
constexpr std::array<std::array<int, 4>, 6> kCubeFaces{{
    {0, 4, 6, 2}, {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 2, 3, 1}, {4, 5, 7, 6}}};

std::array<int, 3> corner(const Voxel& v, int i) { return {v.x + (i & 1), v.y + ((i >> 1) & 1), v.z + ((i >> 2) & 1)}; }

PolyCell cube() {
  PolyCell c;
  c.vertex_count = 8;
  for (const auto& f : kCubeFaces) c.faces.push_back({{f[0], f[1], f[2], f[3]}, FaceClass::DiscS});
  return c;
}

}  // namespace

GIDecomposition voxel_decomposition(const std::vector<Voxel>& cubes, const std::vector<NodeKind>& kinds) {
  PolyComplex pc;
  std::map<std::array<int, 3>, int> at;
  std::vector<int> node_of_cell;
  for (const auto& v : cubes) {
    if (v.node < 0 || v.node >= static_cast<int>(kinds.size())) throw DomainError("voxel node out of range");
    if (!at.emplace(std::array<int, 3>{v.x, v.y, v.z}, pc.add_cell(cube())).second) throw DomainError("voxel placed twice");
    node_of_cell.push_back(v.node);
  }
  for (int c = 0; c < static_cast<int>(cubes.size()); ++c) {
    const Voxel& v = cubes[static_cast<std::size_t>(c)];
    // Positive directions only, so each shared wall is glued once.
    for (int axis = 0; axis < 3; ++axis) {
      std::array<int, 3> nb{v.x, v.y, v.z};
      ++nb[static_cast<std::size_t>(axis)];
      const auto it = at.find(nb);
      if (it == at.end()) continue;
      const int o = it->second;
      const Voxel& w = cubes[static_cast<std::size_t>(o)];
      const int fa = 2 * axis + 1, fb = 2 * axis;
      std::vector<int> map;
      for (int i : kCubeFaces[static_cast<std::size_t>(fa)]) {
        const auto p = corner(v, i);
        int pos = -1;
        for (int k = 0; k < 4; ++k)
          if (corner(w, kCubeFaces[static_cast<std::size_t>(fb)][static_cast<std::size_t>(k)]) == p) pos = k;
        if (pos < 0) throw InternalError("voxel walls do not match");
        map.push_back(pos);
      }
      const bool same = v.node == w.node;
      const bool ib = !guts_family(kinds[static_cast<std::size_t>(v.node)]);
      pc.add_gluing({{c, fa}, {o, fb}, map, same ? (ib ? GlueKind::Vertical : GlueKind::Hexagonal) : GlueKind::Frontier});
    }
  }
  std::vector<int> tags(cubes.size(), kTagVoxel);
  return assemble_nodes(std::move(pc), std::move(tags), node_of_cell, kinds);
}

namespace {

// One layer of a w x h slab at height z, without the listed holes.
void slab(std::vector<Voxel>& out, int w, int h, int z, int node, const std::vector<std::pair<int, int>>& holes) {
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) {
      bool hole = false;
      for (const auto& [hx, hy] : holes) hole = hole || (hx == x && hy == y);
      if (!hole) out.push_back({x, y, z, node});
    }
}

// The eight cubes around (cx, cy).
void ring(std::vector<Voxel>& out, int cx, int cy, int z, int node) {
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      if (dx || dy) out.push_back({cx + dx, cy + dy, z, node});
}

}  // namespace

std::vector<VoxelFixture> tiny_fixtures() {
  std::vector<VoxelFixture> out;
  {
    std::vector<Voxel> v;
    slab(v, 3, 5, 0, 0, {{1, 1}, {1, 3}});
    v.push_back({1, 1, 0, 1});
    out.push_back({"ball-in-slab", voxel_decomposition(v, {NodeKind::Guts, NodeKind::Guts}), 1, 0});
  }
  {
    std::vector<Voxel> v;
    slab(v, 3, 5, 1, 0, {{1, 1}, {1, 3}});
    ring(v, 1, 1, 0, 1);
    out.push_back({"ring-under-slab", voxel_decomposition(v, {NodeKind::Guts, NodeKind::Guts}), 1, 0});
  }
  {
    std::vector<Voxel> v;
    std::vector<std::pair<int, int>> holes{{2, 5}};
    for (int x = 1; x <= 3; ++x)
      for (int y = 1; y <= 3; ++y) holes.push_back({x, y});
    slab(v, 5, 7, 0, 0, holes);
    ring(v, 2, 2, 0, 1);
    v.push_back({2, 2, 0, 2});
    out.push_back(
        {"nested-core-ring", voxel_decomposition(v, {NodeKind::Guts, NodeKind::IBundle, NodeKind::Guts}), 1, 0});
  }
  {
    std::vector<Voxel> v;
    slab(v, 3, 5, 0, 0, {{1, 1}, {1, 3}});
    ring(v, 1, 1, 1, 1);
    slab(v, 3, 5, 2, 2, {{1, 1}, {1, 3}});
    out.push_back({"ring-between-slabs",
                   voxel_decomposition(v, {NodeKind::Guts, NodeKind::IBundle, NodeKind::Guts}), 1, 0});
  }
  return out;
}

namespace {

// Node 1 is a w x h block at z = 0 minus the holes; node 0 is a frame
// around it at z = 0 and 1, a peg in every hole and a roof at z = 2.
GIDecomposition lid(int w, int h, const std::vector<std::pair<int, int>>& holes) {
  std::vector<Voxel> v;
  slab(v, w, h, 0, 1, holes);
  for (int z = 0; z < 2; ++z) {
    for (int x = -1; x <= w; ++x)
      for (int y = -1; y <= h; ++y)
        if (x < 0 || y < 0 || x == w || y == h) v.push_back({x, y, z, 0});
    for (const auto& [hx, hy] : holes) v.push_back({hx, hy, z, 0});
  }
  for (int x = -1; x <= w; ++x)
    for (int y = -1; y <= h; ++y) v.push_back({x, y, 2, 0});
  return plug_ball(absorb_tiny(voxel_decomposition(v, {NodeKind::Guts, NodeKind::IBundle})));
}

// A 3 x 5 genus-2 slab (node 0) with T* x I (node 1) glued along the
// outer wall, the prism's boundary annulus running once around it.
GIDecomposition punctured_torus_on_slab() {
  std::vector<Voxel> v;
  slab(v, 3, 5, 0, 0, {{1, 1}, {1, 3}});
  GIDecomposition d = voxel_decomposition(v, {NodeKind::Guts});
  PolyComplex pc = d.complex;
  std::vector<FaceRef> wall;
  for (int c = 0; c < static_cast<int>(v.size()); ++c) {
    const Voxel& x = v[static_cast<std::size_t>(c)];
    if (x.x == 0) wall.push_back({c, 0});
    if (x.x == 2) wall.push_back({c, 1});
    if (x.y == 0) wall.push_back({c, 2});
    if (x.y == 4) wall.push_back({c, 3});
  }
  std::vector<int> cells(v.size());
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = static_cast<int>(c);
  const CellQuotient q(pc, {cells, {}, {}});
  const auto walk = walk_annulus(q, wall);
  attach_polygon_prism(pc, punctured_torus_sides(static_cast<int>(walk.quads.size())), {walk}, GlueKind::Frontier);
  std::vector<int> tags(v.size(), kTagVoxel), node(v.size(), 0);
  tags.push_back(kTagSurfaceProduct);
  node.push_back(1);
  return plug_ball(absorb_tiny(assemble_nodes(std::move(pc), std::move(tags), node, {NodeKind::Guts, NodeKind::IBundle})));
}

}  // namespace

std::vector<SeparatingFixture> separating_fixtures() {
  return {{"punctured-torus-on-slab", punctured_torus_on_slab(), -1, 1},
          {"pants-under-lid", lid(5, 3, {{1, 1}, {3, 1}}), -1, 3},
          {"four-holed-under-lid", lid(7, 3, {{1, 1}, {3, 1}, {5, 1}}), -2, 4}};
}

}  // namespace gutscat
