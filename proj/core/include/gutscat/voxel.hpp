#pragma once

#include <string>
#include <vector>

#include "gutscat/gi_decomposition.hpp"

namespace gutscat {

/// A unit cube at integer position (x, y, z) belonging to a node.
struct Voxel {
  int x = 0, y = 0, z = 0;
  int node = 0;
};

/// Cubes glued across shared faces; faces between different nodes become
/// frontier gluings, so that node annuli are the shared walls.
GIDecomposition voxel_decomposition(const std::vector<Voxel>& cubes, const std::vector<NodeKind>& kinds);

struct VoxelFixture {
  std::string name;
  GIDecomposition decomposition;
  int expected_steps = 0;
  /// Annulus count after absorption.
  int expected_annuli = 0;
};

/// Hand-built decompositions with tiny pieces:
///  ball-in-slab: a cube filling one hole of a genus-2 slab (type i);
///  ring-under-slab: a solid torus glued to a genus-2 slab along a
///    longitudinal annulus (type ii);
///  nested-core-ring: a ring with a core cube inside a holed slab, where
///    ring and core form one ball (type i absorbing an inner annulus);
///  ring-between-slabs: a ring glued to slabs above and below (type iii).
std::vector<VoxelFixture> tiny_fixtures();

struct SeparatingFixture {
  std::string name;
  GIDecomposition decomposition;  // ball-plugged
  int chi_f = 0;
  int circles = 0;
};

/// I-bundles whose every base circle meets the guts along one annulus:
///  punctured-torus-on-slab: T* x I glued to the outer wall of a genus-2
///    slab, chi(F) = -1 with one circle;
/// and I-bundles over planar surfaces under a guts lid whose pegs fill the
/// holes:
///  pants-under-lid: two holes, chi(F) = -1 with three circles;
///  four-holed-under-lid: three holes, chi(F) = -2 with four circles.
/// (With a single hole the product A x I is tiny and gets absorbed.)
std::vector<SeparatingFixture> separating_fixtures();

}  // namespace gutscat
