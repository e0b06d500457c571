#pragma once

#include <vector>

#include "vemsad/geometry.hpp"

namespace vemsad {

/// Global numbering of the displacement/pressure pair of order k >= 2.
/// Displacement unknowns: vertex values (2v + c), internal edge nodes (in
/// the stored edge direction) and per-cell interior moments. Pressure
/// unknowns are per-cell monomial coefficients of degree k - 1.
struct ElasticitySpace {
  int order = 0;
  int num_displacement = 0;
  int num_pressure = 0;
  /// Local -> global displacement index for every cell, in local layout order.
  std::vector<std::vector<int>> cell_dofs;
  /// First pressure unknown of each cell (relative to the pressure block).
  std::vector<int> pressure_offset;
  /// Node carrying each vertex/edge unknown and its component; interior
  /// moments have component -1.
  std::vector<Point2> dof_point;
  std::vector<int> dof_component;
  /// True for unknowns fixed by the displacement boundary condition.
  std::vector<char> dirichlet;

  [[nodiscard]] int size() const { return num_displacement + num_pressure; }
};

ElasticitySpace make_elasticity_space(const PolyMesh& mesh, int order);

/// Global numbering of the flux/concentration pair of order k >= 1. Flux
/// unknowns on edge e are normal values at the Gauss-Lobatto nodes, taken
/// with the stored edge normal and ordered along the stored direction. Cells
/// that traverse an edge backwards see the nodes reversed and negated.
struct DiffusionSpace {
  int order = 0;
  int num_flux = 0;
  int num_concentration = 0;
  std::vector<std::vector<int>> cell_dofs;
  /// +1 or -1 per local unknown: local value = sign * global value.
  std::vector<std::vector<double>> cell_signs;
  std::vector<int> concentration_offset;
  /// Node position and stored normal of each edge unknown.
  std::vector<Point2> dof_point;
  std::vector<Point2> dof_normal;
  /// True for flux unknowns fixed by the prescribed normal flux.
  std::vector<char> essential;

  [[nodiscard]] int size() const { return num_flux + num_concentration; }
};

DiffusionSpace make_diffusion_space(const PolyMesh& mesh, int order);

}  // namespace vemsad
