#pragma once

#include "vemsad/solver.hpp"

namespace oracle {

struct Comparison {
  double flux_diff = 0.0;    // max |library - oracle| over local flux DoFs
  double phi_diff = 0.0;     // max |library - oracle| over concentration coefficients
  double picard_diff = 0.0;  // same for the state returned by the Picard solver
  double scale = 0.0;        // max |entry| of the oracle solution
  std::size_t entries = 0;
};

/// Lowest-order diffusion block of the library (k2 = 1) against the oracle on
/// `mesh`, with data from a problem whose mobility is the identity, theta = 0
/// and l = 0. Dirichlet edges are those on {x = 0} or {y = 0}.
Comparison compare_diffusion_block(const vemsad::PolyMesh& mesh, const vemsad::ManufacturedProblem& problem);

/// Cubic concentration, zero displacement data, identity mobility, theta = 0.
std::shared_ptr<const vemsad::ManufacturedProblem> oracle_problem();

}  // namespace oracle
