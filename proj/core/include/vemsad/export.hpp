#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vemsad/estimator.hpp"

namespace vemsad {

enum class ExportFormat { VtkPoly, SvgMesh };

/// VTK legacy ASCII POLYDATA. Point data: u_h at the vertices and the
/// cell-wise fields p_h, phi_h, Pi zeta_h sampled at each vertex and averaged
/// over the cells sharing it. Cell data: cell means of the same fields and,
/// when `indicators` is non-empty, Theta_E^2.
void write_vtk(const SystemState& state, const std::vector<LocalIndicators>& indicators, std::ostream& out);

/// SVG mesh outline with cells filled by Theta_E. The colour scale runs from
/// min Theta_E to max Theta_E (logarithmic when min > 0) and is drawn as a
/// labelled bar.
void write_svg(const PolyMesh& mesh, const std::vector<LocalIndicators>& indicators, std::ostream& out);

/// Writes `state` to `path` in the given format; IoError on write failure.
/// SVG output requires one indicator per cell (InvalidArgument otherwise).
void export_solution(const SystemState& state, const std::vector<LocalIndicators>& indicators, ExportFormat format,
                     const std::string& path);

}  // namespace vemsad
