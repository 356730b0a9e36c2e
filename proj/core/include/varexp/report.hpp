#pragma once

#include <string>
#include <vector>

#include "varexp/driver.hpp"

namespace varexp {

/// Diagnostics CSV: '#'-prefixed key=value header block (constants,
/// certificates, termination), one column header row
/// t,theta,h01,phi,E,H,lux_grad_p,delta,maxabs, then one row per record
/// with 9 significant digits, '.' decimal, ',' separator, LF endings.
/// An absent delta is an empty field.
void emit_csv(const RunResult& result, const std::string& path);

/// The same rows formatted in memory (used by emit_csv and tests).
std::string format_csv(const RunResult& result);

/// Standalone SVG 1.1 line plot of the H01-norm trajectory and, when
/// available, the decay envelope.
void emit_svg(const RunResult& result, const std::string& path);

/// One grayscale snapshot: triangles filled by the mean of their nodal
/// values, normalized over the field range.
void emit_snapshot_svg(const Mesh& mesh, const NodalField& field, double t,
                       const std::string& path);

}  // namespace varexp
