#pragma once

#include <string>

#include "cycleflow/grid.hpp"

namespace cycleflow {

/// Parse the subset of the MATPOWER case format used here: the mpc.bus
/// table (bus number, bus type) and the mpc.branch table (fbus, tbus, r, x,
/// ..., angle, status). Out-of-service branches are dropped, parallel lines
/// are merged, susceptance is 1/x. The slack is the type-3 reference bus if
/// one exists, otherwise the bus with the lowest external id.
///
/// Throws ParseError (with line number) on malformed tables and
/// ValidationError on unsupported branches (x <= 0, phase shifters,
/// self-loops) or a disconnected graph.
Grid parse_matpower_case(const std::string& text);

}  // namespace cycleflow
