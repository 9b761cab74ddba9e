#pragma once

#include <stdexcept>
#include <string>

namespace gerbeloop {

/* Every recoverable failure is a typed exception so callers (and the CLI
 * exit-code mapping) can tell usage errors from numerical ones. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Group element outside the canonical section's domain and no sheet hint given. */
struct AmbiguousLift : Error { using Error::Error; };

/* A sampled path takes a step too large for principal-branch transport. */
struct MeshTooCoarse : Error { using Error::Error; };

/* End/start mismatch of a lifted loop is not in the kernel subgroup. */
struct NotInKernel : Error { using Error::Error; };

/* Coboundary solve asked for a cochain that is not closed. */
struct NotACocycle : Error { using Error::Error; };

/* Coboundary/cochain operation applied at an impossible degree. */
struct DegreeError : Error { using Error::Error; };

/* Edge word does not concatenate head-to-tail. */
struct InvalidPath : Error { using Error::Error; };

/* Loop lift cannot be closed (defect outside the identity component). */
struct CannotClose : Error { using Error::Error; };

/* Obstruction class nonzero, so no lift exists. */
struct NoLiftExists : Error { using Error::Error; };

/* Two loop-space objects live over different base data. */
struct BaseMismatch : Error { using Error::Error; };

/* Fusion split point is not a common marked vertex of the loops involved. */
struct SplitMismatch : Error { using Error::Error; };

/* Section is not in the image of the lift-to-section construction. */
struct NotInImage : Error { using Error::Error; };

/* Requested combination is outside the supported builtin range. */
struct Unsupported : Error { using Error::Error; };

} // namespace gerbeloop
