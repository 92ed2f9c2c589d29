#pragma once

#include <stdexcept>
#include <string>

namespace epiloc {

// Base class for every failure the library reports. Each subclass maps to one
// failure mode so callers can react selectively; the CLI catches Error and
// turns it into a diagnostic plus a nonzero exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define EPILOC_DEFINE_ERROR(NAME)                                  \
  class NAME : public Error {                                      \
   public:                                                         \
    explicit NAME(const std::string& what) : Error(what) {}        \
  }

// Geometry.
EPILOC_DEFINE_ERROR(InvalidRotationError);   // matrix is not orthonormal with det +1
EPILOC_DEFINE_ERROR(DegeneratePairError);    // coincident camera centers

// Essential matrices.
EPILOC_DEFINE_ERROR(DegenerateMatrixError);  // rank <= 1, no essential projection
EPILOC_DEFINE_ERROR(InvalidEssentialError);  // singular values not (s, s, 0)

// Two-view solver.
EPILOC_DEFINE_ERROR(InsufficientDataError);        // fewer correspondences than minimal
EPILOC_DEFINE_ERROR(DegenerateConfigurationError); // design matrix rank deficient
EPILOC_DEFINE_ERROR(EstimationFailedError);        // RANSAC found too few inliers

// Localizer.
EPILOC_DEFINE_ERROR(InsufficientPairsError);   // fewer than two usable pairs
EPILOC_DEFINE_ERROR(NearCollinearError);       // triangulation rays nearly parallel
EPILOC_DEFINE_ERROR(LocalizationFailedError);  // no hypothesis reached two inliers

// Simulator.
EPILOC_DEFINE_ERROR(GenerationError);  // scene constraints unsatisfiable

// Retrieval and IO.
EPILOC_DEFINE_ERROR(FormatError);      // descriptor dimension mismatch
EPILOC_DEFINE_ERROR(ParseError);       // malformed file content
EPILOC_DEFINE_ERROR(ValidationError);  // well-formed but invalid values
EPILOC_DEFINE_ERROR(LinkError);        // reference to an unknown image id

#undef EPILOC_DEFINE_ERROR

}  // namespace epiloc
