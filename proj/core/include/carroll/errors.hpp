#pragma once

#include <stdexcept>
#include <string>

namespace carroll {

// Base for every failure that maps to the "numeric error" exit code.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedOrder : NumericError { using NumericError::NumericError; };
struct ShapeError : NumericError { using NumericError::NumericError; };
struct BoundaryLeak : NumericError { using NumericError::NumericError; };
struct SingularKernel : NumericError { using NumericError::NumericError; };
struct UnstableModel : NumericError { using NumericError::NumericError; };
struct IntegrationError : NumericError { using NumericError::NumericError; };
struct NoValidWindow : NumericError { using NumericError::NumericError; };
struct SingularMap : NumericError { using NumericError::NumericError; };
struct OrthonormalityError : NumericError { using NumericError::NumericError; };
struct TooLarge : NumericError { using NumericError::NumericError; };
struct ZeroSector : NumericError { using NumericError::NumericError; };
struct StepTooLarge : NumericError { using NumericError::NumericError; };
struct SpectrumError : NumericError { using NumericError::NumericError; };

// Invalid parameters (bad grid sizes, negative masses, ...).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace carroll
