#pragma once
#include <stdexcept>
#include <string>

namespace finsler {

class FinslerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// y = 0 (or numerically indistinguishable from the zero section).
class SlitBundleError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

// Fundamental tensor not positive definite, Randers convexity violated, etc.
class InvalidMetricError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

// Elementary function evaluated outside its domain (sqrt of <= 0, ...).
class MathDomainError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

// Requested derivative order exceeds what the configuration provides.
class CapabilityError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

// A derived identity that must hold by construction failed; signals a bug.
class ConsistencyError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

class DimensionError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

// Conformal-factor family does not match the sign of the curvature constant.
class CaseError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

// Warping function nonpositive at an evaluation point.
class WarpDomainError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

// Bad run configuration, CLI usage or unparsable input files.
class ConfigError : public FinslerError {
public:
    using FinslerError::FinslerError;
};

} // namespace finsler
