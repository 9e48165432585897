#ifndef FST_ERRORS_HPP
#define FST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fst {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- asymptotics ------------------------------------------------------------

/// Velocities violate -1 < u < v < 1.
class DegenerateVelocities : public Error { using Error::Error; };

/// Query outside the validity region of a closed-form expression.
class DomainError : public Error { using Error::Error; };

/// No starting time above the configured floor satisfies the scattering
/// preconditions.
class NoValidT0 : public Error { using Error::Error; };

// -- trajectory -------------------------------------------------------------

class SuperluminalSample : public Error { using Error::Error; };
class NonUniformStep : public Error { using Error::Error; };
class TailMismatch : public Error { using Error::Error; };
class OutOfDomain : public Error { using Error::Error; };
class IncompatibleDomains : public Error { using Error::Error; };

// -- lightcone --------------------------------------------------------------

class NoConvergence : public Error { using Error::Error; };
class DomainExceeded : public Error { using Error::Error; };

// -- dynamics ---------------------------------------------------------------

class SuperluminalInput : public Error { using Error::Error; };
class SeparationUnderflow : public Error { using Error::Error; };

// -- solver -----------------------------------------------------------------

class PicardDivergence : public Error { using Error::Error; };
class NonScattering : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// -- diagnostics ------------------------------------------------------------

class InsufficientFamily : public Error { using Error::Error; };
class EmptySamples : public Error { using Error::Error; };

}  // namespace fst

#endif
