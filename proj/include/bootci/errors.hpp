#pragma once

#include <stdexcept>
#include <string>

namespace bootci {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error { using Error::Error; };
class InvalidTarget : public Error { using Error::Error; };
class UnreachableMoments : public Error { using Error::Error; };
class EmptyInput : public Error { using Error::Error; };
class InsufficientData : public Error { using Error::Error; };
class LengthMismatch : public Error { using Error::Error; };
class InvalidConfig : public Error { using Error::Error; };

// Fewer than two finite pivots survived the nested bootstrap.
class DegenerateReplicates : public Error { using Error::Error; };

// 1 - a(z0 + z) <= 0 for a BCa endpoint.
class AccelerationOverflow : public Error { using Error::Error; };

}  // namespace bootci
