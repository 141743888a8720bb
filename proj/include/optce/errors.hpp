#ifndef OPTCE_ERRORS_HPP
#define OPTCE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optce {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
   using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
   using Error::Error;
};

/// A configured cap (profile enumeration, LP size, expansion) was exceeded.
class ResourceLimit : public Error {
  public:
   using Error::Error;
};

/// The game does not have the structure a specialized routine needs (e.g. a cyclic
/// polymatrix graph handed to the tree oracle).
class UnsupportedStructure : public Error {
  public:
   using Error::Error;
};

class Nonconvergence : public Error {
  public:
   using Error::Error;
};

/// Penalized slacks could not be driven to zero within the allowed number of doublings.
class PenaltyFailure : public Nonconvergence {
  public:
   using Nonconvergence::Nonconvergence;
};

class UndefinedRatio : public Error {
  public:
   using Error::Error;
};

class ParseError : public Error {
  public:
   using Error::Error;
};

}  // namespace optce

#endif  // OPTCE_ERRORS_HPP
