#pragma once

#include <stdexcept>
#include <string>

namespace pseudosieve {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidModulus : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class EmptyWheel : public Error {
 public:
  using Error::Error;
};

class BlockTooLarge : public Error {
 public:
  using Error::Error;
};

class OutOfRepresentation : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class InvalidRecord : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class CheckpointCorrupt : public Error {
 public:
  using Error::Error;
};

class FingerprintMismatch : public Error {
 public:
  using Error::Error;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace pseudosieve
