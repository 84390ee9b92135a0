#pragma once

#include <stdexcept>
#include <string>

namespace qbs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// |D(p)| under tolerance: the closed forms sit on a pole.
class DegenerateResolvent : public Error {
 public:
  using Error::Error;
};

// i/p corner of M or N requested at p = 0.
class GroundStatePole : public Error {
 public:
  using Error::Error;
};

// Output port (nearly) dark, so g2 has no meaning there.
class VanishingOutput : public Error {
 public:
  using Error::Error;
};

class NonUniqueSteadyState : public Error {
 public:
  using Error::Error;
};

class WeakDriveViolation : public Error {
 public:
  using Error::Error;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

class IntegratorFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace qbs
