#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gibbs {

// Base of every error raised by the library. `numerical()` separates
// failures of the numerics (overflowing enumerations, singular matrices,
// divergent chains) from invalid caller input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool numerical() const { return false; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  bool numerical() const override { return true; }
};

class AbsoluteContinuityViolation : public Error {
 public:
  AbsoluteContinuityViolation(std::size_t index, std::string direction)
      : Error("absolute continuity violated at index " + std::to_string(index) +
              (direction.empty() ? std::string() : " (" + direction + ")")),
        index_(index),
        direction_(std::move(direction)) {}
  std::size_t index() const { return index_; }
  const std::string& direction() const { return direction_; }

 private:
  std::size_t index_;
  std::string direction_;
};

class AlphabetMismatch : public Error {
 public:
  AlphabetMismatch(std::size_t a, std::size_t b)
      : Error("alphabet sizes differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

class AlphaOutOfRange : public Error {
 public:
  explicit AlphaOutOfRange(double alpha)
      : Error("Renyi order out of range: " + std::to_string(alpha)) {}
};

class EnumerationTooLarge : public NumericalError {
 public:
  EnumerationTooLarge(double required, double cap)
      : NumericalError("enumeration needs " + std::to_string(required) +
                       " entries, cap is " + std::to_string(cap)),
        required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

class GammaNonPositive : public Error {
 public:
  explicit GammaNonPositive(double gamma)
      : Error("inverse temperature must be positive, got " + std::to_string(gamma)) {}
};

class NotIID : public Error {
 public:
  explicit NotIID(const std::string& what)
      : Error(what + " requires an i.i.d. data model") {}
};

class EpsilonOutOfRange : public Error {
 public:
  explicit EpsilonOutOfRange(double eps)
      : Error("epsilon must lie in (0, 1/8), got " + std::to_string(eps)) {}
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularHessian : public NumericalError {
 public:
  SingularHessian(std::size_t sample, const std::string& detail)
      : NumericalError("hessian of sample " + std::to_string(sample) +
                       " is not positive definite: " + detail),
        sample_(sample) {}
  std::size_t sample() const { return sample_; }

 private:
  std::size_t sample_;
};

class NTooSmall : public Error {
 public:
  explicit NTooSmall(long n) : Error("sample count must be >= 2, got " + std::to_string(n)) {}
};

class DeltaOutOfRange : public Error {
 public:
  explicit DeltaOutOfRange(double delta)
      : Error("delta must lie in (0, 0.5), got " + std::to_string(delta)) {}
};

class NoPositiveRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Diverged : public NumericalError {
 public:
  Diverged(long iteration, double norm)
      : NumericalError("iterate diverged at step " + std::to_string(iteration) +
                       " with norm " + std::to_string(norm)),
        iteration_(iteration),
        norm_(norm) {}
  long iteration() const { return iteration_; }
  double norm() const { return norm_; }

 private:
  long iteration_;
  double norm_;
};

class ConfigInvalid : public Error {
 public:
  ConfigInvalid(std::string path, const std::string& why)
      : Error("invalid config at " + path + ": " + why), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace gibbs
