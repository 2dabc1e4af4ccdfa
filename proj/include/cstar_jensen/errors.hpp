#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cstar_jensen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A block of an algebra element whose smallest singular value fell below
/// the singularity threshold.
class NearSingular : public Error {
 public:
  NearSingular(std::size_t block, double sigma_min)
      : Error("near-singular block " + std::to_string(block) +
              " (smallest singular value " + std::to_string(sigma_min) + ")"),
        block_(block),
        sigma_min_(sigma_min) {}

  std::size_t block() const { return block_; }
  double sigma_min() const { return sigma_min_; }

 private:
  std::size_t block_;
  double sigma_min_;
};

class NotSelfAdjoint : public Error {
 public:
  using Error::Error;
};

class OrderViolation : public Error {
 public:
  using Error::Error;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidMode : public Error {
 public:
  using Error::Error;
};

class InvalidSampler : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PairConditionViolated : public Error {
 public:
  PairConditionViolated(std::string condition, std::size_t left, std::size_t right,
                        double residual)
      : Error("pair condition '" + condition + "' violated on basis pair (" +
              std::to_string(left) + ", " + std::to_string(right) + "), residual " +
              std::to_string(residual)),
        condition_(std::move(condition)),
        left_(left),
        right_(right),
        residual_(residual) {}

  const std::string& condition() const { return condition_; }
  std::size_t left() const { return left_; }
  std::size_t right() const { return right_; }
  double residual() const { return residual_; }

 private:
  std::string condition_;
  std::size_t left_;
  std::size_t right_;
  double residual_;
};

class PairNotValidated : public Error {
 public:
  PairNotValidated() : Error("additive pair has not been validated") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cstar_jensen
