#pragma once

#include <stdexcept>
#include <string>

namespace heatqc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument at an API boundary (bad scale, empty grid, unknown name, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Point evaluation requested exactly at a non-removable weight singularity.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// A quadrature failed in a way that cannot be expressed as a flagged result.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, double best_estimate)
      : Error(what), best_estimate(best_estimate) {}
  double best_estimate;
};

/// Square-function kernels must have vanishing mean.
class ZeroMeanRequired : public Error {
public:
  using Error::Error;
};

/// An extension sample came out with J <= 0 or |mu| >= 1 and the quadrature
/// error budget cannot explain it.
class NonQuasiconformalSample : public Error {
public:
  NonQuasiconformalSample(const std::string& what, double x, double t, double jacobian,
                          double abs_mu, double budget)
      : Error(what), x(x), t(t), jacobian(jacobian), abs_mu(abs_mu), budget(budget) {}
  double x;
  double t;
  double jacobian;
  double abs_mu;
  double budget;
};

}  // namespace heatqc
