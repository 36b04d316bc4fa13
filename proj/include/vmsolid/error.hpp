#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vmsolid {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: case files, presets, parameters out of range, unknown tags.
/// The CLI maps these to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or degenerate mesh data.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Failure of a numerical procedure (singular systems, Newton divergence,
/// inverted elements). The CLI maps these to exit status 1.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An element volume became non-positive after moving the mesh.
class MeshInversion : public NumericalError {
 public:
  MeshInversion(std::size_t element, double volume)
      : NumericalError("mesh inversion: element " + std::to_string(element) +
                       " has volume " + std::to_string(volume)),
        element_(element) {}
  std::size_t element() const { return element_; }

 private:
  std::size_t element_;
};

/// det(I - grad u) <= 0, or a deformation gradient with J <= 0.
class KinematicInversion : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace vmsolid
