// core/include/hierarchylab/errors.hpp

// Copyright 2026   hierarchylab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef HIERARCHYLAB_ERRORS_HPP_
#define HIERARCHYLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hierarchylab {

// Base class for every library error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A quadrature or recursion produced NaN or infinity.
class NonFinite : public Error {
 public:
  explicit NonFinite(const std::string& msg) : Error(msg) {}
};

// A 2x2 kernel matrix failed the positive semidefiniteness check.
class NotPSD : public Error {
 public:
  explicit NotPSD(const std::string& msg) : Error(msg) {}
};

// A weak derivative was requested against a zero-variance kernel.
class SingularKernel : public Error {
 public:
  explicit SingularKernel(const std::string& msg) : Error(msg) {}
};

// A derivative order beyond what the nonlinearity supports.
class UnsupportedOrder : public Error {
 public:
  explicit UnsupportedOrder(const std::string& msg) : Error(msg) {}
};

// An operation that only makes sense for smooth odd activations with a
// vanishing critical kernel was called on something else.
class NotKStarZeroClass : public Error {
 public:
  explicit NotKStarZeroClass(const std::string& msg) : Error(msg) {}
};

// The critical tuning solver did not converge to an admissible point.
class NoCriticalPoint : public Error {
 public:
  explicit NoCriticalPoint(const std::string& msg) : Error(msg) {}
};

// A cumulant order outside the implemented hierarchy.
class BadOrder : public Error {
 public:
  explicit BadOrder(const std::string& msg) : Error(msg) {}
};

// A scalar argument outside its documented domain.
class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

// Too few Monte Carlo samples to form the requested batched estimate.
class InsufficientSamples : public Error {
 public:
  explicit InsufficientSamples(const std::string& msg) : Error(msg) {}
};

// An input vector that must be nonzero was zero.
class ZeroInput : public Error {
 public:
  explicit ZeroInput(const std::string& msg) : Error(msg) {}
};

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_ERRORS_HPP_
