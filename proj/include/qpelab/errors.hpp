// Copyright 2026 The qpe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qpelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A value violated the documented domain of a type or operation.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// The linear-error-propagation variance is singular at this fringe position.
class DivergenceError : public Error {
  public:
    using Error::Error;
};

/// The grid cannot resolve the oscillations of a circuit of this depth.
class GridTooCoarse : public Error {
  public:
    using Error::Error;
};

/// An observation has zero probability everywhere on the posterior support.
class ImpossibleObservation : public Error {
  public:
    using Error::Error;
};

/// The circular mean of a (near) rotationally symmetric density.
class UndefinedMean : public Error {
  public:
    using Error::Error;
};

class InsufficientResources : public Error {
  public:
    using Error::Error;
};

/// A new interval cannot be placed inside the previous one.
class InfeasibleInterval : public Error {
  public:
    using Error::Error;
};

/// The confidence chain of the loss bound needs more resources than are available.
class InfeasibleChain : public Error {
  public:
    using Error::Error;
};

}  // namespace qpelab
