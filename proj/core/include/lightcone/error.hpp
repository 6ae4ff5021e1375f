// Copyright 2026 The Lightcone Authors
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

#ifndef LIGHTCONE_ERROR_HPP
#define LIGHTCONE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lightcone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments: unknown vertices, malformed configs, violated preconditions.
class InputError : public Error {
   public:
    using Error::Error;
};

/// A configured cap or budget was hit (qubit cap, path explosion guard, ...).
class ResourceError : public Error {
   public:
    using Error::Error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public Error {
   public:
    using Error::Error;
};

/// Not enough data to fit a light cone.
class FitError : public NumericError {
   public:
    using NumericError::NumericError;
};

}  // namespace lightcone

#endif
