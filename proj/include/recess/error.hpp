/*
 * Copyright 2026 The Recess Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RECESS_ERROR_HPP_
#define RECESS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace recess {

// Root of every error thrown by the library. The CLI maps ParameterError to
// the usage exit code and everything else to the runtime exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Bytes on disk do not match the expected layout (PNG, CIFAR, model files).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied parameter is outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Violated precondition on data: shape mismatch, out-of-range pixel, etc.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Non-finite values where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Optimisation (training or attack) produced a non-finite objective.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// External predictor failed: spawn failure, child exit, malformed response.
// Never a classification result.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace recess

#endif  // RECESS_ERROR_HPP_
