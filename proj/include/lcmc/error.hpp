// Copyright 2026 The lcmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lcmc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not available for this object
/// (e.g. exact sampling from a target without a known sampler).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A chain produced a non-finite f or gradient.
class ChainDivergence : public Error {
 public:
  ChainDivergence(const std::string& what, Eigen::VectorXd state, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"),
        state_(std::move(state)),
        step_(step) {}

  const Eigen::VectorXd& state() const { return state_; }
  std::size_t step() const { return step_; }

 private:
  Eigen::VectorXd state_;
  std::size_t step_;
};

/// Iterative solver hit its iteration budget.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd last_iterate,
                 double gradient_norm, std::size_t iterations)
      : Error(what),
        last_iterate_(std::move(last_iterate)),
        gradient_norm_(gradient_norm),
        iterations_(iterations) {}

  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  double gradient_norm() const { return gradient_norm_; }
  std::size_t iterations() const { return iterations_; }

 private:
  Eigen::VectorXd last_iterate_;
  double gradient_norm_;
  std::size_t iterations_;
};

/// Malformed configuration text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string field)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace lcmc
