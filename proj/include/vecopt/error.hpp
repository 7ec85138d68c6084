// Copyright 2026 The vecopt Authors
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

#ifndef VECOPT_ERROR_HPP
#define VECOPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vecopt {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNodeError : public Error {
 public:
  using Error::Error;
};

class NotAProcessorError : public Error {
 public:
  using Error::Error;
};

class InvalidRangeError : public Error {
 public:
  using Error::Error;
};

// Raised when an M/M/1 queue would receive lambda >= mu.
class UnstableQueueError : public Error {
 public:
  using Error::Error;
};

// A lookup table has no row for an arrival rate that the workload can produce.
class TableGapError : public Error {
 public:
  using Error::Error;
};

class CapacityExceededError : public Error {
 public:
  using Error::Error;
};

class IngressExceededError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class NoFeasibleAllocationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vecopt

#endif  // VECOPT_ERROR_HPP
