// Copyright 2026 The qpurify Authors
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

namespace qpurify {

// Argument outside the mathematical domain of an operation (bad angle,
// odd ensemble size, qubit index out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested dense representation exceeds the configured qubit limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Operation invoked on an object in the wrong state (exhausted ensemble,
// collapse onto an unreachable branch, degenerate posterior).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qpurify
