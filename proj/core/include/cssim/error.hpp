// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cssim {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (zero inverse, duplicate
// abscissa, reused share index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A finite resource ran out: share indices, sequence numbers, field points.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class InsufficientSharesError : public Error {
 public:
  using Error::Error;
};

// Shares beyond the first t disagree with the interpolant of the first t.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Cuckoo insertion hit the eviction bound; the caller must rebuild with new
// hash seeds.
class ReseedNeededError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cssim
