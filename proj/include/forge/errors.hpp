/* Copyright 2026 The Forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef FORGE_ERRORS_HPP_
#define FORGE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace forge {

// Input violates a documented precondition or schema.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stream or file cannot be read at all.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stream is readable but the majority of its lines are malformed.
class format_error : public validation_error {
 public:
  using validation_error::validation_error;
};

// A remote endpoint stayed unreachable or kept failing after retries.
class transport_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A run is misconfigured (missing endpoint, contradictory flags, ...).
class config_error : public validation_error {
 public:
  using validation_error::validation_error;
};

}  // namespace forge

#endif  // FORGE_ERRORS_HPP_
