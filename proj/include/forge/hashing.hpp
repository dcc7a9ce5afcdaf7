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
#ifndef FORGE_HASHING_HPP_
#define FORGE_HASHING_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

// Stable, platform-independent hashing and seeded choice primitives. Sample
// ids, de-duplication picks, and subset extraction all derive from these, so
// their outputs must never depend on compiler, stdlib, or worker count.

namespace forge {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s);

// 128-bit FNV-1a rendered as 32 lowercase hex characters.
std::string fnv1a128_hex(std::string_view s);

// splitmix64 finalizer, used to mix a user seed with a key hash.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// Deterministic RNG for one (seed, key) pair. mt19937_64 output is fixed by
// the standard, so draws match across platforms.
std::mt19937_64 keyed_rng(std::uint64_t seed, std::string_view key);

// Uniform integer in [0, n). Rejection sampling; does not use
// std::uniform_int_distribution, whose mapping is implementation-defined.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t n);

}  // namespace forge

#endif  // FORGE_HASHING_HPP_
