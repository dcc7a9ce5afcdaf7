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
#ifndef FORGE_JSONX_HPP_
#define FORGE_JSONX_HPP_

#include <json.hpp>

namespace forge {

// Insertion-ordered JSON so that unknown keys survive a round trip in their
// original position and repeated runs emit byte-identical files.
using json = nlohmann::ordered_json;

}  // namespace forge

#endif  // FORGE_JSONX_HPP_
