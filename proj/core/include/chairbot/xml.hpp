// Copyright 2026 The chairbot Authors
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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chairbot::xml {

inline constexpr std::size_t kMaxDepth = 16;
inline constexpr std::size_t kMaxElements = 4096;

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::size_t line = 0;
  std::size_t column = 0;

  std::optional<std::string_view> attribute(std::string_view key) const;
};

/// Parses a document with exactly one root element.
///
/// Supports the prolog, comments, quoted attributes and the five predefined
/// entities. Character data other than whitespace, CDATA, DOCTYPE and
/// processing instructions after the prolog are rejected. Nesting deeper than
/// kMaxDepth or more than kMaxElements elements is a ParseError.
Element parse(std::string_view text);

/// Writes an element tree with two-space indentation. Attribute values are escaped.
std::string serialize(const Element& root);

}  // namespace chairbot::xml
