// Copyright 2026 The qb Authors
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

#ifndef QB_SUGGEST_MDL_H_
#define QB_SUGGEST_MDL_H_

#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boost/multiprecision/cpp_int.hpp"
#include "qb/varsql/rule.h"

namespace qb::suggest {

using Rational = boost::multiprecision::cpp_rational;

struct MdlConfig {
  Rational w = 10;    // Base length of any rule.
  Rational w_e = 1;   // Weight of an element-variable occurrence.
  Rational w_s = 2;   // Weight of a set-variable occurrence.

  absl::Status Validate() const;
};

// Parses "W,We,Ws"; each part may be an integer, decimal or fraction.
absl::StatusOr<MdlConfig> ParseMdlConfig(std::string_view text);

// Element counts over pattern and replacement together.
struct ElementCounts {
  int64_t c_e = 0;  // element-variable occurrences
  int64_t c_s = 0;  // set-variable occurrences
  int64_t c_o = 0;  // keywords, names, literals and operators
};

// Counts the elements of the serialized rule. Punctuation ( ) , . does not
// count. A string literal counts once if it has fixed text, and each
// variable spliced into it counts as an element-variable.
ElementCounts CountElements(const varsql::Rule& rule);

// W + (W_E * C_E + W_S * C_S) / C_O. DegenerateRule when C_O is zero.
absl::StatusOr<Rational> DescriptionLength(const varsql::Rule& rule,
                                           const MdlConfig& config = {});

Rational ParseRational(std::string_view text, bool* ok);
double ToDouble(const Rational& value);
std::string ToString(const Rational& value);

}  // namespace qb::suggest

#endif  // QB_SUGGEST_MDL_H_
