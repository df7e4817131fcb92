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

#ifndef QB_SUGGEST_DISTANCE_H_
#define QB_SUGGEST_DISTANCE_H_

#include <optional>

#include "qb/varsql/rule.h"

namespace qb::suggest {

// Number of transformations that turn `candidate` into a rule covering
// `target`, or nothing (infinity) when no such generalization exists.
//
// Counting: a differing leaf costs 1 per leaf class; a complex element that
// must become a variable costs its leaf classes plus 1; absorbing items into
// a set variable costs their variablizations plus 1; each dropped clause and
// the final lift to a predicate cost 1. The generalized rule is built and
// checked with Covers before the count is returned.
std::optional<int> Distance(const varsql::Rule& candidate,
                            const varsql::Rule& target);

}  // namespace qb::suggest

#endif  // QB_SUGGEST_DISTANCE_H_
