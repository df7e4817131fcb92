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

#ifndef QB_SQL_SERIALIZER_H_
#define QB_SQL_SERIALIZER_H_

#include <string>

#include "qb/sql/ast.h"

namespace qb::sql {

// Renders a tree as single-space separated SQL. Variables print as <x> and
// <<x>>. The output re-parses to an equal tree.
std::string Serialize(const NodePtr& node, Dialect dialect = Dialect::kGeneric);

// Binding strength used for parenthesization; larger binds tighter.
int Precedence(const NodePtr& node);

}  // namespace qb::sql

#endif  // QB_SQL_SERIALIZER_H_
