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

#ifndef QB_REWRITE_BINDING_H_
#define QB_REWRITE_BINDING_H_

#include <map>
#include <string>
#include <vector>

#include "qb/sql/ast.h"

namespace qb::rewrite {

// Variable assignments produced by a successful match.
struct Binding {
  std::map<std::string, sql::NodePtr> element;
  std::map<std::string, std::vector<sql::NodePtr>> set;
  // Text bound by string-template variables.
  std::map<std::string, std::string> string_parts;

  // Statement clauses of the matched query that the pattern does not
  // mention; they are kept in the rewritten statement.
  std::vector<sql::NodePtr> carried_clauses;
  // Conjuncts of the matched conjunction outside the pattern's conjuncts.
  std::vector<sql::NodePtr> carried_conjuncts;
  std::string carried_connective = "AND";

  bool Has(const std::string& name) const {
    return element.count(name) || set.count(name) || string_parts.count(name);
  }
};

}  // namespace qb::rewrite

#endif  // QB_REWRITE_BINDING_H_
