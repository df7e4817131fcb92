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

#ifndef QB_SQL_SCHEMA_H_
#define QB_SQL_SCHEMA_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "absl/status/statusor.h"

namespace qb::sql {

struct ColumnInfo {
  std::string data_type;
  bool unique = false;
  bool not_null = false;
  bool primary_key = false;
  std::optional<std::pair<std::string, std::string>> foreign_key;
};

struct TableInfo {
  std::map<std::string, ColumnInfo> columns;
};

// Table and column metadata consulted by schema-aware constraints.
class SchemaCatalog {
 public:
  // Parses {"tables": {"t": {"columns": {"c": {...}}}}}.
  static absl::StatusOr<SchemaCatalog> FromJson(std::string_view json_text);
  static absl::StatusOr<SchemaCatalog> FromFile(const std::string& path);

  void AddColumn(std::string_view table, std::string_view column,
                 ColumnInfo info);

  // Lookups fold unquoted names to lower case.
  const TableInfo* FindTable(std::string_view table) const;
  const ColumnInfo* FindColumn(std::string_view table,
                               std::string_view column) const;

  // Primary-key columns count as unique and not null.
  bool IsUnique(std::string_view table, std::string_view column) const;
  bool IsNotNull(std::string_view table, std::string_view column) const;

  const std::map<std::string, TableInfo>& tables() const { return tables_; }

 private:
  std::map<std::string, TableInfo> tables_;
};

}  // namespace qb::sql

#endif  // QB_SQL_SCHEMA_H_
