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

#include "qb/sql/schema.h"

#include <fstream>
#include <sstream>
#include <string>

#include "absl/strings/ascii.h"
#include "json.hpp"
#include "qb/status.h"

namespace qb::sql {
namespace {

std::string Key(std::string_view name) {
  return absl::AsciiStrToLower(std::string(name));
}

}  // namespace

absl::StatusOr<SchemaCatalog> SchemaCatalog::FromJson(
    std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return MakeError(ErrorKind::kInvalidArgument, "schema is not a JSON object");
  }
  SchemaCatalog catalog;
  if (!doc.contains("tables")) return catalog;
  const nlohmann::json& tables = doc["tables"];
  if (!tables.is_object()) {
    return MakeError(ErrorKind::kInvalidArgument, "'tables' must be an object");
  }
  for (const auto& [tname, tdef] : tables.items()) {
    catalog.tables_[Key(tname)];
    if (!tdef.is_object() || !tdef.contains("columns")) continue;
    const nlohmann::json& cols = tdef["columns"];
    if (!cols.is_object()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "columns of '" + tname + "' must be an object");
    }
    for (const auto& [cname, cdef] : cols.items()) {
      ColumnInfo info;
      if (cdef.is_object()) {
        info.data_type = cdef.value("type", "");
        info.unique = cdef.value("unique", false);
        info.not_null = cdef.value("not_null", false);
        info.primary_key = cdef.value("primary_key", false);
        if (cdef.contains("foreign_key") && cdef["foreign_key"].is_array() &&
            cdef["foreign_key"].size() == 2) {
          info.foreign_key = std::make_pair(
              cdef["foreign_key"][0].get<std::string>(),
              cdef["foreign_key"][1].get<std::string>());
        }
      }
      catalog.AddColumn(tname, cname, info);
    }
  }
  return catalog;
}

absl::StatusOr<SchemaCatalog> SchemaCatalog::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIo, "cannot read schema file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

void SchemaCatalog::AddColumn(std::string_view table, std::string_view column,
                              ColumnInfo info) {
  tables_[Key(table)].columns[Key(column)] = std::move(info);
}

const TableInfo* SchemaCatalog::FindTable(std::string_view table) const {
  auto it = tables_.find(Key(table));
  return it == tables_.end() ? nullptr : &it->second;
}

const ColumnInfo* SchemaCatalog::FindColumn(std::string_view table,
                                            std::string_view column) const {
  const TableInfo* t = FindTable(table);
  if (!t) return nullptr;
  auto it = t->columns.find(Key(column));
  return it == t->columns.end() ? nullptr : &it->second;
}

bool SchemaCatalog::IsUnique(std::string_view table,
                             std::string_view column) const {
  const ColumnInfo* c = FindColumn(table, column);
  return c && (c->unique || c->primary_key);
}

bool SchemaCatalog::IsNotNull(std::string_view table,
                              std::string_view column) const {
  const ColumnInfo* c = FindColumn(table, column);
  return c && (c->not_null || c->primary_key);
}

}  // namespace qb::sql
