// Copyright 2026 The Semsteg Authors.
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

#ifndef SEMSTEG_TREE_IO_H_
#define SEMSTEG_TREE_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "semsteg/json_util.h"
#include "semsteg/semantic_space.h"

namespace semsteg {

// {"version":1,"nodes":[{"id":0,"path":"A/B/C","surfaces":["C"]},...]}
// "id" is optional on input; without ids, entities are numbered in file
// order. Output lists nodes in canonical order.
inline OntologyTree ParseTree(std::string_view text,
                              const std::string& source = "<tree>") {
  using json_util::Field;
  const auto doc = json_util::Parse(text, source);
  json_util::CheckVersion(doc, source);
  const auto nodes = Field<json_util::Json>(doc, "nodes", source);
  if (!nodes.is_array()) {
    throw Error(ErrorCode::kParse, source + ": 'nodes' must be an array");
  }
  std::vector<Entity> entities;
  entities.reserve(nodes.size());
  bool any_id = false;
  bool all_ids = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = source + ": nodes[" + std::to_string(i) + "]";
    const auto& node = nodes[i];
    Entity e;
    try {
      e.path = EntityPath::Parse(Field<std::string>(node, "path", where));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kValidation) throw;
      throw Error(ErrorCode::kValidation, where + ".path: " + err.detail());
    }
    e.surface_forms = Field<std::vector<std::string>>(node, "surfaces", where);
    if (node.contains("id")) {
      any_id = true;
      e.id = EntityId{Field<std::uint32_t>(node, "id", where)};
    } else {
      all_ids = false;
      e.id = EntityId{static_cast<std::uint32_t>(i)};
    }
    entities.push_back(std::move(e));
  }
  if (any_id && !all_ids) {
    throw Error(ErrorCode::kValidation,
                source + ": either every node or no node carries an id");
  }
  return OntologyTree::Build(std::move(entities));
}

inline std::string SerializeTree(const OntologyTree& tree) {
  json_util::Json nodes = json_util::Json::array();
  for (EntityId id : tree.canonical_order()) {
    const Entity& e = tree.entity(id);
    nodes.push_back({{"id", e.id.value},
                     {"path", e.path.str()},
                     {"surfaces", e.surface_forms}});
  }
  json_util::Json doc = {{"version", 1}, {"nodes", std::move(nodes)}};
  return doc.dump(2) + "\n";
}

inline OntologyTree LoadTree(const std::string& path) {
  return ParseTree(json_util::ReadFile(path), path);
}

inline void SaveTree(const OntologyTree& tree, const std::string& path) {
  json_util::WriteFile(path, SerializeTree(tree));
}

}  // namespace semsteg

#endif  // SEMSTEG_TREE_IO_H_
