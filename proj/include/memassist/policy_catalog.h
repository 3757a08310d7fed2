// Copyright 2026 The memassist Authors. All rights reserved.
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

// Directory of Q-table files that sessions can be created against.

#ifndef MEMASSIST_POLICY_CATALOG_H_
#define MEMASSIST_POLICY_CATALOG_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "memassist/qlearn.h"

namespace memassist {

struct PolicyEntry {
  std::string name;  // file name without the .json extension
  std::string path;
  bool valid = false;
  std::string reason;  // why an invalid file failed to load
  nlohmann::json meta;
};

class PolicyCatalog {
 public:
  explicit PolicyCatalog(std::string dir);

  // Every *.json file in the directory, sorted by name.
  std::vector<PolicyEntry> List() const;
  // Null if no valid policy has that name. Loaded tables are cached.
  std::shared_ptr<const QTable> Load(const std::string& name);
  // Registers an in-memory table under `name`, shadowing any file.
  void Add(const std::string& name, QTable table);

  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const QTable>> cache_;
};

nlohmann::json PolicyEntryToJson(const PolicyEntry& e);

}  // namespace memassist

#endif  // MEMASSIST_POLICY_CATALOG_H_
