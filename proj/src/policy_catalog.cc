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

#include "memassist/policy_catalog.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <utility>

namespace memassist {
namespace {

namespace fs = std::filesystem;

bool SafeName(const std::string& name) {
  if (name.empty() || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.';
  });
}

}  // namespace

PolicyCatalog::PolicyCatalog(std::string dir) : dir_(std::move(dir)) {}

std::vector<PolicyEntry> PolicyCatalog::List() const {
  std::map<std::string, PolicyEntry> entries;
  std::error_code ec;
  if (!dir_.empty() && fs::is_directory(dir_, ec)) {
    for (const auto& f : fs::directory_iterator(dir_, ec)) {
      if (!f.is_regular_file() || f.path().extension() != ".json") continue;
      PolicyEntry e;
      e.name = f.path().stem().string();
      e.path = f.path().string();
      try {
        e.meta = QTableToJson(LoadQTable(e.path))["meta"];
        e.valid = true;
      } catch (const std::exception& ex) {
        e.reason = ex.what();
      }
      entries[e.name] = std::move(e);
    }
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& [name, table] : cache_) {
      if (entries.contains(name)) continue;
      entries[name] = PolicyEntry{name, "", true, "", QTableToJson(*table)["meta"]};
    }
  }
  std::vector<PolicyEntry> out;
  for (auto& [_, e] : entries) out.push_back(std::move(e));
  return out;
}

std::shared_ptr<const QTable> PolicyCatalog::Load(const std::string& name) {
  if (!SafeName(name)) return nullptr;
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  if (dir_.empty()) return nullptr;
  const fs::path path = fs::path(dir_) / (name + ".json");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return nullptr;
  try {
    auto table = std::make_shared<const QTable>(LoadQTable(path.string()));
    cache_[name] = table;
    return table;
  } catch (const std::exception&) {
    return nullptr;
  }
}

void PolicyCatalog::Add(const std::string& name, QTable table) {
  std::lock_guard<std::mutex> lock(mu_);
  cache_[name] = std::make_shared<const QTable>(std::move(table));
}

nlohmann::json PolicyEntryToJson(const PolicyEntry& e) {
  nlohmann::json j = {{"name", e.name}, {"path", e.path}, {"valid", e.valid}};
  if (e.valid) {
    j["meta"] = e.meta;
  } else {
    j["reason"] = e.reason;
  }
  return j;
}

}  // namespace memassist
