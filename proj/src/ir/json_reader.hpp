// Copyright 2026 The xddpipe Authors
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

// Strict JSON object access with location-carrying errors.

#ifndef XDDPIPE_SRC_IR_JSON_READER_HPP
#define XDDPIPE_SRC_IR_JSON_READER_HPP

#include <initializer_list>
#include <set>
#include <string>

#include "json.hpp"
#include "xddpipe/errors.hpp"

namespace xddpipe::detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
}

inline std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
inline std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ValidationError(path_, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!ok.count(it.key())) throw ValidationError(at(path_, it.key()), "unknown field");
  }

  bool has(const char* key) const { return j_.contains(key); }
  const Json& get(const char* key) const {
    if (!j_.contains(key)) throw ValidationError(at(path_, key), "missing field");
    return j_.at(key);
  }
  std::string path(const char* key) const { return at(path_, key); }

  long long integer(const char* key) const {
    const Json& v = get(key);
    if (!v.is_number_integer()) throw ValidationError(path(key), "expected an integer");
    return v.get<long long>();
  }
  long long integer_or(const char* key, long long dflt) const {
    return has(key) ? integer(key) : dflt;
  }
  std::string string(const char* key) const {
    const Json& v = get(key);
    if (!v.is_string()) throw ValidationError(path(key), "expected a string");
    return v.get<std::string>();
  }
  bool boolean_or(const char* key, bool dflt) const {
    if (!has(key)) return dflt;
    const Json& v = get(key);
    if (!v.is_boolean()) throw ValidationError(path(key), "expected a boolean");
    return v.get<bool>();
  }
  const Json& array(const char* key) const {
    const Json& v = get(key);
    if (!v.is_array()) throw ValidationError(path(key), "expected an array");
    return v;
  }

 private:
  const Json& j_;
  std::string path_;
};

}  // namespace xddpipe::detail

#endif  // XDDPIPE_SRC_IR_JSON_READER_HPP
