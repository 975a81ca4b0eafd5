// Copyright 2026 The ReMatch Authors.
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

#pragma once

#include <fstream>
#include <istream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace rematch::app::detail {

// Reads a flat JSON object of flag names to values as a CLI11 config file.
// Keys may use '_' or '-'; arrays become repeated or comma-joined values.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        j[name] = opt->as<std::string>();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text{std::istreambuf_iterator<char>(input), {}};
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      for (auto& c : item.name) {
        if (c == '_') c = '-';
      }
      if (value.is_array()) {
        std::vector<std::string> parts;
        for (const auto& v : value) parts.push_back(scalar(v));
        item.inputs.push_back(CLI::detail::join(parts, ","));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    return v.dump();
  }
};

// CLI11 reads config files only for the top-level app, so a subcommand's
// --config FILE is expanded here into ordinary arguments placed before the
// explicit ones. Flags given on the command line are not overridden.
inline std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string file;
  bool found = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
      file = args[++i];
      found = true;
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      found = true;
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!found || rest.empty()) return args;

  std::ifstream in(file);
  if (!in) throw CLI::FileError::Missing(file);
  const auto items = JsonConfig().from_config(in);
  auto given = [&](const std::string& flag) {
    for (const auto& a : rest) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> out{rest.front()};
  for (const auto& item : items) {
    const std::string flag = "--" + item.name;
    if (item.name == "config" || given(flag)) continue;
    const std::string value = item.inputs.empty() ? "" : item.inputs.front();
    if (value == "true") {
      out.push_back(flag);
    } else if (value != "false") {
      out.push_back(flag);
      out.push_back(value);
    }
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace rematch::app::detail
