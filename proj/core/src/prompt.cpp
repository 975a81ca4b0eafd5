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

#include "rematch/prompt.hpp"

#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

std::string MatchPrompt::hash() const {
  return sha256_hex(system_text + '\0' + user_text);
}

std::string match_system_text(std::size_t k) {
  const std::string ks = std::to_string(k);
  return "You are an expert in databases, and schema matching at top k specifically. "
         "Your task is to create matches between source and target tables and "
         "attributes. For each attribute from the source you always suggest the top " +
         ks +
         " most relevant tables and columns from the target. You are excellent at "
         "this task.\n"
         "If none of the columns are relevant,  the last table and column should be "
         "\"NA\", \"NA\". This value may appear only once per mapping!\n"
         "Your job is to match the schemas. You never provide explanations, code or "
         "anything else, only results.\n"
         "Below are the two schemas.\n"
         "Create top k matches between source and target tables and columns.\n"
         "Make sure to match the entire input. Make sure to return the results in the "
         "following json format with top " +
         ks + " target results foreach input in source.";
}

std::string expected_output_block(std::size_t k) {
  std::string targets;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    if (i > 1) targets += ", ";
    targets += "'TGT_ENT" + n + "': 'TARGET_TABLE_NAME" + n + "', 'TGT_ATT" + n +
               "': 'TARGET_COLUMN_NAME" + n + "'";
  }
  const std::string src = "{'SRC_ENT': 'SOURCE_TABLE_NAME', 'SRC_ATT': 'SOURCE_COLUMN_NAME',\n";
  return "Expected output format:\n"
         "{'1': " + src + targets + "},\n"
         "'2': " + src + targets + "}}...";
}

namespace {

const Document& require_doc(const Corpus& corpus, const DocOrigin& origin) {
  const Document* doc = corpus.find(origin.key());
  if (doc == nullptr) {
    throw Error(ErrorCode::kMissingDocument, "no document for origin", origin.key());
  }
  return *doc;
}

}  // namespace

MatchPrompt build_match_prompt(const PromptInputs& in) {
  if (!in.source || !in.source_table || !in.source_docs || !in.candidates ||
      !in.target || !in.target_docs) {
    throw Error(ErrorCode::kPrecondition, "incomplete prompt inputs");
  }
  if (in.k == 0) throw Error(ErrorCode::kPrecondition, "K must be at least 1");
  const Table& table = *in.source_table;

  MatchPrompt prompt;
  prompt.k = in.k;
  prompt.source_table = table.name;
  if (in.attributes.empty()) {
    for (const auto& a : table.attributes) prompt.source_attributes.push_back(a.name);
  } else {
    for (const auto& name : in.attributes) {
      const Attribute* a = table.find_attribute(name);
      if (!a) {
        throw Error(ErrorCode::kPrecondition, "attribute not in source table",
                    table.name + "." + name);
      }
      prompt.source_attributes.push_back(a->name);
    }
  }
  prompt.system_text = match_system_text(in.k);

  std::string user = expected_output_block(in.k);
  user += "\n\nSource Schema:\n,SRC_ENT, SRC_ATT\n";
  const Document* source_doc = nullptr;
  for (std::size_t i = 0; i < prompt.source_attributes.size(); ++i) {
    const auto& name = prompt.source_attributes[i];
    const Document& doc =
        require_doc(*in.source_docs, DocOrigin{in.source->name, table.name, name});
    if (!source_doc) source_doc = &doc;
    user += std::to_string(i) + "," + table.name + ", " + name + "\n";
  }
  // Attribute documents share the table body; show it once without highlight.
  user += "\n" + source_doc->title + "\n" + source_doc->body + "\n";

  user += "\nTarget Schema:\n,TGT_ENT,TGT_ATT\n";
  std::vector<const Document*> target_docs;
  std::size_t row = 0;
  for (const auto& name : in.candidates->tables) {
    const Table* t = in.target->find_table(name);
    if (!t) {
      throw Error(ErrorCode::kMissingDocument, "candidate table not in target schema", name);
    }
    target_docs.push_back(
        &require_doc(*in.target_docs, DocOrigin{in.target->name, t->name, std::nullopt}));
    prompt.candidate_tables.push_back(t->name);
    for (const auto& a : t->attributes) {
      user += std::to_string(row++) + "," + t->name + "," + a.name + "\n";
    }
  }
  for (const Document* doc : target_docs) {
    user += "\n" + doc->title + "\n" + doc->body + "\n";
  }

  std::string known;
  for (const auto& pair : in.guidance) {
    if (!pair.target || !same_name(pair.source.table, table.name)) continue;
    known += pair.source.table + "," + pair.source.attribute + "," +
             pair.target->table + "," + pair.target->attribute + "\n";
  }
  if (!known.empty()) {
    user += "\nKnown mappings (confirmed correct, keep them in your results):\n"
            "SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT\n" + known;
  }

  user += "\nRemember to match the entire input. Make sure to return only the results!";
  prompt.user_text = std::move(user);
  return prompt;
}

}  // namespace rematch
