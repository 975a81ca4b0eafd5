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

#include <stdexcept>
#include <string>
#include <string_view>

namespace rematch {

enum class ErrorCode {
  kParse,
  kValidation,
  kInconsistentNA,
  kUnknownAttribute,
  kUnknownTargetTable,
  kEmptyText,
  kDimensionMismatch,
  kZeroVector,
  kMissingEmbedding,
  kMissingDocument,
  kRemote,
  kContextOverflow,
  kUnparseable,
  kPrecondition,
  kKTooLarge,
  kAmbiguousTruth,
  kInvalidRequest,
  kNotFound,
  kConflict,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Every failure surfaced by the library is an Error. `where` names the
// offending file, element, or field when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string where = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }
  // The message without the code name and location.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::string where_;
};

// Transport, auth, or quota failure talking to a remote provider.
class RemoteError : public Error {
 public:
  RemoteError(std::string message, int http_status, int attempts,
              double retry_after_seconds = 0.0);

  int http_status() const noexcept { return http_status_; }
  int attempts() const noexcept { return attempts_; }
  double retry_after_seconds() const noexcept { return retry_after_; }

 private:
  int http_status_;
  int attempts_;
  double retry_after_;
};

}  // namespace rematch
