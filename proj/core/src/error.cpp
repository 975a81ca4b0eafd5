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

#include "rematch/error.hpp"

namespace rematch {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kInconsistentNA: return "InconsistentNA";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kUnknownTargetTable: return "UnknownTargetTable";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kMissingDocument: return "MissingDocument";
    case ErrorCode::kRemote: return "RemoteError";
    case ErrorCode::kContextOverflow: return "ContextOverflow";
    case ErrorCode::kUnparseable: return "Unparseable";
    case ErrorCode::kPrecondition: return "PreconditionViolation";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kAmbiguousTruth: return "AmbiguousTruth";
    case ErrorCode::kInvalidRequest: return "InvalidRequest";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kConflict: return "Conflict";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::string& where) {
  std::string out(error_code_name(code));
  out += ": ";
  out += message;
  if (!where.empty()) {
    out += " [";
    out += where;
    out += "]";
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string where)
    : std::runtime_error(compose(code, message, where)),
      code_(code),
      message_(std::move(message)),
      where_(std::move(where)) {}

RemoteError::RemoteError(std::string message, int http_status, int attempts,
                         double retry_after_seconds)
    : Error(ErrorCode::kRemote, std::move(message)),
      http_status_(http_status),
      attempts_(attempts),
      retry_after_(retry_after_seconds) {}

}  // namespace rematch
