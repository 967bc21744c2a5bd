// Copyright 2026 The preseg Authors
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

#include "preseg/common/error.hpp"

namespace preseg
{

const char * toString(ErrorCode code)
{
  switch (code) {
    case ErrorCode::kMalformedFile: return "malformed-file";
    case ErrorCode::kCorruptRecord: return "corrupt-record";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidPose: return "invalid-pose";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kFit: return "fit";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kPromptInfeasible: return "prompt-infeasible";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string & message)
: std::runtime_error(std::string(toString(code)) + ": " + message), code_(code), detail_(message)
{
}

RecordError::RecordError(ErrorCode code, std::size_t record, const std::string & message)
: Error(code, message + " (record " + std::to_string(record) + ")"), record_(record)
{
}

StageError::StageError(std::string stage, ErrorCode code, const std::string & message)
: Error(code, "[" + stage + "] " + message), stage_(std::move(stage))
{
}

}  // namespace preseg
