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

#ifndef PRESEG__COMMON__ERROR_HPP_
#define PRESEG__COMMON__ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace preseg
{

enum class ErrorCode {
  kMalformedFile,
  kCorruptRecord,
  kParse,
  kInvalidPose,
  kRange,
  kParameter,
  kFit,
  kProtocol,
  kPromptInfeasible,
  kDimensionMismatch,
  kNotFound,
  kConflict,
  kConfig,
  kIo,
};

const char * toString(ErrorCode code);

/// Base error for everything the library throws on bad input.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string & detail() const noexcept { return detail_; }

private:
  ErrorCode code_;
  std::string detail_;
};

/// Parse failure that knows which record (line or point index) was at fault.
class RecordError : public Error
{
public:
  RecordError(ErrorCode code, std::size_t record, const std::string & message);

  std::size_t record() const noexcept { return record_; }

private:
  std::size_t record_;
};

/// Pipeline failure tagged with the stage that raised it.
class StageError : public Error
{
public:
  StageError(std::string stage, ErrorCode code, const std::string & message);

  const std::string & stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

}  // namespace preseg

#endif  // PRESEG__COMMON__ERROR_HPP_
