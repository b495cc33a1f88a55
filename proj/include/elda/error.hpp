// Copyright 2026 The Authors.
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

#ifndef ELDA_ERROR_HPP_
#define ELDA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace elda {

enum class ErrorCode {
  kInvalidArgument,  // bad config, out-of-range index, constraint violation
  kFormat,           // malformed input file or record
  kEmptyCorpus,      // no document survived ingestion
  kIo,               // file could not be read or written
  kInternal,         // memoization drift or other consistency failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& msg) {
  throw Error(ErrorCode::kInvalidArgument, msg);
}
[[noreturn]] inline void throw_format(const std::string& msg) {
  throw Error(ErrorCode::kFormat, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
  throw Error(ErrorCode::kIo, msg);
}

}  // namespace elda

#endif  // ELDA_ERROR_HPP_
