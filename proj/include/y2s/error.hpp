/* Copyright 2026 The Y2Seq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef Y2S_ERROR_HPP_
#define Y2S_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace y2s {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  kInvalidArgument = 1,
  kConfig = 2,
  kNumeric = 3,
  kIo = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}
[[noreturn]] inline void fail_io(const std::string& what) {
  throw Error(ErrorKind::kIo, what);
}
[[noreturn]] inline void fail_numeric(const std::string& what) {
  throw Error(ErrorKind::kNumeric, what);
}
[[noreturn]] inline void fail_config(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

}  // namespace y2s

#endif  // Y2S_ERROR_HPP_
