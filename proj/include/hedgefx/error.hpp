// Copyright 2026 The hedgefx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hedgefx {

// Error categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  kInvalidArgument = 1,
  kConfig = 2,
  kData = 3,
  kNumerical = 4,
};

// Base exception for every hard error raised by the library. `module` names
// the stage that failed ("dataio", "copula", ...) so the pipeline can
// propagate context without string parsing.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline Error invalid_argument(std::string module, const std::string& msg) {
  return Error(ErrorKind::kInvalidArgument, std::move(module), msg);
}
inline Error config_error(const std::string& msg) {
  return Error(ErrorKind::kConfig, "config", msg);
}
inline Error data_error(std::string module, const std::string& msg) {
  return Error(ErrorKind::kData, std::move(module), msg);
}
inline Error numerical_error(std::string module, const std::string& msg) {
  return Error(ErrorKind::kNumerical, std::move(module), msg);
}

}  // namespace hedgefx
