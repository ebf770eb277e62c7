/*
 * Copyright 2026 The complexity-lens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLENS_ERROR_H_
#define CLENS_ERROR_H_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clens {

// Invalid input or configuration: malformed corpus lines, bad parameters,
// mismatched lengths. The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures that happen while running a valid request (I/O, divergence,
// degenerate statistics). The CLI maps these to exit code 2.
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(std::string_view)>;

// Non-fatal conditions (clipped budgets, skipped rows, degenerate
// surrogates) are routed here. Defaults to stderr.
void SetWarningHandler(WarningHandler handler);
void Warn(std::string_view message);

}  // namespace clens

#endif  // CLENS_ERROR_H_
