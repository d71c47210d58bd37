// Copyright 2026 The pmimask Authors.
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

#ifndef PMIMASK_ERROR_H_
#define PMIMASK_ERROR_H_

#include <stdexcept>
#include <string>

namespace pmimask {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates a precondition.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed or fails validation.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmimask

#endif  // PMIMASK_ERROR_H_
