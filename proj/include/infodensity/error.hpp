// Copyright 2026 The Infodensity Authors.
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

#ifndef INFODENSITY_ERROR_HPP_
#define INFODENSITY_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace infodensity {

// Error categories map one-to-one onto CLI exit codes: usage 1, data 2,
// numeric 3.

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace infodensity

#endif  // INFODENSITY_ERROR_HPP_
