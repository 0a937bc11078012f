// Copyright 2026 The ghzsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ghz {

/// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorKind {
    Config,      // bad input document or unphysical device
    Infeasible,  // no pulse solution within the control limits
    Contract,    // a precondition of an inner routine was violated
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string &what) : Error(ErrorKind::Config, what) {}
};

struct UnphysicalNetworkError : Error {
    explicit UnphysicalNetworkError(const std::string &what) : Error(ErrorKind::Config, "unphysical network: " + what) {}
};

struct InfeasibleError : Error {
    explicit InfeasibleError(const std::string &what) : Error(ErrorKind::Infeasible, what) {}
};

struct ContractViolation : Error {
    explicit ContractViolation(const std::string &what) : Error(ErrorKind::Contract, what) {}
};

}  // namespace ghz
