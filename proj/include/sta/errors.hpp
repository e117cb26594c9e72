// Copyright 2026 The stagate Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sta {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes: ConfigError -> 2, IoError -> 4, everything else -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (time outside
// [0, T], non-positive envelope, p outside (0, 1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularFieldError : public Error {
 public:
  using Error::Error;
};

class InvalidAnharmonicityError : public Error {
 public:
  using Error::Error;
};

// Waveform grid too coarse or not commensurate with the gate duration.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Inconsistent correction flags (DRAG requested without counter-diabatic).
class FlagError : public Error {
 public:
  using Error::Error;
};

// Accumulated non-unitarity or trace drift beyond tolerance.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

class ReconstructionError : public Error {
 public:
  using Error::Error;
};

// Clifford enumeration did not produce the expected group.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  enum class Kind { Syntax, UnknownKey, Type, Constraint };

  ConfigError(Kind kind, std::string key, const std::string& message)
      : Error(message), kind_(kind), key_(std::move(key)) {}

  Kind kind() const { return kind_; }
  const std::string& key() const { return key_; }

  static const char* kind_name(Kind kind) {
    switch (kind) {
      case Kind::Syntax: return "syntax_error";
      case Kind::UnknownKey: return "unknown_key";
      case Kind::Type: return "type_error";
      case Kind::Constraint: return "constraint_violation";
    }
    return "config_error";
  }

 private:
  Kind kind_;
  std::string key_;
};

}  // namespace sta
