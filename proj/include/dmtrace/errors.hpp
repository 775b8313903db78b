/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_ERRORS_HPP
#define DMTRACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dmt {

/// Base class for all dmtrace errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input from the caller (bad arguments, malformed polynomials, ...).
/// Maps to CLI exit code 2.
struct UserError : Error {
    explicit UserError(const std::string& msg) : Error(msg) {}
};

/// A configured size budget would be exceeded. Maps to CLI exit code 3.
struct BudgetError : Error {
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

/// A mathematical expectation failed: either a theorem the computation relies
/// on appears to be violated, or an internal cross-check caught a bug. Either
/// way the result cannot be trusted. Maps to CLI exit code 4.
struct TheoryViolation : Error {
    explicit TheoryViolation(const std::string& msg) : Error(msg) {}
};

/// Operands belong to different field towers.
struct TowerMismatch : Error {
    TowerMismatch() : Error("operands belong to different field towers") {}
};

/// Division by zero or inversion of a non-unit.
struct MathError : Error {
    explicit MathError(const std::string& msg) : Error(msg) {}
};

}  // namespace dmt

#endif
