/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_VERIFY_HPP
#define DMTRACE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dmtrace/hecke.hpp"

namespace dmt {

/// Outcome of one named property check. On failure the detail carries a
/// counterexample dump; on success a short sample count summary.
struct VerifyResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Runs a named property suite with a deterministic seed. Suites:
///   skew      random skew polynomial ring identities
///   mass      class counts against the mass formula for every small field
///   bg        quotient-by-finite-group l-series against invariants
///   dlog      point l-series dlog identity and block additivity
///   ramanujan infinite-place bounds and forced vanishing on a query grid
///   twopath   recurrence vs semilinear trace on random fiber modules
///   all       everything above
/// Throws UserError for an unknown suite name.
std::vector<VerifyResult> run_verify(const std::string& suite, std::uint64_t seed);

/// The query grid behind the ramanujan suite for one base field: all monic
/// irreducible P of degree <= 2, n <= 2, 2 <= k <= 12, 0 <= l <= q-2.
std::vector<HeckeTraceReport> ramanujan_grid(const TowerPtr& base);

}  // namespace dmt

#endif
