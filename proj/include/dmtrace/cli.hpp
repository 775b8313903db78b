/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_CLI_HPP
#define DMTRACE_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmtrace/hecke.hpp"

namespace dmt {

/// Runtime configuration shared by all subcommands. Values come from the
/// defaults below, overridden by a JSON config file (--config), overridden in
/// turn by command-line flags.
struct Config {
    std::uint64_t enum_budget = kDefaultEnumBudget;  // max base-field size
    int truncation = 12;  // default series order for future series output
    std::string cache_dir = "dmtrace-cache";
    int workers = 0;  // OpenMP thread count; 0 keeps the runtime default
    std::string format = "json";  // hecke row output: json | csv
};

/// Reads a JSON object with any subset of the keys enum_budget, truncation,
/// cache_dir, workers, format. Unknown keys are rejected so typos do not
/// silently fall back to defaults.
Config load_config_file(const std::string& path);

/// Throws UserError unless the config values are usable (positive budget and
/// truncation, non-negative workers, known format).
void validate_config(const Config& cfg);

struct PrimePower {
    fp_t p;
    std::uint32_t e;
};

/// Factors q as p^e; throws UserError when q is not a prime power.
PrimePower split_prime_power(std::uint64_t q);

/// Renders a doubled integer as the underlying half-integer: 4 -> "2",
/// -3 -> "-3/2". Used for the size bounds, which live in (1/2)Z.
std::string render_half(std::int64_t twice);

/// Canonical cache file name for one enumeration, derived from the key
/// (q, m, theta); the modulus is canonical from (q, m) and every record
/// carries it in full for verification.
std::string cache_file_name(const FieldTower* tower, const FFElem& theta);

/// Writes one JSON record per class to cache_file_name under dir, creating
/// the directory if needed. Existing content for the same key is replaced
/// atomically (write to temp, rename).
void write_class_cache(const std::string& dir, const ClassList& classes);

/// Loads a cached enumeration; nullopt when no usable file exists (missing,
/// unparsable, or keyed differently than requested). Unusable files are
/// reported on stderr and otherwise ignored, so a fresh enumeration heals
/// them.
std::optional<ClassList> load_class_cache(const std::string& dir,
                                          const TowerPtr& tower,
                                          const FFElem& theta);

/// One hecke output row rendered to CSV (no header) in the column order
/// q,P,n,k,l,trace_num,trace_den,normalized_num,normalized_den,exp_adelic,
/// bound_adelic,exp_norm,bound_norm,ok,classes.
std::string report_to_csv(const HeckeTraceReport& rep);
extern const char* const kCsvHeader;

/// The same row as a single-line JSON object with the values nested as
/// {"num": ..., "den": ...} for the two traces.
std::string report_to_json(const HeckeTraceReport& rep);

/// Entry point used by the dmtrace binary; returns the process exit code
/// (0 ok, 1 bound violation or verify failure, 2 usage, 3 budget, 4 broken
/// mathematical expectation).
int run_cli(int argc, const char* const* argv);

}  // namespace dmt

#endif
