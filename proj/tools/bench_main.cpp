/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

// Times the OpenMP class enumeration against the serial reference on a few
// field sizes and confirms they return byte-identical class lists.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "dmtrace/drinfeld.hpp"
#include "dmtrace/poly.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dmt;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool same_lists(const ClassList& x, const ClassList& y) {
    if (x.entries.size() != y.entries.size()) return false;
    for (std::size_t i = 0; i < x.entries.size(); ++i) {
        const ClassEntry& a = x.entries[i];
        const ClassEntry& b = y.entries[i];
        if (a.g != b.g || a.delta != b.delta || a.aut != b.aut ||
            !(a.cp.a == b.cp.a) || !(a.cp.b == b.cp.b))
            return false;
    }
    return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled at build time\n");
#endif
    struct Case {
        fp_t p;
        std::uint32_t e, m;
    };
    // Kept under the default budget of 729 so the benchmark runs anywhere.
    const std::vector<Case> cases = {{3, 1, 2}, {2, 2, 2}, {3, 1, 3},
                                     {2, 1, 5}, {5, 1, 2}, {2, 2, 3},
                                     {3, 1, 4}, {5, 1, 3}};
    std::printf("%-10s %10s %10s %10s %8s\n", "field", "classes", "parallel",
                "serial", "speedup");
    bool all_equal = true;
    for (const Case& c : cases) {
        TowerPtr tower = build_tower(c.p, c.e, c.m);
        FFElem theta = ff_zero(tower.get());

        auto t0 = std::chrono::steady_clock::now();
        ClassList par = enumerate_classes(tower, theta);
        double tp = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        ClassList ser = enumerate_classes_serial(tower, theta);
        double ts = seconds_since(t0);

        bool equal = same_lists(par, ser);
        all_equal = all_equal && equal;
        std::string name = "F_" + std::to_string(tower->size);
        std::printf("%-10s %10zu %9.3fs %9.3fs %7.2fx%s\n", name.c_str(),
                    par.entries.size(), tp, ts, ts / tp,
                    equal ? "" : "  MISMATCH");
    }
    std::printf(all_equal ? "parallel and serial agree on every case\n"
                          : "MISMATCH between parallel and serial output\n");
    return all_equal ? 0 : 1;
}
