/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

// End-to-end checks against the installed command line binary, passed in as
// argv[1]. Runs in a scratch directory so cache files never leak.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_binary;
fs::path g_dir;
int g_failures = 0;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    fs::path out = g_dir / "stdout.txt";
    fs::path err = g_dir / "stderr.txt";
    std::string cmd = "cd '" + g_dir.string() + "' && '" + g_binary + "' " +
                      args + " > stdout.txt 2> stderr.txt";
    int status = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

void check(bool cond, const std::string& what, const RunResult* r = nullptr) {
    if (cond) {
        std::printf("ok: %s\n", what.c_str());
    } else {
        ++g_failures;
        std::printf("FAIL: %s\n", what.c_str());
        if (r) {
            std::printf("  exit: %d\n  stdout: %s\n  stderr: %s\n", r->exit_code,
                        r->out.c_str(), r->err.c_str());
        }
    }
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_integration <path-to-binary>\n");
        return 2;
    }
    g_binary = fs::absolute(argv[1]).string();
    g_dir = fs::temp_directory_path() /
            ("dmtrace-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);

    // enumerate: worked class counts, then a reuse from cache
    {
        RunResult r = run("enumerate --q 3 --m 1 --P \"T\"");
        check(r.exit_code == 0, "enumerate q3 m1 exits 0", &r);
        check(contains(r.out, "classes: 6"), "six classes over F_3", &r);
        check(contains(r.out, "mass: 3 ok"), "mass equals q^m", &r);
        check(contains(r.out, "supersingular: 2"), "supersingular count", &r);
        check(contains(r.out, "cache: wrote"), "first run writes the cache", &r);
        RunResult r2 = run("enumerate --q 3 --m 1 --P \"T\"");
        check(contains(r2.out, "cache: reused"), "second run reuses the cache",
              &r2);
    }
    {
        RunResult r = run("enumerate --q 3 --m 2 --P \"T^2+1\"");
        check(r.exit_code == 0, "enumerate q3 m2 exits 0", &r);
        check(contains(r.out, "classes: 24"), "24 classes over F_9", &r);
        check(contains(r.out, "mass: 9 ok"), "mass 9", &r);
    }
    {
        // P with no root in the requested field is a user error
        RunResult r = run("enumerate --q 3 --m 1 --P \"T^2+1\"");
        check(r.exit_code == 2, "degree mismatch exits 2", &r);
    }

    // hecke: frozen worked rows in both formats
    {
        RunResult r = run("hecke --q 3 --P \"T\" --k 4 --l 1");
        check(r.exit_code == 0, "hecke k4 exits 0", &r);
        const std::string expected =
            R"({"q":3,"P":"T","n":1,"k":4,"l":1,"trace_adelic":{"num":"1","den":"T^2"},)"
            R"("trace_normalized":{"num":"T","den":"1"},"exp_adelic":-2,"bound_adelic":"-1",)"
            R"("exp_norm":1,"bound_norm":"2","ok":true,"classes":6})";
        check(r.out == expected + "\n", "json row matches frozen bytes", &r);
    }
    {
        RunResult r = run("--format csv hecke --q 3 --P \"T\" --k 4..6 --l 1 --table");
        check(r.exit_code == 0, "csv table exits 0", &r);
        const std::string expected =
            "q,P,n,k,l,trace_num,trace_den,normalized_num,normalized_den,"
            "exp_adelic,bound_adelic,exp_norm,bound_norm,ok,classes\n"
            "3,T,1,4,1,1,T^2,T,1,-2,-1,1,2,true,6\n"
            "3,T,1,5,1,0,1,0,1,-inf,-3/2,-inf,5/2,true,6\n"
            "3,T,1,6,1,1,T^4,T,1,-4,-2,1,3,true,6\n";
        check(r.out == expected, "csv table matches frozen bytes", &r);
    }
    {
        // ranges without --table are refused
        RunResult r = run("hecke --q 3 --P \"T\" --k 4,6 --l 1");
        check(r.exit_code == 2, "ranges need --table", &r);
    }

    // csv and json carry identical values row by row
    {
        RunResult rj = run("hecke --q 3 --P \"T,T+1\" --n 1..2 --k 2..8 --l 0..1 --table");
        RunResult rc = run("--format csv hecke --q 3 --P \"T,T+1\" --n 1..2 --k 2..8 --l 0..1 --table");
        auto jl = lines_of(rj.out);
        auto cl = lines_of(rc.out);
        check(rj.exit_code == 0 && rc.exit_code == 0, "table queries exit 0");
        bool same = jl.size() + 1 == cl.size() && !jl.empty();
        for (std::size_t i = 0; same && i < jl.size(); ++i) {
            json row = json::parse(jl[i]);
            std::ostringstream os;
            os << row["q"].get<long>() << ',' << row["P"].get<std::string>()
               << ',' << row["n"].get<long>() << ',' << row["k"].get<long>()
               << ',' << row["l"].get<long>() << ','
               << row["trace_adelic"]["num"].get<std::string>() << ','
               << row["trace_adelic"]["den"].get<std::string>() << ','
               << row["trace_normalized"]["num"].get<std::string>() << ','
               << row["trace_normalized"]["den"].get<std::string>() << ','
               << (row["exp_adelic"].is_null()
                       ? "-inf"
                       : std::to_string(row["exp_adelic"].get<long>()))
               << ',' << row["bound_adelic"].get<std::string>() << ','
               << (row["exp_norm"].is_null()
                       ? "-inf"
                       : std::to_string(row["exp_norm"].get<long>()))
               << ',' << row["bound_norm"].get<std::string>() << ','
               << (row["ok"].get<bool>() ? "true" : "false") << ','
               << row["classes"].get<long>();
            same = os.str() == cl[i + 1];
        }
        check(same, "csv and json tables are value-identical");
    }

    // determinism and the cache round trip
    {
        RunResult warm = run("hecke --q 3 --P \"T^2+1\" --k 4 --l 1");
        RunResult again = run("hecke --q 3 --P \"T^2+1\" --k 4 --l 1");
        check(warm.exit_code == 0 && warm.out == again.out,
              "repeated query is byte-identical");
        RunResult lst = run("cache list");
        check(contains(lst.out, "q=3 m=2"), "cache list shows the F_9 file",
              &lst);
        RunResult clr = run("cache clear");
        check(contains(clr.out, "removed"), "cache clear reports removals", &clr);
        RunResult cold = run("hecke --q 3 --P \"T^2+1\" --k 4 --l 1");
        check(cold.out == warm.out, "cold and cached reports are identical");
    }

    // a corrupted cache file is ignored and rebuilt
    {
        RunResult before = run("hecke --q 3 --P \"T\" --k 4 --l 1");
        std::ofstream bad(g_dir / "dmtrace-cache" / "classes-q3-m1-t0.jsonl",
                          std::ios::trunc);
        bad << "not json\n";
        bad.close();
        RunResult after = run("hecke --q 3 --P \"T\" --k 4 --l 1");
        check(after.exit_code == 0 && after.out == before.out,
              "corrupt cache is self-healing", &after);
        check(contains(after.err, "ignoring unreadable cache file"),
              "corruption is reported on stderr", &after);
    }

    // verify subcommand
    {
        RunResult r = run("verify --suite skew --seed 7");
        check(r.exit_code == 0, "verify skew exits 0", &r);
        check(contains(r.out, "passed 5/5 properties"), "skew suite summary",
              &r);
        RunResult bad = run("verify --suite nosuch");
        check(bad.exit_code == 2, "unknown suite exits 2", &bad);
    }

    // exit code contract
    {
        RunResult r = run("--budget 2 enumerate --q 3 --m 4 --P \"T^4+T^2+2\"");
        check(r.exit_code == 3, "budget exhaustion exits 3", &r);
        RunResult r2 = run("hecke --q 6 --P \"T\" --k 4");
        check(r2.exit_code == 2, "q=6 is rejected with exit 2", &r2);
        RunResult r3 = run("hecke --q 3 --P \"T^2+2\" --k 4");
        check(r3.exit_code == 2, "reducible P is rejected with exit 2", &r3);
    }

    // config file with flag override
    {
        std::ofstream cfg(g_dir / "cfg.json");
        cfg << R"({"format": "csv", "cache_dir": "alt-cache"})";
        cfg.close();
        RunResult r = run("--config cfg.json hecke --q 3 --P \"T\" --k 4 --l 1");
        check(r.exit_code == 0 && contains(r.out, "q,P,n,k,l,"),
              "config file selects csv", &r);
        check(fs::exists(g_dir / "alt-cache"), "config file moves the cache");
        RunResult r2 =
            run("--config cfg.json --format json hecke --q 3 --P \"T\" --k 4 --l 1");
        check(contains(r2.out, "{\"q\":3"), "flag overrides the config file",
              &r2);
        std::ofstream badcfg(g_dir / "bad.json");
        badcfg << R"({"formats": "csv"})";
        badcfg.close();
        RunResult r3 = run("--config bad.json hecke --q 3 --P \"T\" --k 4");
        check(r3.exit_code == 2, "unknown config key exits 2", &r3);
    }

    std::printf(g_failures == 0 ? "cli_integration: all checks passed\n"
                                : "cli_integration: %d checks FAILED\n",
                g_failures);
    fs::remove_all(g_dir);
    return g_failures == 0 ? 0 : 1;
}
