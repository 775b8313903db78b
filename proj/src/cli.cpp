/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmtrace/errors.hpp"
#include "dmtrace/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dmt {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

bool poly_lex_less_cli(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = 0; i <= a.degree(); ++i) {
        std::uint64_t ia = elem_index(a.coeff(i));
        std::uint64_t ib = elem_index(b.coeff(i));
        if (ia != ib) return ia < ib;
    }
    return false;
}

int parse_int_token(const std::string& tok) {
    size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &used);
    } catch (const std::exception&) {
        throw UserError("invalid integer in range: '" + tok + "'");
    }
    if (used != tok.size())
        throw UserError("invalid integer in range: '" + tok + "'");
    return v;
}

/// "1", "2..5", "1,3..5,-2": comma-separated values and inclusive spans.
std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t dots = tok.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int_token(tok));
        } else {
            int lo = parse_int_token(tok.substr(0, dots));
            int hi = parse_int_token(tok.substr(dots + 2));
            if (lo > hi) throw UserError("empty range: '" + tok + "'");
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        }
    }
    if (out.empty()) throw UserError("empty value list: '" + text + "'");
    return out;
}

std::vector<Poly> parse_poly_list(const std::string& text, const FieldTower* fq) {
    std::vector<Poly> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_poly(tok, fq));
    if (out.empty()) throw UserError("empty polynomial list");
    return out;
}

std::vector<std::vector<fp_t>> poly_coord_list(const Poly& f) {
    std::vector<std::vector<fp_t>> out;
    for (int i = 0; i <= f.degree(); ++i) out.push_back(f.coeff(i).coords());
    return out;
}

std::vector<fp_t> coords_from_json(const json& j, const FieldTower* tw) {
    auto v = j.get<std::vector<fp_t>>();
    if (v.size() != tw->deg) throw UserError("coordinate length mismatch");
    for (fp_t c : v)
        if (c >= tw->p) throw UserError("coordinate out of range");
    return v;
}

/// Exact sum of 1/aut over the entries; returns true iff it equals q^m.
bool mass_matches(const ClassList& cl) {
    std::int64_t num = 0, den = 1;
    for (const ClassEntry& e : cl.entries) {
        if (e.aut <= 0) return false;
        num = num * e.aut + den;
        den *= e.aut;
        std::int64_t g = std::gcd(num, den);
        num /= g;
        den /= g;
    }
    return den == 1 && num == std::int64_t(cl.tower->size);
}

std::string exp_cell(const std::optional<int>& e) {
    return e ? std::to_string(*e) : std::string("-inf");
}

// ---- subcommand argument bundles ----

struct EnumArgs {
    std::uint64_t q = 0;
    std::uint32_t m = 0;
    std::string P;
    std::optional<std::uint64_t> theta;
};

struct HeckeArgs {
    std::uint64_t q = 0;
    std::string P;
    std::string n = "1";
    std::string k;
    std::string l = "0";
    bool cross_check = false;
    bool table = false;
};

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 0;
};

ClassList load_or_enumerate(const Config& cfg, const TowerPtr& tower,
                            const FFElem& theta, bool* reused) {
    std::optional<ClassList> cached =
        load_class_cache(cfg.cache_dir, tower, theta);
    if (cached) {
        if (reused) *reused = true;
        return std::move(*cached);
    }
    if (reused) *reused = false;
    ClassList cl = enumerate_classes(tower, theta, cfg.enum_budget);
    write_class_cache(cfg.cache_dir, cl);
    return cl;
}

int cmd_enumerate(const Config& cfg, const EnumArgs& args) {
    if (args.P.empty() && !args.theta)
        throw UserError("provide the characteristic as --P or --theta");
    if (!args.P.empty() && args.theta)
        throw UserError("provide only one of --P and --theta");
    PrimePower pp = split_prime_power(args.q);
    if (args.m < 1) throw UserError("the extension degree m must be positive");
    TowerPtr tower = build_tower(pp.p, pp.e, args.m, cfg.enum_budget);
    FFElem theta;
    if (args.theta) {
        if (*args.theta >= tower->size)
            throw UserError("theta index out of range for the field");
        theta = elem_from_index(tower.get(), *args.theta);
    } else {
        theta = canonical_theta(parse_poly(args.P, tower->fq()), tower);
    }

    bool reused = false;
    ClassList cl = load_or_enumerate(cfg, tower, theta, &reused);
    if (!mass_matches(cl))
        throw UserError(
            "cached class data fails the mass formula check; clear the cache");

    int supersingular = 0;
    std::set<std::string> charpolys;
    for (const ClassEntry& e : cl.entries) {
        if (e.supersingular) ++supersingular;
        charpolys.insert(format_poly(e.cp.a) + "|" + format_poly(e.cp.b));
    }
    fs::path file = fs::path(cfg.cache_dir) /
                    cache_file_name(tower.get(), theta);
    std::cout << "classes: " << cl.entries.size() << "\n"
              << "mass: " << tower->size << " ok\n"
              << "supersingular: " << supersingular << "\n"
              << "charpolys: " << charpolys.size() << " distinct\n"
              << "cache: " << (reused ? "reused " : "wrote ")
              << file.string() << "\n";
    return 0;
}

int cmd_hecke(const Config& cfg, const HeckeArgs& args) {
    PrimePower pp = split_prime_power(args.q);
    TowerPtr base = build_tower(pp.p, pp.e, 1, cfg.enum_budget);
    std::vector<Poly> Ps = parse_poly_list(args.P, base.get());
    std::vector<int> ns = parse_int_list(args.n);
    std::vector<int> ks = parse_int_list(args.k);
    std::vector<int> ls = parse_int_list(args.l);
    if (!args.table &&
        (Ps.size() > 1 || ns.size() > 1 || ks.size() > 1 || ls.size() > 1))
        throw UserError("multi-value ranges require --table");

    std::sort(Ps.begin(), Ps.end(), poly_lex_less_cli);
    Ps.erase(std::unique(Ps.begin(), Ps.end(),
                         [](const Poly& a, const Poly& b) { return a == b; }),
             Ps.end());
    for (auto* v : {&ns, &ks, &ls}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }

    bool csv = cfg.format == "csv";
    if (csv) std::cout << kCsvHeader << "\n";
    bool all_ok = true;
    for (const Poly& P : Ps)
        for (int n : ns) {
            if (n < 1) throw UserError("the power n must be at least 1");
            TowerPtr tower = build_tower(pp.p, pp.e, std::uint32_t(n) *
                                                         std::uint32_t(P.degree()),
                                         cfg.enum_budget);
            FFElem theta = canonical_theta(P, tower);
            ClassList cl = load_or_enumerate(cfg, tower, theta, nullptr);
            std::vector<HeckeTraceReport> rows =
                hecke_rows_with_classes(base, P, n, ks, ls, cl, args.cross_check);
            for (const HeckeTraceReport& r : rows) {
                std::cout << (csv ? report_to_csv(r) : report_to_json(r)) << "\n";
                all_ok = all_ok && r.ramanujan_adelic_ok && r.ramanujan_normalized_ok;
            }
        }
    return all_ok ? 0 : 1;
}

int cmd_verify(const VerifyArgs& args) {
    std::vector<VerifyResult> results = run_verify(args.suite, args.seed);
    int passed = 0;
    for (const VerifyResult& r : results) {
        std::cout << r.name << ": " << (r.ok ? "pass" : "FAIL") << " ("
                  << r.detail << ")\n";
        if (r.ok) ++passed;
    }
    std::cout << "passed " << passed << "/" << results.size() << " properties\n";
    return passed == int(results.size()) ? 0 : 1;
}

std::vector<fs::path> cache_files(const std::string& dir) {
    std::vector<fs::path> files;
    if (!fs::exists(dir)) return files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

int cmd_cache_list(const Config& cfg) {
    for (const fs::path& file : cache_files(cfg.cache_dir)) {
        std::ifstream in(file);
        std::string line;
        std::size_t records = 0;
        std::uint64_t q = 0, theta_idx = 0;
        std::uint32_t m = 0;
        bool ok = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (records == 0) {
                try {
                    json rec = json::parse(line);
                    q = rec.at("q").get<std::uint64_t>();
                    m = rec.at("m").get<std::uint32_t>();
                    PrimePower pp = split_prime_power(q);
                    auto coords = rec.at("theta").get<std::vector<fp_t>>();
                    std::uint64_t idx = 0;
                    for (fp_t c : coords) idx = idx * pp.p + c;
                    theta_idx = idx;
                    ok = true;
                } catch (const std::exception& e) {
                    std::cerr << "skipping unreadable cache file "
                              << file.string() << ": " << e.what() << "\n";
                    break;
                }
            }
            ++records;
        }
        if (ok)
            std::cout << "q=" << q << " m=" << m << " theta=" << theta_idx
                      << " records=" << records << " file="
                      << file.filename().string() << "\n";
    }
    return 0;
}

int cmd_cache_clear(const Config& cfg) {
    std::size_t removed = 0;
    for (const fs::path& file : cache_files(cfg.cache_dir))
        if (fs::remove(file)) ++removed;
    std::cout << "removed " << removed << " cache files\n";
    return 0;
}

}  // namespace

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open config file: " + path);
    Config cfg;
    try {
        json j;
        in >> j;
        if (!j.is_object()) throw UserError("config must be a JSON object");
        for (const auto& [key, val] : j.items()) {
            if (key == "enum_budget")
                cfg.enum_budget = val.get<std::uint64_t>();
            else if (key == "truncation")
                cfg.truncation = val.get<int>();
            else if (key == "cache_dir")
                cfg.cache_dir = val.get<std::string>();
            else if (key == "workers")
                cfg.workers = val.get<int>();
            else if (key == "format")
                cfg.format = val.get<std::string>();
            else
                throw UserError("unknown config key: " + key);
        }
    } catch (const UserError&) {
        throw;
    } catch (const std::exception& e) {
        throw UserError("config file " + path + ": " + e.what());
    }
    validate_config(cfg);
    return cfg;
}

void validate_config(const Config& cfg) {
    if (cfg.enum_budget == 0) throw UserError("enum_budget must be positive");
    if (cfg.truncation <= 0) throw UserError("truncation must be positive");
    if (cfg.workers < 0) throw UserError("workers must be non-negative");
    if (cfg.format != "json" && cfg.format != "csv")
        throw UserError("format must be json or csv");
    if (cfg.cache_dir.empty()) throw UserError("cache_dir must be non-empty");
}

PrimePower split_prime_power(std::uint64_t q) {
    if (q < 2) throw UserError("q must be a prime power >= 2");
    std::uint64_t p = 0;
    for (std::uint64_t c = 2; c * c <= q; ++c)
        if (q % c == 0) {
            p = c;
            break;
        }
    if (p == 0) p = q;  // q itself is prime
    std::uint32_t e = 0;
    std::uint64_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++e;
    }
    if (rest != 1)
        throw UserError("q = " + std::to_string(q) + " is not a prime power");
    return PrimePower{fp_t(p), e};
}

std::string render_half(std::int64_t twice) {
    if (twice % 2 == 0) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
}

std::string cache_file_name(const FieldTower* tower, const FFElem& theta) {
    return "classes-q" + std::to_string(tower->q) + "-m" +
           std::to_string(tower->m) + "-t" +
           std::to_string(elem_index(theta)) + ".jsonl";
}

void write_class_cache(const std::string& dir, const ClassList& classes) {
    const FieldTower* kt = classes.tower.get();
    fs::create_directories(dir);
    fs::path path = fs::path(dir) / cache_file_name(kt, classes.theta);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw UserError("cache directory is not writable: " + dir);
        for (const ClassEntry& e : classes.entries) {
            ordered_json rec;
            rec["q"] = kt->q;
            rec["m"] = kt->m;
            rec["modulus"] = kt->modulus;
            rec["theta"] = classes.theta.coords();
            rec["g"] = e.g.coords();
            rec["delta"] = e.delta.coords();
            rec["aut"] = e.aut;
            rec["a"] = poly_coord_list(e.cp.a);
            rec["b"] = poly_coord_list(e.cp.b);
            out << rec.dump() << "\n";
        }
        out.flush();
        if (!out) throw UserError("failed writing cache file: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::optional<ClassList> load_class_cache(const std::string& dir,
                                          const TowerPtr& tower,
                                          const FFElem& theta) {
    const FieldTower* kt = tower.get();
    fs::path path = fs::path(dir) / cache_file_name(kt, theta);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    const FieldTower* fqt = kt->fq();
    Poly P = min_poly_over_fq(theta);
    ClassList cl;
    cl.tower = tower;
    cl.theta = theta;
    try {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json rec = json::parse(line);
            if (rec.at("q").get<std::uint64_t>() != kt->q ||
                rec.at("m").get<std::uint32_t>() != kt->m ||
                rec.at("modulus").get<std::vector<fp_t>>() != kt->modulus ||
                rec.at("theta").get<std::vector<fp_t>>() != theta.coords())
                throw UserError("record keyed differently than the file name");
            ClassEntry e;
            e.g = FFElem(kt, coords_from_json(rec.at("g"), kt));
            e.delta = FFElem(kt, coords_from_json(rec.at("delta"), kt));
            e.aut = rec.at("aut").get<int>();
            auto read_poly = [&](const json& j) {
                std::vector<FFElem> coeffs;
                for (const json& c : j)
                    coeffs.emplace_back(fqt, coords_from_json(c, fqt));
                return Poly(fqt, std::move(coeffs));
            };
            e.cp.a = read_poly(rec.at("a"));
            e.cp.b = read_poly(rec.at("b"));
            e.cp.m = int(kt->m);
            e.supersingular = poly_rem(e.cp.a, P).is_zero();
            cl.entries.push_back(std::move(e));
        }
    } catch (const std::exception& e) {
        std::cerr << "ignoring unreadable cache file " << path.string() << ": "
                  << e.what() << "\n";
        return std::nullopt;
    }
    if (cl.entries.empty()) {
        std::cerr << "ignoring empty cache file " << path.string() << "\n";
        return std::nullopt;
    }
    return cl;
}

const char* const kCsvHeader =
    "q,P,n,k,l,trace_num,trace_den,normalized_num,normalized_den,"
    "exp_adelic,bound_adelic,exp_norm,bound_norm,ok,classes";

std::string report_to_csv(const HeckeTraceReport& rep) {
    bool ok = rep.ramanujan_adelic_ok && rep.ramanujan_normalized_ok;
    std::ostringstream os;
    os << rep.query.base->q << ',' << format_poly(rep.query.P) << ','
       << rep.query.n << ',' << rep.query.k << ',' << rep.query.l << ','
       << format_poly(rep.trace_adelic.num()) << ','
       << format_poly(rep.trace_adelic.den()) << ','
       << format_poly(rep.trace_normalized.num()) << ','
       << format_poly(rep.trace_normalized.den()) << ','
       << exp_cell(rep.exponent_adelic) << ',' << render_half(rep.bound2_adelic)
       << ',' << exp_cell(rep.exponent_normalized) << ','
       << render_half(rep.bound2_normalized) << ',' << (ok ? "true" : "false")
       << ',' << rep.class_count;
    return os.str();
}

std::string report_to_json(const HeckeTraceReport& rep) {
    ordered_json j;
    j["q"] = rep.query.base->q;
    j["P"] = format_poly(rep.query.P);
    j["n"] = rep.query.n;
    j["k"] = rep.query.k;
    j["l"] = rep.query.l;
    j["trace_adelic"] = {{"num", format_poly(rep.trace_adelic.num())},
                         {"den", format_poly(rep.trace_adelic.den())}};
    j["trace_normalized"] = {{"num", format_poly(rep.trace_normalized.num())},
                             {"den", format_poly(rep.trace_normalized.den())}};
    if (rep.exponent_adelic)
        j["exp_adelic"] = *rep.exponent_adelic;
    else
        j["exp_adelic"] = nullptr;
    j["bound_adelic"] = render_half(rep.bound2_adelic);
    if (rep.exponent_normalized)
        j["exp_norm"] = *rep.exponent_normalized;
    else
        j["exp_norm"] = nullptr;
    j["bound_norm"] = render_half(rep.bound2_normalized);
    j["ok"] = rep.ramanujan_adelic_ok && rep.ramanujan_normalized_ok;
    j["classes"] = rep.class_count;
    return j.dump();
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"exact Hecke traces for rank-2 Drinfeld modules over F_q[T]"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON configuration file");
    std::uint64_t budget_v = 0;
    int trunc_v = 0, workers_v = 0;
    std::string cachedir_v, format_v;
    CLI::Option* o_budget = app.add_option(
        "--budget", budget_v, "enumeration budget: max base-field size");
    CLI::Option* o_trunc =
        app.add_option("--truncation", trunc_v, "default series order");
    CLI::Option* o_cache =
        app.add_option("--cache-dir", cachedir_v, "class cache directory");
    CLI::Option* o_workers = app.add_option(
        "--workers", workers_v, "worker thread count (0 = runtime default)");
    CLI::Option* o_format =
        app.add_option("--format", format_v, "hecke output format: json|csv");

    EnumArgs ea;
    CLI::App* sc_enum = app.add_subcommand(
        "enumerate", "enumerate isomorphism classes and cache them");
    sc_enum->add_option("--q", ea.q, "base field size, a prime power")
        ->required();
    sc_enum->add_option("--m", ea.m, "extension degree over F_q")->required();
    sc_enum->add_option("--P", ea.P,
                        "characteristic polynomial, monic irreducible over F_q");
    sc_enum->add_option("--theta", ea.theta,
                        "characteristic root given as an element index");

    HeckeArgs ha;
    CLI::App* sc_hecke =
        app.add_subcommand("hecke", "Hecke trace reports with bound checks");
    sc_hecke->add_option("--q", ha.q, "base field size, a prime power")
        ->required();
    sc_hecke->add_option("--P", ha.P, "prime(s): monic irreducible over F_q")
        ->required();
    sc_hecke->add_option("--n", ha.n, "operator power(s), default 1");
    sc_hecke->add_option("--k", ha.k, "weight(s)")->required();
    sc_hecke->add_option("--l", ha.l, "type(s), default 0");
    sc_hecke->add_flag("--cross-check", ha.cross_check,
                       "recompute every class term through the semilinear trace");
    sc_hecke->add_flag("--table", ha.table,
                       "allow comma lists and lo..hi spans in --P/--n/--k/--l");

    VerifyArgs va;
    CLI::App* sc_verify =
        app.add_subcommand("verify", "run randomized property suites");
    sc_verify->add_option(
        "--suite", va.suite,
        "all, skew, mass, bg, dlog, ramanujan, or twopath");
    sc_verify->add_option("--seed", va.seed, "random seed, default 0");

    CLI::App* sc_cache = app.add_subcommand("cache", "inspect the class cache");
    sc_cache->require_subcommand(1);
    CLI::App* sc_cache_list =
        sc_cache->add_subcommand("list", "list cached enumerations");
    CLI::App* sc_cache_clear =
        sc_cache->add_subcommand("clear", "delete cached enumerations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Config cfg =
            config_path.empty() ? Config{} : load_config_file(config_path);
        if (o_budget->count()) cfg.enum_budget = budget_v;
        if (o_trunc->count()) cfg.truncation = trunc_v;
        if (o_cache->count()) cfg.cache_dir = cachedir_v;
        if (o_workers->count()) cfg.workers = workers_v;
        if (o_format->count()) cfg.format = format_v;
        validate_config(cfg);
#ifdef _OPENMP
        if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#endif
        if (sc_enum->parsed()) return cmd_enumerate(cfg, ea);
        if (sc_hecke->parsed()) return cmd_hecke(cfg, ha);
        if (sc_verify->parsed()) return cmd_verify(va);
        if (sc_cache->parsed()) {
            if (sc_cache_list->parsed()) return cmd_cache_list(cfg);
            if (sc_cache_clear->parsed()) return cmd_cache_clear(cfg);
        }
        return 2;
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const TheoryViolation& e) {
        std::cerr << "theory violation: " << e.what() << "\n";
        return 4;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "filesystem error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace dmt
