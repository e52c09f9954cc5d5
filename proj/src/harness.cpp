#include "qcl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qcl/cubic.hpp"

namespace qcl::harness {

using nlohmann::json;

Format parse_format(const std::string& name) {
    if (name == "jsonl") return Format::jsonl;
    if (name == "csv") return Format::csv;
    throw config_error("unknown format '" + name + "' (expected jsonl or csv)");
}

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename T>
std::vector<T> int_list(const json& j, const char* field) {
    if (!j.is_array()) throw config_error(std::string("config field '") + field + "' must be an array");
    std::vector<T> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw config_error(std::string("config field '") + field + "' must hold integers");
        out.push_back(v.get<T>());
    }
    return out;
}

}  // namespace

RunConfig load_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config must be a JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "l") {
            if (!value.is_number_unsigned() || value.get<u64>() < 1 || value.get<u64>() > 62)
                throw config_error("config field 'l' must be an integer in 1..62");
            cfg.l = value.get<unsigned>();
        } else if (key == "primes") {
            cfg.primes = int_list<u64>(value, "primes");
        } else if (key == "a") {
            cfg.a = int_list<i64>(value, "a");
        } else if (key == "b") {
            cfg.b = int_list<i64>(value, "b");
        } else if (key == "X") {
            if (!value.is_number()) throw config_error("config field 'X' must be a number");
            cfg.X = value.get<double>();
        } else if (key == "X_values") {
            if (!value.is_array()) throw config_error("config field 'X_values' must be an array");
            for (const auto& v : value) {
                if (!v.is_number()) throw config_error("config field 'X_values' must hold numbers");
                cfg.X_values.push_back(v.get<double>());
            }
        } else if (key == "enforce_t_range") {
            if (!value.is_boolean()) throw config_error("config field 'enforce_t_range' must be a boolean");
            cfg.enforce_t_range = value.get<bool>();
        } else if (key == "d_cap") {
            if (!value.is_number_unsigned()) throw config_error("config field 'd_cap' must be a nonnegative integer");
            cfg.d_cap = value.get<u64>();
        } else if (key == "seed") {
            if (!value.is_number_unsigned()) throw config_error("config field 'seed' must be a nonnegative integer");
            cfg.seed = value.get<u64>();
        } else if (key == "workers") {
            if (!value.is_number_integer() || value.get<i64>() < 0)
                throw config_error("config field 'workers' must be a nonnegative integer");
            cfg.workers = value.get<int>();
        } else if (key == "output") {
            if (!value.is_string()) throw config_error("config field 'output' must be a string");
            cfg.output = value.get<std::string>();
        } else if (key == "format") {
            if (!value.is_string()) throw config_error("config field 'format' must be a string");
            cfg.format = parse_format(value.get<std::string>());
        } else {
            throw config_error("unknown config field '" + key + "'");
        }
    }
    if (!cfg.primes.empty() || !cfg.a.empty() || !cfg.b.empty()) {
        if (cfg.primes.size() != cfg.l + 2)
            throw config_error("config: 'primes' must list exactly l+2 = " + std::to_string(cfg.l + 2) +
                               " primes (got " + std::to_string(cfg.primes.size()) + ")");
        if (cfg.a.size() != cfg.primes.size() || cfg.b.size() != cfg.primes.size())
            throw config_error("config: 'a' and 'b' must have one entry per prime");
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

family::CongruenceSystem make_system(const RunConfig& cfg) {
    if (cfg.primes.empty()) return family::base_system();
    try {
        return family::build_system(cfg.l, cfg.primes, cfg.a, cfg.b);
    } catch (const domain_error& e) {
        throw config_error(e.what());
    }
}

void apply_workers(const RunConfig& cfg) {
#ifdef _OPENMP
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#else
    (void)cfg;
#endif
}

void write_triples(std::ostream& os, const std::vector<family::SolutionTriple>& triples, Format fmt) {
    if (fmt == Format::csv) os << "m,n,t,d\n";
    for (const auto& tr : triples) {
        if (fmt == Format::jsonl) {
            os << "{\"m\":" << tr.m << ",\"n\":" << tr.n << ",\"t\":" << tr.t << ",\"d\":" << tr.d << "}\n";
        } else {
            os << tr.m << ',' << tr.n << ',' << tr.t << ',' << tr.d << '\n';
        }
    }
}

ParsedTriples read_triples(std::istream& is, Format fmt) {
    ParsedTriples out;
    std::string line;
    std::size_t lineno = 0;
    bool header_skipped = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (fmt == Format::csv && !header_skipped) {
            header_skipped = true;
            if (line == "m,n,t,d") continue;  // header optional on input
        }
        family::SolutionTriple tr;
        bool ok = false;
        if (fmt == Format::jsonl) {
            json j = json::parse(line, nullptr, false);
            if (j.is_object() && j.contains("m") && j.contains("n") && j.contains("t") && j.contains("d") &&
                j["m"].is_number_unsigned() && j["n"].is_number_unsigned() && j["t"].is_number_unsigned() &&
                j["d"].is_number_unsigned()) {
                tr.m = j["m"].get<u64>();
                tr.n = j["n"].get<u64>();
                tr.t = j["t"].get<u64>();
                tr.d = j["d"].get<u64>();
                ok = true;
            }
        } else {
            u64 vals[4];
            std::size_t pos = 0;
            int filled = 0;
            ok = std::count(line.begin(), line.end(), ',') == 3;
            for (int i = 0; i < 4 && ok; ++i) {
                std::size_t next = line.find(',', pos);
                std::string tok = line.substr(pos, next == std::string::npos ? next : next - pos);
                try {
                    std::size_t used = 0;
                    vals[i] = std::stoull(tok, &used);
                    if (used != tok.size() || tok.empty()) ok = false;
                } catch (...) {
                    ok = false;
                }
                ++filled;
                if (next == std::string::npos) break;
                pos = next + 1;
            }
            if (filled != 4) ok = false;
            if (ok) {
                tr.m = vals[0];
                tr.n = vals[1];
                tr.t = vals[2];
                tr.d = vals[3];
            }
        }
        if (ok)
            out.triples.push_back(tr);
        else
            out.bad_lines.push_back(lineno);
    }
    return out;
}

namespace {

// d <= X comparisons happen in 128-bit integers
constexpr double kMaxX = 8.5e37;  // ~2^126

}  // namespace

GenerateResult run_generate(const RunConfig& cfg) {
    if (!(cfg.X > 1)) throw config_error("generate requires config field 'X' > 1");
    if (cfg.X > kMaxX) throw config_error("config field 'X' exceeds the exact-arithmetic range");
    apply_workers(cfg);
    family::CongruenceSystem sys = make_system(cfg);
    family::BoxParameters boxes = cfg.enforce_t_range ? family::asymptotic_boxes(cfg.X) : family::desk_boxes(cfg.X);
    auto t0 = std::chrono::steady_clock::now();
    GenerateResult res;
    res.triples = family::enumerate_triples(sys, boxes, (u128)cfg.X, cfg.seed);
    std::set<u64> ds;
    for (const auto& tr : res.triples) ds.insert(tr.d);
    res.distinct_d = ds.size();
    res.seconds = elapsed_since(t0);
    return res;
}

VerifyReport run_verify(const ParsedTriples& parsed, unsigned l, u64 d_cap) {
    VerifyReport rep;
    for (std::size_t lineno : parsed.bad_lines)
        rep.failures.push_back({lineno, "parse", "row is not a valid triple"});
    rep.rows = parsed.triples.size();
    for (std::size_t i = 0; i < parsed.triples.size(); ++i) {
        const auto& tr = parsed.triples[i];
        std::size_t row = i + 1;
        if (tr.m == 0 || tr.n == 0 || tr.t == 0 || tr.d == 0) {
            rep.failures.push_back({row, "identity", "zero field"});
            continue;
        }
        if (tr.m > 5541191377756ull) {
            rep.failures.push_back({row, "overflow", "m^3 exceeds the exact-arithmetic contract"});
            continue;
        }
        u128 m3 = (u128)tr.m * tr.m * tr.m;
        u128 t2, rhs, rhs_d;
        bool overflow = __builtin_mul_overflow((u128)tr.t, (u128)tr.t, &t2) ||
                        __builtin_mul_overflow((u128)27, t2, &rhs) ||
                        __builtin_mul_overflow(rhs, (u128)tr.d, &rhs_d);
        ++rep.identity_checked;
        if (overflow || m3 <= (u128)tr.n * tr.n || m3 - (u128)tr.n * tr.n != rhs_d) {
            rep.failures.push_back({row, "identity", "m^3 - n^2 != 27 t^2 d"});
            continue;
        }
        if (arith::squarefree_part((u128)tr.d).root != 1) {
            rep.failures.push_back({row, "squarefree", "d = " + std::to_string(tr.d) + " is not square-free"});
            continue;
        }
        if (arith::gcd((i128)tr.m, (i128)tr.n) != 1 || arith::gcd((i128)tr.m, (i128)tr.t) != 1 ||
            arith::gcd((i128)tr.t, 6) != 1) {
            rep.failures.push_back({row, "gcd", "side conditions gcd(m,n) = gcd(m,t) = gcd(t,6) = 1 fail"});
            continue;
        }
        if (tr.d <= 1 || tr.d > d_cap) continue;  // class-number verification capped
        cubic::CongruencePair pair;
        if (tr.m % 18 == 1 && tr.n % 54 == 1) {
            pair = {tr.m, tr.n};
        } else {
            rep.failures.push_back({row, "congruence", "m, n are not in the residue classes 1 (mod 18), 1 (mod 54)"});
            continue;
        }
        if (!cubic::is_irreducible(cubic::pair_cubic(pair))) {
            ++rep.skipped_reducible;  // 3 | h is only promised for irreducible cubics
            continue;
        }
        ++rep.class_checked;
        classgroup::ClassData cd = classgroup::class_number(tr.d);
        if (cd.h % 3 != 0) {
            rep.failures.push_back({row, "three_divides",
                                    "h(" + std::to_string(tr.d) + ") = " + std::to_string(cd.h) +
                                        " is not divisible by 3"});
            continue;
        }
        if (arith::omega(tr.d) >= l + 2 && cd.h % (1ull << l) != 0) {
            rep.failures.push_back({row, "two_l_divides",
                                    "omega(d) >= l+2 but 2^" + std::to_string(l) + " does not divide h = " +
                                        std::to_string(cd.h)});
        }
    }
    return rep;
}

CountResult run_count(const RunConfig& cfg) {
    if (cfg.X_values.empty()) throw config_error("count requires a non-empty 'X_values' list");
    for (std::size_t i = 1; i < cfg.X_values.size(); ++i)
        if (cfg.X_values[i] <= cfg.X_values[i - 1]) throw config_error("'X_values' must be strictly ascending");
    for (double X : cfg.X_values)
        if (!(X > 1) || X > kMaxX) throw config_error("'X_values' entries must lie in (1, ~2^126]");
    apply_workers(cfg);
    family::CongruenceSystem sys = make_system(cfg);
    CountResult res;
    for (double X : cfg.X_values) {
        auto t0 = std::chrono::steady_clock::now();
        family::BoxParameters boxes = cfg.enforce_t_range ? family::asymptotic_boxes(X) : family::desk_boxes(X);
        std::vector<family::SolutionTriple> triples = family::enumerate_triples(sys, boxes, (u128)X, cfg.seed);
        std::set<u64> ds;
        for (const auto& tr : triples) ds.insert(tr.d);
        CountRecord rec;
        rec.X = X;
        rec.distinct_d = ds.size();
        for (u64 d : ds) {
            if (d > cfg.d_cap || d <= 1) continue;
            classgroup::ClassData cd = classgroup::class_number(d);
            if (cd.h % 3 == 0) {
                ++rec.verified_3;
                if (cd.h % ((1ull << cfg.l) * 3) == 0) ++rec.verified_2l;
            }
        }
        rec.seconds = elapsed_since(t0);
        res.records.push_back(rec);
    }
    // least squares over (log X, log count) for positive counts
    SlopeFit fit;
    for (const auto& rec : res.records)
        if (rec.distinct_d > 0) fit.points.emplace_back(std::log(rec.X), std::log((double)rec.distinct_d));
    if (fit.points.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : fit.points) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double n = (double)fit.points.size();
        fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        fit.intercept = (sy - fit.slope * sx) / n;
        res.slope = fit;
    }
    return res;
}

namespace {

void write_real(std::ostream& os, double v) {
    if (v == std::floor(v) && std::abs(v) < 1e18) {
        os << (long long)v;
    } else {
        std::ostringstream tmp;
        tmp << std::setprecision(15) << v;
        os << tmp.str();
    }
}

}  // namespace

void write_count_csv(std::ostream& os, const std::vector<CountRecord>& records) {
    os << "X,distinct_d,verified_3,verified_2l,seconds\n";
    for (const auto& rec : records) {
        write_real(os, rec.X);
        os << ',' << rec.distinct_d << ',' << rec.verified_3 << ',' << rec.verified_2l << ',';
        std::ostringstream tmp;
        tmp << std::setprecision(6) << rec.seconds;
        os << tmp.str() << '\n';
    }
}

std::vector<ClassRow> run_classnum(const std::vector<u64>& ds) {
    std::vector<ClassRow> rows;
    rows.reserve(ds.size());
    for (u64 d : ds) {
        ClassRow row;
        row.d = d;
        try {
            row.data = classgroup::class_number(d);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_classnum_table(std::ostream& os, const std::vector<ClassRow>& rows, Format fmt) {
    if (fmt == Format::csv) {
        os << "d,D,h_plus,h,unit_norm,two_rank_narrow,regulator,error\n";
        for (const auto& row : rows) {
            if (row.ok) {
                os << row.d << ',' << row.data.D << ',' << row.data.h_plus << ',' << row.data.h << ','
                   << row.data.unit_norm << ',' << row.data.two_rank_narrow << ',';
                std::ostringstream tmp;
                tmp << std::setprecision(12) << row.data.regulator;
                os << tmp.str() << ",\n";
            } else {
                os << row.d << ",,,,,,,\"" << row.error << "\"\n";
            }
        }
        return;
    }
    for (const auto& row : rows) {
        if (row.ok) {
            os << "{\"d\":" << row.d << ",\"D\":" << row.data.D << ",\"h_plus\":" << row.data.h_plus
               << ",\"h\":" << row.data.h << ",\"unit_norm\":" << row.data.unit_norm
               << ",\"two_rank_narrow\":" << row.data.two_rank_narrow << ",\"regulator\":";
            std::ostringstream tmp;
            tmp << std::setprecision(12) << row.data.regulator;
            os << tmp.str() << "}\n";
        } else {
            os << "{\"d\":" << row.d << ",\"error\":" << json(row.error).dump() << "}\n";
        }
    }
}

}  // namespace qcl::harness
