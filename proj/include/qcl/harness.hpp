#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcl/classgroup.hpp"
#include "qcl/family.hpp"

namespace qcl::harness {

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Format { jsonl, csv };

Format parse_format(const std::string& name);

struct RunConfig {
    unsigned l = 1;
    std::vector<u64> primes;  // empty selects the base system
    std::vector<i64> a;
    std::vector<i64> b;
    double X = 0;
    std::vector<double> X_values;
    bool enforce_t_range = true;  // asymptotic scaling mode by default; --no-t-range or the config switch to desk mode
    u64 d_cap = 50000;
    u64 seed = 0;
    int workers = 0;  // 0 = library default
    std::string output;
    Format format = Format::jsonl;
};

// Parses the single-document JSON config; unknown keys and malformed
// values raise config_error naming the field.
RunConfig load_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

family::CongruenceSystem make_system(const RunConfig& cfg);

void apply_workers(const RunConfig& cfg);

// ---- triple stream files ----
void write_triples(std::ostream& os, const std::vector<family::SolutionTriple>& triples, Format fmt);

struct ParsedTriples {
    std::vector<family::SolutionTriple> triples;  // without factorizations
    std::vector<std::size_t> bad_lines;           // 1-based line numbers that failed to parse
};
ParsedTriples read_triples(std::istream& is, Format fmt);

// ---- generate ----
struct GenerateResult {
    std::vector<family::SolutionTriple> triples;
    u64 distinct_d = 0;
    double seconds = 0;
};
GenerateResult run_generate(const RunConfig& cfg);

// ---- verify ----
struct VerifyFailure {
    std::size_t line = 0;  // 1-based row number
    std::string kind;
    std::string detail;
};

struct VerifyReport {
    u64 rows = 0;
    u64 identity_checked = 0;
    u64 class_checked = 0;   // rows with 1 < d <= d_cap, class number recomputed
    u64 skipped_reducible = 0;
    std::vector<VerifyFailure> failures;

    bool ok() const { return failures.empty(); }
};

VerifyReport run_verify(const ParsedTriples& parsed, unsigned l, u64 d_cap);

// ---- count ----
struct CountRecord {
    double X = 0;
    u64 distinct_d = 0;
    u64 verified_3 = 0;   // distinct d <= min(X, d_cap) with 3 | h
    u64 verified_2l = 0;  // of those, with 2^l * 3 | h
    double seconds = 0;
};

struct SlopeFit {
    std::vector<std::pair<double, double>> points;  // (log X, log count), count > 0
    double slope = 0;
    double intercept = 0;
};

struct CountResult {
    std::vector<CountRecord> records;
    std::optional<SlopeFit> slope;  // absent with fewer than two positive points
};

CountResult run_count(const RunConfig& cfg);

void write_count_csv(std::ostream& os, const std::vector<CountRecord>& records);

// ---- classnum ----
struct ClassRow {
    u64 d = 0;
    bool ok = false;
    std::string error;
    classgroup::ClassData data;
};

std::vector<ClassRow> run_classnum(const std::vector<u64>& ds);

void write_classnum_table(std::ostream& os, const std::vector<ClassRow>& rows, Format fmt);

}  // namespace qcl::harness
