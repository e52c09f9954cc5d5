#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcl/harness.hpp"

namespace {

using namespace qcl;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitArithmetic = 3;

struct CommonOpts {
    std::string config_path;
    std::string output;
    std::string format;
    int workers = -1;
    bool no_t_range = false;
};

harness::RunConfig effective_config(const CommonOpts& opts, bool need_config) {
    harness::RunConfig cfg;
    if (!opts.config_path.empty())
        cfg = harness::load_config_file(opts.config_path);
    else if (need_config)
        throw harness::config_error("--config PATH is required for this subcommand");
    if (!opts.output.empty()) cfg.output = opts.output;
    if (!opts.format.empty()) cfg.format = harness::parse_format(opts.format);
    if (opts.workers >= 0) cfg.workers = opts.workers;
    if (opts.no_t_range) cfg.enforce_t_range = false;
    return cfg;
}

std::ostream& open_output(const harness::RunConfig& cfg, std::ofstream& file) {
    if (cfg.output.empty()) return std::cout;
    file.open(cfg.output);
    if (!file) throw harness::config_error("cannot open output file: " + cfg.output);
    return file;
}

int cmd_generate(const CommonOpts& opts) {
    harness::RunConfig cfg = effective_config(opts, true);
    harness::GenerateResult res = harness::run_generate(cfg);
    std::ofstream file;
    std::ostream& os = open_output(cfg, file);
    harness::write_triples(os, res.triples, cfg.format);
    os.flush();
    std::ostream& info = cfg.output.empty() ? std::cerr : std::cout;
    info << "{\"triples\":" << res.triples.size() << ",\"distinct_d\":" << res.distinct_d
         << ",\"seconds\":" << res.seconds << "}\n";
    return kExitOk;
}

int cmd_count(const CommonOpts& opts) {
    harness::RunConfig cfg = effective_config(opts, true);
    harness::CountResult res = harness::run_count(cfg);
    std::ofstream file;
    std::ostream& os = open_output(cfg, file);
    harness::write_count_csv(os, res.records);
    os.flush();
    std::ostream& info = cfg.output.empty() ? std::cerr : std::cout;
    if (res.slope)
        info << "{\"slope\":" << res.slope->slope << ",\"intercept\":" << res.slope->intercept
             << ",\"points\":" << res.slope->points.size() << "}\n";
    else
        info << "{\"slope\":null}\n";
    return kExitOk;
}

int cmd_verify(const CommonOpts& opts, const std::string& triples_path, unsigned l, u64 d_cap) {
    harness::RunConfig cfg = effective_config(opts, false);
    if (!opts.config_path.empty()) {
        l = cfg.l;
        if (cfg.d_cap > 0) d_cap = cfg.d_cap;
    }
    harness::apply_workers(cfg);
    std::ifstream in(triples_path);
    if (!in) throw harness::config_error("cannot open triples file: " + triples_path);
    harness::Format fmt = cfg.format;
    if (opts.format.empty() && triples_path.size() >= 4 && triples_path.substr(triples_path.size() - 4) == ".csv")
        fmt = harness::Format::csv;
    harness::ParsedTriples parsed = harness::read_triples(in, fmt);
    harness::VerifyReport rep = harness::run_verify(parsed, l, d_cap);
    std::cout << "{\"rows\":" << rep.rows << ",\"identity_checked\":" << rep.identity_checked
              << ",\"class_checked\":" << rep.class_checked << ",\"skipped_reducible\":" << rep.skipped_reducible
              << ",\"failures\":" << rep.failures.size() << "}\n";
    for (const auto& f : rep.failures)
        std::cerr << "FAIL line " << f.line << " [" << f.kind << "] " << f.detail << "\n";
    return rep.ok() ? kExitOk : kExitVerify;
}

int cmd_classnum(const CommonOpts& opts, const std::vector<u64>& ds) {
    harness::RunConfig cfg = effective_config(opts, false);
    auto rows = harness::run_classnum(ds);
    std::ofstream file;
    std::ostream& os = open_output(cfg, file);
    if (cfg.output.empty() && opts.format.empty()) {
        // human-readable table on a terminal run
        os << "d\tD\th+\th\tnorm\t2-rank\tregulator\n";
        for (const auto& row : rows) {
            if (row.ok)
                os << row.d << '\t' << row.data.D << '\t' << row.data.h_plus << '\t' << row.data.h << '\t'
                   << (row.data.unit_norm > 0 ? "+1" : "-1") << '\t' << row.data.two_rank_narrow << '\t'
                   << row.data.regulator << '\n';
            else
                os << row.d << "\terror: " << row.error << '\n';
        }
    } else {
        harness::write_classnum_table(os, rows, cfg.format);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constructs real quadratic fields with class number divisible by 2^l*3 and verifies the divisibility from first principles"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "JSON config path")->check(CLI::ExistingFile);
    app.add_option("--output", opts.output, "output file (default stdout)");
    app.add_option("--format", opts.format, "output format: jsonl or csv");
    app.add_option("--workers", opts.workers, "worker thread count (0 = library default)");
    app.add_flag("--no-t-range", opts.no_t_range, "disable the asymptotic-mode t-box (desk-scale verification mode)");

    auto* generate = app.add_subcommand("generate", "enumerate solution triples of m^3 - n^2 = 27 t^2 d");
    auto* verify = app.add_subcommand("verify", "re-check a triple stream from first principles");
    std::string triples_path;
    unsigned verify_l = 1;
    u64 verify_d_cap = 50000;
    verify->add_option("triples", triples_path, "triples file (jsonl or csv)")->required();
    verify->add_option("--l", verify_l, "exponent l for the 2^l divisibility check");
    verify->add_option("--d-cap", verify_d_cap, "largest d whose class number is recomputed");
    auto* count = app.add_subcommand("count", "count distinct d over an X sweep and fit the log-log slope");
    auto* classnum = app.add_subcommand("classnum", "class data for given square-free d values");
    std::vector<u64> ds;
    classnum->add_option("d", ds, "square-free d values > 1")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(opts);
        if (count->parsed()) return cmd_count(opts);
        if (verify->parsed()) return cmd_verify(opts, triples_path, verify_l, verify_d_cap);
        if (classnum->parsed()) return cmd_classnum(opts, ds);
    } catch (const qcl::harness::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qcl::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qcl::arith_error& e) {
        std::cerr << "arithmetic error: " << e.what() << "\n";
        return kExitArithmetic;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
