// Command-line front end: simulate AR(1) data, test a single series, run the
// Monte Carlo grid, run the empirical exchange-rate pipeline, and build
// Dickey-Fuller null tables.
//
// Exit codes: 0 success, 1 numeric failure, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#define CPPHTTPLIB_NO_EXCEPTIONS_SUPPORT_CHECK
#include <httplib.h>

#include "unitroot/unitroot.hpp"

namespace {

using nlohmann::json;
using namespace unitroot;

/// FNV-1a hash of the flattened configuration, quoted in the output header so
/// any two runs can be compared for config identity at a glance.
std::uint64_t config_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string header(const std::string& subcommand, std::uint64_t seed,
                   const std::string& config) {
    std::ostringstream os;
    os << "# unitroot " << kVersion << " " << subcommand << " seed=" << seed
       << " config=" << std::hex << config_hash(config) << "\n";
    return os.str();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw ParseError("cannot open output file: " + out_path);
    os << text;
}

std::vector<McMethod> parse_methods(const std::vector<std::string>& names) {
    std::vector<McMethod> out;
    for (const std::string& n : names) {
        if (n == "svd") out.push_back(McMethod::SVD);
        else if (n == "svd-star") out.push_back(McMethod::SVD_STAR);
        else if (n == "bic") out.push_back(McMethod::BIC);
        else if (n == "df") out.push_back(McMethod::DF);
        else if (n == "pr-ge1") out.push_back(McMethod::PR_GE1);
        else
            throw CLI::ValidationError(
                "--methods", "unknown method '" + n +
                "' (expected svd, svd-star, bic, df, pr-ge1)");
    }
    return out;
}

/// Fetches a URL with the bundled HTTP client. Split from the analysis code
/// so everything else stays testable offline through the Transport stub.
HttpResponse http_get(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw FetchError("fetch " + url + ": expected http(s) URL");
    const auto host_start = scheme_end + 3;
    const auto path_start = url.find('/', host_start);
    const std::string origin = url.substr(0, path_start == std::string::npos
                                                  ? url.size()
                                                  : path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client client(origin);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res)
        throw FetchError("fetch " + url + ": no response (" +
                         httplib::to_string(res.error()) +
                         "); check connectivity and retry");
    return HttpResponse{res->status, res->body};
}

json row_json(const EmpiricalRow& row) {
    json j;
    j["id"] = row.id;
    if (!row.error.empty()) {
        j["error"] = row.error;
        return j;
    }
    j["T"] = row.T;
    j["first_date"] = row.first_date;
    j["last_date"] = row.last_date;
    j["log_bf_svd_star"] = row.svd_star_log_bf;
    j["prob_svd_star"] = row.svd_star_prob;
    j["log_bf_bic"] = row.bic_log_bf;
    j["prob_bic"] = row.bic_prob;
    j["df_stat"] = row.df_stat;
    j["df_p"] = row.df_p;
    j["pr_ge1"] = row.pr_ge1;
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"Bayesian and classical unit root tests for zero-mean AR(1)"};
    app.set_version_flag("--version", std::string("unitroot ") + kVersion);
    app.require_subcommand(1);

    // ---- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "simulate one AR(1) sample path");
    double sim_rho = 1.0, sim_x0 = 0.0, sim_sigma = 1.0;
    int sim_T = 100, sim_burn = 0;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    sim->add_option("--rho", sim_rho, "autoregressive coefficient");
    sim->add_option("--T", sim_T, "sample length")->check(CLI::PositiveNumber);
    sim->add_option("--x0", sim_x0, "conditioning value x_0");
    sim->add_option("--sigma", sim_sigma, "innovation standard deviation");
    sim->add_option("--burn-in", sim_burn, "unrecorded warm-up steps")
        ->check(CLI::NonNegativeNumber);
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "output file (default stdout)");

    // ---- test --------------------------------------------------------------
    auto* tst = app.add_subcommand("test", "run all tests on series from a CSV");
    std::string tst_file, tst_out, tst_format = "csv", tst_cache_dir;
    double tst_alpha = 0.05, tst_prior_odds = 1.0, tst_a = -1.0;
    bool tst_log_levels = false;
    int tst_df_reps = 10000;
    std::uint64_t tst_df_seed = 2024;
    tst->add_option("file", tst_file, "input CSV (wide or long schema)")
        ->required();
    tst->add_option("--alpha", tst_alpha, "SVD* significance level")
        ->check(CLI::Range(1e-6, 0.5));
    tst->add_option("--prior-odds", tst_prior_odds, "prior odds for H0")
        ->check(CLI::PositiveNumber);
    tst->add_option("--a", tst_a, "fixed lower bound for the SVD prior");
    tst->add_flag("--log-levels", tst_log_levels, "analyze log(values)");
    tst->add_option("--df-reps", tst_df_reps, "null-table replications");
    tst->add_option("--df-seed", tst_df_seed, "null-table seed");
    tst->add_option("--cache-dir", tst_cache_dir, "null-table cache directory");
    tst->add_option("--format", tst_format, "csv, markdown, or json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));
    tst->add_option("--out", tst_out, "output file (default stdout)");

    // ---- montecarlo --------------------------------------------------------
    auto* mc = app.add_subcommand("montecarlo", "run the Monte Carlo grid");
    McGrid grid;
    std::vector<std::string> mc_methods = {"svd", "svd-star", "bic", "df",
                                           "pr-ge1"};
    std::string mc_layout = "probs", mc_format = "csv", mc_out, mc_cache_dir;
    int mc_df_reps = 10000;
    std::uint64_t mc_df_seed = 2024;
    mc->add_option("--rhos", grid.rhos, "rho values (comma separated)")
        ->delimiter(',');
    mc->add_option("--Ts", grid.Ts, "sample lengths (comma separated)")
        ->delimiter(',');
    mc->add_option("--reps", grid.reps, "replications per cell")
        ->check(CLI::PositiveNumber);
    mc->add_option("--seed", grid.master_seed, "master seed");
    mc->add_option("--threads", grid.threads, "worker threads (0 = auto)");
    mc->add_option("--methods", mc_methods, "subset of svd,svd-star,bic,df,pr-ge1")
        ->delimiter(',');
    mc->add_option("--alpha", grid.svd_star_alpha, "SVD* significance level")
        ->check(CLI::Range(1e-6, 0.5));
    mc->add_option("--a", grid.svd_a, "fixed lower bound for the SVD prior");
    mc->add_option("--burn-in", grid.burn_in,
                   "unrecorded warm-up steps per replication")
        ->check(CLI::NonNegativeNumber);
    mc->add_option("--pr-ge1-max-T", grid.pr_ge1_max_T,
                   "largest T for the Pr(rho >= 1) column");
    mc->add_option("--layout", mc_layout, "probs or logbf")
        ->check(CLI::IsMember({"probs", "logbf"}));
    mc->add_option("--format", mc_format, "csv, markdown, or json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));
    mc->add_option("--df-reps", mc_df_reps, "null-table replications");
    mc->add_option("--df-seed", mc_df_seed, "null-table seed");
    mc->add_option("--cache-dir", mc_cache_dir, "null-table cache directory");
    mc->add_option("--out", mc_out, "output file (default stdout)");

    // ---- empirical ---------------------------------------------------------
    auto* emp = app.add_subcommand("empirical",
                                   "per-currency unit root analysis");
    std::string emp_file, emp_fetch, emp_series, emp_cache, emp_out;
    std::string emp_format = "csv", emp_cache_dir;
    double emp_alpha = 0.05, emp_prior_odds = 1.0;
    bool emp_log_levels = false;
    int emp_df_reps = 10000;
    std::uint64_t emp_df_seed = 2024;
    emp->add_option("file", emp_file, "input CSV (wide or long schema)");
    emp->add_option("--fetch", emp_fetch, "fetch the CSV from this URL instead");
    emp->add_option("--series", emp_series, "series id to select when fetching");
    emp->add_option("--cache", emp_cache, "write the fetched payload here");
    emp->add_option("--alpha", emp_alpha, "SVD* significance level")
        ->check(CLI::Range(1e-6, 0.5));
    emp->add_option("--prior-odds", emp_prior_odds, "prior odds for H0")
        ->check(CLI::PositiveNumber);
    emp->add_flag("--log-levels", emp_log_levels, "analyze log(values)");
    emp->add_option("--df-reps", emp_df_reps, "null-table replications");
    emp->add_option("--df-seed", emp_df_seed, "null-table seed");
    emp->add_option("--cache-dir", emp_cache_dir, "null-table cache directory");
    emp->add_option("--format", emp_format, "csv, markdown, or json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));
    emp->add_option("--out", emp_out, "output file (default stdout)");

    // ---- build-null-table --------------------------------------------------
    auto* bnt = app.add_subcommand("build-null-table",
                                   "tabulate the Dickey-Fuller null");
    int bnt_T = 100, bnt_reps = 100000, bnt_threads = 0;
    std::uint64_t bnt_seed = 2024;
    std::string bnt_out;
    bnt->add_option("--T", bnt_T, "sample length")->check(CLI::PositiveNumber);
    bnt->add_option("--reps", bnt_reps, "replications (>= 10000)");
    bnt->add_option("--seed", bnt_seed, "RNG seed");
    bnt->add_option("--threads", bnt_threads, "worker threads (0 = auto)");
    bnt->add_option("--out", bnt_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (sim->parsed()) {
        const TimeSeries s = simulate_ar1(sim_rho, sim_T, sim_x0, sim_sigma,
                                          sim_seed, sim_burn);
        std::ostringstream cfg;
        cfg << sim_rho << '|' << sim_T << '|' << sim_x0 << '|' << sim_sigma
            << '|' << sim_burn;
        std::ostringstream os;
        os << header("simulate", sim_seed, cfg.str());
        os << "t,value\n";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", s.x0);
        os << "0," << buf << "\n";
        for (std::size_t t = 0; t < s.size(); ++t) {
            std::snprintf(buf, sizeof buf, "%.17g", s.values[t]);
            os << (t + 1) << "," << buf << "\n";
        }
        emit(sim_out, os.str());
        return 0;
    }

    if (tst->parsed()) {
        const auto records = read_csv(tst_file);
        NullTableCache tables(tst_cache_dir, tst_df_reps, tst_df_seed);
        EmpiricalConfig cfg;
        cfg.svd_star_alpha = tst_alpha;
        cfg.prior_odds = tst_prior_odds;
        cfg.log_levels = tst_log_levels;
        cfg.df_tables = &tables;
        const EmpiricalReport report = run_empirical(records, cfg);

        std::ostringstream cfgs;
        cfgs << tst_alpha << '|' << tst_prior_odds << '|' << tst_log_levels
             << '|' << tst_df_reps;
        std::ostringstream os;
        if (tst_format == "json") {
            json j;
            j["tool"] = std::string("unitroot ") + kVersion;
            j["seed"] = tst_df_seed;
            j["config"] = config_hash(cfgs.str());
            j["rows"] = json::array();
            for (const auto& row : report.rows) j["rows"].push_back(row_json(row));
            os << j.dump(2) << "\n";
        } else {
            os << header("test", tst_df_seed, cfgs.str());
            os << render_empirical(report, tst_format == "markdown");
        }
        emit(tst_out, os.str());
        for (const auto& row : report.rows)
            if (!row.error.empty()) return 1;
        return 0;
    }

    if (mc->parsed()) {
        grid.methods = parse_methods(mc_methods);
        NullTableCache tables(mc_cache_dir, mc_df_reps, mc_df_seed,
                              grid.threads);
        const std::vector<McCell> cells =
            run_grid(grid, grid.has(McMethod::DF) ? &tables : nullptr);

        std::ostringstream cfgs;
        for (double r : grid.rhos) cfgs << r << ',';
        for (int T : grid.Ts) cfgs << T << ',';
        cfgs << grid.reps << '|' << grid.svd_a << '|' << grid.svd_star_alpha
             << '|' << grid.burn_in << '|' << mc_layout;
        for (const std::string& m : mc_methods) cfgs << '|' << m;

        std::ostringstream os;
        if (mc_format == "json") {
            json j;
            j["tool"] = std::string("unitroot ") + kVersion;
            j["seed"] = grid.master_seed;
            j["config"] = config_hash(cfgs.str());
            j["cells"] = json::array();
            for (const auto& cell : cells) {
                json c;
                c["rho"] = cell.rho;
                c["T"] = cell.T;
                c["reps"] = cell.reps;
                c["failures"] = cell.failures;
                c["stats"] = json::array();
                for (const auto& s : cell.stats) {
                    json st;
                    st["method"] = mc_method_name(s.method);
                    st["mean_prob"] = s.mean_prob;
                    st["se_prob"] = s.se_prob;
                    st["mean_log_bf"] = s.mean_log_bf;
                    st["se_log_bf"] = s.se_log_bf;
                    st["count"] = s.count;
                    c["stats"].push_back(st);
                }
                j["cells"].push_back(c);
            }
            os << j.dump(2) << "\n";
        } else {
            os << header("montecarlo", grid.master_seed, cfgs.str());
            os << render_table(cells,
                               mc_layout == "probs" ? TableLayout::PROBS
                                                    : TableLayout::LOG_BF,
                               mc_format == "markdown" ? TableFormat::MARKDOWN
                                                       : TableFormat::CSV);
        }
        emit(mc_out, os.str());
        return 0;
    }

    if (emp->parsed()) {
        std::vector<SeriesRecord> records;
        if (!emp_fetch.empty()) {
            const std::string key =
                emp_series.empty() ? std::string("series") : emp_series;
            records.push_back(
                fetch_remote(key, emp_fetch, http_get, emp_cache));
        } else if (!emp_file.empty()) {
            records = read_csv(emp_file);
        } else {
            throw CLI::ValidationError("empirical",
                                       "provide an input file or --fetch URL");
        }
        NullTableCache tables(emp_cache_dir, emp_df_reps, emp_df_seed);
        EmpiricalConfig cfg;
        cfg.svd_star_alpha = emp_alpha;
        cfg.prior_odds = emp_prior_odds;
        cfg.log_levels = emp_log_levels;
        cfg.df_tables = &tables;
        const EmpiricalReport report = run_empirical(records, cfg);

        std::ostringstream cfgs;
        cfgs << emp_alpha << '|' << emp_prior_odds << '|' << emp_log_levels
             << '|' << emp_df_reps;
        std::ostringstream os;
        if (emp_format == "json") {
            json j;
            j["tool"] = std::string("unitroot ") + kVersion;
            j["seed"] = emp_df_seed;
            j["config"] = config_hash(cfgs.str());
            j["rows"] = json::array();
            for (const auto& row : report.rows) j["rows"].push_back(row_json(row));
            os << j.dump(2) << "\n";
        } else {
            os << header("empirical", emp_df_seed, cfgs.str());
            os << render_empirical(report, emp_format == "markdown");
        }
        emit(emp_out, os.str());
        for (const auto& row : report.rows)
            if (!row.error.empty()) return 1;
        return 0;
    }

    if (bnt->parsed()) {
        const NullTable table =
            build_null_table(bnt_T, bnt_reps, bnt_seed, bnt_threads);
        std::ostringstream os;
        write_null_table(table, os);
        emit(bnt_out, os.str());
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const FetchError& e) {
        std::cerr << "fetch error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
