#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "unitroot/errors.hpp"
#include "unitroot/series.hpp"

namespace unitroot {

/// Empirical null distribution of the DF statistic under rho = 1, stored as
/// 1999 evenly spaced (p, quantile) pairs, p = 0.0005 ... 0.9995.
struct NullTable {
    int T = 0;
    int reps = 0;
    std::uint64_t seed = 0;
    std::vector<double> quantiles;  ///< quantiles[i] at p = (i+1)/2000

    static constexpr int kPoints = 1999;

    double prob_at(int i) const { return (i + 1) / 2000.0; }
};

/// Dickey-Fuller statistic (rho_hat - 1)/s_rho. Negative values speak
/// against the unit root; the tau of the SVD formulas is its negation.
inline double df_statistic(const Ar1Fit& fit) {
    return (fit.rho_hat - 1.0) / fit.s_rho;
}

inline double df_statistic(const TimeSeries& series) {
    return df_statistic(fit_ar1(series));
}

/// Simulates `reps` random walks of length T (x0 = 0, sigma = 1) and stores
/// the empirical quantiles of the DF statistic. Replication i always uses
/// the seed derived from (seed, i), so the result is independent of the
/// number of worker threads.
inline NullTable build_null_table(int T, int reps, std::uint64_t seed,
                                  int threads = 0) {
    if (reps < 10000)
        throw std::invalid_argument("build_null_table: reps must be >= 10000");
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    std::vector<double> stats(static_cast<std::size_t>(reps));
    const auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const TimeSeries x = simulate_ar1(1.0, T, 0.0, 1.0, derive_seed(seed, i));
            stats[static_cast<std::size_t>(i)] = df_statistic(x);
        }
    };
    std::vector<std::thread> pool;
    const int chunk = (reps + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int begin = t * chunk;
        const int end = std::min(reps, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
    std::sort(stats.begin(), stats.end());

    NullTable table;
    table.T = T;
    table.reps = reps;
    table.seed = seed;
    table.quantiles.resize(NullTable::kPoints);
    for (int i = 0; i < NullTable::kPoints; ++i) {
        // Type-7 empirical quantile (linear interpolation of order stats).
        const double h = table.prob_at(i) * (reps - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, stats.size() - 1);
        const double frac = h - std::floor(h);
        table.quantiles[static_cast<std::size_t>(i)] =
            (1.0 - frac) * stats[lo] + frac * stats[hi];
    }
    return table;
}

/// Left-tail p-value: empirical fraction of null statistics <= stat, with
/// linear interpolation between stored quantiles, clamped to
/// [0.0005, 0.9995]. Small p rejects the unit root.
inline double df_pvalue(double stat, const NullTable& table) {
    const auto& q = table.quantiles;
    if (stat <= q.front()) return table.prob_at(0);
    if (stat >= q.back()) return table.prob_at(NullTable::kPoints - 1);
    const auto it = std::upper_bound(q.begin(), q.end(), stat);
    const auto i = static_cast<std::size_t>(it - q.begin());  // q[i-1] <= stat < q[i]
    const double q0 = q[i - 1];
    const double q1 = q[i];
    const double p0 = table.prob_at(static_cast<int>(i) - 1);
    const double p1 = table.prob_at(static_cast<int>(i));
    const double frac = q1 > q0 ? (stat - q0) / (q1 - q0) : 0.0;
    return p0 + frac * (p1 - p0);
}

inline constexpr const char* kNullTableFormatVersion = "1";

/// Serializes a table in the cache format: header line with the build key,
/// then p,quantile rows with full double precision.
inline void write_null_table(const NullTable& table, std::ostream& os) {
    os << "# unitroot-df-null v" << kNullTableFormatVersion << " T=" << table.T
       << " reps=" << table.reps << " seed=" << table.seed << "\n";
    os << "p,quantile\n";
    char buf[64];
    for (int i = 0; i < NullTable::kPoints; ++i) {
        std::snprintf(buf, sizeof buf, "%.4f,%.17g", table.prob_at(i),
                      table.quantiles[static_cast<std::size_t>(i)]);
        os << buf << "\n";
    }
}

inline NullTable read_null_table(std::istream& is) {
    std::string header;
    if (!std::getline(is, header))
        throw ParseError("null table: empty stream");
    NullTable table;
    {
        std::istringstream hs(header);
        std::string tag, ver, kv;
        hs >> tag >> ver;
        if (tag != "#" || ver != std::string("unitroot-df-null"))
            throw ParseError("null table: bad header: " + header);
        std::string version;
        hs >> version;
        if (version != std::string("v") + kNullTableFormatVersion)
            throw ParseError("null table: unsupported format version");
        while (hs >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            if (key == "T") table.T = std::stoi(val);
            else if (key == "reps") table.reps = std::stoi(val);
            else if (key == "seed") table.seed = std::stoull(val);
        }
    }
    std::string line;
    std::getline(is, line);  // column header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("null table: malformed row: " + line);
        table.quantiles.push_back(std::stod(line.substr(comma + 1)));
    }
    if (static_cast<int>(table.quantiles.size()) != NullTable::kPoints)
        throw ParseError("null table: wrong number of quantile rows");
    return table;
}

/// Builds tables on demand and caches them on disk keyed by
/// (T, reps, seed, format version). A failed cache write degrades to
/// in-memory operation.
class NullTableCache {
public:
    NullTableCache(std::filesystem::path dir, int reps, std::uint64_t seed,
                   int threads = 0)
        : dir_(std::move(dir)), reps_(reps), seed_(seed), threads_(threads) {}

    const NullTable& get(int T) {
        for (const auto& t : tables_)
            if (t.T == T) return t;
        const std::filesystem::path file = cache_file(T);
        if (!dir_.empty() && std::filesystem::exists(file)) {
            std::ifstream is(file);
            NullTable t = read_null_table(is);
            if (t.T == T && t.reps == reps_ && t.seed == seed_) {
                tables_.push_back(std::move(t));
                return tables_.back();
            }
        }
        NullTable t = build_null_table(T, reps_, seed_, threads_);
        if (!dir_.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(dir_, ec);
            std::ofstream os(file);
            if (os) write_null_table(t, os);
            // On I/O failure the table stays in-memory only.
        }
        tables_.push_back(std::move(t));
        return tables_.back();
    }

private:
    std::filesystem::path cache_file(int T) const {
        std::ostringstream name;
        name << "df_null_T" << T << "_r" << reps_ << "_s" << seed_ << "_v"
             << kNullTableFormatVersion << ".csv";
        return dir_ / name.str();
    }

    std::filesystem::path dir_;
    int reps_;
    std::uint64_t seed_;
    int threads_;
    std::vector<NullTable> tables_;
};

/// Per-series DF outcome.
struct DfResult {
    double stat = 0.0;
    double p_value = 0.5;
    int T = 0;
    std::string table_id;
};

inline DfResult df_test(const TimeSeries& series, const NullTable& table) {
    DfResult r;
    r.stat = df_statistic(series);
    r.p_value = df_pvalue(r.stat, table);
    r.T = static_cast<int>(series.size());
    std::ostringstream id;
    id << "T" << table.T << "/r" << table.reps << "/s" << table.seed;
    r.table_id = id.str();
    return r;
}

}  // namespace unitroot
