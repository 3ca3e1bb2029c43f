#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "unitroot/bic.hpp"
#include "unitroot/df.hpp"
#include "unitroot/errors.hpp"
#include "unitroot/evidence.hpp"
#include "unitroot/phillips.hpp"
#include "unitroot/series.hpp"
#include "unitroot/svd.hpp"

namespace unitroot {

enum class McMethod { SVD, SVD_STAR, BIC, DF, PR_GE1 };

inline std::string mc_method_name(McMethod m) {
    switch (m) {
        case McMethod::SVD: return "SVD";
        case McMethod::SVD_STAR: return "SVD*";
        case McMethod::BIC: return "BIC";
        case McMethod::DF: return "DF";
        case McMethod::PR_GE1: return "Pr_ge1";
    }
    return "?";
}

/// Monte Carlo design: rho values x sample lengths x replications.
struct McGrid {
    std::vector<double> rhos = {0.2, 0.5, 0.8, 0.9, 0.99, 0.999, 1.0};
    std::vector<int> Ts = {50, 100, 200, 500, 1000, 5000};
    int reps = 2000;
    std::uint64_t master_seed = 20080;
    std::vector<McMethod> methods = {McMethod::SVD, McMethod::SVD_STAR,
                                     McMethod::BIC, McMethod::DF,
                                     McMethod::PR_GE1};
    int pr_ge1_max_T = 200;  ///< Pr(rho >= 1) skipped above this length
    /// Pr(rho >= 1) integration bounds. The reference tables normalize the
    /// Jeffreys posterior over the fixed window [-2, 2] rather than the full
    /// line; the polynomially decaying explosive flank beyond 2 is excluded
    /// by convention.
    double pr_lo = -2.0;
    double pr_hi = 2.0;
    /// Warm-up steps for the simulated processes: each replication runs the
    /// recursion from zero for burn_in unrecorded steps, so |rho| < 1 cells
    /// start near the stationary law and rho = 1 cells start diffuse. The
    /// reference tables are generated with burn_in = 50.
    int burn_in = 50;
    double svd_a = -1.0;
    double svd_star_alpha = 0.05;
    int threads = 0;  ///< 0 = hardware concurrency

    void validate() const {
        if (reps < 1) throw std::invalid_argument("McGrid: reps must be >= 1");
        if (burn_in < 0)
            throw std::invalid_argument("McGrid: burn_in must be >= 0");
        if (!(pr_lo < 1.0 && 1.0 < pr_hi))
            throw std::invalid_argument("McGrid: Pr bounds must straddle 1");
        if (rhos.empty() || Ts.empty())
            throw std::invalid_argument("McGrid: empty rho or T list");
        for (double r : rhos)
            if (!std::isfinite(r))
                throw std::invalid_argument("McGrid: non-finite rho");
        for (int T : Ts)
            if (T < 2) throw std::invalid_argument("McGrid: T must be >= 2");
    }

    bool has(McMethod m) const {
        return std::find(methods.begin(), methods.end(), m) != methods.end();
    }
};

/// Trim fraction (per side) used for the central log-Bayes-factor summary
/// of a cell. The per-replication log BF distributions are heavy-tailed --
/// a handful of extreme draws can move the plain mean by several tenths --
/// so the cell probability is computed from a lightly trimmed mean.
inline constexpr double kLogBfTrim = 0.05;

/// Aggregated per-method statistics for one (rho, T) cell. For the
/// Bayes-factor methods (SVD, SVD*, BIC) the cell probability is the
/// posterior probability evaluated at the cell's trimmed-mean log Bayes
/// factor (kLogBfTrim per side), with a delta-method standard error;
/// mean_log_bf itself stays the plain mean. DF and Pr_ge1 report plain
/// means of the per-replication p-values / tail probabilities.
struct McStat {
    McMethod method = McMethod::BIC;
    double mean_prob = 0.0;     ///< cell probability (see above)
    double mean_log_bf = 0.0;   ///< 0 for DF / PR_GE1
    double se_prob = 0.0;
    double se_log_bf = 0.0;
    int count = 0;
};

struct McCell {
    double rho = 0.0;
    int T = 0;
    int reps = 0;
    int failures = 0;
    std::vector<McStat> stats;

    const McStat* stat(McMethod m) const {
        for (const auto& s : stats)
            if (s.method == m) return &s;
        return nullptr;
    }
};

namespace detail {

/// Pairwise summation: associative reduction whose result is independent of
/// how replications were distributed over threads.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo,
                           std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline void mean_and_se(const std::vector<double>& v, double& mean, double& se) {
    const auto n = v.size();
    mean = pairwise_sum(v, 0, n) / static_cast<double>(n);
    if (n < 2) {
        se = 0.0;
        return;
    }
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = v[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq, 0, n) / static_cast<double>(n - 1);
    se = std::sqrt(var / static_cast<double>(n));
}

struct RepOutcome {
    bool failed = false;
    // Parallel to the requested method list.
    std::vector<double> prob;
    std::vector<double> log_bf;
};

}  // namespace detail

/// Runs the full grid. Replication i of cell (rho-index ri, T-index ti)
/// always simulates with seed derive(master, ri, ti, i); per-replication
/// outcomes are stored by index and reduced pairwise, so the output is
/// bit-identical regardless of the thread count.
inline std::vector<McCell> run_grid(const McGrid& grid,
                                    NullTableCache* df_tables = nullptr) {
    grid.validate();
    if (grid.has(McMethod::DF) && df_tables == nullptr)
        throw std::invalid_argument("run_grid: DF requested without a null-table cache");

    int threads = grid.threads;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    std::vector<McCell> cells;
    for (std::size_t ti = 0; ti < grid.Ts.size(); ++ti) {
        const int T = grid.Ts[ti];
        const NullTable* table =
            grid.has(McMethod::DF) ? &df_tables->get(T) : nullptr;
        for (std::size_t ri = 0; ri < grid.rhos.size(); ++ri) {
            const double rho = grid.rhos[ri];

            std::vector<McMethod> active;
            for (McMethod m : grid.methods) {
                if (m == McMethod::PR_GE1 && T > grid.pr_ge1_max_T) continue;
                active.push_back(m);
            }

            std::vector<detail::RepOutcome> outcomes(
                static_cast<std::size_t>(grid.reps));
            const auto worker = [&](int begin, int end) {
                for (int i = begin; i < end; ++i) {
                    auto& out = outcomes[static_cast<std::size_t>(i)];
                    out.prob.assign(active.size(), 0.0);
                    out.log_bf.assign(active.size(), 0.0);
                    try {
                        const TimeSeries x = simulate_ar1(
                            rho, T, 0.0, 1.0,
                            derive_seed(grid.master_seed, ri, ti,
                                        static_cast<std::uint64_t>(i)),
                            grid.burn_in);
                        for (std::size_t mi = 0; mi < active.size(); ++mi) {
                            switch (active[mi]) {
                                case McMethod::SVD: {
                                    const SvdResult r = svd_fixed(x, grid.svd_a);
                                    out.prob[mi] = posterior_prob(r.evidence);
                                    out.log_bf[mi] = r.evidence.log_bf_01;
                                    break;
                                }
                                case McMethod::SVD_STAR: {
                                    const SvdResult r =
                                        svd_data_driven(x, grid.svd_star_alpha);
                                    out.prob[mi] = posterior_prob(r.evidence);
                                    out.log_bf[mi] = r.evidence.log_bf_01;
                                    break;
                                }
                                case McMethod::BIC: {
                                    const BicResult r = bic_test(x);
                                    out.prob[mi] = posterior_prob(r.evidence);
                                    out.log_bf[mi] = r.evidence.log_bf_01;
                                    break;
                                }
                                case McMethod::DF: {
                                    out.prob[mi] = df_pvalue(df_statistic(x), *table);
                                    break;
                                }
                                case McMethod::PR_GE1: {
                                    out.prob[mi] = tail_prob_ge_one(
                                        x, PriorKind::JEFFREYS, grid.pr_lo,
                                        grid.pr_hi);
                                    break;
                                }
                            }
                        }
                    } catch (const Error&) {
                        out.failed = true;
                    }
                }
            };
            std::vector<std::thread> pool;
            const int chunk = (grid.reps + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const int begin = t * chunk;
                const int end = std::min(grid.reps, begin + chunk);
                if (begin >= end) break;
                pool.emplace_back(worker, begin, end);
            }
            for (auto& th : pool) th.join();

            McCell cell;
            cell.rho = rho;
            cell.T = T;
            cell.reps = grid.reps;
            for (const auto& out : outcomes)
                if (out.failed) ++cell.failures;
            if (cell.failures > grid.reps / 100)
                throw NumericFailure("run_grid: > 1% of replications failed in a cell");

            for (std::size_t mi = 0; mi < active.size(); ++mi) {
                std::vector<double> probs, log_bfs;
                probs.reserve(outcomes.size());
                log_bfs.reserve(outcomes.size());
                for (const auto& out : outcomes) {
                    if (out.failed) continue;
                    probs.push_back(out.prob[mi]);
                    log_bfs.push_back(out.log_bf[mi]);
                }
                McStat s;
                s.method = active[mi];
                s.count = static_cast<int>(probs.size());
                detail::mean_and_se(probs, s.mean_prob, s.se_prob);
                detail::mean_and_se(log_bfs, s.mean_log_bf, s.se_log_bf);
                if (s.method == McMethod::SVD || s.method == McMethod::SVD_STAR ||
                    s.method == McMethod::BIC) {
                    // Probability of the central evidence, not the mean of the
                    // per-replication probabilities: the cell summarizes the
                    // typical log Bayes factor on the probability scale. A
                    // light trim guards against the heavy tails of the log BF
                    // distribution (see kLogBfTrim).
                    std::vector<double> sorted = log_bfs;
                    std::sort(sorted.begin(), sorted.end());
                    const auto k = static_cast<std::size_t>(
                        kLogBfTrim * static_cast<double>(sorted.size()));
                    const double trimmed =
                        detail::pairwise_sum(sorted, k, sorted.size() - k) /
                        static_cast<double>(sorted.size() - 2 * k);
                    const Method em = s.method == McMethod::SVD ? Method::SVD
                                      : s.method == McMethod::SVD_STAR
                                          ? Method::SVD_STAR
                                          : Method::BIC;
                    s.mean_prob = posterior_prob(Evidence(trimmed, em));
                    s.se_prob = s.mean_prob * (1.0 - s.mean_prob) * s.se_log_bf;
                }
                cell.stats.push_back(s);
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

enum class TableLayout { PROBS, LOG_BF };
enum class TableFormat { CSV, MARKDOWN };

/// Renders the aggregated cells as a probabilities table (3 decimals; DF
/// column carries mean p-values) or a log-Bayes-factor table (2 decimals,
/// SVD / SVD* / BIC only). Column order follows the probabilities layout:
/// SVD, SVD*, BIC, DF, Pr_ge1.
inline std::string render_table(const std::vector<McCell>& cells,
                                TableLayout layout,
                                TableFormat format = TableFormat::CSV) {
    if (cells.empty()) throw std::invalid_argument("render_table: no cells");

    static constexpr McMethod kOrder[] = {McMethod::SVD, McMethod::SVD_STAR,
                                          McMethod::BIC, McMethod::DF,
                                          McMethod::PR_GE1};
    std::vector<McMethod> columns;
    for (McMethod m : kOrder) {
        if (layout == TableLayout::LOG_BF &&
            (m == McMethod::DF || m == McMethod::PR_GE1))
            continue;
        for (const auto& cell : cells) {
            if (cell.stat(m) != nullptr) {
                columns.push_back(m);
                break;
            }
        }
    }

    const bool md = format == TableFormat::MARKDOWN;
    const char* sep = md ? " | " : ",";
    std::ostringstream os;
    os.imbue(std::locale::classic());

    if (md) os << "| ";
    os << "rho" << sep << "T";
    for (McMethod m : columns) os << sep << mc_method_name(m);
    if (md) os << " |";
    os << "\n";
    if (md) {
        os << "|";
        for (std::size_t i = 0; i < columns.size() + 2; ++i) os << " --- |";
        os << "\n";
    }

    char buf[32];
    for (const auto& cell : cells) {
        if (md) os << "| ";
        std::snprintf(buf, sizeof buf, "%.3f", cell.rho);
        os << buf << sep << cell.T;
        for (McMethod m : columns) {
            os << sep;
            const McStat* s = cell.stat(m);
            if (s == nullptr) {
                os << (md ? "-" : "");
                continue;
            }
            if (layout == TableLayout::PROBS)
                std::snprintf(buf, sizeof buf, "%.3f", s->mean_prob);
            else
                std::snprintf(buf, sizeof buf, "%.2f", s->mean_log_bf);
            os << buf;
        }
        if (md) os << " |";
        os << "\n";
    }
    return os.str();
}

}  // namespace unitroot
