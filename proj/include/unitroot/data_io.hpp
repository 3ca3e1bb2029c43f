#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unitroot/bic.hpp"
#include "unitroot/df.hpp"
#include "unitroot/errors.hpp"
#include "unitroot/phillips.hpp"
#include "unitroot/series.hpp"
#include "unitroot/svd.hpp"

namespace unitroot {

enum class SeriesSource { LOCAL_CSV, REMOTE_FETCH };

/// One univariate monthly series (e.g. a real exchange rate for one
/// currency), as ingested from CSV.
struct SeriesRecord {
    std::string id;
    std::vector<std::string> dates;  ///< ISO-ish, strictly increasing
    std::vector<double> values;      ///< finite, > 0
    SeriesSource source = SeriesSource::LOCAL_CSV;

    void validate() const {
        if (values.size() < 10)
            throw ParseError("series " + id + ": fewer than 10 observations");
        if (dates.size() != values.size())
            throw ParseError("series " + id + ": date/value length mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i]) || values[i] <= 0.0)
                throw ParseError("series " + id + ": non-positive value at row " +
                                 std::to_string(i + 1));
            if (i > 0 && !(dates[i - 1] < dates[i]))
                throw ParseError("series " + id + ": dates not increasing at row " +
                                 std::to_string(i + 1));
        }
    }
};

namespace csv {

/// Splits one CSV line on commas. No quoting support; the formats used
/// here are plain numeric tables.
inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_number(const std::string& s, int row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ", column " + col +
                         ": not a number: '" + s + "'");
    }
}

}  // namespace csv

/// Parses series from CSV text. Two schemas are accepted:
///   long: header "date,id,value", one observation per row;
///   wide: header "date,<id1>,<id2>,...", one column per series.
/// Both produce the same SeriesRecords for the same data. Missing or
/// malformed cells raise a ParseError naming row and column.
inline std::vector<SeriesRecord> parse_series_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = csv::split(line);
    if (header.size() < 2 || header[0] != "date")
        throw ParseError("header must start with 'date': " + line);

    std::vector<SeriesRecord> records;
    const bool long_format =
        header.size() == 3 && header[1] == "id" && header[2] == "value";

    if (!long_format) {
        records.resize(header.size() - 1);
        for (std::size_t c = 1; c < header.size(); ++c)
            records[c - 1].id = header[c];
    }

    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = csv::split(line);
        if (long_format) {
            if (fields.size() != 3)
                throw ParseError("row " + std::to_string(row) + ": expected 3 fields");
            auto it = std::find_if(records.begin(), records.end(),
                                   [&](const SeriesRecord& r) { return r.id == fields[1]; });
            if (it == records.end()) {
                records.push_back({});
                records.back().id = fields[1];
                it = records.end() - 1;
            }
            it->dates.push_back(fields[0]);
            it->values.push_back(csv::parse_number(fields[2], row, "value"));
        } else {
            if (fields.size() != header.size())
                throw ParseError("row " + std::to_string(row) + ": expected " +
                                 std::to_string(header.size()) + " fields");
            for (std::size_t c = 1; c < fields.size(); ++c) {
                if (fields[c].empty())
                    throw ParseError("row " + std::to_string(row) + ", column " +
                                     header[c] + ": missing value");
                records[c - 1].dates.push_back(fields[0]);
                records[c - 1].values.push_back(
                    csv::parse_number(fields[c], row, header[c]));
            }
        }
    }
    for (const auto& r : records) r.validate();
    if (records.empty()) throw ParseError("no series found");
    return records;
}

inline std::vector<SeriesRecord> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open file: " + path);
    return parse_series_csv(is);
}

/// Minimal HTTP transport abstraction so remote retrieval is testable with
/// a stub and CI never touches the network.
struct HttpResponse {
    int status = 0;
    std::string body;
};
using Transport = std::function<HttpResponse(const std::string& url)>;

/// Downloads one series (CSV payload) through the given transport and
/// funnels it through the local parser. On success the payload may be
/// cached; nothing is written on failure.
inline SeriesRecord fetch_remote(const std::string& series_key,
                                 const std::string& endpoint,
                                 const Transport& transport,
                                 const std::string& cache_path = {}) {
    HttpResponse resp;
    try {
        resp = transport(endpoint);
    } catch (const std::exception& e) {
        throw FetchError("fetch " + endpoint + ": transport failure (" + e.what() +
                         "); check connectivity and retry");
    }
    if (resp.status < 200 || resp.status >= 300)
        throw FetchError("fetch " + endpoint + ": HTTP " +
                         std::to_string(resp.status) + "; retry later");
    std::istringstream body(resp.body);
    std::vector<SeriesRecord> records;
    try {
        records = parse_series_csv(body);
    } catch (const ParseError& e) {
        throw ParseError(std::string("remote payload for ") + series_key + ": " +
                         e.what());
    }
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const SeriesRecord& r) { return r.id == series_key; });
    if (it == records.end()) {
        if (records.size() == 1)
            it = records.begin();
        else
            throw FetchError("fetch " + endpoint + ": series '" + series_key +
                             "' not in payload");
    }
    it->source = SeriesSource::REMOTE_FETCH;
    if (!cache_path.empty()) {
        std::ofstream os(cache_path);
        if (os) os << "# retrieved from " << endpoint << "\n" << resp.body;
    }
    return *it;
}

struct EmpiricalConfig {
    double svd_star_alpha = 0.05;
    double prior_odds = 1.0;
    bool log_levels = false;  ///< analyze log(values) instead of levels
    NullTableCache* df_tables = nullptr;
};

struct EmpiricalRow {
    std::string id;
    int T = 0;
    std::string first_date, last_date;
    double svd_star_log_bf = 0.0, svd_star_prob = 0.0;
    double bic_log_bf = 0.0, bic_prob = 0.0;
    double df_stat = 0.0, df_p = 0.0;
    double pr_ge1 = 0.0;
    std::string error;  ///< non-empty if this series failed
};

struct EmpiricalReport {
    std::vector<EmpiricalRow> rows;
    bool log_levels = false;
    double svd_star_alpha = 0.05;
};

/// Per-currency unit root analysis: SVD*, BIC, DF p-value, and the Jeffreys
/// posterior tail probability. The first observation is the conditioning
/// value x0; the remaining length-1 observations form the sample.
inline EmpiricalReport run_empirical(const std::vector<SeriesRecord>& records,
                                     const EmpiricalConfig& config) {
    if (config.df_tables == nullptr)
        throw std::invalid_argument("run_empirical: null-table cache required");
    EmpiricalReport report;
    report.log_levels = config.log_levels;
    report.svd_star_alpha = config.svd_star_alpha;
    for (const auto& rec : records) {
        EmpiricalRow row;
        row.id = rec.id;
        row.first_date = rec.dates.front();
        row.last_date = rec.dates.back();
        try {
            rec.validate();
            std::vector<double> v(rec.values.begin() + 1, rec.values.end());
            double x0 = rec.values.front();
            if (config.log_levels) {
                x0 = std::log(x0);
                for (double& x : v) x = std::log(x);
            }
            const TimeSeries series(x0, std::move(v));
            row.T = static_cast<int>(series.size());

            const SvdResult svd = svd_data_driven(series, config.svd_star_alpha);
            row.svd_star_log_bf = svd.evidence.log_bf_01;
            row.svd_star_prob = posterior_prob(svd.evidence);

            const BicResult bic = bic_test(series, config.prior_odds);
            row.bic_log_bf = bic.evidence.log_bf_01;
            row.bic_prob = posterior_prob(bic.evidence);

            const DfResult df = df_test(series, config.df_tables->get(row.T));
            row.df_stat = df.stat;
            row.df_p = df.p_value;

            // Reference-table convention: posterior normalized over [-2, 2].
            row.pr_ge1 =
                tail_prob_ge_one(series, PriorKind::JEFFREYS, -2.0, 2.0);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

/// Table-2-shaped rendering of the empirical report.
inline std::string render_empirical(const EmpiricalReport& report,
                                    bool markdown = false) {
    const char* sep = markdown ? " | " : ",";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    if (markdown) os << "| ";
    os << "currency" << sep << "logBF_SVD*" << sep << "logBF_BIC" << sep
       << "prob_SVD*" << sep << "prob_BIC" << sep << "DF" << sep << "Pr_ge1";
    if (markdown) os << " |";
    os << "\n";
    if (markdown) os << "| --- | --- | --- | --- | --- | --- | --- |\n";
    char buf[32];
    for (const auto& row : report.rows) {
        if (markdown) os << "| ";
        os << row.id;
        if (!row.error.empty()) {
            for (int i = 0; i < 6; ++i) os << sep << "error";
            if (markdown) os << " |";
            os << "\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.3f", row.svd_star_log_bf);
        os << sep << buf;
        std::snprintf(buf, sizeof buf, "%.3f", row.bic_log_bf);
        os << sep << buf;
        std::snprintf(buf, sizeof buf, "%.3f", row.svd_star_prob);
        os << sep << buf;
        std::snprintf(buf, sizeof buf, "%.3f", row.bic_prob);
        os << sep << buf;
        std::snprintf(buf, sizeof buf, "%.3f", row.df_p);
        os << sep << buf;
        std::snprintf(buf, sizeof buf, "%.3f", row.pr_ge1);
        os << sep << buf;
        if (markdown) os << " |";
        os << "\n";
    }
    return os.str();
}

}  // namespace unitroot
