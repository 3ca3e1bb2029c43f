#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "unitroot/df.hpp"

using namespace unitroot;

namespace {
const NullTable& table50() {
    static const NullTable t = build_null_table(50, 20000, 2024);
    return t;
}
}  // namespace

TEST_CASE("df_statistic basics and hand value") {
    // x0 = 1, x = (2, 6): rho_hat = 2.8, s = sqrt((0.8/1)/5) = 0.4.
    const TimeSeries s(1.0, {2.0, 6.0});
    CHECK(df_statistic(s) == doctest::Approx(4.5).epsilon(1e-12));

    // rho_hat = 1 exactly -> statistic 0 (see test_phillips construction).
    const TimeSeries unit(1.0, {2.0, 1.5});
    CHECK(df_statistic(unit) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("df_statistic is scale invariant") {
    const TimeSeries s = simulate_ar1(0.95, 100, 0.0, 1.0, 61);
    TimeSeries scaled = s;
    scaled.x0 *= 250.0;
    for (double& v : scaled.values) v *= 250.0;
    CHECK(df_statistic(scaled) == doctest::Approx(df_statistic(s)).epsilon(1e-12));
}

TEST_CASE("null table shape: left-skewed, increasing quantiles") {
    const NullTable& t = table50();
    CHECK(std::is_sorted(t.quantiles.begin(), t.quantiles.end()));
    // Median below zero (classical DF asymmetry).
    CHECK(t.quantiles[999] < 0.0);
    // 5% quantile of the no-constant DF distribution is near -1.95.
    const double q05 = t.quantiles[99];  // p = 0.05
    CHECK(q05 == doctest::Approx(-1.95).epsilon(0.06));
}

TEST_CASE("table build is deterministic and thread-count independent") {
    const NullTable a = build_null_table(50, 10000, 7, 1);
    const NullTable b = build_null_table(50, 10000, 7, 4);
    REQUIRE(a.quantiles.size() == b.quantiles.size());
    for (std::size_t i = 0; i < a.quantiles.size(); ++i)
        CHECK(a.quantiles[i] == b.quantiles[i]);
}

TEST_CASE("quantiles stabilize between T=50 and T=5000") {
    const NullTable big = build_null_table(5000, 20000, 2024);
    const double q05_small = table50().quantiles[99];
    const double q05_big = big.quantiles[99];
    CHECK(std::abs(q05_small - q05_big) < 0.15);
}

TEST_CASE("df_pvalue interpolation, monotonicity and clamping") {
    const NullTable& t = table50();
    CHECK(df_pvalue(t.quantiles[999], t) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(df_pvalue(-1e9, t) == doctest::Approx(0.0005));
    CHECK(df_pvalue(1e9, t) == doctest::Approx(0.9995));
    double prev = -1.0;
    for (double stat = -4.0; stat <= 3.0; stat += 0.05) {
        const double p = df_pvalue(stat, t);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("under the null, p-values are approximately uniform") {
    const NullTable& t = table50();
    std::vector<double> ps;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        const TimeSeries s = simulate_ar1(1.0, 50, 0.0, 1.0, derive_seed(62, i));
        ps.push_back(df_pvalue(df_statistic(s), t));
    }
    double mean = 0.0;
    for (double p : ps) mean += p;
    mean /= reps;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.04));  // +-0.02 absolute

    std::sort(ps.begin(), ps.end());
    double ks = 0.0;
    for (int i = 0; i < reps; ++i) {
        const double ecdf_hi = static_cast<double>(i + 1) / reps;
        const double ecdf_lo = static_cast<double>(i) / reps;
        ks = std::max({ks, std::abs(ecdf_hi - ps[i]), std::abs(ps[i] - ecdf_lo)});
    }
    CHECK(ks < 0.04);
}

TEST_CASE("stationary data produces small p-values (Table-1 scale)") {
    const NullTable t = build_null_table(100, 20000, 2024);
    double mean = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        const TimeSeries s = simulate_ar1(0.9, 100, 0.0, 1.0, derive_seed(63, i));
        mean += df_pvalue(df_statistic(s), t);
    }
    mean /= reps;
    CHECK(mean == doctest::Approx(0.032).epsilon(0.6));
    CHECK(std::abs(mean - 0.032) < 0.02);
}

TEST_CASE("null table round-trips through its cache format bit-exactly") {
    const NullTable a = build_null_table(50, 10000, 99);
    std::ostringstream os;
    write_null_table(a, os);
    std::istringstream is(os.str());
    const NullTable b = read_null_table(is);
    CHECK(b.T == a.T);
    CHECK(b.reps == a.reps);
    CHECK(b.seed == a.seed);
    REQUIRE(b.quantiles.size() == a.quantiles.size());
    for (std::size_t i = 0; i < a.quantiles.size(); ++i)
        CHECK(b.quantiles[i] == a.quantiles[i]);
}

TEST_CASE("build_null_table enforces the minimum replication count") {
    CHECK_THROWS_AS(build_null_table(50, 500, 1), std::invalid_argument);
}
