#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "unitroot/data_io.hpp"
#include "unitroot/mc.hpp"

using namespace unitroot;

namespace {

McGrid small_grid() {
    McGrid g;
    g.rhos = {0.5, 1.0};
    g.Ts = {50, 100};
    g.reps = 200;
    g.methods = {McMethod::SVD, McMethod::BIC};
    return g;
}

/// Parses a CSV table produced by render_table back into rows of numbers.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) rows.push_back(csv::split(line));
    return rows;
}

}  // namespace

TEST_CASE("run_grid is bit-identical across thread counts") {
    McGrid g = small_grid();
    g.threads = 1;
    const auto one = run_grid(g);
    g.threads = 4;
    const auto four = run_grid(g);
    REQUIRE(one.size() == four.size());
    for (std::size_t c = 0; c < one.size(); ++c) {
        REQUIRE(one[c].stats.size() == four[c].stats.size());
        for (std::size_t m = 0; m < one[c].stats.size(); ++m) {
            CHECK(one[c].stats[m].mean_prob == four[c].stats[m].mean_prob);
            CHECK(one[c].stats[m].mean_log_bf == four[c].stats[m].mean_log_bf);
            CHECK(one[c].stats[m].se_prob == four[c].stats[m].se_prob);
        }
    }
    CHECK(render_table(one, TableLayout::PROBS) ==
          render_table(four, TableLayout::PROBS));
}

TEST_CASE("mean posterior probability rises toward the unit root and with T") {
    McGrid g;
    g.rhos = {0.5, 0.9, 1.0};
    g.Ts = {50, 200};
    g.reps = 400;
    g.methods = {McMethod::BIC};
    const auto cells = run_grid(g);

    const auto find = [&](double rho, int T) -> const McCell& {
        for (const auto& c : cells)
            if (c.rho == rho && c.T == T) return c;
        throw std::logic_error("cell not found");
    };
    // Monotone in rho at fixed T.
    for (int T : {50, 200}) {
        CHECK(find(0.5, T).stat(McMethod::BIC)->mean_prob <
              find(0.9, T).stat(McMethod::BIC)->mean_prob);
        CHECK(find(0.9, T).stat(McMethod::BIC)->mean_prob <
              find(1.0, T).stat(McMethod::BIC)->mean_prob);
    }
    // Under the null, longer samples sharpen the evidence for the unit root;
    // under strong stationarity they sharpen the evidence against it.
    CHECK(find(1.0, 200).stat(McMethod::BIC)->mean_prob >
          find(1.0, 50).stat(McMethod::BIC)->mean_prob);
    CHECK(find(0.5, 200).stat(McMethod::BIC)->mean_prob <
          find(0.5, 50).stat(McMethod::BIC)->mean_prob);
}

TEST_CASE("standard errors shrink like one over root reps") {
    McGrid g;
    g.rhos = {0.9};
    g.Ts = {100};
    g.methods = {McMethod::BIC};
    g.reps = 400;
    const double se_small = run_grid(g)[0].stat(McMethod::BIC)->se_prob;
    g.reps = 1600;
    const double se_big = run_grid(g)[0].stat(McMethod::BIC)->se_prob;
    CHECK(se_big / se_small == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("Table-1-scale spot value: BIC at rho = 0.8, T = 50") {
    McGrid g;
    g.rhos = {0.8};
    g.Ts = {50};
    g.reps = 2000;
    g.methods = {McMethod::BIC};
    const auto cells = run_grid(g);
    const McStat* s = cells[0].stat(McMethod::BIC);
    REQUIRE(s != nullptr);
    CHECK(s->count == 2000);
    CHECK(std::abs(s->mean_prob - 0.240) < 0.04);
}

TEST_CASE("Pr(rho >= 1) column is skipped above its T cutoff") {
    McGrid g;
    g.rhos = {0.9};
    g.Ts = {100, 500};
    g.reps = 50;
    g.methods = {McMethod::BIC, McMethod::PR_GE1};
    g.pr_ge1_max_T = 200;
    const auto cells = run_grid(g);
    REQUIRE(cells.size() == 2);
    const McCell* small_T = cells[0].T == 100 ? &cells[0] : &cells[1];
    const McCell* big_T = cells[0].T == 500 ? &cells[0] : &cells[1];
    CHECK(small_T->stat(McMethod::PR_GE1) != nullptr);
    CHECK(big_T->stat(McMethod::PR_GE1) == nullptr);

    // Markdown rendering shows a dash in the missing cell; CSV leaves it empty.
    const std::string md = render_table(cells, TableLayout::PROBS,
                                        TableFormat::MARKDOWN);
    CHECK(md.find("-") != std::string::npos);
    const auto rows = parse_csv(render_table(cells, TableLayout::PROBS));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"rho", "T", "BIC", "Pr_ge1"});
}

TEST_CASE("rendered CSV round-trips the aggregated means at 3 decimals") {
    McGrid g = small_grid();
    const auto cells = run_grid(g);
    const auto rows = parse_csv(render_table(cells, TableLayout::PROBS));
    REQUIRE(rows.size() == cells.size() + 1);
    CHECK(rows[0] == std::vector<std::string>{"rho", "T", "SVD", "BIC"});
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& r = rows[c + 1];
        REQUIRE(r.size() == 4);
        CHECK(std::stod(r[0]) == doctest::Approx(cells[c].rho));
        CHECK(std::stoi(r[1]) == cells[c].T);
        CHECK(std::stod(r[2]) ==
              doctest::Approx(cells[c].stat(McMethod::SVD)->mean_prob).epsilon(1e-3));
        CHECK(std::stod(r[3]) ==
              doctest::Approx(cells[c].stat(McMethod::BIC)->mean_prob).epsilon(1e-3));
    }

    // Log-BF layout drops DF / Pr_ge1 and uses 2 decimals.
    const auto lb = parse_csv(render_table(cells, TableLayout::LOG_BF));
    CHECK(lb[0] == std::vector<std::string>{"rho", "T", "SVD", "BIC"});
    CHECK(std::stod(lb[1][3]) ==
          doctest::Approx(cells[0].stat(McMethod::BIC)->mean_log_bf).epsilon(0.05));
}

TEST_CASE("DF requires a null-table cache and uses it when given") {
    McGrid g;
    g.rhos = {0.5};
    g.Ts = {50};
    g.reps = 100;
    g.methods = {McMethod::DF};
    CHECK_THROWS_AS(run_grid(g), std::invalid_argument);

    NullTableCache cache("", 10000, 77);
    const auto cells = run_grid(g, &cache);
    const McStat* s = cells[0].stat(McMethod::DF);
    REQUIRE(s != nullptr);
    // Stationary data: mean p-value well below one half.
    CHECK(s->mean_prob < 0.2);
}

TEST_CASE("grid validation rejects degenerate designs") {
    McGrid g = small_grid();
    g.reps = 0;
    CHECK_THROWS_AS(run_grid(g), std::invalid_argument);
    g = small_grid();
    g.Ts = {1};
    CHECK_THROWS_AS(run_grid(g), std::invalid_argument);
    g = small_grid();
    g.rhos.clear();
    CHECK_THROWS_AS(run_grid(g), std::invalid_argument);
    CHECK_THROWS_AS(render_table({}, TableLayout::PROBS), std::invalid_argument);
}
