#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "tcanon/bench.hpp"

using namespace tcanon;

TEST_CASE("random invariants are well-formed and reproducible") {
    auto reg = riemann_registry();

    // degree 1: one factor, both pairs inside it
    std::string d1 = random_riemann_invariant(1, 42);
    auto parsed1 = parse_expression(d1, reg);
    CHECK(parsed1.factors.size() == 1);
    auto merged1 = merge_monomial(parsed1, Commutation::commuting, MetricMode::symmetric);
    CHECK(merged1.free_count == 0);
    CHECK(merged1.pair_count == 2);

    std::string d3 = random_riemann_invariant(3, 42);
    auto merged3 = merge_monomial(parse_expression(d3, reg), Commutation::commuting,
                                  MetricMode::symmetric);
    CHECK(merged3.free_count == 0);
    CHECK(merged3.pair_count == 6);

    CHECK(random_riemann_invariant(4, 7) == random_riemann_invariant(4, 7));
    CHECK(random_riemann_invariant(4, 7) != random_riemann_invariant(4, 8));
}

TEST_CASE("all generated invariants canonicalize") {
    auto reg = riemann_registry();
    for (int degree = 1; degree <= 5; ++degree) {
        for (int sample = 0; sample < 3; ++sample) {
            std::string text = random_riemann_invariant(degree, 1000 + degree * 10 + sample);
            std::string out = canonicalize(text, reg);
            CHECK_FALSE(out.empty());
            if (out != "0") {
                CHECK(canonicalize(out, reg) == out);  // idempotent
            }
        }
    }
}

TEST_CASE("bench report schema") {
    BenchConfig cfg;
    cfg.min_degree = 1;
    cfg.max_degree = 3;
    cfg.samples = 2;
    cfg.seed = 99;
    BenchReport report = run_bench(cfg);
    CHECK(report.rows.size() == 6);
    CHECK(report.summaries.size() == 3);

    std::ostringstream csv;
    write_csv(csv, report);
    std::istringstream lines(csv.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "degree,sample,seed,nanoseconds,result_kind");
    int data = 0, mean = 0;
    while (std::getline(lines, line)) {
        int commas = static_cast<int>(std::count(line.begin(), line.end(), ','));
        CHECK(commas == 4);
        if (line.find(",mean,") != std::string::npos)
            ++mean;
        else
            ++data;
        CHECK((line.ends_with("canonical") || line.ends_with("zero") || line.ends_with("mean")));
    }
    CHECK(data == 6);
    CHECK(mean == 3);

    std::ostringstream plot;
    write_plot_data(plot, report);
    std::istringstream plot_lines(plot.str());
    int plot_rows = 0;
    int degree;
    double seconds;
    while (plot_lines >> degree >> seconds) {
        ++plot_rows;
        CHECK(seconds >= 0.0);
    }
    CHECK(plot_rows == 3);

    // generator determinism: the same configuration yields the same
    // expression sequence (timings aside)
    BenchReport again = run_bench(cfg);
    REQUIRE(again.rows.size() == report.rows.size());
    for (size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(again.rows[i].seed == report.rows[i].seed);
        CHECK(again.rows[i].result_kind == report.rows[i].result_kind);
    }
}

TEST_CASE("drop-zeros excludes vanishing samples") {
    BenchConfig cfg;
    cfg.min_degree = 1;
    cfg.max_degree = 2;
    cfg.samples = 12;
    cfg.seed = 5;
    cfg.drop_zeros = true;
    BenchReport report = run_bench(cfg);
    for (const auto& r : report.rows) CHECK(r.result_kind == "canonical");
    for (const auto& s : report.summaries) CHECK(s.samples >= 1);
}
