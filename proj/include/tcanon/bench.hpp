#ifndef TCANON_BENCH_HPP
#define TCANON_BENCH_HPP

#include <chrono>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "tcanon/frontend.hpp"

namespace tcanon {

/// Random Riemann scalar invariant of the given degree: a product of
/// `degree` R factors with all 4*degree slots contracted, uniform random
/// pairing and random per-pair variance patterns (metric symmetric accepts
/// same-variance pairs).  Deterministic for a fixed (degree, seed).
inline std::string random_riemann_invariant(int degree, std::uint64_t seed) {
    if (degree < 1) throw std::invalid_argument("random_riemann_invariant: degree must be >= 1");
    std::mt19937_64 rng(seed);
    int slots = 4 * degree;
    std::vector<int> order(slots);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < 2 * degree; ++k) {
        int a = order[2 * k], b = order[2 * k + 1];
        pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(pairs.begin(), pairs.end());  // name by first slot

    std::vector<std::string> name(slots + 1);
    std::vector<bool> up(slots + 1, true);
    for (size_t k = 0; k < pairs.size(); ++k) {
        std::string n = "d" + std::to_string(k + 1);
        name[pairs[k].first] = name[pairs[k].second] = n;
        switch (rng() % 4) {
            case 0: up[pairs[k].first] = true;  up[pairs[k].second] = false; break;
            case 1: up[pairs[k].first] = false; up[pairs[k].second] = true;  break;
            case 2: up[pairs[k].first] = true;  up[pairs[k].second] = true;  break;
            default: up[pairs[k].first] = false; up[pairs[k].second] = false; break;
        }
    }

    std::string out;
    for (int f = 0; f < degree; ++f) {
        if (f) out += " * ";
        out += "R(";
        for (int k = 1; k <= 4; ++k) {
            int slot = 4 * f + k;
            if (k > 1) out += ',';
            if (!up[slot]) out += '-';
            out += name[slot];
        }
        out += ')';
    }
    return out;
}

inline SymbolRegistry riemann_registry() {
    return SymbolRegistry::from_text(
        "metric symmetric\n"
        "tensor R rank 4\n"
        "gen -(1,2)\n"
        "gen -(3,4)\n"
        "gen +(1,3)(2,4)\n");
}

struct BenchRow {
    int degree = 0;
    int sample = 0;
    std::uint64_t seed = 0;
    std::uint64_t nanoseconds = 0;
    std::string result_kind;  // "canonical" or "zero"
};

struct BenchSummary {
    int degree = 0;
    std::uint64_t mean_nanoseconds = 0;
    int samples = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchSummary> summaries;
    std::uint64_t base_seed = 0;
};

struct BenchConfig {
    int min_degree = 1;
    int max_degree = 4;
    int samples = 10;
    std::uint64_t seed = 1;
    bool drop_zeros = false;
    SearchOptions search;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, int degree, int sample) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(degree) * 1000003u +
                                                      static_cast<std::uint64_t>(sample) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Times double_coset_can_rep on random Riemann invariants, one warm-up run
/// per sample discarded.  Everything else (parsing, merging, the strong
/// generating set) stays outside the clock.
inline BenchReport run_bench(const BenchConfig& cfg) {
    SymbolRegistry reg = riemann_registry();
    BenchReport report;
    report.base_seed = cfg.seed;
    for (int degree = cfg.min_degree; degree <= cfg.max_degree; ++degree) {
        std::uint64_t total = 0;
        int kept = 0;
        for (int sample = 0; sample < cfg.samples; ++sample) {
            std::uint64_t sample_seed = detail::mix_seed(cfg.seed, degree, sample);
            std::string text = random_riemann_invariant(degree, sample_seed);

            ParsedExpression expr = parse_expression(text, reg);
            MergedTensor merged = merge_monomial(expr, Commutation::commuting,
                                                 MetricMode::symmetric);
            std::vector<int> b_S = schreier_sims(merged.symmetry, merged.total_slots).base;
            SignedPerm g1 = g_from_configuration(merged, expr);
            DummySpec spec = DummySpec::contracted(merged.pair_count, MetricMode::symmetric);

            CanonResult warm =
                double_coset_can_rep(b_S, merged.symmetry, g1, spec, cfg.search);
            auto start = std::chrono::steady_clock::now();
            CanonResult timed =
                double_coset_can_rep(b_S, merged.symmetry, g1, spec, cfg.search);
            auto stop = std::chrono::steady_clock::now();
            if (warm.zero != timed.zero)
                throw std::logic_error("bench: warm-up and timed run disagree");

            BenchRow row;
            row.degree = degree;
            row.sample = sample;
            row.seed = sample_seed;
            row.nanoseconds = static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
            row.result_kind = timed.zero ? "zero" : "canonical";
            if (cfg.drop_zeros && timed.zero) continue;
            total += row.nanoseconds;
            ++kept;
            report.rows.push_back(std::move(row));
        }
        if (kept > 0)
            report.summaries.push_back(
                {degree, total / static_cast<std::uint64_t>(kept), kept});
    }
    return report;
}

inline void write_csv(std::ostream& out, const BenchReport& report) {
    out << "degree,sample,seed,nanoseconds,result_kind\n";
    for (const auto& r : report.rows)
        out << r.degree << ',' << r.sample << ',' << r.seed << ',' << r.nanoseconds << ','
            << r.result_kind << '\n';
    for (const auto& s : report.summaries)
        out << s.degree << ",mean," << report.base_seed << ',' << s.mean_nanoseconds << ",mean\n";
}

/// Two-column plot data: degree and mean seconds, for external fitting
/// against y = a * x^N.
inline void write_plot_data(std::ostream& out, const BenchReport& report) {
    char buf[64];
    for (const auto& s : report.summaries) {
        std::snprintf(buf, sizeof buf, "%d %.9f\n", s.degree,
                      static_cast<double>(s.mean_nanoseconds) / 1e9);
        out << buf;
    }
}

} // namespace tcanon

#endif
