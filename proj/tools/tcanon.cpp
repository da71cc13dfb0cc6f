// tcanon: canonical forms of indexed-object monomials with free and dummy
// indices under permutation symmetries.
//
//   tcanon canon --defs FILE [--metric M] [--trace] [--anticommuting]
//                [--natural-base] [--sgs-file FILE] (EXPR | --)
//   tcanon bench --max-degree D --samples K --seed S
//                [--min-degree d] [--drop-zeros] [--plot-file PATH]
//
// Exit codes: 0 success, 1 parse error, 2 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tcanon/bench.hpp"
#include "tcanon/frontend.hpp"

namespace {

tcanon::MetricMode parse_metric(const std::string& text) {
    if (text == "symmetric") return tcanon::MetricMode::symmetric;
    if (text == "antisymmetric") return tcanon::MetricMode::antisymmetric;
    if (text == "none") return tcanon::MetricMode::none;
    throw tcanon::ParseError("unknown metric mode '" + text + "'");
}

struct CanonArgs {
    std::string defs;
    std::string metric;
    std::string sgs_file;
    std::string expr;
    bool trace = false;
    bool anticommuting = false;
    bool natural_base = false;
};

int run_canon(const CanonArgs& args) {
    tcanon::SymbolRegistry registry = tcanon::SymbolRegistry::from_file(args.defs);
    if (!args.metric.empty()) registry.set_metric(parse_metric(args.metric));

    std::string text = args.expr;
    if (text.empty() || text == "--") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    }

    tcanon::CanonOptions options;
    options.commutation = args.anticommuting ? tcanon::Commutation::anticommuting
                                             : tcanon::Commutation::commuting;
    options.natural_base = args.natural_base;
    if (!args.sgs_file.empty()) {
        // the override is written in merged-slot numbering, so the degree
        // comes from the expression
        int degree = tcanon::parse_expression(text, registry).total_slots();
        tcanon::SgsFile sgs = tcanon::load_sgs_file(args.sgs_file, degree);
        options.sgs = std::move(sgs.generators);
        if (sgs.base) options.base = std::move(sgs.base);
    }

    tcanon::PipelineTrace trace;
    std::string out =
        tcanon::canonicalize(text, registry, options, args.trace ? &trace : nullptr);
    if (args.trace) {
        auto line = [](const char* name, const std::optional<tcanon::SignedPerm>& g) {
            if (g) std::cout << name << " = " << tcanon::render_cycles(*g) << "\n";
        };
        line("g1", trace.g1);
        line("g2", trace.g2);
        line("h", trace.h);
        line("g3", trace.g3);
        line("g4", trace.g4);
        line("g5", trace.g5);
    }
    std::cout << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical forms of indexed-object monomials"};
    app.require_subcommand(1);

    CanonArgs canon_args;
    CLI::App* canon = app.add_subcommand("canon", "canonicalize a tensor expression");
    canon->add_option("--defs", canon_args.defs, "symmetry definition file")->required();
    canon->add_option("--metric", canon_args.metric,
                      "metric mode: symmetric|antisymmetric|none (overrides the defs file)");
    canon->add_flag("--trace", canon_args.trace, "print the g1..g5 trail in cycle notation");
    canon->add_flag("--anticommuting", canon_args.anticommuting,
                    "treat identical factors as anticommuting");
    canon->add_flag("--natural-base", canon_args.natural_base,
                    "force the base 1..N-1 instead of the computed one");
    canon->add_option("--sgs-file", canon_args.sgs_file,
                      "override the merged symmetry with literal generators");
    canon->add_option("expr", canon_args.expr, "expression; omit or pass -- to read stdin");

    tcanon::BenchConfig bench_cfg;
    std::string plot_file;
    CLI::App* bench = app.add_subcommand("bench", "time random Riemann invariants, CSV output");
    bench->add_option("--max-degree", bench_cfg.max_degree, "largest degree")->required();
    bench->add_option("--samples", bench_cfg.samples, "monomials per degree")->required();
    bench->add_option("--seed", bench_cfg.seed, "base PRNG seed")->required();
    bench->add_option("--min-degree", bench_cfg.min_degree, "smallest degree (default 1)");
    bench->add_flag("--drop-zeros", bench_cfg.drop_zeros, "exclude vanishing monomials");
    bench->add_option("--plot-file", plot_file, "also write 'degree mean_seconds' lines here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (canon->parsed()) return run_canon(canon_args);
        if (bench->parsed()) {
            tcanon::BenchReport report = tcanon::run_bench(bench_cfg);
            tcanon::write_csv(std::cout, report);
            if (!plot_file.empty()) {
                std::ofstream plot(plot_file);
                if (!plot) throw std::runtime_error("cannot open plot file: " + plot_file);
                tcanon::write_plot_data(plot, report);
            }
            return 0;
        }
    } catch (const tcanon::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
