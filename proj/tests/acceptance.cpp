// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criteria 3-6 check the search against brute-force double coset
// enumeration; criterion 7 runs the scaling experiment at desk scale.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tcanon/bench.hpp"
#include "tcanon/frontend.hpp"
#include "support/brute_force.hpp"
#include "support/golden.hpp"

using namespace tcanon;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what << "\n";
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- shared random-instance machinery (independent oracle lives in
// support/brute_force.hpp) ---

SignedPerm random_signed_perm(std::mt19937_64& rng, int degree) {
    std::vector<int> im(degree);
    std::iota(im.begin(), im.end(), 1);
    std::shuffle(im.begin(), im.end(), rng);
    return SignedPerm((rng() & 1) ? 1 : -1, std::move(im));
}

SignedPerm random_small_generator(std::mt19937_64& rng, int degree) {
    std::vector<int> pts(degree);
    std::iota(pts.begin(), pts.end(), 1);
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<int> im(degree);
    std::iota(im.begin(), im.end(), 1);
    size_t at = 0;
    int cycles = 1 + static_cast<int>(rng() % 2);
    for (int c = 0; c < cycles; ++c) {
        size_t len = 2 + rng() % 2;
        if (at + len > pts.size()) break;
        for (size_t k = 0; k < len; ++k)
            im[pts[at + k] - 1] = pts[at + (k + 1) % len];
        at += len;
    }
    return SignedPerm((rng() & 1) ? 1 : -1, std::move(im));
}

struct Instance {
    int n;
    MetricMode metric;
    std::vector<SignedPerm> ks;
    std::vector<SignedPerm> s_elements;
    std::vector<SignedPerm> d_elements;
    SignedPerm g;
};

std::optional<Instance> sample_instance(std::mt19937_64& rng, int which_metric) {
    Instance inst;
    inst.n = 1 + static_cast<int>(rng() % 4);  // 2n <= 8 slots
    int degree = 2 * inst.n;
    inst.metric = which_metric == 0   ? MetricMode::symmetric
                  : which_metric == 1 ? MetricMode::antisymmetric
                                      : MetricMode::none;
    int gen_count = static_cast<int>(rng() % 4);  // S from <= 3 generators
    for (int k = 0; k < gen_count; ++k) inst.ks.push_back(random_small_generator(rng, degree));
    auto closed = oracle::closure(inst.ks, degree, 700);
    if (!closed) return std::nullopt;
    inst.s_elements = std::move(*closed);
    auto [kd, bd] = build_KD(DummySpec::contracted(inst.n, inst.metric), degree);
    auto d_closed = oracle::closure(kd, degree);
    if (!d_closed) return std::nullopt;
    inst.d_elements = std::move(*d_closed);
    inst.g = random_signed_perm(rng, degree);
    return inst;
}

bool instance_agrees(const Instance& inst, const SignedPerm& g) {
    int degree = 2 * inst.n;
    auto ext = extend_base({}, degree);
    auto rank = base_rank(ext, degree);
    auto expected = oracle::scan_double_coset(inst.s_elements, g, inst.d_elements, ext, rank);
    auto got = double_coset_can_rep({}, inst.ks, g, DummySpec::contracted(inst.n, inst.metric));
    if (got.zero != expected.zero) return false;
    if (!got.zero) {
        if (!(got.canonical == expected.minimum)) return false;
        if (!(compose(compose(got.witness_s, g), got.witness_d) == got.canonical)) return false;
    }
    return true;
}

std::string run_cli(const std::string& args, int* exit_code = nullptr) {
    std::string cmd = std::string(TCANON_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "";
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    if (exit_code) *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

bool parse_equivalent(const std::string& a, const std::string& b, const SymbolRegistry& reg) {
    auto pa = parse_expression(a, reg);
    auto pb = parse_expression(b, reg);
    if (pa.sign != pb.sign || pa.factors.size() != pb.factors.size()) return false;
    std::map<std::string, int> count_a, count_b;
    for (const auto& f : pa.factors)
        for (const auto& i : f.indices) ++count_a[i.name];
    for (const auto& f : pb.factors)
        for (const auto& i : f.indices) ++count_b[i.name];
    std::map<std::string, std::string> rename;
    for (size_t f = 0; f < pa.factors.size(); ++f) {
        if (pa.factors[f].symbol->name != pb.factors[f].symbol->name) return false;
        for (size_t k = 0; k < pa.factors[f].indices.size(); ++k) {
            const auto& ia = pa.factors[f].indices[k];
            const auto& ib = pb.factors[f].indices[k];
            if (ia.up != ib.up) return false;
            if ((count_a[ia.name] == 2) != (count_b[ib.name] == 2)) return false;
            if (count_a[ia.name] != 2) {
                if (ia.name != ib.name) return false;
            } else {
                auto [it, inserted] = rename.try_emplace(ia.name, ib.name);
                if (!inserted && it->second != ib.name) return false;
            }
        }
    }
    return true;
}

// --- criteria ---

void criterion_1() {
    SymbolRegistry reg = SymbolRegistry::from_file(std::string(TCANON_DATA_DIR) +
                                                   "/riemann.defs");
    CanonOptions opt;
    opt.sgs = golden::merged_symmetry();
    opt.base = golden::natural_base();
    auto start = std::chrono::steady_clock::now();
    std::string out = canonicalize(golden::kInput, reg, opt);
    double elapsed = seconds_since(start);
    bool ok = out[0] == '-' && parse_equivalent(out, golden::kCanonical, reg) && elapsed < 1.0;
    std::ostringstream what;
    what << "worked-example end-to-end, parse-equivalent canonical form with sign -1 in "
         << elapsed << " s";
    report(1, ok, what.str());
}

void criterion_2() {
    int code = 0;
    std::string out = run_cli("canon --defs " + std::string(TCANON_DATA_DIR) +
                                  "/riemann.defs --sgs-file " + std::string(TCANON_DATA_DIR) +
                                  "/riemann3_literal.sgs --trace \"" + golden::kInput + "\"",
                              &code);
    bool ok = code == 0 &&
              out.find(std::string("g2 = ") + golden::kG2) != std::string::npos &&
              out.find(std::string("g4 = ") + golden::kG4) != std::string::npos &&
              out.find(std::string("g5 = ") + golden::kG5) != std::string::npos;
    report(2, ok, "worked-example intermediates g2, g4, g5 bit-exact under --trace");
}

void criterion_3() {
    std::mt19937_64 rng(0xACCE57);
    int done = 0, mismatches = 0;
    // deliberate -id instances first: S = <-(1,2), +(1,2)>
    {
        Instance inst;
        inst.n = 1;
        inst.metric = MetricMode::none;
        inst.ks = {parse_cycles("-(1,2)", 2), parse_cycles("(1,2)", 2)};
        inst.s_elements = *oracle::closure(inst.ks, 2);
        auto [kd, bd] = build_KD(DummySpec::contracted(1, inst.metric), 2);
        inst.d_elements = *oracle::closure(kd, 2);
        inst.g = SignedPerm(2);
        if (!instance_agrees(inst, inst.g)) ++mismatches;
        ++done;
    }
    while (done < 1050) {
        auto inst = sample_instance(rng, done % 3);
        if (!inst) continue;
        if (!instance_agrees(*inst, inst->g)) ++mismatches;
        ++done;
    }
    std::ostringstream what;
    what << "oracle equivalence on " << done << " random instances (2n <= 8, all metric modes): "
         << mismatches << " disagreements";
    report(3, mismatches == 0, what.str());
}

void criterion_4() {
    SymbolRegistry reg = SymbolRegistry::from_text(
        "tensor A rank 2\ngen -(1,2)\ntensor S rank 2\ngen +(1,2)\n");
    CanonOptions sym, anti;
    sym.metric = MetricMode::symmetric;
    anti.metric = MetricMode::antisymmetric;
    bool unit_ok = canonicalize("A(d1,-d1)", reg, sym) == "0" &&
                   canonicalize("S(d1,-d1)", reg, anti) == "0" &&
                   canonicalize("S(d1,-d1)", reg, sym) != "0";

    // the formal condition: both signs of the canonical permutation lie in
    // S x g x D, by enumeration
    bool formal_ok = true;
    for (int variant = 0; variant < 2; ++variant) {
        int degree = 2;
        auto ks = std::vector<SignedPerm>{parse_cycles(variant == 0 ? "-(1,2)" : "(1,2)", 2)};
        auto metric = variant == 0 ? MetricMode::symmetric : MetricMode::antisymmetric;
        auto s_elements = *oracle::closure(ks, degree);
        auto [kd, bd] = build_KD(DummySpec::contracted(1, metric), degree);
        auto d_elements = *oracle::closure(kd, degree);
        std::set<SignedPerm> coset;
        for (const auto& s : s_elements)
            for (const auto& d : d_elements) coset.insert(compose(s, d));  // g = id
        bool both_signs = false;
        for (const auto& x : coset)
            if (coset.count(SignedPerm(-x.sign(), x.images()))) both_signs = true;
        formal_ok = formal_ok && both_signs;
    }
    report(4, unit_ok && formal_ok,
           "zero detection: antisymmetric pair on symmetric metric and vice versa, formal "
           "both-signs condition verified by enumeration");
}

void criterion_5() {
    std::mt19937_64 rng(0xC0537);
    int perturbations = 0, mismatches = 0;
    while (perturbations < 1000) {
        auto inst = sample_instance(rng, static_cast<int>(rng() % 3));
        if (!inst) continue;
        auto spec = DummySpec::contracted(inst->n, inst->metric);
        auto base_result = double_coset_can_rep({}, inst->ks, inst->g, spec);
        for (int k = 0; k < 10 && perturbations < 1000; ++k) {
            const auto& s = inst->s_elements[rng() % inst->s_elements.size()];
            const auto& d = inst->d_elements[rng() % inst->d_elements.size()];
            auto perturbed =
                double_coset_can_rep({}, inst->ks, compose(compose(s, inst->g), d), spec);
            ++perturbations;
            if (perturbed.zero != base_result.zero) ++mismatches;
            else if (!perturbed.zero && !(perturbed.canonical == base_result.canonical))
                ++mismatches;
        }
        if (!base_result.zero) {
            auto again = double_coset_can_rep({}, inst->ks, base_result.canonical, spec);
            if (again.zero || !(again.canonical == base_result.canonical)) ++mismatches;
        }
    }

    // pipeline idempotence on bench-generated expressions up to degree 6
    SymbolRegistry reg = riemann_registry();
    int idem_checked = 0, idem_bad = 0;
    for (int degree = 1; degree <= 6; ++degree) {
        for (int sample = 0; sample < 4; ++sample) {
            std::string text =
                random_riemann_invariant(degree, detail::mix_seed(0xBE7C, degree, sample));
            std::string once = canonicalize(text, reg);
            ++idem_checked;
            if (once != "0" && canonicalize(once, reg) != once) ++idem_bad;
        }
    }
    std::ostringstream what;
    what << perturbations << " coset perturbations and " << idem_checked
         << " bench-expression idempotence checks: " << (mismatches + idem_bad) << " failures";
    report(5, mismatches == 0 && idem_bad == 0, what.str());
}

void criterion_6() {
    std::mt19937_64 rng(0xCA4D);
    int done = 0, bad = 0;
    while (done < 100) {
        auto inst = sample_instance(rng, static_cast<int>(rng() % 3));
        if (!inst) continue;
        ++done;
        size_t coset = oracle::double_coset_size(inst->s_elements, inst->g, inst->d_elements);
        std::set<SignedPerm> d_set(inst->d_elements.begin(), inst->d_elements.end());
        size_t meet = 0;
        for (const auto& s : inst->s_elements)
            if (d_set.count(conjugate(s, inst->g))) ++meet;
        // |SgD| * |S^g n D| = |S| * |D|, exact integers
        if (coset * meet != inst->s_elements.size() * inst->d_elements.size()) ++bad;
    }
    std::ostringstream what;
    what << "cardinality law |SgD| = |S||D|/|S^g n D| on " << done << " instances: " << bad
         << " violations";
    report(6, bad == 0, what.str());
}

void criterion_7() {
    BenchConfig cfg;
    cfg.min_degree = 2;
    cfg.max_degree = 12;
    cfg.samples = 20;
    cfg.seed = 20240811;
    cfg.drop_zeros = true;  // vanishing results are excluded, as in the source experiment
    auto start = std::chrono::steady_clock::now();
    BenchReport report_data = run_bench(cfg);
    double elapsed = seconds_since(start);

    // least squares slope of log(mean seconds) vs log(degree), degrees 6..12
    std::vector<double> xs, ys;
    for (const auto& s : report_data.summaries) {
        if (s.degree < 6 || s.degree > 12 || s.samples == 0) continue;
        xs.push_back(std::log(static_cast<double>(s.degree)));
        ys.push_back(std::log(static_cast<double>(s.mean_nanoseconds) / 1e9));
    }
    bool have_all = xs.size() == 7;
    double slope = 0.0;
    if (have_all) {
        double mx = 0, my = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= xs.size();
        my /= ys.size();
        double num = 0, den = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        slope = num / den;
    }
    bool ok = elapsed < 600.0 && have_all && slope <= 7.0;
    std::ostringstream what;
    what << "scaling: degrees 2-12 x 20 samples in " << elapsed
         << " s, log-log slope over degrees 6-12 = " << slope << " (required <= 7)";
    report(7, ok, what.str());
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}
