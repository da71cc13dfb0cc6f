#ifndef TCANON_FRONTEND_HPP
#define TCANON_FRONTEND_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tcanon/dummy_canon.hpp"
#include "tcanon/expr.hpp"
#include "tcanon/free_canon.hpp"
#include "tcanon/schreier.hpp"

namespace tcanon {

enum class Commutation { commuting, anticommuting };

/// A monomial merged into one indexed object.  Slots are the concatenation of
/// the factor slots; the standard configuration puts the sorted free names on
/// slots 1..p (all pretended contravariant) followed by the dummy pairs
/// up/down in sorted-name order.
struct MergedTensor {
    int total_slots = 0;
    int free_count = 0;  // p
    int pair_count = 0;  // q
    int sign = 1;        // coefficient sign of the monomial
    MetricMode metric = MetricMode::symmetric;
    std::vector<SignedPerm> symmetry;           // merged K_S, degree total_slots
    std::vector<std::string> free_names;        // sorted
    std::vector<bool> free_up;                  // original variance, by free name
    std::vector<std::string> dummy_names;       // sorted; pair k <-> dummy_names[k-1]
    std::vector<const TensorSymbol*> factors;   // slot blocks in order
};

/// Concatenates the factors into one object: per-factor generators shifted to
/// their slot blocks, plus block exchanges between consecutive equal factors
/// (sign -1 only for anticommuting odd-rank factors).
inline MergedTensor merge_monomial(const ParsedExpression& expr, Commutation commutation,
                                   MetricMode metric) {
    MergedTensor m;
    m.metric = metric;
    m.sign = expr.sign;
    m.total_slots = expr.total_slots();

    int offset = 0;
    auto shift = [&](const SignedPerm& g, int by) {
        std::vector<int> im(m.total_slots);
        std::iota(im.begin(), im.end(), 1);
        for (int p = 1; p <= g.degree(); ++p) im[by + p - 1] = by + g.act(p);
        return SignedPerm(g.sign(), std::move(im));
    };
    std::vector<int> block_start;
    for (const auto& f : expr.factors) {
        block_start.push_back(offset);
        for (const auto& g : f.symbol->symmetry) m.symmetry.push_back(shift(g, offset));
        offset += f.symbol->rank;
        m.factors.push_back(f.symbol);
    }
    for (size_t f = 0; f + 1 < expr.factors.size(); ++f) {
        const TensorSymbol* a = expr.factors[f].symbol;
        if (a != expr.factors[f + 1].symbol) continue;
        int r = a->rank;
        std::vector<int> im(m.total_slots);
        std::iota(im.begin(), im.end(), 1);
        for (int k = 0; k < r; ++k)
            std::swap(im[block_start[f] + k], im[block_start[f + 1] + k]);
        int sign = (commutation == Commutation::anticommuting && r % 2 == 1) ? -1 : 1;
        m.symmetry.push_back(SignedPerm(sign, std::move(im)));
    }

    // classify indices
    std::map<std::string, int> count;
    std::map<std::string, bool> first_up;
    for (const auto& f : expr.factors)
        for (const auto& idx : f.indices) {
            if (++count[idx.name] == 1) first_up[idx.name] = idx.up;
        }
    for (const auto& [name, c] : count) {
        if (c == 1) {
            m.free_names.push_back(name);
            m.free_up.push_back(first_up[name]);
        } else {
            m.dummy_names.push_back(name);
        }
    }
    // maps are name-ordered already; keep free_up aligned with free_names
    m.free_count = static_cast<int>(m.free_names.size());
    m.pair_count = static_cast<int>(m.dummy_names.size());
    return m;
}

/// The element g of H (x) S_N whose action on the standard configuration
/// reproduces the given slot layout: slot k reads the content of standard
/// slot k^g.  Within a dummy pair the contravariant occurrence maps to the
/// pair's up slot; same-variance pairs (metric symmetric or antisymmetric)
/// are normalized first-occurrence-up, with no extra sign.
inline SignedPerm g_from_configuration(const MergedTensor& m, const ParsedExpression& expr) {
    std::map<std::string, int> free_slot;
    for (int k = 0; k < m.free_count; ++k) free_slot[m.free_names[k]] = k + 1;
    std::map<std::string, int> pair_index;
    for (int k = 0; k < m.pair_count; ++k) pair_index[m.dummy_names[k]] = k;

    std::map<std::string, int> seen;  // occurrences emitted so far
    std::map<std::string, bool> same_variance;
    {
        std::map<std::string, std::vector<bool>> ups;
        for (const auto& f : expr.factors)
            for (const auto& idx : f.indices) ups[idx.name].push_back(idx.up);
        for (const auto& [name, v] : ups)
            if (v.size() == 2) same_variance[name] = v[0] == v[1];
    }

    std::vector<int> images(m.total_slots);
    int slot = 0;
    for (const auto& f : expr.factors) {
        for (const auto& idx : f.indices) {
            ++slot;
            int target;
            if (auto it = free_slot.find(idx.name); it != free_slot.end()) {
                target = it->second;
            } else {
                int pi = pair_index.at(idx.name);
                int up_slot = m.free_count + 2 * pi + 1;
                bool role_up;
                if (same_variance.at(idx.name))
                    role_up = seen[idx.name] == 0;
                else
                    role_up = idx.up;
                target = role_up ? up_slot : up_slot + 1;
                ++seen[idx.name];
            }
            images[slot - 1] = target;
        }
    }
    return SignedPerm(m.sign, std::move(images));
}

/// Translation of the standard dummy machinery onto the actual dummy
/// positions after the free stage.
struct DummyTranslation {
    SignedPerm h;                  // sign +1 by construction
    std::vector<int> positions;    // l_1 < ... < l_2q
    std::vector<SignedPerm> kd;    // pattern on pairs (l1,l2),(l3,l4),...
    std::vector<int> base;         // [l1, l3, ...]
    DummySpec spec;                // for the dummy-stage search
};

/// Builds h from g2: its image list is the concatenation of the free
/// canonical positions [1..p]^{g2^-1} (in slot order) and the sorted dummy
/// positions.  Then the translated group is h^-1 K_D h, the slot pattern on
/// the sorted dummy positions paired consecutively.
inline DummyTranslation translate_dummy_group(const SignedPerm& g2, int p, int q,
                                              MetricMode metric) {
    int degree = g2.degree();
    SignedPerm g2_inv = inverse(g2);
    std::vector<int> image_list;
    for (int m = 1; m <= p; ++m) image_list.push_back(g2_inv.act(m));
    std::vector<int> dummies;
    for (int j = 1; j <= 2 * q; ++j) dummies.push_back(g2_inv.act(p + j));
    std::sort(dummies.begin(), dummies.end());
    image_list.insert(image_list.end(), dummies.begin(), dummies.end());

    DummyTranslation t;
    t.h = SignedPerm(1, image_list);
    t.positions = std::move(dummies);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < q; ++k) {
        pairs.emplace_back(t.positions[2 * k], t.positions[2 * k + 1]);
        t.base.push_back(t.positions[2 * k]);
    }
    t.spec = DummySpec::on_slots(metric, pairs);
    t.spec.translation = t.h;
    t.kd = dummy_pattern(t.spec.pair_slots, metric, degree);
    return t;
}

/// Renders the configuration obtained by acting g on the standard
/// configuration: free indices keep their declared variance, dummy pairs are
/// renamed d1..dq in first-appearance order (skipping any name a free index
/// already uses), factors are split back at their slot blocks.
inline std::string render(const MergedTensor& m, const SignedPerm& g) {
    // fresh dummy names by first appearance
    std::set<std::string> taken(m.free_names.begin(), m.free_names.end());
    std::vector<std::string> pair_name(m.pair_count);
    int next_fresh = 1;
    for (int k = 1; k <= m.total_slots; ++k) {
        int target = g.act(k);
        if (target <= m.free_count) continue;
        int pi = (target - m.free_count - 1) / 2;
        if (pair_name[pi].empty()) {
            std::string candidate;
            do {
                candidate = "d" + std::to_string(next_fresh++);
            } while (taken.count(candidate));
            pair_name[pi] = candidate;
        }
    }

    std::string out = g.sign() < 0 ? "-" : "";
    int slot = 0;
    for (size_t f = 0; f < m.factors.size(); ++f) {
        if (f) out += " * ";
        out += m.factors[f]->name;
        out += '(';
        for (int k = 0; k < m.factors[f]->rank; ++k) {
            ++slot;
            if (k) out += ',';
            int target = g.act(slot);
            if (target <= m.free_count) {
                if (!m.free_up[target - 1]) out += '-';
                out += m.free_names[target - 1];
            } else {
                int pi = (target - m.free_count - 1) / 2;
                bool up = (target - m.free_count) % 2 == 1;
                if (!up) out += '-';
                out += pair_name[pi];
            }
        }
        out += ')';
    }
    return out;
}

struct CanonOptions {
    std::optional<MetricMode> metric;             // overrides the registry mode
    Commutation commutation = Commutation::commuting;
    bool natural_base = false;                    // force b_S = [1..N-1]
    std::optional<std::vector<SignedPerm>> sgs;   // literal merged symmetry
    std::optional<std::vector<int>> base;         // literal b_S
    SearchOptions search;
};

/// Group-element trail of one canonicalization, in pipeline order.
struct PipelineTrace {
    std::optional<SignedPerm> g1, g2, h, g3, g4, g5;
    bool zero = false;
};

/// Full pipeline: parse, merge, build g1, canonicalize free indices,
/// translate the dummy machinery, canonicalize dummies, and render; "0" when
/// the expression vanishes identically.
inline std::string canonicalize(std::string_view text, const SymbolRegistry& registry,
                                const CanonOptions& options = {},
                                PipelineTrace* trace = nullptr) {
    MetricMode metric = options.metric.value_or(registry.metric());
    ParsedExpression expr = parse_expression(text, registry, metric);
    MergedTensor merged = merge_monomial(expr, options.commutation, metric);
    int degree = merged.total_slots;
    int p = merged.free_count;
    int q = merged.pair_count;

    const std::vector<SignedPerm>& gens = options.sgs ? *options.sgs : merged.symmetry;
    std::vector<int> b_S;
    if (options.base)
        b_S = *options.base;
    else if (options.natural_base)
        b_S = extend_base({}, degree);
    else
        b_S = schreier_sims(gens, degree).base;

    SignedPerm g1 = g_from_configuration(merged, expr);
    if (trace) trace->g1 = g1;

    SignedPerm g2 = g1;
    if (p > 0) {
        CanonResult free_result = free_can_rep_placing(g1, b_S, gens, p, options.search);
        if (free_result.zero) {
            if (trace) trace->zero = true;
            return "0";
        }
        g2 = free_result.canonical;
    }
    if (trace) trace->g2 = g2;

    SignedPerm g5 = g2;
    if (q > 0) {
        DummyTranslation tr = translate_dummy_group(g2, p, q, metric);
        SignedPerm g3 = compose(g2, tr.h);
        if (trace) {
            trace->h = tr.h;
            trace->g3 = g3;
        }

        // stabilizer of the free canonical positions, with the remaining
        // base in the original extended order
        std::vector<SignedPerm> ks_dummy;
        std::vector<int> bs_dummy;
        if (p > 0) {
            std::vector<int> free_positions(tr.h.images().begin(),
                                            tr.h.images().begin() + p);
            std::vector<int> hint = free_positions;
            std::set<int> frees(free_positions.begin(), free_positions.end());
            for (int b : extend_base(b_S, degree))
                if (!frees.count(b)) {
                    hint.push_back(b);
                    bs_dummy.push_back(b);
                }
            StrongGenSet chain = schreier_sims(gens, hint, degree, hint.size());
            for (const auto& s : chain.generators) {
                bool fixes = true;
                for (int f : free_positions)
                    if (s.act(f) != f) { fixes = false; break; }
                if (fixes) ks_dummy.push_back(s);
            }
        } else {
            ks_dummy = gens;
            bs_dummy = b_S;
        }

        CanonResult dummy_result =
            double_coset_can_rep(bs_dummy, ks_dummy, g3, tr.spec, options.search);
        if (dummy_result.zero) {
            if (trace) trace->zero = true;
            return "0";
        }
        if (trace) trace->g4 = dummy_result.canonical;
        g5 = compose(dummy_result.canonical, inverse(tr.h));
    }
    // q == 0 means every slot is free, so the free stage already ran the
    // whole base and g2 is the canonical element
    if (trace) trace->g5 = g5;
    return render(merged, g5);
}

} // namespace tcanon

#endif
