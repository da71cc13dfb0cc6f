#ifndef TCANON_DUMMY_CANON_HPP
#define TCANON_DUMMY_CANON_HPP

#include <cassert>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tcanon/schreier.hpp"
#include "tcanon/signed_perm.hpp"

namespace tcanon {

enum class MetricMode { symmetric, antisymmetric, none };

inline const char* to_string(MetricMode m) {
    switch (m) {
        case MetricMode::symmetric: return "symmetric";
        case MetricMode::antisymmetric: return "antisymmetric";
        case MetricMode::none: return "none";
    }
    return "?";
}

/// Dummy-pair structure: n pairs of slots, the metric symmetry mode, and
/// optionally the conjugator that relocated the standard slot pattern.
struct DummySpec {
    int pair_count = 0;
    MetricMode metric = MetricMode::symmetric;
    std::vector<std::pair<int, int>> pair_slots;  // designated representative first
    std::optional<SignedPerm> translation;

    /// Fully contracted layout: pairs (1,2),(3,4),...,(2n-1,2n).
    static DummySpec contracted(int n, MetricMode m) {
        DummySpec s;
        s.pair_count = n;
        s.metric = m;
        for (int k = 1; k <= n; ++k) s.pair_slots.emplace_back(2 * k - 1, 2 * k);
        return s;
    }

    /// Pairs on explicit slots.
    static DummySpec on_slots(MetricMode m, std::vector<std::pair<int, int>> slots) {
        DummySpec s;
        s.pair_count = static_cast<int>(slots.size());
        s.metric = m;
        s.pair_slots = std::move(slots);
        return s;
    }
};

/// Pattern generators for the dummy group on an ordered pair list: one swap
/// per pair (sign from the metric, none for metric 'none') and one exchange
/// per consecutive pair.  This is a strong generating set with respect to the
/// base of pair representatives in list order.
inline std::vector<SignedPerm> dummy_pattern(const std::vector<std::pair<int, int>>& pairs,
                                             MetricMode metric, int degree) {
    auto transposition = [&](int a, int b, int sign) {
        std::vector<int> im(degree);
        std::iota(im.begin(), im.end(), 1);
        std::swap(im[a - 1], im[b - 1]);
        return SignedPerm(sign, std::move(im));
    };
    auto exchange = [&](std::pair<int, int> x, std::pair<int, int> y) {
        std::vector<int> im(degree);
        std::iota(im.begin(), im.end(), 1);
        std::swap(im[x.first - 1], im[y.first - 1]);
        std::swap(im[x.second - 1], im[y.second - 1]);
        return SignedPerm(1, std::move(im));
    };

    std::vector<SignedPerm> out;
    if (metric != MetricMode::none) {
        int sign = metric == MetricMode::symmetric ? 1 : -1;
        for (auto [a, b] : pairs) out.push_back(transposition(a, b, sign));
    }
    for (size_t k = 0; k + 1 < pairs.size(); ++k)
        out.push_back(exchange(pairs[k], pairs[k + 1]));
    return out;
}

/// Generators and base of the dummy group D described by the spec.
inline std::pair<std::vector<SignedPerm>, std::vector<int>>
build_KD(const DummySpec& spec, int degree) {
    std::vector<char> used(degree + 1, 0);
    for (auto [a, b] : spec.pair_slots) {
        if (a < 1 || a > degree || b < 1 || b > degree || a == b)
            throw std::invalid_argument("build_KD: pair slot out of range");
        if (used[a] || used[b]) throw std::invalid_argument("build_KD: overlapping pair slots");
        used[a] = used[b] = 1;
    }
    std::vector<int> base;
    for (auto [a, b] : spec.pair_slots) base.push_back(a);
    return {dummy_pattern(spec.pair_slots, spec.metric, degree), base};
}

/// Either the canonical representative of the (double) coset, with witnesses
/// canonical = s * g * d, or Zero: both signs of the canonical permutation
/// lie in the coset, so the expression vanishes identically.
struct CanonResult {
    bool zero = false;
    SignedPerm canonical, witness_s, witness_d;

    static CanonResult make_zero() {
        CanonResult r;
        r.zero = true;
        return r;
    }
    static CanonResult make(SignedPerm can, SignedPerm s, SignedPerm d) {
        CanonResult r;
        r.canonical = std::move(can);
        r.witness_s = std::move(s);
        r.witness_d = std::move(d);
        return r;
    }
};

/// One TAB entry: the point list L and its witness pair (s, d), with the
/// product s*g*d cached.
struct TabEntry {
    std::vector<int> list;
    SignedPerm s, d, sgd;
};

/// F2: the coset element s*g*d of a TAB entry.
inline SignedPerm coset_element(const TabEntry& e, const SignedPerm& g) {
    return compose(compose(e.s, g), e.d);
}

/// F1: the points of every dummy-group orbit that meets (delta_b)^{sgd}.
/// Equals ((delta_b)^{sgd}) closed under the orbit partition.
inline std::vector<int> f1_images(const TabEntry& e, const SignedPerm& g,
                                  const std::vector<std::vector<int>>& dummy_orbits,
                                  const std::vector<int>& delta_b) {
    SignedPerm sgd = coset_element(e, g);
    int degree = sgd.degree();
    std::vector<char> hit(degree + 1, 0);
    for (int p : delta_b) hit[sgd.act(p)] = 1;
    std::vector<int> out;
    for (const auto& orbit : dummy_orbits) {
        bool meets = false;
        for (int p : orbit)
            if (hit[p]) { meets = true; break; }
        if (meets) out.insert(out.end(), orbit.begin(), orbit.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// NEXT: (delta_b)^s intersected with (delta_p)^{(g d)^-1}, ascending.
inline std::vector<int> next_points(const std::vector<int>& delta_b, const SignedPerm& s,
                                    const std::vector<int>& delta_p, const SignedPerm& g,
                                    const SignedPerm& d) {
    SignedPerm gd_inv = inverse(compose(g, d));
    int degree = s.degree();
    std::vector<char> left(degree + 1, 0);
    for (int p : delta_b) left[s.act(p)] = 1;
    std::vector<int> out;
    for (int x : delta_p)
        if (left[gd_inv.act(x)]) out.push_back(gd_inv.act(x));
    std::sort(out.begin(), out.end());
    return out;
}

/// True iff the current coset elements contain two equal permutations of
/// opposite sign; the whole double coset then collapses to zero.
inline bool zero_check(const std::vector<TabEntry>& entries, const SignedPerm& g) {
    std::unordered_map<std::vector<int>, int, PermPartHash> sign_of;
    for (const auto& e : entries) {
        SignedPerm x = coset_element(e, g);
        auto [it, inserted] = sign_of.try_emplace(x.images(), x.sign());
        if (!inserted && it->second != x.sign()) return true;
    }
    return false;
}

struct SearchOptions {
    /// Abort (with a diagnostic) rather than let ALPHA exhaust memory; the
    /// search is exponential in the worst case.
    size_t alpha_cap = 1'000'000;
};

struct AlphaCapExceeded : std::runtime_error {
    explicit AlphaCapExceeded(size_t cap)
        : std::runtime_error("coset search: ALPHA exceeded cap of " + std::to_string(cap) +
                             " entries") {}
};

/// Level-by-level canonical representative search over S x g x D.  With an
/// empty pair list and the level count of the full extended base this runs
/// the single-coset (free index) algorithm: ALPHA then never branches.
class CosetSearch {
public:
    CosetSearch(const std::vector<int>& b_S, const std::vector<SignedPerm>& K_S,
                SignedPerm g, DummySpec spec, SearchOptions options = {})
        : g_(std::move(g)), spec_(std::move(spec)), options_(options) {
        degree_ = g_.degree();
        chain_ = schreier_sims_on_extended_base(K_S, b_S, degree_);
        ext_ = chain_.base;
        rank_ = base_rank(ext_, degree_);

        auto [kd, bd] = build_KD(spec_, degree_);
        (void)kd;
        (void)bd;
        active_pairs_ = spec_.pair_slots;
        rep_of_.assign(degree_ + 1, 0);
        for (auto [a, b] : spec_.pair_slots) rep_of_[a] = rep_of_[b] = a;

        negative_gate_ = spec_.metric == MetricMode::antisymmetric && spec_.pair_count > 0;
        for (const auto& s : chain_.generators)
            if (s.sign() < 0) negative_gate_ = true;

        levels_total_ = spec_.pair_count > 0
                            ? std::min<size_t>(2 * spec_.pair_count - 1, ext_.size())
                            : 0;
        entries_.push_back(TabEntry{{}, SignedPerm(degree_), SignedPerm(degree_), g_});

        if (chain_.has_negative_identity) zero_ = true;  // -id in S: T = -T
    }

    /// Runs levels for the single-coset algorithm over the whole base.  With
    /// place_count > 0 the search stops early, as soon as the contents
    /// 1..place_count all appear among the chosen images: the remaining
    /// levels would only pin contents the next pipeline stage re-frees.
    void set_free_mode(int place_count = 0) {
        levels_total_ = ext_.size();
        place_target_ = place_count;
    }

    bool finished() const {
        return zero_ || level_ >= levels_total_ ||
               (place_target_ > 0 && placed_ >= place_target_);
    }
    bool is_zero() const { return zero_; }
    size_t level() const { return level_; }
    const std::vector<int>& chosen_images() const { return chosen_; }
    const std::vector<std::vector<int>>& images_history() const { return images_history_; }
    const std::vector<TabEntry>& entries() const { return entries_; }

    /// IMAGES of the upcoming level (union of F1 over ALPHA).
    std::vector<int> images() const {
        auto pairs = active_pairs_;
        drop_pair_of_prev(pairs);
        auto dummy_orbits = all_orbits(dummy_pattern(pairs, spec_.metric, degree_), degree_);
        const auto& delta_b = chain_.level_orbit(level_).orbit();
        std::vector<char> in(degree_ + 1, 0);
        std::vector<int> out;
        for (const auto& e : entries_)
            for (int p : f1_images(e, g_, dummy_orbits, delta_b))
                if (!in[p]) {
                    in[p] = 1;
                    out.push_back(p);
                }
        std::sort(out.begin(), out.end());
        if (out.empty()) throw std::logic_error("coset search: empty IMAGES with nonempty ALPHA");
        return out;
    }

    void step() {
        if (finished()) return;

        drop_pair_of_prev(active_pairs_);

        const SchreierVector& nu_S = chain_.level_orbit(level_);
        const std::vector<int>& delta_b = nu_S.orbit();

        std::vector<int> imgs = images();
        images_history_.push_back(imgs);
        int p_i = imgs[0];
        for (int cand : imgs)
            if (rank_[cand] < rank_[p_i]) p_i = cand;

        // move p_i's pair to the front; the regenerated pattern is then a
        // strong generating set rooted at the new leading representative
        if (rep_of_[p_i] != 0) {
            for (size_t k = 0; k < active_pairs_.size(); ++k) {
                if (active_pairs_[k].first == rep_of_[p_i]) {
                    std::rotate(active_pairs_.begin(), active_pairs_.begin() + k,
                                active_pairs_.begin() + k + 1);
                    break;
                }
            }
        }
        auto kd = dummy_pattern(active_pairs_, spec_.metric, degree_);
        SchreierVector nu_D(p_i, kd, degree_);
        const std::vector<int>& delta_p = nu_D.orbit();

        std::vector<TabEntry> children;
        for (const auto& e : entries_) {
            SignedPerm s_inv = inverse(e.s);
            SignedPerm gd = compose(g_, e.d);
            for (int j : next_points(delta_b, e.s, delta_p, g_, e.d)) {
                TabEntry child;
                child.s = compose(nu_S.trace(s_inv.act(j)), e.s);
                child.d = compose(e.d, inverse(nu_D.trace(gd.act(j))));
                child.sgd = compose(compose(child.s, g_), child.d);
                child.list = e.list;
                child.list.push_back(j);
#ifndef NDEBUG
                for (size_t k = 0; k < chosen_.size(); ++k)
                    assert(child.sgd.act(ext_[k]) == chosen_[k]);
                assert(child.sgd.act(ext_[level_]) == p_i);
#endif
                children.push_back(std::move(child));
                if (children.size() > options_.alpha_cap) throw AlphaCapExceeded(options_.alpha_cap);
            }
        }
        if (children.empty())
            throw std::logic_error("coset search: no TAB children for chosen image");
        entries_ = std::move(children);
        chosen_.push_back(p_i);
        if (place_target_ > 0 && p_i <= place_target_) ++placed_;
        prev_p_ = p_i;
        ++level_;

        if (negative_gate_ && zero_check(entries_, g_)) {
            zero_ = true;
            return;
        }
    }

    CanonResult result() {
        while (!finished()) step();
        if (zero_) return CanonResult::make_zero();
        const TabEntry& first = entries_.front();
        return CanonResult::make(first.sgd, first.s, first.d);
    }

private:
    void drop_pair_of_prev(std::vector<std::pair<int, int>>& pairs) const {
        if (!prev_p_ || rep_of_[*prev_p_] == 0) return;
        int rep = rep_of_[*prev_p_];
        std::erase_if(pairs, [&](const auto& pr) { return pr.first == rep; });
    }

    int degree_ = 0;
    SignedPerm g_;
    DummySpec spec_;
    SearchOptions options_;
    StrongGenSet chain_;
    std::vector<int> ext_;
    std::vector<int> rank_;
    std::vector<std::pair<int, int>> active_pairs_;
    std::vector<int> rep_of_;
    bool negative_gate_ = false;
    bool zero_ = false;
    size_t level_ = 0;
    size_t levels_total_ = 0;
    int place_target_ = 0;
    int placed_ = 0;
    std::optional<int> prev_p_;
    std::vector<int> chosen_;
    std::vector<std::vector<int>> images_history_;
    std::vector<TabEntry> entries_;
};

/// Canonical representative of the double coset S x g x D, or Zero.  K_S is
/// verified/completed against b_S first; all "least point" comparisons use
/// the extend_base order of b_S.
inline CanonResult double_coset_can_rep(const std::vector<int>& b_S,
                                        const std::vector<SignedPerm>& K_S,
                                        const SignedPerm& g, const DummySpec& spec,
                                        const SearchOptions& options = {}) {
    if (spec.pair_count == 0) {
        CosetSearch probe(b_S, K_S, g, spec, options);  // still detects -id in S
        if (probe.is_zero()) return CanonResult::make_zero();
        return CanonResult::make(g, SignedPerm(g.degree()), SignedPerm(g.degree()));
    }
    CosetSearch search(b_S, K_S, g, spec, options);
    return search.result();
}

} // namespace tcanon

#endif
