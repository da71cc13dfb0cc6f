#ifndef TCANON_SCHREIER_HPP
#define TCANON_SCHREIER_HPP

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tcanon/signed_perm.hpp"

namespace tcanon {

/// Orbit of a root point together with the BFS tree that reconstructs, for
/// every orbit point p, a group word mapping root -> p (trace).  BFS runs
/// with the generators in declaration order, which fixes the tree and hence
/// every trace word.  Transversal elements are materialized during the BFS,
/// so trace() is a lookup.
class SchreierVector {
public:
    SchreierVector() = default;

    SchreierVector(int root, const std::vector<SignedPerm>& generators, int degree)
        : root_(root), degree_(degree),
          gen_of_(degree + 1, -1), pred_of_(degree + 1, 0), trans_(degree + 1) {
        if (root < 1 || root > degree)
            throw std::invalid_argument("SchreierVector: root out of range");
        orbit_.push_back(root);
        trans_[root] = SignedPerm(degree);
        std::vector<char> seen(degree + 1, 0);
        seen[root] = 1;
        for (size_t head = 0; head < orbit_.size(); ++head) {
            int p = orbit_[head];
            for (size_t gi = 0; gi < generators.size(); ++gi) {
                int q = generators[gi].act(p);
                if (!seen[q]) {
                    seen[q] = 1;
                    gen_of_[q] = static_cast<int>(gi);
                    pred_of_[q] = p;
                    trans_[q] = compose(trans_[p], generators[gi]);
                    orbit_.push_back(q);
                }
            }
        }
    }

    int root() const { return root_; }
    const std::vector<int>& orbit() const { return orbit_; }
    bool contains(int p) const {
        return p >= 1 && p <= degree_ && (p == root_ || gen_of_[p] >= 0);
    }

    /// Index of the generator that discovered p, and p's BFS predecessor.
    int generator_index_of(int p) const { return gen_of_[p]; }
    int predecessor_of(int p) const { return pred_of_[p]; }

    /// Group element u with root^u = p, the composed BFS word.  Signs of the
    /// generators ride along.  Throws if p is not in the orbit, which signals
    /// a logic bug in the caller.
    const SignedPerm& trace(int p) const {
        if (!contains(p))
            throw std::logic_error("SchreierVector::trace: point " + std::to_string(p) +
                                   " not reachable from root " + std::to_string(root_));
        return trans_[p];
    }

private:
    int root_ = 0;
    int degree_ = 0;
    std::vector<int> orbit_;
    std::vector<int> gen_of_;
    std::vector<int> pred_of_;
    std::vector<SignedPerm> trans_;
};

/// Orbit of a point, in BFS discovery order.
inline std::vector<int> orbit_of(int point, const std::vector<SignedPerm>& generators, int degree) {
    return SchreierVector(point, generators, degree).orbit();
}

/// All orbits of the generator set as a partition of 1..degree, each orbit in
/// BFS order, orbits ordered by least member.
inline std::vector<std::vector<int>> all_orbits(const std::vector<SignedPerm>& generators, int degree) {
    std::vector<char> seen(degree + 1, 0);
    std::vector<std::vector<int>> parts;
    for (int p = 1; p <= degree; ++p) {
        if (seen[p]) continue;
        std::vector<int> orb = orbit_of(p, generators, degree);
        for (int q : orb) seen[q] = 1;
        parts.push_back(std::move(orb));
    }
    return parts;
}

/// Generators that fix `point`: stabilizer restriction by generator dropping.
/// Yields a strong generating set for the next level only when `point` is the
/// leading base point of the current level.
inline std::vector<SignedPerm> stabilizer_restrict(const std::vector<SignedPerm>& gens, int point) {
    std::vector<SignedPerm> out;
    for (const auto& g : gens)
        if (g.act(point) == point) out.push_back(g);
    return out;
}

/// Completes a base to cover S_N: appends every missing point of 1..N-1 in
/// increasing order.  The result defines the total point order b1 < b2 < ...
/// used for every "least point" comparison; unlisted points (normally just N)
/// rank last, among themselves in increasing order.
inline std::vector<int> extend_base(std::vector<int> base, int degree) {
    std::vector<char> have(degree + 1, 0);
    for (int b : base) {
        if (b < 1 || b > degree)
            throw std::invalid_argument("extend_base: base point out of range");
        if (have[b]) throw std::invalid_argument("extend_base: duplicate base point");
        have[b] = 1;
    }
    for (int p = 1; p < degree; ++p)
        if (!have[p]) base.push_back(p);
    return base;
}

/// rank[p] = position of p in the total order induced by an extended base.
inline std::vector<int> base_rank(const std::vector<int>& extended, int degree) {
    std::vector<int> rank(degree + 1, -1);
    int next = 0;
    for (int b : extended) rank[b] = next++;
    for (int p = 1; p <= degree; ++p)
        if (rank[p] < 0) rank[p] = next++;
    return rank;
}

/// Base change for the dummy-structure group D: drop the pair of the
/// previously fixed point, then move the representative of p_i's pair to the
/// front, keeping the order of the rest.  rep_of_point maps any slot to its
/// pair's designated representative (the pair's first slot), 0 for slots
/// outside every pair.  Representatives of already dropped pairs stay absent.
inline std::vector<int> d_base_change(std::vector<int> reps,
                                      const std::vector<int>& rep_of_point,
                                      std::optional<int> p_prev, int p_i) {
    if (p_prev) {
        int r = rep_of_point[*p_prev];
        if (r == 0) throw std::invalid_argument("d_base_change: p_prev outside all pairs");
        std::erase(reps, r);
    }
    int r = rep_of_point[p_i];
    if (r == 0) throw std::invalid_argument("d_base_change: p_i outside all pairs");
    auto it = std::find(reps.begin(), reps.end(), r);
    if (it != reps.end())
        std::rotate(reps.begin(), it, it + 1);
    return reps;
}

/// Base and strong generating set with per-level Schreier structures: level i
/// holds the generators fixing base[0..i-1] pointwise and the orbit of
/// base[i] under them.
///
/// -id fixes every point, so the point-based chain cannot see it; it is
/// tracked separately in has_negative_identity, and membership and order
/// account for it.
class StrongGenSet {
public:
    int degree = 0;
    std::vector<int> base;
    std::vector<SignedPerm> generators;
    bool has_negative_identity = false;

    size_t levels() const { return base.size(); }

    const std::vector<SignedPerm>& level_generators(size_t level) const {
        rebuild_if_needed();
        return level_gens_[level];
    }
    const SchreierVector& level_orbit(size_t level) const {
        rebuild_if_needed();
        return level_sv_[level];
    }

    /// Product of level orbit sizes (times 2 when -id is present).  Throws on
    /// u64 overflow; meant for groups small enough to reason about.
    unsigned long long order() const {
        rebuild_if_needed();
        unsigned long long n = has_negative_identity ? 2 : 1;
        for (const auto& sv : level_sv_) {
            unsigned long long o = sv.orbit().size();
            if (n > ~0ull / o) throw std::overflow_error("StrongGenSet::order overflow");
            n *= o;
        }
        return n;
    }

    bool contains(const SignedPerm& x) const {
        auto [residue, level] = sift(x);
        (void)level;
        if (!residue.is_identity_perm()) return false;
        return residue.sign() == 1 || has_negative_identity;
    }

    /// Strips x through the chain: returns (residue, levels passed); the
    /// residue fixes base[0..level-1].
    std::pair<SignedPerm, size_t> sift(const SignedPerm& x) const {
        rebuild_if_needed();
        SignedPerm r = x;
        for (size_t i = 0; i < base.size(); ++i) {
            int img = r.act(base[i]);
            if (img == base[i]) continue;
            if (!level_sv_[i].contains(img)) return {r, i};
            r = compose(r, inverse(level_sv_[i].trace(img)));
        }
        return {r, base.size()};
    }

    void invalidate() { dirty_ = true; }

private:
    void rebuild_if_needed() const {
        if (!dirty_) return;
        level_gens_.assign(base.size(), {});
        level_sv_.assign(base.size(), {});
        for (size_t i = 0; i < base.size(); ++i) {
            for (const auto& g : generators) {
                bool fixes_prefix = true;
                for (size_t k = 0; k < i; ++k)
                    if (g.act(base[k]) != base[k]) { fixes_prefix = false; break; }
                if (fixes_prefix) level_gens_[i].push_back(g);
            }
            level_sv_[i] = SchreierVector(base[i], level_gens_[i], degree);
        }
        dirty_ = false;
    }

    mutable bool dirty_ = true;
    mutable std::vector<std::vector<SignedPerm>> level_gens_;
    mutable std::vector<SchreierVector> level_sv_;
};

/// Deterministic Schreier-Sims: builds a verified base and strong generating
/// set from arbitrary generators.  No randomization; identical inputs give
/// identical chains.
///
/// forced_prefix installs that many leading base_hint points as base levels
/// unconditionally (possibly with trivial orbits); the canonicalizer relies
/// on this to keep stabilizer descent aligned with a prescribed point order.
/// Beyond the forced prefix, base points are picked from the remaining hint
/// in order (skipping points that would head a trivial level), then by least
/// moved point.
inline StrongGenSet schreier_sims(const std::vector<SignedPerm>& input_gens,
                                  const std::vector<int>& base_hint, int degree,
                                  size_t forced_prefix = 0) {
    struct Level {
        int b = 0;
        std::vector<SignedPerm> gens;
        SchreierVector sv;
    };
    std::vector<Level> levels;
    std::vector<SignedPerm> strong;
    bool neg_id = false;

    auto in_base = [&](int p) {
        for (const auto& l : levels)
            if (l.b == p) return true;
        return false;
    };

    auto rebuild_level = [&](size_t i) {
        levels[i].gens.clear();
        for (const auto& g : strong) {
            bool fixes_prefix = true;
            for (size_t k = 0; k < i; ++k)
                if (g.act(levels[k].b) != levels[k].b) { fixes_prefix = false; break; }
            if (fixes_prefix) levels[i].gens.push_back(g);
        }
        levels[i].sv = SchreierVector(levels[i].b, levels[i].gens, degree);
    };

    if (forced_prefix > base_hint.size())
        throw std::invalid_argument("schreier_sims: forced_prefix exceeds hint size");
    for (size_t k = 0; k < forced_prefix; ++k) {
        levels.push_back({base_hint[k], {}, {}});
        rebuild_level(levels.size() - 1);
    }

    auto append_base_point = [&](const SignedPerm& moved_by) {
        for (size_t k = forced_prefix; k < base_hint.size(); ++k) {
            int c = base_hint[k];
            if (!in_base(c) && moved_by.act(c) != c) {
                levels.push_back({c, {}, {}});
                rebuild_level(levels.size() - 1);
                return;
            }
        }
        for (int p = 1; p <= degree; ++p) {
            if (!in_base(p) && moved_by.act(p) != p) {
                levels.push_back({p, {}, {}});
                rebuild_level(levels.size() - 1);
                return;
            }
        }
        throw std::logic_error("schreier_sims: element moves no point");
    };

    // Sift x through levels >= from.  A surviving nontrivial residue becomes
    // a strong generator (extending the base when it fixes all current base
    // points); returns the index of the deepest level whose prefix the
    // residue fixes, or SIZE_MAX when nothing was added.
    auto add_residue = [&](SignedPerm x, size_t from) -> size_t {
        for (size_t i = from; i < levels.size(); ++i) {
            int img = x.act(levels[i].b);
            if (img == levels[i].b) continue;
            if (!levels[i].sv.contains(img)) break;
            x = compose(x, inverse(levels[i].sv.trace(img)));
        }
        if (x.is_identity_perm()) {
            if (x.sign() == -1) neg_id = true;
            return SIZE_MAX;
        }
        size_t j = 0;
        while (j < levels.size() && x.act(levels[j].b) == levels[j].b) ++j;
        if (j == levels.size()) append_base_point(x);
        strong.push_back(std::move(x));
        for (size_t k = 0; k <= j && k < levels.size(); ++k) rebuild_level(k);
        return j;
    };

    for (const auto& g : input_gens) {
        if (g.degree() != degree)
            throw std::invalid_argument("schreier_sims: generator degree mismatch");
        if (g.is_identity()) continue;
        add_residue(g, 0);
    }

    // Verify levels bottom-up.  An addition at level j only changes levels
    // <= j, so verification restarts there; deeper levels stay verified.
    size_t i = levels.size();
    while (i-- > 0) {
        bool redo = true;
        while (redo) {
            redo = false;
            const auto& lv = levels[i];
            for (size_t oi = 0; oi < lv.sv.orbit().size() && !redo; ++oi) {
                int delta = lv.sv.orbit()[oi];
                const SignedPerm u = lv.sv.trace(delta);
                for (const auto& g : lv.gens) {
                    SignedPerm h = compose(compose(u, g), inverse(lv.sv.trace(g.act(delta))));
                    if (h.is_identity()) continue;
                    size_t j = add_residue(std::move(h), i + 1);
                    if (j != SIZE_MAX) {
                        i = j;  // j > i: the residue fixes base[0..i]
                        redo = true;
                        break;
                    }
                }
            }
        }
    }

    StrongGenSet out;
    out.degree = degree;
    out.has_negative_identity = neg_id;
    for (const auto& l : levels) out.base.push_back(l.b);
    out.generators = std::move(strong);
    out.invalidate();
    return out;
}

inline StrongGenSet schreier_sims(const std::vector<SignedPerm>& gens, int degree) {
    return schreier_sims(gens, {}, degree);
}

/// Chain whose base is exactly extend_base(base, degree), level for level.
inline StrongGenSet schreier_sims_on_extended_base(const std::vector<SignedPerm>& gens,
                                                   const std::vector<int>& base, int degree) {
    std::vector<int> ext = extend_base(base, degree);
    return schreier_sims(gens, ext, degree, ext.size());
}

} // namespace tcanon

#endif
