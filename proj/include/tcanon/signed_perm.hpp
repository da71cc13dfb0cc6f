#ifndef TCANON_SIGNED_PERM_HPP
#define TCANON_SIGNED_PERM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tcanon {

/// Element (eps, pi) of the signed symmetric group H (x) S_N: a sign in
/// {+1,-1} and a bijection of the points 1..N.  Values are immutable after
/// construction; all operations below are pure.
///
/// Composition is left-to-right throughout: p^(a*b) = (p^a)^b. The sign is a
/// separate factor and never encoded in the point images.
class SignedPerm {
public:
    SignedPerm() = default;

    /// Identity of the given degree.
    explicit SignedPerm(int degree) : sign_(1), images_(degree) {
        std::iota(images_.begin(), images_.end(), 1);
    }

    /// From an explicit 1-based image table. images[i-1] = image of point i.
    SignedPerm(int sign, std::vector<int> images)
        : sign_(sign), images_(std::move(images)) {
        if (sign_ != 1 && sign_ != -1)
            throw std::invalid_argument("SignedPerm: sign must be +1 or -1");
        check_bijection();
    }

    int degree() const { return static_cast<int>(images_.size()); }
    int sign() const { return sign_; }
    const std::vector<int>& images() const { return images_; }

    bool is_identity_perm() const {
        for (int i = 0; i < degree(); ++i)
            if (images_[i] != i + 1) return false;
        return true;
    }
    bool is_identity() const { return sign_ == 1 && is_identity_perm(); }

    /// Image of a point under the permutation part; the sign plays no role.
    int act(int point) const {
        if (point < 1 || point > degree())
            throw std::out_of_range("SignedPerm::act: point out of range");
        return images_[point - 1];
    }

    /// Preimage of a point (image under the inverse).
    int act_inverse(int point) const {
        if (point < 1 || point > degree())
            throw std::out_of_range("SignedPerm::act_inverse: point out of range");
        for (int i = 0; i < degree(); ++i)
            if (images_[i] == point) return i + 1;
        throw std::logic_error("SignedPerm: broken bijection");
    }

    bool operator==(const SignedPerm& o) const {
        return sign_ == o.sign_ && images_ == o.images_;
    }
    bool operator!=(const SignedPerm& o) const { return !(*this == o); }

    /// Total order usable as a map key (sign first, then image table).
    bool operator<(const SignedPerm& o) const {
        if (sign_ != o.sign_) return sign_ < o.sign_;
        return images_ < o.images_;
    }

    bool same_permutation(const SignedPerm& o) const { return images_ == o.images_; }

private:
    void check_bijection() const {
        std::vector<char> seen(images_.size(), 0);
        for (int v : images_) {
            if (v < 1 || v > degree() || seen[v - 1])
                throw std::invalid_argument("SignedPerm: images are not a bijection of 1..N");
            seen[v - 1] = 1;
        }
    }

    int sign_ = 1;
    std::vector<int> images_;
};

/// a*b, apply a first: p^(a*b) = (p^a)^b. Signs multiply.
inline SignedPerm compose(const SignedPerm& a, const SignedPerm& b) {
    if (a.degree() != b.degree())
        throw std::invalid_argument("compose: degree mismatch");
    std::vector<int> im(a.degree());
    for (int i = 0; i < a.degree(); ++i) im[i] = b.act(a.act(i + 1));
    return SignedPerm(a.sign() * b.sign(), std::move(im));
}

/// Two-sided inverse; the sign is its own inverse and is preserved.
inline SignedPerm inverse(const SignedPerm& a) {
    std::vector<int> im(a.degree());
    for (int i = 0; i < a.degree(); ++i) im[a.act(i + 1) - 1] = i + 1;
    return SignedPerm(a.sign(), std::move(im));
}

/// h^-1 * a * h. The conjugating signs cancel, so sign(result) = sign(a).
inline SignedPerm conjugate(const SignedPerm& a, const SignedPerm& h) {
    return compose(compose(inverse(h), a), h);
}

inline int act(int point, const SignedPerm& a) { return a.act(point); }

/// Disjoint-cycle text.  Grammar: sign? cycle+ with sign in {+,-} (default +),
/// cycle = '(' int (',' int)* ')'; whitespace allowed between tokens;
/// identity is "+()" or "()".
SignedPerm parse_cycles(std::string_view text, int degree);

/// Canonical cycle text: each cycle starts at its least point, cycles sorted
/// by least moved point, fixed points omitted.  Negative elements get a '-'
/// prefix, positive non-identity elements no prefix, identity prints "+()".
std::string render_cycles(const SignedPerm& a);

// ---------------------------------------------------------------------------

namespace detail {

inline void skip_ws(std::string_view s, size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
}

} // namespace detail

inline SignedPerm parse_cycles(std::string_view text, int degree) {
    size_t i = 0;
    detail::skip_ws(text, i);
    int sign = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        sign = text[i] == '-' ? -1 : 1;
        ++i;
        detail::skip_ws(text, i);
    }
    std::vector<int> im(degree);
    std::iota(im.begin(), im.end(), 1);
    std::vector<char> used(degree, 0);

    bool any_cycle = false;
    while (i < text.size()) {
        if (text[i] != '(')
            throw std::invalid_argument("parse_cycles: expected '(' at offset " + std::to_string(i));
        ++i;
        detail::skip_ws(text, i);
        std::vector<int> cyc;
        if (i < text.size() && text[i] == ')') {
            ++i;  // "()" = empty cycle, allowed for the identity
        } else {
            for (;;) {
                size_t start = i;
                while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
                if (i == start)
                    throw std::invalid_argument("parse_cycles: expected point at offset " + std::to_string(i));
                int p = std::stoi(std::string(text.substr(start, i - start)));
                if (p < 1 || p > degree)
                    throw std::invalid_argument("parse_cycles: point " + std::to_string(p) +
                                                " outside 1.." + std::to_string(degree));
                if (used[p - 1])
                    throw std::invalid_argument("parse_cycles: point " + std::to_string(p) + " repeated");
                used[p - 1] = 1;
                cyc.push_back(p);
                detail::skip_ws(text, i);
                if (i < text.size() && text[i] == ',') {
                    ++i;
                    detail::skip_ws(text, i);
                    continue;
                }
                if (i < text.size() && text[i] == ')') {
                    ++i;
                    break;
                }
                throw std::invalid_argument("parse_cycles: expected ',' or ')' at offset " + std::to_string(i));
            }
        }
        any_cycle = true;
        for (size_t k = 0; k < cyc.size(); ++k)
            im[cyc[k] - 1] = cyc[(k + 1) % cyc.size()];
        detail::skip_ws(text, i);
    }
    if (!any_cycle)
        throw std::invalid_argument("parse_cycles: no cycles in input");
    return SignedPerm(sign, std::move(im));
}

inline std::string render_cycles(const SignedPerm& a) {
    std::ostringstream out;
    std::vector<char> done(a.degree(), 0);
    bool moved = false;
    std::string body;
    for (int p = 1; p <= a.degree(); ++p) {
        if (done[p - 1] || a.act(p) == p) continue;
        moved = true;
        body += '(';
        int q = p;
        bool first = true;
        do {
            if (!first) body += ',';
            body += std::to_string(q);
            done[q - 1] = 1;
            q = a.act(q);
            first = false;
        } while (q != p);
        body += ')';
    }
    if (!moved) return a.sign() < 0 ? "-()" : "+()";
    return (a.sign() < 0 ? "-" : "") + body;
}

struct SignedPermHash {
    size_t operator()(const SignedPerm& p) const {
        size_t h = p.sign() < 0 ? 0x9e3779b97f4a7c15ull : 0x2545f4914f6cdd1dull;
        for (int v : p.images()) h = h * 1099511628211ull + static_cast<size_t>(v);
        return h;
    }
};

/// Hash of the permutation part only (ignores the sign); used by the
/// opposite-sign collision scans.
struct PermPartHash {
    size_t operator()(const std::vector<int>& im) const {
        size_t h = 1469598103934665603ull;
        for (int v : im) h = h * 1099511628211ull + static_cast<size_t>(v);
        return h;
    }
};

} // namespace tcanon

#endif
