#ifndef TCANON_EXPR_HPP
#define TCANON_EXPR_HPP

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tcanon/dummy_canon.hpp"
#include "tcanon/signed_perm.hpp"

namespace tcanon {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An indexed-object kind: name, slot count, and its slot symmetries as
/// signed permutations of degree rank.
struct TensorSymbol {
    std::string name;
    int rank = 0;
    std::vector<SignedPerm> symmetry;
    std::optional<std::vector<int>> declared_base;
};

/// Symbol table plus the metric symmetry mode for dummy contractions.
class SymbolRegistry {
public:
    void define(TensorSymbol sym) {
        if (sym.name.empty()) throw ParseError("tensor name must not be empty");
        for (const auto& g : sym.symmetry)
            if (g.degree() != sym.rank)
                throw ParseError("tensor " + sym.name + ": generator degree != rank");
        if (!symbols_.emplace(sym.name, sym).second)
            throw ParseError("tensor " + sym.name + " defined twice");
    }

    const TensorSymbol* find(const std::string& name) const {
        auto it = symbols_.find(name);
        return it == symbols_.end() ? nullptr : &it->second;
    }

    MetricMode metric() const { return metric_; }
    void set_metric(MetricMode m) { metric_ = m; }

    /// Line-oriented symmetry-definition format:
    ///   tensor NAME rank R
    ///   gen +-(c1,c2,...)(...)      attaches to the last tensor
    ///   metric symmetric|antisymmetric|none
    ///   # comment
    static SymbolRegistry from_stream(std::istream& in) {
        SymbolRegistry reg;
        std::optional<TensorSymbol> current;
        std::string line;
        int lineno = 0;
        auto flush = [&] {
            if (current) {
                reg.define(*current);
                current.reset();
            }
        };
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::string word;
            if (!(ls >> word)) continue;
            auto fail = [&](const std::string& why) {
                throw ParseError("defs line " + std::to_string(lineno) + ": " + why);
            };
            if (word == "tensor") {
                flush();
                TensorSymbol sym;
                std::string kw;
                if (!(ls >> sym.name >> kw >> sym.rank) || kw != "rank" || sym.rank < 1)
                    fail("expected 'tensor NAME rank R'");
                current = sym;
            } else if (word == "gen") {
                if (!current) fail("'gen' before any 'tensor'");
                std::string rest;
                std::getline(ls, rest);
                try {
                    current->symmetry.push_back(parse_cycles(rest, current->rank));
                } catch (const std::invalid_argument& e) {
                    fail(e.what());
                }
            } else if (word == "metric") {
                std::string mode;
                if (!(ls >> mode)) fail("expected metric mode");
                if (mode == "symmetric")
                    reg.metric_ = MetricMode::symmetric;
                else if (mode == "antisymmetric")
                    reg.metric_ = MetricMode::antisymmetric;
                else if (mode == "none")
                    reg.metric_ = MetricMode::none;
                else
                    fail("unknown metric mode '" + mode + "'");
            } else {
                fail("unknown directive '" + word + "'");
            }
        }
        flush();
        return reg;
    }

    static SymbolRegistry from_text(const std::string& text) {
        std::istringstream in(text);
        return from_stream(in);
    }

    static SymbolRegistry from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open defs file: " + path);
        return from_stream(in);
    }

private:
    std::map<std::string, TensorSymbol> symbols_;
    MetricMode metric_ = MetricMode::symmetric;
};

struct IndexRef {
    std::string name;
    bool up = true;

    bool operator==(const IndexRef&) const = default;
};

struct IndexedFactor {
    const TensorSymbol* symbol = nullptr;
    std::vector<IndexRef> indices;
};

struct ParsedExpression {
    int sign = 1;
    std::vector<IndexedFactor> factors;

    int total_slots() const {
        int n = 0;
        for (const auto& f : factors) n += f.symbol->rank;
        return n;
    }
};

/// expr = sign? factor ('*' factor)*; factor = NAME '(' idx (',' idx)* ')';
/// idx = '-'? NAME; NAME = [A-Za-z][A-Za-z0-9]*.  '-' on the expression is a
/// negative coefficient, on an index a covariant slot.  Validates arity,
/// dummy pairing (an index may appear at most twice; twice with the same
/// variance is rejected when the metric is 'none').
inline ParsedExpression parse_expression(std::string_view text, const SymbolRegistry& registry,
                                         std::optional<MetricMode> metric_override = {}) {
    MetricMode metric = metric_override.value_or(registry.metric());
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                                   text[i] == '\r'))
            ++i;
    };
    auto context = [&](size_t at) {
        return " at offset " + std::to_string(at);
    };
    auto name = [&]() -> std::string {
        skip_ws();
        size_t start = i;
        if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i])))
            throw ParseError("expected a name" + context(i));
        ++i;
        while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
        return std::string(text.substr(start, i - start));
    };

    ParsedExpression out;
    skip_ws();
    if (i < text.size() && text[i] == '-') {
        out.sign = -1;
        ++i;
    }
    for (;;) {
        std::string sym_name = name();
        const TensorSymbol* sym = registry.find(sym_name);
        if (!sym) throw ParseError("unknown tensor '" + sym_name + "'" + context(i));
        IndexedFactor factor;
        factor.symbol = sym;
        skip_ws();
        if (i >= text.size() || text[i] != '(')
            throw ParseError("expected '(' after '" + sym_name + "'" + context(i));
        ++i;
        for (;;) {
            skip_ws();
            IndexRef idx;
            if (i < text.size() && text[i] == '-') {
                idx.up = false;
                ++i;
            }
            idx.name = name();
            factor.indices.push_back(std::move(idx));
            skip_ws();
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            if (i < text.size() && text[i] == ')') {
                ++i;
                break;
            }
            throw ParseError("expected ',' or ')' in index list of '" + sym_name + "'" +
                             context(i));
        }
        if (static_cast<int>(factor.indices.size()) != sym->rank)
            throw ParseError("tensor '" + sym_name + "' has rank " + std::to_string(sym->rank) +
                             " but " + std::to_string(factor.indices.size()) + " indices given");
        out.factors.push_back(std::move(factor));
        skip_ws();
        if (i < text.size() && text[i] == '*') {
            ++i;
            continue;
        }
        break;
    }
    skip_ws();
    if (i != text.size())
        throw ParseError(std::string("trailing input '") + std::string(text.substr(i)) + "'" +
                         context(i));

    // dummy pairing validation
    std::map<std::string, std::vector<bool>> occurrences;
    for (const auto& f : out.factors)
        for (const auto& idx : f.indices) occurrences[idx.name].push_back(idx.up);
    for (const auto& [nm, ups] : occurrences) {
        if (ups.size() > 2)
            throw ParseError("index '" + nm + "' appears " + std::to_string(ups.size()) +
                             " times; at most twice (a dummy pair) is allowed");
        if (ups.size() == 2 && ups[0] == ups[1] && metric == MetricMode::none)
            throw ParseError("index '" + nm +
                             "' repeats with the same variance, but the metric mode 'none' "
                             "requires one contravariant and one covariant occurrence");
    }
    return out;
}

/// Optional override file for the merged symmetry: 'gen' lines in cycle
/// notation of the merged degree, plus an optional 'base p1,p2,...' line.
struct SgsFile {
    std::vector<SignedPerm> generators;
    std::optional<std::vector<int>> base;
};

inline SgsFile load_sgs_file(const std::string& path, int degree) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sgs file: " + path);
    SgsFile out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "gen") {
            std::string rest;
            std::getline(ls, rest);
            out.generators.push_back(parse_cycles(rest, degree));
        } else if (word == "base") {
            std::vector<int> base;
            std::string rest;
            std::getline(ls, rest);
            std::istringstream bs(rest);
            std::string tok;
            while (std::getline(bs, tok, ',')) base.push_back(std::stoi(tok));
            out.base = std::move(base);
        } else {
            throw ParseError("sgs file line " + std::to_string(lineno) + ": unknown directive '" +
                             word + "'");
        }
    }
    return out;
}

} // namespace tcanon

#endif
