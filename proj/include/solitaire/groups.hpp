#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace solitaire {

// Raised when an element does not belong to the ambient group.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct Lattice {
    std::vector<long long> coords;
    auto operator<=>(const Lattice&) const = default;
};

// Signed generator indices 1..k, negative for inverses. Always freely reduced.
struct Word {
    std::vector<int> letters;
    auto operator<=>(const Word&) const = default;
};

using GroupElement = std::variant<Lattice, Word>;

struct GroupContext {
    enum class Kind { FreeAbelian, Free };
    Kind kind = Kind::FreeAbelian;
    int rank = 2;  // d for Z^d, k for F_k

    static GroupContext zd(int d) {
        if (d <= 0) throw ContractViolation("Z^d needs d >= 1");
        return {Kind::FreeAbelian, d};
    }
    static GroupContext free(int k) {
        if (k <= 0 || k > 26) throw ContractViolation("F_k needs 1 <= k <= 26");
        return {Kind::Free, k};
    }
    bool operator==(const GroupContext&) const = default;
};

inline Word reduce(std::vector<int> letters) {
    std::vector<int> out;
    out.reserve(letters.size());
    for (int x : letters) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return Word{std::move(out)};
}

inline void check(const GroupContext& ctx, const GroupElement& x) {
    if (ctx.kind == GroupContext::Kind::FreeAbelian) {
        auto* l = std::get_if<Lattice>(&x);
        if (!l) throw ContractViolation("expected a lattice element");
        if ((int)l->coords.size() != ctx.rank)
            throw ContractViolation("lattice element has wrong dimension");
    } else {
        auto* w = std::get_if<Word>(&x);
        if (!w) throw ContractViolation("expected a word");
        for (size_t i = 0; i < w->letters.size(); ++i) {
            int a = w->letters[i];
            if (a == 0 || std::abs(a) > ctx.rank)
                throw ContractViolation("generator index out of range");
            if (i && w->letters[i - 1] == -a)
                throw ContractViolation("word is not freely reduced");
        }
    }
}

inline GroupElement identity(const GroupContext& ctx) {
    if (ctx.kind == GroupContext::Kind::FreeAbelian)
        return Lattice{std::vector<long long>(ctx.rank, 0)};
    return Word{};
}

inline GroupElement multiply(const GroupContext& ctx, const GroupElement& x, const GroupElement& y) {
    check(ctx, x);
    check(ctx, y);
    if (ctx.kind == GroupContext::Kind::FreeAbelian) {
        auto a = std::get<Lattice>(x).coords;
        const auto& b = std::get<Lattice>(y).coords;
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return Lattice{std::move(a)};
    }
    auto l = std::get<Word>(x).letters;
    const auto& r = std::get<Word>(y).letters;
    l.insert(l.end(), r.begin(), r.end());
    return reduce(std::move(l));
}

inline GroupElement inverse(const GroupContext& ctx, const GroupElement& x) {
    check(ctx, x);
    if (ctx.kind == GroupContext::Kind::FreeAbelian) {
        auto a = std::get<Lattice>(x).coords;
        for (auto& c : a) c = -c;
        return Lattice{std::move(a)};
    }
    auto w = std::get<Word>(x).letters;
    std::reverse(w.begin(), w.end());
    for (auto& c : w) c = -c;
    return Word{std::move(w)};
}

inline bool is_identity(const GroupElement& x) {
    if (auto* l = std::get_if<Lattice>(&x))
        return std::all_of(l->coords.begin(), l->coords.end(), [](long long c) { return c == 0; });
    return std::get<Word>(x).letters.empty();
}

// "a b' a", apostrophe for inverse, "e" for the identity.
inline std::string word_to_string(const Word& w) {
    if (w.letters.empty()) return "e";
    std::string s;
    for (size_t i = 0; i < w.letters.size(); ++i) {
        if (i) s += ' ';
        s += char('a' + std::abs(w.letters[i]) - 1);
        if (w.letters[i] < 0) s += '\'';
    }
    return s;
}

inline Word parse_word(const std::string& s) {
    auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return Word{};
    auto last = s.find_last_not_of(" \t");
    if (s.substr(first, last - first + 1) == "e") return Word{};
    std::vector<int> out;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == ' ' || c == '\t') continue;
        if (c < 'a' || c > 'z') throw std::invalid_argument("bad letter in word: " + s);
        int g = c - 'a' + 1;
        if (i + 1 < s.size() && s[i + 1] == '\'') {
            g = -g;
            ++i;
        }
        out.push_back(g);
    }
    return reduce(std::move(out));
}

struct LinearWitness {
    GroupElement a, b, c;  // S is contained in a <b> c
};

namespace detail {

inline long long gcd_all(const std::vector<long long>& v) {
    long long g = 0;
    for (auto x : v) g = std::gcd(g, std::llabs(x));
    return g;
}

// w = u v u^-1 with v cyclically reduced
inline std::pair<std::vector<int>, std::vector<int>> cyclic_split(const std::vector<int>& w) {
    size_t i = 0, j = w.size();
    while (j - i >= 2 && w[i] == -w[j - 1]) ++i, --j;
    return {std::vector<int>(w.begin(), w.begin() + i), std::vector<int>(w.begin() + i, w.begin() + j)};
}

// primitive root r of a nontrivial reduced word, x = r^k
inline std::vector<int> word_root(const std::vector<int>& w) {
    auto [u, v] = cyclic_split(w);
    size_t n = v.size();
    size_t period = n;
    for (size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool ok = true;
        for (size_t i = p; i < n && ok; ++i) ok = v[i] == v[i - p];
        if (ok) {
            period = p;
            break;
        }
    }
    std::vector<int> r = u;
    r.insert(r.end(), v.begin(), v.begin() + period);
    for (auto it = u.rbegin(); it != u.rend(); ++it) r.push_back(-*it);
    return reduce(std::move(r)).letters;
}

inline std::vector<int> invert_letters(std::vector<int> w) {
    std::reverse(w.begin(), w.end());
    for (auto& c : w) c = -c;
    return w;
}

}  // namespace detail

// Exact on both kinds. For F_k it uses the fact that elements lie in a common
// cyclic subgroup iff they share a primitive root.
inline std::optional<LinearWitness> cyclic_coset_membership(const GroupContext& ctx,
                                                           const std::vector<GroupElement>& S) {
    if (S.empty()) throw ContractViolation("empty shape");
    for (auto& s : S) check(ctx, s);
    const auto& s0 = S.front();
    auto s0inv = inverse(ctx, s0);
    if (ctx.kind == GroupContext::Kind::FreeAbelian) {
        std::vector<long long> dir;
        for (auto& s : S) {
            auto d = std::get<Lattice>(multiply(ctx, s, s0inv)).coords;
            if (std::all_of(d.begin(), d.end(), [](long long x) { return x == 0; })) continue;
            long long g = detail::gcd_all(d);
            for (auto& x : d) x /= g;
            // fix a sign so that opposite directions agree
            auto nz = std::find_if(d.begin(), d.end(), [](long long x) { return x != 0; });
            if (*nz < 0)
                for (auto& x : d) x = -x;
            if (dir.empty())
                dir = d;
            else if (dir != d)
                return std::nullopt;
        }
        if (dir.empty()) {
            dir.assign(ctx.rank, 0);
            dir[0] = 1;
        }
        return LinearWitness{s0, Lattice{dir}, identity(ctx)};
    }
    std::vector<int> root;
    for (auto& s : S) {
        auto x = std::get<Word>(multiply(ctx, s0inv, s)).letters;
        if (x.empty()) continue;
        auto r = detail::word_root(x);
        if (root.empty())
            root = r;
        else if (r != root && r != detail::invert_letters(root))
            return std::nullopt;
    }
    if (root.empty()) root = {1};
    // s0 <u t u^-1> = (s0 u) <t> u^-1
    auto [u, t] = detail::cyclic_split(root);
    auto a = multiply(ctx, s0, Word{u});
    return LinearWitness{a, Word{t}, Word{detail::invert_letters(u)}};
}

}  // namespace solitaire
