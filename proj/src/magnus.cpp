#include "hbl/magnus.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace hbl::magnus {

namespace {

constexpr int kMaxMonoLen = 15;

// Repetition-free monomial of interned label ids, packed for cheap map keys.
struct Mono {
    std::uint8_t len = 0;
    std::array<std::uint8_t, kMaxMonoLen> id{};

    auto operator<=>(const Mono&) const = default;

    bool contains(std::uint8_t x) const {
        for (int k = 0; k < len; ++k)
            if (id[k] == x) return true;
        return false;
    }
    Mono append(std::uint8_t x) const {
        Mono m = *this;
        m.id[m.len++] = x;
        return m;
    }
};

using PackedSeries = std::map<Mono, long long>;

PackedSeries expand_packed(const Word& w, const std::vector<std::string>& alphabet,
                           const std::string& exclude, int cap) {
    if (cap < 1) throw std::invalid_argument("expand: cap must be >= 1");
    std::map<std::string, std::uint8_t> ids;
    for (size_t k = 0; k < alphabet.size(); ++k) ids[alphabet[k]] = static_cast<std::uint8_t>(k);
    cap = std::min<int>(cap, kMaxMonoLen);

    PackedSeries series;  // constant term 1 implicit
    std::vector<std::pair<Mono, long long>> bump;
    for (const Letter& l : w) {
        if (l.circle == exclude) continue;
        auto it = ids.find(l.circle);
        if (it == ids.end()) throw std::invalid_argument("expand: letter outside alphabet: " + l.circle);
        const std::uint8_t x = it->second;
        // Multiplying by 1 + sign*X: monomials already containing the label,
        // and monomials over the cap, are killed.
        bump.clear();
        bump.emplace_back(Mono{}.append(x), l.sign);
        for (const auto& [mono, c] : series) {
            if (mono.len < cap && !mono.contains(x)) bump.emplace_back(mono.append(x), l.sign * c);
        }
        for (const auto& [mono, dc] : bump) {
            long long& c = series[mono];
            c += dc;
            if (c == 0) series.erase(mono);
        }
    }
    return series;
}

ReducedSeries materialize(const PackedSeries& packed, const std::vector<std::string>& alphabet) {
    ReducedSeries out;
    for (const auto& [mono, c] : packed) {
        std::vector<std::string> key;
        key.reserve(mono.len);
        for (int k = 0; k < mono.len; ++k) key.push_back(alphabet[mono.id[k]]);
        out.coeffs.emplace(std::move(key), c);
    }
    return out;
}

std::vector<std::string> word_alphabet(const Word& w, const std::string& exclude) {
    std::vector<std::string> labels;
    for (const Letter& l : w)
        if (l.circle != exclude) labels.push_back(l.circle);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.size() > kMaxMonoLen)
        throw std::invalid_argument("expand: more than 15 distinct labels in one word");
    return labels;
}

bool repetition_free_concat(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& x : b)
        if (std::find(a.begin(), a.end(), x) != a.end()) return false;
    return true;
}

}  // namespace

ReducedSeries expand(const Word& w, const std::string& exclude, int cap) {
    auto alphabet = word_alphabet(w, exclude);
    return materialize(expand_packed(w, alphabet, exclude, cap), alphabet);
}

ReducedSeries multiply(const ReducedSeries& a, const ReducedSeries& b, int cap) {
    ReducedSeries out;
    auto add = [&](std::vector<std::string> mono, long long c) {
        if (c == 0) return;
        long long& slot = out.coeffs[std::move(mono)];
        slot += c;
    };
    for (const auto& [ma, ca] : a.coeffs) add(ma, ca);
    for (const auto& [mb, cb] : b.coeffs) add(mb, cb);
    for (const auto& [ma, ca] : a.coeffs) {
        for (const auto& [mb, cb] : b.coeffs) {
            if (ma.size() + mb.size() > static_cast<size_t>(cap)) continue;
            if (!repetition_free_concat(ma, mb)) continue;
            std::vector<std::string> mono = ma;
            mono.insert(mono.end(), mb.begin(), mb.end());
            add(std::move(mono), ca * cb);
        }
    }
    std::erase_if(out.coeffs, [](const auto& kv) { return kv.second == 0; });
    return out;
}

WordLink::WordLink(std::vector<std::string> circles, std::map<std::string, Word> longitudes)
    : circles_(std::move(circles)) {
    std::set<std::string> known(circles_.begin(), circles_.end());
    if (known.size() != circles_.size())
        throw std::invalid_argument("WordLink: duplicate circle label");
    for (auto& [label, word] : longitudes) {
        if (!known.contains(label))
            throw std::invalid_argument("WordLink: longitude for unknown circle '" + label + "'");
        Word kept;
        for (const Letter& l : word) {
            if (!known.contains(l.circle))
                throw std::invalid_argument("WordLink: letter references unknown circle '" +
                                            l.circle + "'");
            if (l.circle != label) kept.push_back(l);  // self-letters dropped
        }
        if (!kept.empty()) longitudes_[label] = std::move(kept);
    }
}

WordLink::WordLink(const WordLink& other) : circles_(other.circles_), longitudes_(other.longitudes_) {
    std::lock_guard<std::mutex> lock(other.cache_mutex_);
    cache_ = other.cache_;
}

WordLink::WordLink(WordLink&& other) noexcept
    : circles_(std::move(other.circles_)), longitudes_(std::move(other.longitudes_)),
      cache_(std::move(other.cache_)) {}

WordLink& WordLink::operator=(const WordLink& other) {
    if (this != &other) {
        WordLink tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

WordLink& WordLink::operator=(WordLink&& other) noexcept {
    circles_ = std::move(other.circles_);
    longitudes_ = std::move(other.longitudes_);
    cache_ = std::move(other.cache_);
    return *this;
}

bool WordLink::has_circle(const std::string& label) const {
    return std::find(circles_.begin(), circles_.end(), label) != circles_.end();
}

const Word& WordLink::longitude(const std::string& label) const {
    static const Word empty;
    auto it = longitudes_.find(label);
    return it == longitudes_.end() ? empty : it->second;
}

const ReducedSeries& WordLink::expansion(const std::string& circle, int cap) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto key = std::make_pair(circle, cap);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, expand(longitude(circle), circle, cap)).first;
    return it->second;
}

namespace {

void check_sequence(const WordLink& link, const std::vector<std::string>& I) {
    if (I.size() < 2) throw std::invalid_argument("mu: sequence must have length >= 2");
    std::set<std::string> seen;
    for (const auto& label : I) {
        if (!link.has_circle(label)) throw std::invalid_argument("mu: unknown circle '" + label + "'");
        if (!seen.insert(label).second)
            throw std::invalid_argument("mu: repeated circle '" + label + "' in sequence");
    }
}

}  // namespace

long long mu(const WordLink& link, const std::vector<std::string>& I) {
    check_sequence(link, I);
    const int r = static_cast<int>(I.size()) - 1;
    const ReducedSeries& series = link.expansion(I.back(), r);
    return series.coeff(std::vector<std::string>(I.begin(), I.end() - 1));
}

long long delta(const WordLink& link, const std::vector<std::string>& I) {
    check_sequence(link, I);
    const int m = static_cast<int>(I.size());
    long long g = 0;
    // every proper subsequence (order preserved) of length >= 2, in every
    // cyclic rotation
    for (unsigned mask = 0; mask + 1 < (1u << m); ++mask) {
        const int kept = std::popcount(mask);
        if (kept < 2) continue;
        std::vector<std::string> J;
        for (int k = 0; k < m; ++k)
            if (mask & (1u << k)) J.push_back(I[k]);
        for (int rot = 0; rot < kept; ++rot) {
            g = std::gcd(g, mu(link, J));
            std::rotate(J.begin(), J.begin() + 1, J.end());
        }
    }
    return g < 0 ? -g : g;
}

Residue mu_bar(const WordLink& link, const std::vector<std::string>& I) {
    const long long d = delta(link, I);
    long long v = mu(link, I);
    if (d > 0) v = ((v % d) + d) % d;
    return Residue{v, d};
}

}  // namespace hbl::magnus
