#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hbl/word.hpp"

namespace hbl::magnus {

/// Truncated expansion of a word in the ring where any monomial repeating a
/// label is zero. Keys are repetition-free label sequences; the constant
/// term 1 is implicit and absent keys have coefficient 0.
struct ReducedSeries {
    std::map<std::vector<std::string>, long long> coeffs;

    long long coeff(const std::vector<std::string>& mono) const {
        auto it = coeffs.find(mono);
        return it == coeffs.end() ? 0 : it->second;
    }
    bool is_one() const { return coeffs.empty(); }

    friend bool operator==(const ReducedSeries&, const ReducedSeries&) = default;
};

/// Expansion of w sending each positive letter to 1+X and each negative
/// letter to 1-X+X^2-..., keeping only repetition-free monomials of length
/// <= cap. Letters of circle `exclude` contribute nothing.
ReducedSeries expand(const Word& w, const std::string& exclude, int cap);

/// Truncated product in the same ring; monomials with a repeated label or
/// length > cap are dropped.
ReducedSeries multiply(const ReducedSeries& a, const ReducedSeries& b, int cap);

/// A value together with the modulus it is taken in; modulus 0 means the
/// plain integer.
struct Residue {
    long long value = 0;
    long long modulus = 0;

    friend bool operator==(const Residue&, const Residue&) = default;
};

/// A link of labeled circles, each carrying a longitude word over the other
/// circles' meridians. Letters naming the longitude's own circle are dropped
/// at construction.
class WordLink {
  public:
    WordLink(std::vector<std::string> circles, std::map<std::string, Word> longitudes);

    WordLink(const WordLink& other);
    WordLink(WordLink&& other) noexcept;
    WordLink& operator=(const WordLink& other);
    WordLink& operator=(WordLink&& other) noexcept;

    const std::vector<std::string>& circles() const { return circles_; }
    bool has_circle(const std::string& label) const;
    /// Longitude for `label` (empty word when none was given).
    const Word& longitude(const std::string& label) const;

    /// Cached expansion of circle's longitude at the given cap.
    const ReducedSeries& expansion(const std::string& circle, int cap) const;

    friend bool operator==(const WordLink& a, const WordLink& b) {
        return a.circles_ == b.circles_ && a.longitudes_ == b.longitudes_;
    }

  private:
    std::vector<std::string> circles_;
    std::map<std::string, Word> longitudes_;
    mutable std::map<std::pair<std::string, int>, ReducedSeries> cache_;
    mutable std::mutex cache_mutex_;
};

/// Coefficient of X_{i_1}...X_{i_{r}} in the expansion of the longitude of
/// the last label of I (|I| = r+1). Requires |I| >= 2, distinct labels, all
/// present in the link. Monomials referencing circles outside I never match
/// the lookup, which is exactly the restriction to the sublink I.
long long mu(const WordLink& link, const std::vector<std::string>& I);

/// gcd of |mu(J)| over all J obtained from I by deleting at least one label
/// and cyclically permuting the remainder (|J| >= 2). Zero when |I| = 2 or
/// when every contributing mu vanishes.
long long delta(const WordLink& link, const std::vector<std::string>& I);

/// (mu mod delta, delta); the plain integer when delta = 0.
Residue mu_bar(const WordLink& link, const std::vector<std::string>& I);

}  // namespace hbl::magnus
