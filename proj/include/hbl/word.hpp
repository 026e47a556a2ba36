#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hbl::magnus {

/// One signed meridian letter. `sign` is +1 or -1.
struct Letter {
    std::string circle;
    int sign = 1;

    friend bool operator==(const Letter&, const Letter&) = default;
};

/// A word in the free group on meridians. Adjacent inverse pairs are allowed;
/// the empty word is the identity.
using Word = std::vector<Letter>;

/// Parses the word grammar
///   word := item*
///   item := NAME exp? | '[' word ',' word ']' exp?
///   exp  := '^' signed-int
/// Brackets expand to commutators [u,v] = u v u^-1 v^-1, exponents to
/// repetition (negative = inverse, zero = empty). Every NAME must be in
/// `alphabet`. Throws std::invalid_argument on unknown labels or bad syntax.
Word parse_word(std::string_view text, const std::set<std::string>& alphabet);

Word invert(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, long long e);

/// [u,v] = u v u^-1 v^-1
Word commutator(const Word& u, const Word& v);

/// Cancels adjacent inverse pairs until none remain.
Word free_reduce(const Word& w);

/// Flat text form, e.g. "a b^-1 c"; parse_word reads it back.
std::string to_string(const Word& w);

}  // namespace hbl::magnus
