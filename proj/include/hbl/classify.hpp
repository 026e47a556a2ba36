#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbl/handlebody.hpp"

namespace hbl::classify {

/// Orders sequences by length, then lexicographically.
struct SeqLenLex {
    bool operator()(const hb::SequenceI& a, const hb::SequenceI& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// All invariant data of a presentation, one entry per distinct-index
/// sequence of length 2..n up to cyclic permutation. Keys are the
/// lexicographically least rotations.
struct Profile {
    int n = 0;
    std::vector<int> genera;
    std::map<hb::SequenceI, hb::InvariantDatum, SeqLenLex> data;
};

Profile profile(const hb::HandlebodyPresentation& pres);

/// True iff every datum vanishes (mod its own indeterminacy).
bool is_trivial(const hb::HandlebodyPresentation& pres);

/// True iff every datum of length < n vanishes.
bool is_almost_trivial(const hb::HandlebodyPresentation& pres);

/// Minimal |I| over sequences containing the component with a nonzero datum;
/// empty when all vanish.
std::optional<int> lambda_invariant(const hb::HandlebodyPresentation& pres, int comp);

/// The first invariant on which two profiles disagree.
struct Separation {
    std::string invariant;
    std::string detail;

    friend bool operator==(const Separation&, const Separation&) = default;
};

std::optional<Separation> distinguish(const Profile& a, const Profile& b);

/// A Move applied simultaneously to every datum, on the axis carrying
/// `component` in each.
struct DiagonalMove {
    int component = 1;
    hmx::MoveKind kind = hmx::MoveKind::Swap;
    int l = 1;
    int h = 1;
    long long c = 0;

    DiagonalMove inverse() const {
        DiagonalMove m = *this;
        if (kind == hmx::MoveKind::AddMultiple) m.c = -c;
        return m;
    }
    friend bool operator==(const DiagonalMove&, const DiagonalMove&) = default;
};

enum class Verdict { Equivalent, Distinct, Unknown };

struct ClassificationResult {
    Verdict verdict = Verdict::Unknown;
    std::vector<DiagonalMove> witness;     // Equivalent: replayable move sequence
    std::optional<Separation> separation;  // Distinct: the separating invariant
    std::string note;                      // Unknown: budget report
    long long visited = 0;

    bool equivalent() const { return verdict == Verdict::Equivalent; }
};

struct SearchOptions {
    long long budget = 1'000'000;     // visited states
    long long magnitude_bound = 0;    // 0: 4 x max input magnitude
};

std::vector<hb::InvariantDatum> apply_diagonal_moves(std::vector<hb::InvariantDatum> data,
                                                     const std::vector<DiagonalMove>& moves);

/// Bidirectional search over diagonal move sequences. Equivalent comes with
/// an exact replayable witness. Distinct is returned only when provable
/// (differing matrix invariants, or exhausted finite orbit when every
/// modulus is positive); otherwise Unknown on budget exhaustion.
ClassificationResult search_equivalence(const std::vector<hb::InvariantDatum>& a,
                                        const std::vector<hb::InvariantDatum>& b,
                                        const SearchOptions& opts = {});

/// Full pipeline: shape check, invariant comparison on complete profiles,
/// then — for almost trivial inputs — equivalence search on the canonical
/// tuple. Equivalent is conclusive there; for other inputs only Distinct or
/// Unknown can be returned (identical presentations excepted).
ClassificationResult classify_pair(const hb::HandlebodyPresentation& a,
                                   const hb::HandlebodyPresentation& b,
                                   const SearchOptions& opts = {});

std::string to_string(const DiagonalMove& mv);
std::string to_string(const std::vector<DiagonalMove>& moves);
std::string to_string(Verdict v);

}  // namespace hbl::classify
