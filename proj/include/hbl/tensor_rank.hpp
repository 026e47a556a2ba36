#pragma once

#include <optional>

#include "hbl/hypermatrix.hpp"

namespace hbl::hmx {

/// Result of the bounded tensor-rank search. `upper` is empty when the
/// budget ran out before any decomposition was found. `exact` is true when
/// lower == upper, or when every smaller size was exhausted (within the
/// entry bound) without the budget interfering.
struct RankBounds {
    int lower = 0;
    std::optional<int> upper;
    bool exact = false;

    friend bool operator==(const RankBounds&, const RankBounds&) = default;
};

/// lower = max multilinear rank; upper = least r admitting a decomposition
/// into r outer products of integer vectors with entries in [-entry_bound,
/// entry_bound], found by iterative-deepening exhaustive search. Requires
/// modulus 0 and entry_bound >= max |entry|.
RankBounds tensor_rank_bounds(const Hypermatrix& h, long long entry_bound, long long budget);

}  // namespace hbl::hmx
