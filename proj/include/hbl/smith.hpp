#pragma once

#include <vector>

#include "hbl/hypermatrix.hpp"

namespace hbl::hmx {

/// A row or column operation emitted while reducing a matrix; indices are
/// 1-based. Maps onto Move with axis 1 (rows) or axis 2 (columns).
struct ElementaryOp {
    bool on_rows = true;
    MoveKind kind = MoveKind::Swap;
    int l = 1;
    int h = 1;
    long long c = 0;
};

/// Diagonal of the Smith normal form: positive integers d_1 | d_2 | ... | d_r
/// with r = rank; empty for the zero matrix. Exact (arbitrary-precision
/// internally).
std::vector<long long> smith_normal_form(const Matrix& m);

/// Full reduction to the Smith normal form, recording the row/column
/// operations when `ops` is non-null. The returned matrix is diagonal with
/// the nonnegative divisor chain on the diagonal.
Matrix smith_reduce(const Matrix& m, std::vector<ElementaryOp>* ops);

/// rank of f_k for every axis k.
std::vector<int> multilinear_rank(const Hypermatrix& h);

/// SNF multiset of f_k for every axis k, each sorted ascending.
std::vector<std::vector<long long>> elementary_divisors(const Hypermatrix& h);

}  // namespace hbl::hmx
