#pragma once

#include <span>
#include <string>
#include <vector>

namespace hbl::hmx {

enum class MoveKind { Swap, Negate, AddMultiple };

/// One elementary transformation along an axis. Axes and slice indices are
/// 1-based throughout. Swap exchanges slices l and h; Negate multiplies
/// slice l by -1; AddMultiple adds c times slice h to slice l.
struct Move {
    MoveKind kind = MoveKind::Swap;
    int axis = 1;
    int l = 1;
    int h = 1;
    long long c = 0;

    static Move swap(int axis, int l, int h) { return {MoveKind::Swap, axis, l, h, 0}; }
    static Move negate(int axis, int l) { return {MoveKind::Negate, axis, l, l, 0}; }
    static Move add_multiple(int axis, int l, int h, long long c) {
        return {MoveKind::AddMultiple, axis, l, h, c};
    }
    Move inverse() const;

    friend bool operator==(const Move&, const Move&) = default;
};

/// Integer d-hypermatrix with entries stored flat in row-major order over
/// 1-based indices (k_1,...,k_d). modulus() = 0 means plain integers;
/// otherwise entries are kept in [0, modulus).
class Hypermatrix {
  public:
    Hypermatrix(std::vector<int> dims, std::vector<long long> entries, long long modulus = 0);
    static Hypermatrix zeros(std::vector<int> dims, long long modulus = 0);

    const std::vector<int>& dims() const { return dims_; }
    int order() const { return static_cast<int>(dims_.size()); }
    long long modulus() const { return modulus_; }
    const std::vector<long long>& entries() const { return entries_; }

    long long at(std::span<const int> index) const { return entries_[offset(index)]; }
    void set(std::span<const int> index, long long v);

    bool is_zero() const;
    bool is_cubical() const;
    long long max_abs_entry() const;

    size_t offset(std::span<const int> index) const;  // 1-based multi-index

    friend bool operator==(const Hypermatrix&, const Hypermatrix&) = default;

  private:
    std::vector<int> dims_;
    std::vector<long long> entries_;
    long long modulus_ = 0;

    long long reduce(long long v) const;
};

/// Dense integer matrix, row-major.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<long long> a;

    long long& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }  // 0-based
    long long at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

void check_move(const Move& mv, const std::vector<int>& dims);

/// Applies one elementary transformation; entries are reduced mod the
/// modulus when it is nonzero.
Hypermatrix apply_move(const Hypermatrix& h, const Move& mv);
Hypermatrix apply_moves(Hypermatrix h, std::span<const Move> moves);

/// k-th flattening: row i lists all entries with k-th coordinate i, in
/// lexicographic order of the remaining coordinates. k is 1-based.
Matrix flatten(const Hypermatrix& h, int k);

/// Entries reduced into [0, new_modulus); requires h.modulus() == 0.
/// new_modulus = 0 returns h unchanged.
Hypermatrix reduce_mod(const Hypermatrix& h, long long new_modulus);

/// Combinatorial hyperdeterminant of a cubical hypermatrix over the
/// integers; the ordinary determinant when d = 2, identically zero for odd
/// d > 1. Rejects non-cubical input and modulus != 0.
long long hyperdeterminant(const Hypermatrix& h);

std::string to_string(const Move& mv, const std::string& axis_key = "axis");
std::string to_string(std::span<const Move> moves, const std::string& axis_key = "axis");

}  // namespace hbl::hmx
