#include "hbl/hypermatrix.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hbl::hmx {

Move Move::inverse() const {
    Move m = *this;
    if (kind == MoveKind::AddMultiple) m.c = -c;
    return m;  // Swap and Negate are involutions
}

Hypermatrix::Hypermatrix(std::vector<int> dims, std::vector<long long> entries, long long modulus)
    : dims_(std::move(dims)), entries_(std::move(entries)), modulus_(modulus) {
    if (dims_.empty()) throw std::invalid_argument("Hypermatrix: empty dimension vector");
    size_t expect = 1;
    for (int m : dims_) {
        if (m <= 0) throw std::invalid_argument("Hypermatrix: dimensions must be positive");
        expect *= static_cast<size_t>(m);
    }
    if (entries_.size() != expect)
        throw std::invalid_argument("Hypermatrix: entry count does not match dimensions");
    if (modulus_ < 0) throw std::invalid_argument("Hypermatrix: modulus must be >= 0");
    if (modulus_ > 0)
        for (long long& e : entries_) e = reduce(e);
}

Hypermatrix Hypermatrix::zeros(std::vector<int> dims, long long modulus) {
    size_t total = 1;
    for (int m : dims) total *= static_cast<size_t>(std::max(m, 0));
    return Hypermatrix(std::move(dims), std::vector<long long>(total, 0), modulus);
}

long long Hypermatrix::reduce(long long v) const {
    if (modulus_ == 0) return v;
    long long r = v % modulus_;
    return r < 0 ? r + modulus_ : r;
}

size_t Hypermatrix::offset(std::span<const int> index) const {
    if (index.size() != dims_.size())
        throw std::invalid_argument("Hypermatrix: index arity mismatch");
    size_t off = 0;
    for (size_t i = 0; i < dims_.size(); ++i) {
        if (index[i] < 1 || index[i] > dims_[i])
            throw std::invalid_argument("Hypermatrix: index out of range");
        off = off * static_cast<size_t>(dims_[i]) + static_cast<size_t>(index[i] - 1);
    }
    return off;
}

void Hypermatrix::set(std::span<const int> index, long long v) { entries_[offset(index)] = reduce(v); }

bool Hypermatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](long long e) { return e == 0; });
}

bool Hypermatrix::is_cubical() const {
    return std::all_of(dims_.begin(), dims_.end(), [&](int m) { return m == dims_.front(); });
}

long long Hypermatrix::max_abs_entry() const {
    long long m = 0;
    for (long long e : entries_) m = std::max(m, e < 0 ? -e : e);
    return m;
}

void check_move(const Move& mv, const std::vector<int>& dims) {
    if (mv.axis < 1 || mv.axis > static_cast<int>(dims.size()))
        throw std::invalid_argument("Move: axis out of range");
    const int m = dims[mv.axis - 1];
    auto in_range = [m](int k) { return k >= 1 && k <= m; };
    switch (mv.kind) {
        case MoveKind::Negate:
            if (!in_range(mv.l)) throw std::invalid_argument("Move: index out of range");
            break;
        case MoveKind::Swap:
        case MoveKind::AddMultiple:
            if (!in_range(mv.l) || !in_range(mv.h))
                throw std::invalid_argument("Move: index out of range");
            if (mv.l == mv.h) throw std::invalid_argument("Move: slice indices must differ");
            break;
    }
}

Hypermatrix apply_move(const Hypermatrix& h, const Move& mv) {
    check_move(mv, h.dims());
    const auto& dims = h.dims();
    const int d = h.order();
    size_t inner = 1;  // stride of the move axis
    for (int i = mv.axis; i < d; ++i) inner *= static_cast<size_t>(dims[i]);
    size_t outer = 1;
    for (int i = 0; i + 1 < mv.axis; ++i) outer *= static_cast<size_t>(dims[i]);
    const size_t axis_size = static_cast<size_t>(dims[mv.axis - 1]);
    const long long delta = h.modulus();

    std::vector<long long> e = h.entries();
    auto slice_base = [&](size_t o, int k) { return (o * axis_size + static_cast<size_t>(k - 1)) * inner; };
    for (size_t o = 0; o < outer; ++o) {
        switch (mv.kind) {
            case MoveKind::Swap: {
                size_t a = slice_base(o, mv.l), b = slice_base(o, mv.h);
                for (size_t t = 0; t < inner; ++t) std::swap(e[a + t], e[b + t]);
                break;
            }
            case MoveKind::Negate: {
                size_t a = slice_base(o, mv.l);
                for (size_t t = 0; t < inner; ++t) e[a + t] = -e[a + t];
                break;
            }
            case MoveKind::AddMultiple: {
                size_t a = slice_base(o, mv.l), b = slice_base(o, mv.h);
                for (size_t t = 0; t < inner; ++t) e[a + t] += mv.c * e[b + t];
                break;
            }
        }
    }
    return Hypermatrix(dims, std::move(e), delta);
}

Hypermatrix apply_moves(Hypermatrix h, std::span<const Move> moves) {
    for (const Move& mv : moves) h = apply_move(h, mv);
    return h;
}

Matrix flatten(const Hypermatrix& h, int k) {
    const int d = h.order();
    if (k < 1 || k > d) throw std::invalid_argument("flatten: axis out of range");
    const auto& dims = h.dims();
    const int rows = dims[k - 1];
    size_t cols = 1;
    for (int i = 0; i < d; ++i)
        if (i != k - 1) cols *= static_cast<size_t>(dims[i]);

    Matrix out{rows, static_cast<int>(cols), std::vector<long long>(static_cast<size_t>(rows) * cols)};
    std::vector<int> index(d, 1);
    for (int r = 1; r <= rows; ++r) {
        index.assign(d, 1);
        index[k - 1] = r;
        for (size_t j = 0; j < cols; ++j) {
            out.at(r - 1, static_cast<int>(j)) = h.at(index);
            // advance the remaining coordinates lexicographically
            for (int i = d - 1; i >= 0; --i) {
                if (i == k - 1) continue;
                if (index[i] < dims[i]) {
                    ++index[i];
                    break;
                }
                index[i] = 1;
            }
        }
    }
    return out;
}

Hypermatrix reduce_mod(const Hypermatrix& h, long long new_modulus) {
    if (h.modulus() != 0) throw std::invalid_argument("reduce_mod: input must have modulus 0");
    if (new_modulus < 0) throw std::invalid_argument("reduce_mod: modulus must be >= 0");
    if (new_modulus == 0) return h;
    return Hypermatrix(h.dims(), h.entries(), new_modulus);
}

namespace {

// all permutations of {1..m} with their signs
std::vector<std::pair<std::vector<int>, int>> signed_permutations(int m) {
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 1);
    std::vector<std::pair<std::vector<int>, int>> out;
    // sign tracked by counting inversions
    do {
        int inv = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (p[i] > p[j]) ++inv;
        out.emplace_back(p, inv % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

long long hyperdeterminant(const Hypermatrix& h) {
    if (h.modulus() != 0) throw std::invalid_argument("hyperdeterminant: requires modulus 0");
    if (!h.is_cubical()) throw std::invalid_argument("hyperdeterminant: requires a cubical hypermatrix");
    const int d = h.order();
    const int m = h.dims().front();
    if (d == 1) return m == 1 ? h.entries().front() : 0;
    if (d % 2 == 1) {
        // composing every permutation with a fixed transposition negates the
        // summand when d is odd, so the averaged sum cancels to zero
        return 0;
    }

    const auto perms = signed_permutations(m);
    double work = static_cast<double>(m);
    for (int i = 1; i < d; ++i) work *= static_cast<double>(perms.size());
    if (work > 5e8) throw std::invalid_argument("hyperdeterminant: size out of supported range");

    // sigma_1 fixed to the identity; simultaneous relabeling of all
    // permutations preserves each summand, so the 1/m! factor drops out.
    std::vector<int> choice(d - 1, 0);
    std::vector<int> index(d);
    __int128 total = 0;
    for (;;) {
        int sign = 1;
        for (int i = 0; i < d - 1; ++i) sign *= perms[choice[i]].second;
        __int128 prod = 1;
        for (int i = 1; i <= m && prod != 0; ++i) {
            index[0] = i;
            for (int a = 1; a < d; ++a) index[a] = perms[choice[a - 1]].first[i - 1];
            prod *= h.at(index);
        }
        total += sign * prod;

        int pos = d - 2;
        while (pos >= 0 && choice[pos] + 1 == static_cast<int>(perms.size())) choice[pos--] = 0;
        if (pos < 0) break;
        ++choice[pos];
    }
    constexpr __int128 kMax = std::numeric_limits<long long>::max();
    if (total > kMax || total < -kMax)
        throw std::overflow_error("hyperdeterminant: value exceeds 64-bit range");
    return static_cast<long long>(total);
}

std::string to_string(const Move& mv, const std::string& axis_key) {
    std::string s;
    switch (mv.kind) {
        case MoveKind::Swap:
            s = "swap(" + axis_key + "=" + std::to_string(mv.axis) + ",l=" + std::to_string(mv.l) +
                ",h=" + std::to_string(mv.h) + ")";
            break;
        case MoveKind::Negate:
            s = "neg(" + axis_key + "=" + std::to_string(mv.axis) + ",l=" + std::to_string(mv.l) + ")";
            break;
        case MoveKind::AddMultiple:
            s = "add(" + axis_key + "=" + std::to_string(mv.axis) + ",l=" + std::to_string(mv.l) +
                ",h=" + std::to_string(mv.h) + ",c=" + std::to_string(mv.c) + ")";
            break;
    }
    return s;
}

std::string to_string(std::span<const Move> moves, const std::string& axis_key) {
    std::string s;
    for (const Move& mv : moves) {
        if (!s.empty()) s += "; ";
        s += to_string(mv, axis_key);
    }
    return s;
}

}  // namespace hbl::hmx
