#include "hbl/smith.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <stdexcept>

namespace hbl::hmx {

namespace {

using bigint = boost::multiprecision::cpp_int;

struct BigMatrix {
    int rows, cols;
    std::vector<bigint> a;
    bigint& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const bigint& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

long long to_ll(const bigint& v) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        throw std::overflow_error("smith: value exceeds 64-bit range");
    return static_cast<long long>(v);
}

struct Reducer {
    BigMatrix m;
    std::vector<ElementaryOp>* ops;

    void record(bool on_rows, MoveKind kind, int l, int h, const bigint& c) {
        if (ops) ops->push_back(ElementaryOp{on_rows, kind, l + 1, h + 1, kind == MoveKind::AddMultiple ? to_ll(c) : 0});
    }

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
        record(true, MoveKind::Swap, i, j, 0);
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
        record(false, MoveKind::Swap, i, j, 0);
    }
    void negate_row(int i) {
        for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
        record(true, MoveKind::Negate, i, i, 0);
    }
    void add_row(int l, int h, const bigint& c) {  // row l += c * row h
        if (c == 0) return;
        for (int k = 0; k < m.cols; ++k) m.at(l, k) += c * m.at(h, k);
        record(true, MoveKind::AddMultiple, l, h, c);
    }
    void add_col(int l, int h, const bigint& c) {
        if (c == 0) return;
        for (int k = 0; k < m.rows; ++k) m.at(k, l) += c * m.at(k, h);
        record(false, MoveKind::AddMultiple, l, h, c);
    }

    // smallest nonzero |entry| in the trailing submatrix starting at (s,s)
    bool find_pivot(int s, int& pr, int& pc) {
        bool found = false;
        bigint best = 0;
        for (int r = s; r < m.rows; ++r) {
            for (int c = s; c < m.cols; ++c) {
                if (m.at(r, c) == 0) continue;
                bigint v = abs(m.at(r, c));
                if (!found || v < best) {
                    best = v;
                    pr = r;
                    pc = c;
                    found = true;
                }
            }
        }
        return found;
    }

    void run() {
        const int n = std::min(m.rows, m.cols);
        for (int s = 0; s < n; ++s) {
            int pr, pc;
            if (!find_pivot(s, pr, pc)) break;
            swap_rows(s, pr);
            swap_cols(s, pc);
            // clear row and column s; a remainder smaller than the pivot can
            // appear, in which case we loop with the new smaller pivot
            for (;;) {
                bool dirty = false;
                for (int r = s + 1; r < m.rows; ++r) {
                    if (m.at(r, s) == 0) continue;
                    bigint q = m.at(r, s) / m.at(s, s);
                    add_row(r, s, -q);
                    if (m.at(r, s) != 0) dirty = true;
                }
                for (int c = s + 1; c < m.cols; ++c) {
                    if (m.at(s, c) == 0) continue;
                    bigint q = m.at(s, c) / m.at(s, s);
                    add_col(c, s, -q);
                    if (m.at(s, c) != 0) dirty = true;
                }
                if (!dirty) break;
                if (!find_pivot(s, pr, pc)) break;
                swap_rows(s, pr);
                swap_cols(s, pc);
            }
            if (m.at(s, s) < 0) negate_row(s);
        }
        // enforce the divisibility chain
        for (int s = 0; s + 1 < n; ++s) {
            if (m.at(s, s) == 0) break;
            for (int t = s + 1; t < n; ++t) {
                if (m.at(t, t) % m.at(s, s) == 0) continue;
                // fold d_t into position s: gcd lands at (s,s), lcm at (t,t)
                add_col(s, t, 1);
                for (;;) {
                    bigint q = m.at(t, s) / m.at(s, s);
                    add_row(t, s, -q);
                    if (m.at(t, s) == 0) break;
                    swap_rows(s, t);
                }
                // (s,t) may be nonzero now; clear it
                bigint q = m.at(s, t) / m.at(s, s);
                add_col(t, s, -q);
                if (m.at(s, t) != 0) throw std::logic_error("smith: chain fix-up failed");
                if (m.at(t, t) < 0) negate_row(t);
                if (m.at(s, s) < 0) negate_row(s);
            }
        }
    }
};

}  // namespace

Matrix smith_reduce(const Matrix& in, std::vector<ElementaryOp>* ops) {
    BigMatrix big{in.rows, in.cols, {}};
    big.a.assign(in.a.begin(), in.a.end());
    Reducer red{std::move(big), ops};
    red.run();
    Matrix out{in.rows, in.cols, std::vector<long long>(in.a.size(), 0)};
    for (size_t i = 0; i < red.m.a.size(); ++i) out.a[i] = to_ll(red.m.a[i]);
    return out;
}

std::vector<long long> smith_normal_form(const Matrix& m) {
    Matrix d = smith_reduce(m, nullptr);
    std::vector<long long> divisors;
    for (int s = 0; s < std::min(d.rows, d.cols); ++s) {
        if (d.at(s, s) == 0) break;
        divisors.push_back(d.at(s, s));
    }
    return divisors;
}

std::vector<int> multilinear_rank(const Hypermatrix& h) {
    if (h.modulus() != 0) throw std::invalid_argument("multilinear_rank: requires modulus 0");
    std::vector<int> ranks;
    for (int k = 1; k <= h.order(); ++k)
        ranks.push_back(static_cast<int>(smith_normal_form(flatten(h, k)).size()));
    return ranks;
}

std::vector<std::vector<long long>> elementary_divisors(const Hypermatrix& h) {
    if (h.modulus() != 0) throw std::invalid_argument("elementary_divisors: requires modulus 0");
    std::vector<std::vector<long long>> out;
    for (int k = 1; k <= h.order(); ++k) {
        auto d = smith_normal_form(flatten(h, k));
        std::sort(d.begin(), d.end());
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace hbl::hmx
