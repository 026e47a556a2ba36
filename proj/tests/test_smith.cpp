#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "hbl/smith.hpp"

using namespace hbl::hmx;

namespace {

Matrix make(int rows, int cols, std::vector<long long> a) { return Matrix{rows, cols, std::move(a)}; }

// gcd of all k x k minors; d_1 ... d_k equals this gcd, which is the
// classical characterization the reduction must reproduce
long long minor_gcd(const Matrix& m, int k) {
    std::vector<int> rows(k), cols(k);
    long long g = 0;
    std::vector<int> rsel(k), csel(k);
    // determinant by Laplace on the first row, exact at this scale
    auto det = [&](auto&& self, std::vector<std::vector<long long>> a) -> long long {
        const size_t n = a.size();
        if (n == 1) return a[0][0];
        long long total = 0;
        for (size_t j = 0; j < n; ++j) {
            if (a[0][j] == 0) continue;
            std::vector<std::vector<long long>> sub;
            for (size_t r = 1; r < n; ++r) {
                std::vector<long long> row;
                for (size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(a[r][c]);
                sub.push_back(std::move(row));
            }
            total += (j % 2 == 0 ? 1 : -1) * a[0][j] * self(self, std::move(sub));
        }
        return total;
    };
    auto rec_cols = [&](auto&& self, int pos, int start) -> void {
        if (pos == k) {
            std::vector<std::vector<long long>> sub(k, std::vector<long long>(k));
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) sub[r][c] = m.at(rsel[r], csel[c]);
            g = std::gcd(g, det(det, std::move(sub)));
            return;
        }
        for (int c = start; c < m.cols; ++c) {
            csel[pos] = c;
            self(self, pos + 1, c + 1);
        }
    };
    auto rec_rows = [&](auto&& self, int pos, int start) -> void {
        if (pos == k) {
            rec_cols(rec_cols, 0, 0);
            return;
        }
        for (int r = start; r < m.rows; ++r) {
            rsel[pos] = r;
            self(self, pos + 1, r + 1);
        }
    };
    rec_rows(rec_rows, 0, 0);
    return g;
}

std::vector<long long> divisors_from_minor_gcds(const Matrix& m) {
    std::vector<long long> d;
    long long prev = 1;
    for (int k = 1; k <= std::min(m.rows, m.cols); ++k) {
        long long g = minor_gcd(m, k);
        if (g == 0) break;
        d.push_back(g / prev);
        prev = g;
    }
    return d;
}

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, long long lo, long long hi) {
    std::uniform_int_distribution<long long> entry(lo, hi);
    Matrix m{rows, cols, std::vector<long long>(static_cast<size_t>(rows) * cols)};
    for (auto& v : m.a) v = entry(rng);
    return m;
}

}  // namespace

TEST_CASE("known normal forms") {
    CHECK(smith_normal_form(make(2, 2, {2, 0, 0, 3})) == std::vector<long long>{1, 6});
    CHECK(smith_normal_form(make(3, 3, std::vector<long long>(9, 0))).empty());
    CHECK(smith_normal_form(make(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})) ==
          std::vector<long long>{1, 1, 1});
    CHECK(smith_normal_form(make(1, 3, {4, 6, 10})) == std::vector<long long>{2});
    CHECK(smith_normal_form(make(2, 2, {2, 4, 6, 8})) == std::vector<long long>{2, 4});
}

TEST_CASE("divisor chain matches the minor-gcd characterization") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 120; ++t) {
        const int rows = 1 + t % 4;
        const int cols = 1 + (t / 2) % 4;
        Matrix m = random_matrix(rng, rows, cols, -6, 6);
        auto d = smith_normal_form(m);
        CHECK(d == divisors_from_minor_gcds(m));
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            CHECK(d[i] > 0);
            CHECK(d[i + 1] % d[i] == 0);
        }
    }
}

TEST_CASE("normal form is invariant under row and column moves") {
    std::mt19937_64 rng(103);
    for (int t = 0; t < 60; ++t) {
        Matrix m = random_matrix(rng, 3, 4, -5, 5);
        Hypermatrix h({3, 4}, m.a);
        std::uniform_int_distribution<int> kind(0, 2), axis(1, 2), coin(0, 1);
        for (int s = 0; s < 12; ++s) {
            const int ax = axis(rng);
            const int g = h.dims()[ax - 1];
            std::uniform_int_distribution<int> pick(1, g);
            int l = pick(rng), hh = pick(rng);
            switch (kind(rng)) {
                case 0:
                    if (l != hh) h = apply_move(h, Move::swap(ax, l, hh));
                    break;
                case 1:
                    h = apply_move(h, Move::negate(ax, l));
                    break;
                default:
                    if (l != hh) h = apply_move(h, Move::add_multiple(ax, l, hh, coin(rng) ? 1 : -1));
            }
        }
        Matrix moved{3, 4, h.entries()};
        CHECK(smith_normal_form(moved) == smith_normal_form(m));
    }
}

TEST_CASE("recorded operations replay to the returned normal form") {
    std::mt19937_64 rng(107);
    for (int t = 0; t < 60; ++t) {
        Matrix m = random_matrix(rng, 2 + t % 3, 2 + (t / 3) % 3, -7, 7);
        std::vector<ElementaryOp> ops;
        Matrix snf = smith_reduce(m, &ops);
        Hypermatrix h({m.rows, m.cols}, m.a);
        for (const auto& op : ops)
            h = apply_move(h, Move{op.kind, op.on_rows ? 1 : 2, op.l, op.h, op.c});
        CHECK(h.entries() == snf.a);
    }
}

TEST_CASE("multilinear rank and elementary divisors of stacked fixtures") {
    // dims (2,3,2); slices ((1,1,0|0,0,1),(1,1,0|0,0,1))
    Hypermatrix h3({2, 3, 2}, {1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1});
    CHECK(multilinear_rank(h3) == std::vector<int>{1, 2, 2});
    CHECK(elementary_divisors(h3) ==
          std::vector<std::vector<long long>>{{1}, {1, 1}, {1, 1}});

    // slices ((2,0,0|0,1,0),(2,0,0|0,1,0))
    Hypermatrix h4({2, 3, 2}, {2, 0, 0, 1, 0, 0, 2, 0, 0, 1, 0, 0});
    CHECK(multilinear_rank(h4) == std::vector<int>{1, 2, 2});
    CHECK(elementary_divisors(h4) ==
          std::vector<std::vector<long long>>{{1}, {1, 2}, {1, 2}});

    Hypermatrix zero = Hypermatrix::zeros({2, 2, 2});
    CHECK(elementary_divisors(zero) == std::vector<std::vector<long long>>{{}, {}, {}});
    CHECK(multilinear_rank(zero) == std::vector<int>{0, 0, 0});

    CHECK_THROWS_AS(elementary_divisors(Hypermatrix({2}, {1, 0}, 2)), std::invalid_argument);
}
