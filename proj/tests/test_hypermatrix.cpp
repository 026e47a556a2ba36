#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hbl/hypermatrix.hpp"
#include "hbl/smith.hpp"

using namespace hbl::hmx;

namespace {

// 2x3x2 with slices ((1,1,1|2,2,2),(0,0,0|0,0,0)): rows k1, columns k2,
// slices k3
Hypermatrix h1_matrix() {
    return Hypermatrix({2, 3, 2}, {1, 2, 1, 2, 1, 2, 0, 0, 0, 0, 0, 0});
}

Hypermatrix fixture_432() {
    std::vector<long long> e;
    for (int j = 1; j <= 4; ++j)
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= 2; ++l) e.push_back(100 * j + 10 * k + l);
    return Hypermatrix({4, 3, 2}, std::move(e));
}

Hypermatrix random_hm(std::mt19937_64& rng, std::vector<int> dims, long long lo, long long hi) {
    size_t total = 1;
    for (int m : dims) total *= static_cast<size_t>(m);
    std::uniform_int_distribution<long long> entry(lo, hi);
    std::vector<long long> e(total);
    for (auto& v : e) v = entry(rng);
    return Hypermatrix(std::move(dims), std::move(e));
}

Move random_move(std::mt19937_64& rng, const std::vector<int>& dims) {
    std::uniform_int_distribution<int> pick_axis(1, static_cast<int>(dims.size()));
    std::uniform_int_distribution<int> pick_kind(0, 2);
    for (;;) {
        const int axis = pick_axis(rng);
        const int g = dims[axis - 1];
        const int kind = pick_kind(rng);
        std::uniform_int_distribution<int> pick(1, g);
        if (kind == 0 && g >= 2) {
            int l = pick(rng), h = pick(rng);
            if (l == h) continue;
            return Move::swap(axis, l, h);
        }
        if (kind == 1) return Move::negate(axis, pick(rng));
        if (kind == 2 && g >= 2) {
            std::uniform_int_distribution<int> coin(0, 1);
            int l = pick(rng), h = pick(rng);
            if (l == h) continue;
            return Move::add_multiple(axis, l, h, coin(rng) ? 1 : -1);
        }
    }
}

}  // namespace

TEST_CASE("swap exchanges whole slices") {
    Hypermatrix h = h1_matrix();
    Hypermatrix s = apply_move(h, Move::swap(1, 1, 2));
    CHECK(s == Hypermatrix({2, 3, 2}, {0, 0, 0, 0, 0, 0, 1, 2, 1, 2, 1, 2}));
    CHECK(apply_move(s, Move::swap(1, 1, 2)) == h);
}

TEST_CASE("negate flips one slice") {
    Hypermatrix ones({2, 3, 2}, std::vector<long long>(12, 1));
    Hypermatrix n = apply_move(ones, Move::negate(2, 1));
    for (int k1 = 1; k1 <= 2; ++k1)
        for (int k2 = 1; k2 <= 3; ++k2)
            for (int k3 = 1; k3 <= 2; ++k3) {
                std::vector<int> idx{k1, k2, k3};
                CHECK(n.at(idx) == (k2 == 1 ? -1 : 1));
            }
}

TEST_CASE("add_multiple composes additively") {
    Hypermatrix h = fixture_432();
    Hypermatrix twice =
        apply_move(apply_move(h, Move::add_multiple(1, 2, 1, 1)), Move::add_multiple(1, 2, 1, 1));
    CHECK(twice == apply_move(h, Move::add_multiple(1, 2, 1, 2)));
}

TEST_CASE("moves are invertible") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        Hypermatrix h = random_hm(rng, {2, 3, 2}, -4, 4);
        Move mv = random_move(rng, h.dims());
        CHECK(apply_move(apply_move(h, mv), mv.inverse()) == h);
    }
}

TEST_CASE("moves reduce modulo the modulus") {
    Hypermatrix h({2, 2}, {1, 2, 3, 4}, 5);
    Hypermatrix n = apply_move(h, Move::negate(1, 1));
    CHECK(n.entries() == std::vector<long long>{4, 3, 3, 4});
    Hypermatrix a = apply_move(h, Move::add_multiple(1, 1, 2, 1));
    CHECK(a.entries() == std::vector<long long>{4, 1, 3, 4});
}

TEST_CASE("flattening layouts of the 4x3x2 fixture") {
    Hypermatrix a = fixture_432();

    Matrix f1 = flatten(a, 1);
    CHECK(f1.rows == 4);
    CHECK(f1.cols == 6);
    CHECK(std::vector<long long>(f1.a.begin(), f1.a.begin() + 6) ==
          std::vector<long long>{111, 112, 121, 122, 131, 132});

    Matrix f2 = flatten(a, 2);
    CHECK(f2.rows == 3);
    CHECK(f2.cols == 8);
    CHECK(std::vector<long long>(f2.a.begin(), f2.a.begin() + 8) ==
          std::vector<long long>{111, 112, 211, 212, 311, 312, 411, 412});

    Matrix f3 = flatten(a, 3);
    CHECK(f3.rows == 2);
    CHECK(f3.cols == 12);
    CHECK(std::vector<long long>(f3.a.begin() + 12, f3.a.end()) ==
          std::vector<long long>{112, 122, 132, 212, 222, 232, 312, 322, 332, 412, 422, 432});
}

TEST_CASE("flattening a matrix along axis 1 is the identity") {
    Hypermatrix h({2, 3}, {1, 2, 3, 4, 5, 6});
    Matrix f = flatten(h, 1);
    CHECK(f.rows == 2);
    CHECK(f.cols == 3);
    CHECK(f.a == h.entries());
}

TEST_CASE("flatten along the move axis changes by the same row move") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        Hypermatrix h = random_hm(rng, {2, 3, 2}, -3, 3);
        Move mv = random_move(rng, h.dims());
        Matrix before = flatten(h, mv.axis);
        Matrix after = flatten(apply_move(h, mv), mv.axis);
        Hypermatrix as_matrix({before.rows, before.cols}, before.a);
        Move row_move{mv.kind, 1, mv.l, mv.h, mv.c};
        CHECK(after.a == apply_move(as_matrix, row_move).entries());
    }
}

TEST_CASE("reduce_mod") {
    Hypermatrix h({2}, {3, -1});
    CHECK(reduce_mod(h, 2).entries() == std::vector<long long>{1, 1});
    CHECK(reduce_mod(h, 0) == h);
    CHECK(reduce_mod(h, 1).is_zero());
    CHECK_THROWS_AS(reduce_mod(reduce_mod(h, 2), 3), std::invalid_argument);
}

TEST_CASE("hyperdeterminant of a matrix is the determinant") {
    CHECK(hyperdeterminant(Hypermatrix({2, 2}, {1, 2, 3, 4})) == -2);
    CHECK(hyperdeterminant(Hypermatrix({3, 3}, {2, 0, 0, 0, 3, 0, 0, 0, 5})) == 30);
}

TEST_CASE("hyperdeterminant vanishes in odd dimension") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
        const int m = 2 + t % 2;
        Hypermatrix h = random_hm(rng, {m, m, m}, -4, 4);
        CHECK(hyperdeterminant(h) == 0);
    }
}

TEST_CASE("hyperdeterminant of the diagonal 4-hypermatrix") {
    // e x e x e x e + f x f x f x f on standard basis vectors
    Hypermatrix h = Hypermatrix::zeros({2, 2, 2, 2});
    h.set(std::vector<int>{1, 1, 1, 1}, 1);
    h.set(std::vector<int>{2, 2, 2, 2}, 1);
    CHECK(hyperdeterminant(h) == 1);
}

TEST_CASE("hyperdeterminant magnitude survives moves in even dimension") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 20; ++t) {
        Hypermatrix h = random_hm(rng, {2, 2, 2, 2}, -2, 2);
        const long long base = std::abs(hyperdeterminant(h));
        Hypermatrix moved = h;
        for (int s = 0; s < 20; ++s) moved = apply_move(moved, random_move(rng, moved.dims()));
        CHECK(std::abs(hyperdeterminant(moved)) == base);
    }
}

namespace {

// the averaged definition: sum over all d-tuples of permutations divided by m!
long long hyperdet_oracle(const Hypermatrix& h) {
    const int d = h.order();
    const int m = h.dims().front();
    std::vector<std::vector<int>> perms;
    std::vector<int> base(m);
    for (int i = 0; i < m; ++i) base[i] = i + 1;
    do {
        perms.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    auto sgn = [](const std::vector<int>& p) {
        int inv = 0;
        for (size_t i = 0; i < p.size(); ++i)
            for (size_t j = i + 1; j < p.size(); ++j)
                if (p[i] > p[j]) ++inv;
        return inv % 2 == 0 ? 1 : -1;
    };
    std::vector<size_t> choice(d, 0);
    long long total = 0;
    long long fact = 1;
    for (int i = 2; i <= m; ++i) fact *= i;
    for (;;) {
        int s = 1;
        long long prod = 1;
        for (int a = 0; a < d; ++a) s *= sgn(perms[choice[a]]);
        std::vector<int> idx(d);
        for (int i = 1; i <= m; ++i) {
            for (int a = 0; a < d; ++a) idx[a] = perms[choice[a]][i - 1];
            prod *= h.at(idx);
        }
        total += s * prod;
        int pos = d - 1;
        while (pos >= 0 && choice[pos] + 1 == perms.size()) choice[pos--] = 0;
        if (pos < 0) break;
        ++choice[pos];
    }
    return total / fact;
}

}  // namespace

TEST_CASE("hyperdeterminant matches the averaged definition") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 15; ++t) {
        Hypermatrix h = random_hm(rng, {2, 2, 2, 2}, -2, 2);
        CHECK(hyperdeterminant(h) == hyperdet_oracle(h));
    }
    for (int t = 0; t < 10; ++t) {
        Hypermatrix h = random_hm(rng, {3, 3}, -3, 3);
        CHECK(hyperdeterminant(h) == hyperdet_oracle(h));
    }
    for (int t = 0; t < 10; ++t) {
        Hypermatrix h = random_hm(rng, {2, 2, 2}, -3, 3);
        CHECK(hyperdeterminant(h) == hyperdet_oracle(h));
    }
}

TEST_CASE("hyperdeterminant rejects bad input") {
    CHECK_THROWS_AS(hyperdeterminant(Hypermatrix({2, 3}, std::vector<long long>(6, 1))),
                    std::invalid_argument);
    CHECK_THROWS_AS(hyperdeterminant(Hypermatrix({2, 2}, {1, 0, 0, 1}, 3)), std::invalid_argument);
}

TEST_CASE("move validation") {
    Hypermatrix h = h1_matrix();
    CHECK_THROWS_AS(apply_move(h, Move::swap(4, 1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(apply_move(h, Move::swap(1, 1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(apply_move(h, Move::add_multiple(1, 2, 2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(Hypermatrix({2, 2}, {1, 2, 3}), std::invalid_argument);
}
