#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "hbl/handlebody.hpp"

using namespace hbl;
using hb::ClasperSchema;
using hb::Component;
using hb::HandlebodyPresentation;
using hb::SequenceI;

namespace {

HandlebodyPresentation simple3(const std::string& longitude_c) {
    std::set<std::string> alphabet{"a", "b", "c"};
    return HandlebodyPresentation(
        {Component{1, {"a"}}, Component{1, {"b"}}, Component{1, {"c"}}},
        {{"c", magnus::parse_word(longitude_c, alphabet)}});
}

ClasperSchema schema(int n, std::vector<int> genera,
                     std::initializer_list<std::pair<std::pair<int, std::vector<int>>, long long>> counts) {
    ClasperSchema s;
    s.n = n;
    s.genera = std::move(genera);
    for (const auto& [key, a] : counts) s.counts.emplace(key, a);
    return s;
}

ClasperSchema random_schema(std::mt19937_64& rng, int n, int max_genus, long long max_count) {
    ClasperSchema s;
    s.n = n;
    std::uniform_int_distribution<int> genus(1, max_genus);
    for (int i = 0; i < n; ++i) s.genera.push_back(genus(rng));
    long long perms = 1;
    for (int k = 2; k <= n - 2; ++k) perms *= k;
    std::uniform_int_distribution<long long> count(-max_count, max_count);
    std::uniform_int_distribution<int> pickp(1, static_cast<int>(perms));
    std::uniform_int_distribution<int> howmany(0, 4);
    const int m = howmany(rng);
    for (int t = 0; t < m; ++t) {
        std::vector<int> ks;
        for (int i = 0; i < n; ++i) {
            std::uniform_int_distribution<int> pick(1, s.genera[i]);
            ks.push_back(pick(rng));
        }
        s.counts[{pickp(rng), ks}] = count(rng);
    }
    return s;
}

}  // namespace

TEST_CASE("canonical sequences") {
    CHECK(hb::canonical_sequences(2) == std::vector<SequenceI>{{1, 2}});
    CHECK(hb::canonical_sequences(3) == std::vector<SequenceI>{{1, 2, 3}});
    CHECK(hb::canonical_sequences(4) == std::vector<SequenceI>{{1, 2, 3, 4}, {1, 3, 2, 4}});
    CHECK(hb::canonical_sequences(5).size() == 6);
    CHECK_THROWS_AS(hb::canonical_sequences(1), std::invalid_argument);
}

TEST_CASE("schema with no counts is trivial") {
    auto pres = hb::from_clasper_schema(schema(3, {1, 2, 1}, {}));
    CHECK(pres.component_count() == 3);
    CHECK(pres.genus(2) == 2);
    auto datum = hb::hypermatrix_of(pres, {1, 2, 3});
    CHECK(datum.matrix.is_zero());
    CHECK(datum.delta == 0);
}

TEST_CASE("single tree gives a commutator longitude") {
    auto pres = hb::from_clasper_schema(schema(3, {1, 1, 1}, {{{1, {1, 1, 1}}, 1}}));
    std::set<std::string> alphabet{"c1_1", "c2_1", "c3_1"};
    CHECK(pres.link().longitude("c3_1") == magnus::parse_word("[c1_1, c2_1]", alphabet));
    CHECK(magnus::mu(pres.link(), {"c1_1", "c2_1", "c3_1"}) == 1);
}

TEST_CASE("the second permutation orders the commutator by 1,3,2,4") {
    auto pres = hb::from_clasper_schema(schema(4, {1, 1, 1, 1}, {{{2, {1, 1, 1, 1}}, 1}}));
    CHECK(hb::hypermatrix_of(pres, {1, 3, 2, 4}).matrix.entries() == std::vector<long long>{1});
    CHECK(hb::hypermatrix_of(pres, {1, 2, 3, 4}).matrix.is_zero());
}

TEST_CASE("schema counts reappear as hypermatrix entries") {
    // genera (2,3,2), first slice 1, second slice 2
    ClasperSchema s;
    s.n = 3;
    s.genera = {2, 3, 2};
    for (int k2 = 1; k2 <= 3; ++k2) {
        s.counts[{1, {1, k2, 1}}] = 1;
        s.counts[{1, {1, k2, 2}}] = 2;
    }
    auto pres = hb::from_clasper_schema(s);
    auto datum = hb::hypermatrix_of(pres, {1, 2, 3});
    CHECK(datum.delta == 0);
    CHECK(datum.matrix ==
          hmx::Hypermatrix({2, 3, 2}, {1, 2, 1, 2, 1, 2, 0, 0, 0, 0, 0, 0}));
}

TEST_CASE("a count of five is read back as five") {
    auto pres = hb::from_clasper_schema(schema(3, {1, 1, 1}, {{{1, {1, 1, 1}}, 5}}));
    CHECK(hb::hypermatrix_of(pres, {1, 2, 3}).matrix.entries() == std::vector<long long>{5});
}

TEST_CASE("random schema counts reappear exactly") {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 40; ++t) {
        const int n = 3 + t % 2;
        ClasperSchema s = random_schema(rng, n, 3, 3);
        auto pres = hb::from_clasper_schema(s);
        auto sequences = hb::canonical_sequences(n);
        for (int p = 1; p <= static_cast<int>(sequences.size()); ++p) {
            auto datum = hb::hypermatrix_of(pres, sequences[p - 1]);
            CHECK(datum.delta == 0);
            // entry at the I_p-ordered selection equals the count
            std::vector<int> dims = datum.matrix.dims();
            std::vector<int> sel(n, 1);
            for (;;) {
                // selection indexed by position in I_p; count keys by component
                std::vector<int> ks(n);
                for (int pos = 0; pos < n; ++pos) ks[sequences[p - 1][pos] - 1] = sel[pos];
                auto it = s.counts.find({p, ks});
                const long long expect = it == s.counts.end() ? 0 : it->second;
                CHECK(datum.matrix.at(sel) == expect);
                int i = n - 1;
                while (i >= 0 && sel[i] == dims[i]) sel[i--] = 1;
                if (i < 0) break;
                ++sel[i];
            }
        }
    }
}

TEST_CASE("delta_I of length two vanishes") {
    auto pres = simple3("a^3 b");
    CHECK(hb::delta_I(pres, {1, 3}) == 0);
    CHECK(hb::delta_I(pres, {2, 3}) == 0);
}

TEST_CASE("delta_I collects lower-order linking") {
    auto pres = simple3("a^2 [a,b]");
    CHECK(hb::delta_I(pres, {1, 2, 3}) == 2);
    auto datum = hb::hypermatrix_of(pres, {1, 2, 3});
    CHECK(datum.delta == 2);
    CHECK(datum.matrix.entries() == std::vector<long long>{1});
    CHECK(datum.matrix.modulus() == 2);
}

TEST_CASE("sequence validation") {
    auto pres = simple3("[a,b]");
    CHECK_THROWS_AS(hb::hypermatrix_of(pres, {1}), std::invalid_argument);
    CHECK_THROWS_AS(hb::hypermatrix_of(pres, {1, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(hb::hypermatrix_of(pres, {1, 4}), std::invalid_argument);
}

TEST_CASE("apply_gl with identities is the identity") {
    auto pres = hb::from_clasper_schema(schema(3, {2, 2, 2}, {{{1, {1, 1, 1}}, 1}, {{1, {2, 2, 2}}, -2}}));
    auto datum = hb::hypermatrix_of(pres, {1, 2, 3});
    std::vector<hmx::Matrix> ids;
    for (int i = 0; i < 3; ++i) ids.push_back(hmx::Matrix{2, 2, {1, 0, 0, 1}});
    CHECK(hb::apply_gl({datum}, ids).front() == datum);
}

TEST_CASE("permutation and elementary matrices act like single moves") {
    auto pres = hb::from_clasper_schema(
        schema(3, {2, 2, 2}, {{{1, {1, 1, 1}}, 1}, {{1, {2, 1, 2}}, -2}, {{1, {1, 2, 2}}, 3}}));
    auto datum = hb::hypermatrix_of(pres, {1, 2, 3});

    std::vector<hmx::Matrix> mats(3, hmx::Matrix{2, 2, {1, 0, 0, 1}});
    mats[0] = hmx::Matrix{2, 2, {0, 1, 1, 0}};  // swap on component 1
    auto swapped = hb::apply_gl({datum}, mats);
    CHECK(swapped.front().matrix == hmx::apply_move(datum.matrix, hmx::Move::swap(1, 1, 2)));

    mats[0] = hmx::Matrix{2, 2, {1, 0, 0, 1}};
    mats[2] = hmx::Matrix{2, 2, {1, 1, 0, 1}};  // R(1,2) on component 3
    auto added = hb::apply_gl({datum}, mats);
    CHECK(added.front().matrix == hmx::apply_move(datum.matrix, hmx::Move::add_multiple(3, 1, 2, 1)));

    mats[2] = hmx::Matrix{2, 2, {1, 1, 1, 1}};
    CHECK_THROWS_AS(hb::apply_gl({datum}, mats), std::invalid_argument);
}

TEST_CASE("reverse_circle flips mu and is an involution") {
    auto pres = simple3("[a,b]");
    auto rev = hb::reverse_circle(pres, "a");
    CHECK(magnus::mu(rev.link(), {"a", "b", "c"}) == -1);
    CHECK(hb::reverse_circle(rev, "a") == pres);

    // a circle outside the sequence leaves the value alone
    auto rev_b = hb::reverse_circle(pres, "b");
    CHECK(magnus::mu(rev_b.link(), {"a", "c"}) == magnus::mu(pres.link(), {"a", "c"}));
    CHECK_THROWS_AS(hb::reverse_circle(pres, "x"), std::invalid_argument);
}

TEST_CASE("band_sum concatenates longitudes") {
    auto pres = hb::from_clasper_schema(
        schema(3, {1, 1, 2}, {{{1, {1, 1, 1}}, 2}, {{1, {1, 1, 2}}, 3}}));
    auto banded = hb::band_sum(pres, 3, 1, 2);
    auto datum = hb::hypermatrix_of(banded, {1, 2, 3});
    std::vector<int> sel{1, 1, 1};
    CHECK(datum.matrix.at(sel) == 5);

    // banding with an empty longitude changes nothing
    auto pres2 = hb::from_clasper_schema(schema(3, {1, 1, 2}, {{{1, {1, 1, 1}}, 2}}));
    CHECK(hb::band_sum(pres2, 3, 1, 2) == pres2);
    CHECK_THROWS_AS(hb::band_sum(pres, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("word-level basis changes match single moves on clasper input") {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 25; ++t) {
        const int n = 3 + t % 2;
        ClasperSchema s = random_schema(rng, n, 3, 3);
        auto pres = hb::from_clasper_schema(s);
        const SequenceI I = hb::canonical_sequences(n).front();
        auto base = hb::hypermatrix_of(pres, I);

        // swap two circles of a random component
        std::uniform_int_distribution<int> pick_comp(1, n);
        int comp = pick_comp(rng);
        if (s.genera[comp - 1] >= 2) {
            auto swapped = hb::swap_circles(pres, comp, 1, 2);
            auto datum = hb::hypermatrix_of(swapped, I);
            const int axis = static_cast<int>(std::find(I.begin(), I.end(), comp) - I.begin()) + 1;
            CHECK(datum.matrix == hmx::apply_move(base.matrix, hmx::Move::swap(axis, 1, 2)));
            CHECK(datum.delta == base.delta);
        }

        // reverse a random circle
        comp = pick_comp(rng);
        std::uniform_int_distribution<int> pick_k(1, s.genera[comp - 1]);
        const int k = pick_k(rng);
        auto reversed = hb::reverse_circle(pres, pres.circle(comp, k));
        auto datum = hb::hypermatrix_of(reversed, I);
        const int axis = static_cast<int>(std::find(I.begin(), I.end(), comp) - I.begin()) + 1;
        CHECK(datum.matrix == hmx::apply_move(base.matrix, hmx::Move::negate(axis, k)));
        CHECK(datum.delta == base.delta);

        // band sum on the measured component (the last of I)
        if (s.genera[n - 1] >= 2) {
            auto banded = hb::band_sum(pres, n, 1, 2);
            auto datum2 = hb::hypermatrix_of(banded, I);
            CHECK(datum2.matrix ==
                  hmx::apply_move(base.matrix, hmx::Move::add_multiple(n, 1, 2, 1)));
            CHECK(datum2.delta == base.delta);
        }
    }
}

TEST_CASE("iterated commutators hit exactly their own sequence") {
    // all permutation pairs for n = 3, 4
    for (int n : {3, 4}) {
        auto sequences = hb::canonical_sequences(n);
        for (int p = 1; p <= static_cast<int>(sequences.size()); ++p) {
            std::vector<int> genera(n, 1);
            auto pres = hb::from_clasper_schema(
                schema(n, genera, {{{p, std::vector<int>(n, 1)}, 1}}));
            for (int q = 1; q <= static_cast<int>(sequences.size()); ++q) {
                auto datum = hb::hypermatrix_of(pres, sequences[q - 1]);
                CHECK(datum.matrix.entries() == std::vector<long long>{p == q ? 1 : 0});
            }
            // all shorter invariants vanish
            for (unsigned mask = 1; mask < (1u << n); ++mask) {
                if (std::popcount(mask) < 2 || std::popcount(mask) == n) continue;
                SequenceI J;
                for (int i = 0; i < n; ++i)
                    if (mask & (1u << i)) J.push_back(i + 1);
                CHECK(hb::hypermatrix_of(pres, J).matrix.is_zero());
            }
        }
    }
}
