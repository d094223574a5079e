#include <random>

#include "doctest.h"
#include "polargrass/linalg.hpp"

using namespace polargrass;

namespace {
Vec v(std::initializer_list<int> xs) {
    Vec out;
    for (int x : xs) out.push_back(static_cast<code_t>(x));
    return out;
}

Subspace random_subspace(const Field& F, int n, int max_rank, std::mt19937& rng) {
    std::uniform_int_distribution<int> dim(0, max_rank), elt(0, F.order() - 1);
    int k = dim(rng);
    std::vector<Vec> rows;
    for (int i = 0; i < k; ++i) {
        Vec r(n);
        for (auto& x : r) x = static_cast<code_t>(elt(rng));
        rows.push_back(std::move(r));
    }
    return Subspace::span(F, n, rows);
}
}  // namespace

TEST_CASE("canonicalize") {
    const Field& F2 = Field::predefined(2);
    auto s = Subspace::span(F2, 3, std::vector<Vec>{v({0, 1, 0}), v({1, 0, 0})});
    CHECK(s.rank() == 2);
    CHECK(s.row(0) == v({1, 0, 0}));
    CHECK(s.row(1) == v({0, 1, 0}));

    auto full = Subspace::span(F2, 2, std::vector<Vec>{v({1, 1}), v({0, 1})});
    CHECK(full.rank() == 2);
    CHECK(full.row(0) == v({1, 0}));

    const Field& F3 = Field::predefined(3);
    auto pr = Subspace::span(F3, 3, std::vector<Vec>{v({2, 1, 0}), v({1, 2, 0})});
    CHECK(pr.rank() == 1);
    CHECK(pr.at(0, 0) == 1);

    auto zero = Subspace::span(F2, 3, std::vector<Vec>{v({0, 0, 0})});
    CHECK(zero.rank() == 0);
    CHECK(zero.empty());
}

TEST_CASE("canonicalize is idempotent and keys are faithful") {
    std::mt19937 rng(7);
    for (int q : {2, 3, 4}) {
        const Field& F = Field::predefined(q);
        for (int trial = 0; trial < 200; ++trial) {
            Subspace s = random_subspace(F, 5, 3, rng);
            std::vector<Vec> rows;
            for (int i = 0; i < s.rank(); ++i) rows.push_back(s.row(i));
            Subspace t = Subspace::span(F, 5, rows);
            CHECK(s == t);
            if (s.rank() > 0) {
                std::vector<code_t> back(static_cast<size_t>(s.rank()) * 5);
                unpack_key(F, s.key(), back.data(), s.rank(), 5);
                CHECK(back == s.rows());
            }
        }
    }
}

TEST_CASE("sum and intersection obey the dimension formula") {
    const Field& F2 = Field::predefined(2);
    auto e1 = Subspace::span(F2, 4, std::vector<Vec>{v({1, 0, 0, 0})});
    auto e2 = Subspace::span(F2, 4, std::vector<Vec>{v({0, 1, 0, 0})});
    CHECK(sum(e1, e2).rank() == 2);
    CHECK(intersect(e1, e1) == e1);

    // two distinct planes through a common line in V(4, F2)
    auto p1 = Subspace::span(F2, 4, std::vector<Vec>{v({1, 0, 0, 0}), v({0, 1, 0, 0})});
    auto p2 = Subspace::span(F2, 4, std::vector<Vec>{v({1, 0, 0, 0}), v({0, 0, 1, 0})});
    auto line = intersect(p1, p2);
    CHECK(line.rank() == 1);
    CHECK(line.row(0) == v({1, 0, 0, 0}));
    // exhaustive check: the intersection is exactly the common vectors
    for (int x = 0; x < 16; ++x) {
        Vec w{static_cast<code_t>(x & 1), static_cast<code_t>((x >> 1) & 1),
              static_cast<code_t>((x >> 2) & 1), static_cast<code_t>((x >> 3) & 1)};
        CHECK((p1.contains(w) && p2.contains(w)) == line.contains(w));
    }

    std::mt19937 rng(11);
    for (int q : {2, 3, 5}) {
        const Field& F = Field::predefined(q);
        for (int trial = 0; trial < 100; ++trial) {
            Subspace a = random_subspace(F, 5, 4, rng);
            Subspace b = random_subspace(F, 5, 4, rng);
            CHECK(a.rank() + b.rank() == sum(a, b).rank() + intersect(a, b).rank());
            CHECK(a.contains(intersect(a, b)));
            CHECK(sum(a, b).contains(a));
        }
    }
}

TEST_CASE("mismatched ambient spaces are rejected") {
    const Field& F2 = Field::predefined(2);
    auto a = Subspace::span(F2, 3, std::vector<Vec>{v({1, 0, 0})});
    auto b = Subspace::span(F2, 4, std::vector<Vec>{v({1, 0, 0, 0})});
    CHECK_THROWS_AS(sum(a, b), Error);
    CHECK_THROWS_AS(intersect(a, b), Error);
}

TEST_CASE("rationality") {
    const Field& F4 = Field::predefined(4);
    auto s = Subspace::span(F4, 2, std::vector<Vec>{Vec{1, F4.gen()}});
    CHECK_FALSE(s.is_rational(1));
    auto t = Subspace::span(F4, 3, std::vector<Vec>{v({1, 0, 0}), v({0, 1, 0})});
    CHECK(t.is_rational(1));

    // intersection of rational subspaces is rational
    std::mt19937 rng(13);
    const Field& F9 = Field::predefined(9);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> elt(0, 2);
        auto rnd_rational = [&](int k) {
            std::vector<Vec> rows;
            for (int i = 0; i < k; ++i) {
                Vec r(5);
                for (auto& x : r) x = static_cast<code_t>(elt(rng));
                rows.push_back(std::move(r));
            }
            return Subspace::span(F9, 5, rows);
        };
        Subspace a = rnd_rational(3), b = rnd_rational(3);
        CHECK(a.is_rational(1));
        CHECK(intersect(a, b).is_rational(1));
    }
}

TEST_CASE("pluecker coordinates") {
    const Field& F2 = Field::predefined(2);
    auto s12 = Subspace::span(F2, 4, std::vector<Vec>{v({1, 0, 0, 0}), v({0, 1, 0, 0})});
    CHECK(plucker_coords(s12) == v({1, 0, 0, 0, 0, 0}));
    auto s13 = Subspace::span(F2, 4, std::vector<Vec>{v({1, 0, 0, 0}), v({0, 0, 1, 0})});
    CHECK(plucker_coords(s13) == v({0, 1, 0, 0, 0, 0}));

    auto pt = Subspace::span(F2, 4, std::vector<Vec>{v({0, 1, 1, 0})});
    CHECK(plucker_coords(pt) == v({0, 1, 1, 0}));

    CHECK_THROWS_AS(plucker_coords(Subspace(F2, 3)), Error);

    // Grassmann-Pluecker relation for k=2, N=4, exhaustive over F2 and F3
    for (int q : {2, 3}) {
        const Field& F = Field::predefined(q);
        std::vector<Subspace> lines;
        for_each_rref(F, 2, 4, [&](const code_t* rows) {
            lines.push_back(Subspace::span_raw(F, 4, rows, 2));
        });
        for (const auto& L : lines) {
            Vec p = plucker_coords(L);
            // p12 p34 - p13 p24 + p14 p23 = 0
            code_t r = F.sub(F.mul(p[0], p[5]), F.mul(p[1], p[4]));
            r = F.add(r, F.mul(p[2], p[3]));
            CHECK(r == 0);
        }
        CHECK(static_cast<long>(lines.size()) ==
              (projective_point_count(q, 4) * projective_point_count(q, 3)) / (q + 1));
    }
}

TEST_CASE("solver and kernel") {
    const Field& F3 = Field::predefined(3);
    std::vector<code_t> m{1, 0, 2, 0, 1, 1};  // 2x3
    auto x = solve_coords(F3, m.data(), 2, 3, v({1, 1, 0}));
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 1);
    CHECK((*x)[1] == 1);
    CHECK_FALSE(solve_coords(F3, m.data(), 2, 3, v({0, 0, 1})).has_value());

    auto ker = kernel_basis(F3, m.data(), 2, 3);
    REQUIRE(ker.size() == 1);
    for (const auto& kv : ker) {
        for (int i = 0; i < 2; ++i) {
            code_t acc = 0;
            for (int j = 0; j < 3; ++j) acc = F3.add(acc, F3.mul(m[i * 3 + j], kv[j]));
            CHECK(acc == 0);
        }
    }
}

TEST_CASE("binomial") {
    CHECK(binomial(7, 2) == 21);
    CHECK(binomial(6, 2) == 15);
    CHECK(binomial(8, 2) == 28);
    CHECK(binomial(6, 3) == 20);
    CHECK(binomial(5, 0) == 1);
}
