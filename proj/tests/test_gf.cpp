#include "doctest.h"
#include "polargrass/gf.hpp"

using namespace polargrass;

TEST_CASE("prime field F2") {
    const Field& F = Field::predefined(2);
    CHECK(F.order() == 2);
    CHECK(F.add(1, 1) == 0);
    CHECK(F.mul(1, 1) == 1);
}

TEST_CASE("pinned moduli give the intended epsilon relations") {
    const Field& F4 = Field::predefined(4);
    // e^2 + e + 1 = 0, so e*e = e + 1
    CHECK(F4.mul(F4.gen(), F4.gen()) == F4.add(F4.gen(), 1));

    const Field& F9 = Field::predefined(9);
    // e^2 - e - 1 = 0, so e*e = e + 1
    CHECK(F9.mul(F9.gen(), F9.gen()) == F9.add(F9.gen(), 1));

    const Field& F8 = Field::predefined(8);
    // e^3 + e + 1 = 0, so e^3 = e + 1
    CHECK(F8.pow(F8.gen(), 3) == F8.add(F8.gen(), 1));
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_WITH_AS(Field::get(4, 1, {0, 1}), doctest::Contains("not prime"), Error);
    // x^2 + 1 = (x+1)^2 over F2
    CHECK_THROWS_WITH_AS(Field::get(2, 2, {1, 0, 1}), doctest::Contains("reducible"), Error);
    CHECK_THROWS_WITH_AS(Field::get(2, 2, {1, 1, 0}), doctest::Contains("monic"), Error);
}

TEST_CASE("inverse and power") {
    const Field& F4 = Field::predefined(4);
    // exhaustive oracle: the y with e*y = 1
    code_t expected = 0;
    for (int y = 1; y < 4; ++y)
        if (F4.mul(F4.gen(), static_cast<code_t>(y)) == 1) expected = static_cast<code_t>(y);
    CHECK(expected == F4.add(F4.gen(), 1));
    CHECK(F4.inv(F4.gen()) == expected);

    const Field& F9 = Field::predefined(9);
    CHECK(F9.pow(F9.gen(), 8) == 1);
    CHECK_THROWS_AS(F9.inv(0), Error);

    for (int q : {4, 8, 9, 16}) {
        const Field& F = Field::predefined(q);
        for (int x = 1; x < q; ++x) CHECK(F.pow(static_cast<code_t>(x), q - 1) == 1);
    }
}

TEST_CASE("field axioms hold exhaustively for q <= 16") {
    for (int q : {2, 3, 4, 5, 8, 9, 16}) {
        const Field& F = Field::predefined(q);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                CHECK(F.add(a, b) == F.add(b, a));
                CHECK(F.mul(a, b) == F.mul(b, a));
                for (int c = 0; c < q; ++c) {
                    CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
                }
            }
        bool has_primitive = false;
        for (int a = 1; a < q; ++a)
            if (F.mult_order(static_cast<code_t>(a)) == q - 1) has_primitive = true;
        CHECK(has_primitive);
    }
}

TEST_CASE("frobenius conjugation") {
    const Field& F4 = Field::predefined(4);
    CHECK(F4.conj(F4.gen()) == F4.mul(F4.gen(), F4.gen()));  // sigma(e) = e^2 = e+1
    CHECK(F4.conj(1) == 1);

    const Field& F9 = Field::predefined(9);
    CHECK(F9.conj(F9.gen()) == F9.pow(F9.gen(), 3));

    const Field& F8 = Field::predefined(8);
    CHECK_THROWS_WITH_AS(F8.conj(1), doctest::Contains("no Hermitian conjugation"), Error);

    for (int q : {4, 9, 16}) {
        const Field& F = Field::predefined(q);
        int s = F.degree() / 2;
        for (int x = 0; x < q; ++x) {
            code_t cx = static_cast<code_t>(x);
            CHECK(F.conj(F.conj(cx)) == cx);
            CHECK((F.conj(cx) == cx) == F.in_subfield(cx, s));
            for (int y = 0; y < q; ++y) {
                code_t cy = static_cast<code_t>(y);
                CHECK(F.conj(F.add(cx, cy)) == F.add(F.conj(cx), F.conj(cy)));
                CHECK(F.conj(F.mul(cx, cy)) == F.mul(F.conj(cx), F.conj(cy)));
            }
        }
    }
}

TEST_CASE("subfields") {
    const Field& F4 = Field::predefined(4);
    CHECK(F4.subfield_elements(1) == std::vector<code_t>{0, 1});
    const Field& F9 = Field::predefined(9);
    CHECK(F9.subfield_elements(1) == std::vector<code_t>{0, 1, 2});
    const Field& F8 = Field::predefined(8);
    CHECK(F8.subfield_elements(1) == std::vector<code_t>{0, 1});
    CHECK_THROWS_AS(F8.subfield_elements(2), Error);

    for (int q : {4, 9}) {
        const Field& F = Field::predefined(q);
        auto sub = F.subfield_elements(1);
        for (code_t a : sub)
            for (code_t b : sub) {
                CHECK(F.in_subfield(F.add(a, b), 1));
                CHECK(F.in_subfield(F.mul(a, b), 1));
            }
    }
}

TEST_CASE("descriptors and element notation") {
    CHECK(&Field::from_descriptor("F9") == &Field::predefined(9));
    CHECK(&Field::from_descriptor("GF(3,2,[2,2,1])") == &Field::predefined(9));
    CHECK(Field::predefined(9).descriptor() == "F9");
    CHECK_THROWS_AS(Field::from_descriptor("F10"), Error);

    const Field& F9 = Field::predefined(9);
    CHECK(F9.parse_element("e^5") == F9.pow(F9.gen(), 5));
    CHECK(F9.parse_element("-1") == F9.neg(1));
    CHECK(F9.parse_element("e^-1") == F9.inv(F9.gen()));
    CHECK(F9.show(F9.pow(F9.gen(), 5)) == "e^5");
    CHECK(F9.show(0) == "0");

    const Field& F4 = Field::predefined(4);
    CHECK(F4.parse_element("-e^-1") == F4.neg(F4.inv(F4.gen())));
    CHECK(F4.parse_element("e^2") == F4.mul(F4.gen(), F4.gen()));
}
