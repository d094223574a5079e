#include "doctest.h"
#include "polargrass/fixtures.hpp"
#include "polargrass/gensets.hpp"

using namespace polargrass;

TEST_CASE("apartments") {
    PolarModel h44(FormSpec::standard("H(2,1,2)"));
    GenSet ap = apartment(h44);
    CHECK(ap.size() == 4);
    Geometry dual = build_grassmannian(h44, 2);
    CHECK(is_generating(dual, ap.ids()));
    // exhaustively: no 3-subset generates
    CHECK(is_irredundant(dual, ap.ids()));

    // hyperbolic dual has thin lines: the apartment closure is itself
    PolarModel qp32(FormSpec::standard("Qplus(3,2)"));
    GenSet ap2 = apartment(qp32);
    CHECK(ap2.size() == 8);
    Geometry dual2 = build_grassmannian(qp32, 3);
    ClosureResult r = span_closure(dual2, ap2.ids());
    CHECK_FALSE(r.generated_all);
    CHECK(r.closed_count == 8);
}

TEST_CASE("k=2 generating construction") {
    PolarModel m(FormSpec::standard("Qparab(3,2)"));
    Vec phi(7, 0);
    phi[6] = 1;
    Hyperplane h = m.hyperplane_section(phi);  // nondegenerate Q+(5,2) section
    long p0 = -1;
    for (long p = 0; p < m.num_points(); ++p)
        if (!h.contains(p)) { p0 = p; break; }
    REQUIRE(p0 >= 0);
    long l0 = least_valid_l0(m, h, p0);
    GenSet gs = genset_k2(m, h, p0, l0);
    Geometry g = build_grassmannian(m, 2);
    CHECK(is_generating(g, gs.ids()));

    // hypothesis violations are named
    long bad = -1;
    {
        // a line through p0 (contained in p0^perp)
        const auto& lines = m.sk(2);
        for (long i = 0; i < lines.size(); ++i) {
            Subspace s = lines.get(i);
            if (s.contains(m.point_vec(p0))) { bad = i; break; }
        }
    }
    REQUIRE(bad >= 0);
    CHECK_THROWS_WITH_AS(genset_k2(m, h, p0, bad), doctest::Contains("p0^perp"), Error);
    long in_h = -1;
    for (long p = 0; p < m.num_points(); ++p)
        if (h.contains(p)) { in_h = p; break; }
    REQUIRE(in_h >= 0);
    CHECK_THROWS_WITH_AS(genset_k2(m, h, in_h, l0), doctest::Contains("p0 lies in H"), Error);
    long inside = -1;
    {
        const auto& lines = m.sk(2);
        std::vector<code_t> rows(2 * 7);
        for (long i = 0; i < lines.size(); ++i) {
            lines.rows_of(i, rows.data());
            bool in_h = true;
            for (int r = 0; r < 2 && in_h; ++r)
                if (rows[r * 7 + 6] != 0) in_h = false;
            if (in_h) { inside = i; break; }
        }
    }
    REQUIRE(inside >= 0);
    CHECK_THROWS_WITH_AS(genset_k2(m, h, p0, inside), doctest::Contains("lies in H"), Error);
}

TEST_CASE("k=3 generating construction on Qplus(4,2)") {
    PolarModel m(FormSpec::standard("Qplus(4,2)"), Budget{});
    Vec phi(8, 0);
    phi[6] = 1;
    phi[7] = m.field().neg(1);
    Hyperplane h = m.hyperplane_section(phi);
    CHECK(h.kind == Hyperplane::Kind::nondegenerate);
    long p0 = -1;
    for (long p = 0; p < m.num_points(); ++p)
        if (!h.contains(p)) { p0 = p; break; }
    REQUIRE(p0 >= 0);

    // inner generating set: points of H cap p0^perp via the tower construction
    Vec phi_p0 = m.form().pair_functional(m.point_vec(p0));
    std::vector<code_t> cons(2 * 8);
    std::copy(phi.begin(), phi.end(), cons.begin());
    std::copy(phi_p0.begin(), phi_p0.end(), cons.begin() + 8);
    Subspace w = Subspace::span(m.field(), 8, kernel_basis(m.field(), cons.data(), 2, 8));
    SubModel sub = m.induced(w);
    std::vector<Subspace> inner;
    for (const auto& s : tower_point_genset(*sub.model)) inner.push_back(sub.lift(s));

    GenSet gs = genset_k(m, h, p0, 3, inner);
    Geometry g = build_grassmannian(m, 3);
    CHECK(g.num_points == 2025);
    CHECK(is_generating(g, gs.ids()));
}

TEST_CASE("singular-hyperplane construction") {
    PolarModel m(FormSpec::standard("Qplus(4,2)"));
    long q = 0, p0 = -1;
    for (long p = 1; p < m.num_points(); ++p)
        if (!m.collinear(q, p)) { p0 = p; break; }
    REQUIRE(p0 >= 0);
    std::vector<Subspace> inner{Subspace(m.field(), 8)};
    GenSet gs = genset_singular(m, q, p0, 2, inner);
    Geometry g = build_grassmannian(m, 2);
    CHECK(is_generating(g, gs.ids()));

    // k = n-1 is refused
    CHECK_THROWS_WITH_AS(genset_singular(m, q, p0, 3, inner), doctest::Contains("k = n-1"), Error);

    // rank 3 puts k = 2 at the refused boundary case
    PolarModel m2(FormSpec::standard("Qparab(3,2)"));
    long q2 = 0, p2 = -1;
    for (long p = 1; p < m2.num_points(); ++p)
        if (!m2.collinear(q2, p)) { p2 = p; break; }
    std::vector<Subspace> inner2{Subspace(m2.field(), 7)};
    CHECK_THROWS_WITH_AS(genset_singular(m2, q2, p2, 2, inner2), doctest::Contains("k = n-1"),
                         Error);
}

TEST_CASE("S_n of a nice hyperplane spans the dual polar space") {
    PolarModel m(FormSpec::standard("H(2,1,2)"));
    Geometry dual = build_grassmannian(m, 2);
    const Field& F = m.field();
    int checked = 0;
    for_each_projective_point(F, 5, [&](const code_t* v) {
        if (checked >= 5) return;
        if (m.form().eval(v) == 0) return;
        Hyperplane hp = m.hyperplane_pole(Vec(v, v + 5));
        if (hp.kind != Hyperplane::Kind::nondegenerate || hp.induced_rank != m.rank()) return;
        // S_n(H): maximal subspaces with every point inside the hyperplane
        std::vector<long> seed;
        const auto& tab = m.sk(2);
        std::vector<code_t> rows(2 * 5);
        for (long i = 0; i < tab.size(); ++i) {
            tab.rows_of(i, rows.data());
            code_t a0 = 0, a1 = 0;
            for (int j = 0; j < 5; ++j) {
                a0 = F.add(a0, F.mul(hp.covector[j], rows[j]));
                a1 = F.add(a1, F.mul(hp.covector[j], rows[5 + j]));
            }
            if (a0 == 0 && a1 == 0) seed.push_back(i);
        }
        CHECK(is_generating(dual, seed));
        ++checked;
    });
    CHECK(checked == 5);
}

TEST_CASE("tower point generating sets") {
    for (const char* desc : {"Qparab(3,2)", "Qplus(3,3)", "Qminus(2,3)"}) {
        PolarModel m(FormSpec::standard(desc));
        auto pts = tower_point_genset(m);
        CHECK(static_cast<int>(pts.size()) == 2 * m.rank() + m.defect());
        Geometry g = build_grassmannian(m, 1);
        std::vector<long> seed;
        for (const auto& s : pts) seed.push_back(m.point_id(s.row(0)));
        CHECK(is_generating(g, seed));
    }
}

TEST_CASE("hermitian generating set, k = 1") {
    PolarModel m(FormSpec::standard("H(2,1,3)"));
    CHECK(m.num_points() == 2440);
    HermitianGensetReport rep = hermitian_genset(m, 1);
    CHECK(rep.target == 5);
    CHECK(static_cast<long>(rep.set.size()) == 5);
    Geometry g = build_grassmannian(m, 1);
    CHECK(is_generating(g, rep.set.ids()));
}

TEST_CASE("orthogonal construction at defect 2") {
    PolarModel m(FormSpec::standard("Qminus(3,4)"), Budget::large());
    OrthGensetReport rep = orth_q2_genset(m);
    CHECK(rep.target == 28);  // C(8,2)
    CHECK(rep.set.size() == 28);
    CHECK_FALSE(rep.rational_claimed);
    Geometry g = build_grassmannian(m, 2);
    CHECK(is_generating(g, rep.set.ids()));

    CHECK_THROWS_AS(orth_q2_genset(*std::make_unique<PolarModel>(FormSpec::standard("Qplus(3,4)"))),
                    Error);  // n = 3 needs d >= 1
}

TEST_CASE("subfield context and cor54 adjunction on Q(6,4)") {
    PolarModel m(FormSpec::standard("Qparab(3,4)"));
    SubfieldContext ctx = make_subfield_context(m, 1);
    CHECK(ctx.rational_lines.size() == 315);  // the lines of Q(6,2)
    CHECK(ctx.rational_points.count() == 63);

    const Field& F = m.field();
    auto line_of = [&](std::initializer_list<std::initializer_list<int>> rs) {
        std::vector<Vec> rows;
        for (auto& r : rs) {
            Vec v;
            for (int x : r) v.push_back(static_cast<code_t>(x));
            rows.push_back(v);
        }
        long id = m.sk(2).find(Subspace::span(F, 7, rows));
        REQUIRE(id >= 0);
        return id;
    };
    long l0 = line_of({{1, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 0}});  // <e1, e5>
    long l1 = line_of({{0, 1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 1, 0}});  // <e2, e6>
    long t = cor54_adjoin(ctx, l0, l1);

    // expected: t = <[1,0,0,0,e,0,0], [0,e,0,0,0,-1,0]>
    code_t e = F.gen();
    std::vector<Vec> trows{Vec{1, 0, 0, 0, e, 0, 0}, Vec{0, e, 0, 0, 0, F.neg(1), 0}};
    CHECK(t == m.sk(2).find(Subspace::span(F, 7, trows)));
}

TEST_CASE("omega obstruction on Qplus(3,4)") {
    PolarModel m(FormSpec::standard("Qplus(3,4)"));
    OmegaReport rep = omega_obstruction(m, 1);
    CHECK(rep.total_lines == 1785);
    CHECK(rep.witness_outside);
    CHECK(rep.omega_subspace);
    CHECK(rep.closure_matches);
    CHECK(rep.omega_size < rep.total_lines);
    CHECK(rep.witness_plane_rational_points == std::vector<int>{1, 1});
    CHECK(rep.all_verified());
}

TEST_CASE("gset predicate") {
    PolarModel m(FormSpec::standard("Qparab(3,4)"));
    SubfieldContext ctx = make_subfield_context(m, 1);
    CHECK(gset_predicate(ctx, ctx.rational_lines));

    PolarModel mh(FormSpec::standard("Qplus(3,4)"));
    SubfieldContext ctxh = make_subfield_context(mh, 1);
    CHECK_FALSE(gset_predicate(ctxh, ctxh.rational_lines));
}

TEST_CASE("l-gen and r-pi consequences on Q(6,4)") {
    PolarModel m(FormSpec::standard("Qparab(3,4)"));
    SubfieldContext ctx = make_subfield_context(m, 1);
    Geometry g = build_grassmannian(m, 2);
    ClosureResult cl = span_closure(g, ctx.rational_lines);

    // every line through a rational point lies in the closure
    const auto& lines = m.sk(2);
    long checked = 0;
    for (long i = 0; i < lines.size() && checked < 2000; ++i) {
        Subspace s = lines.get(i);
        bool meets = false;
        for (long p = 0; p < m.num_points() && !meets; ++p)
            if (ctx.rational_points.test(p) && s.contains(m.point_vec(p))) meets = true;
        if (meets) {
            CHECK(cl.closed.test(i));
            ++checked;
        }
    }
    CHECK(checked > 0);

    // sampled planes with >= 2 rational points have all lines in the closure
    const auto& planes = m.sk(3);
    std::vector<code_t> zrows(3 * 7);
    long sampled = 0;
    for (long zi = 0; zi < planes.size() && sampled < 50; zi += 7) {
        Subspace z = planes.get(zi);
        int rat = 0;
        for (long p = 0; p < m.num_points(); ++p)
            if (ctx.rational_points.test(p) && z.contains(m.point_vec(p))) ++rat;
        if (rat < 2) continue;
        ++sampled;
        for (long i = 0; i < lines.size(); ++i)
            if (z.contains(lines.get(i))) CHECK(cl.closed.test(i));
    }
    CHECK(sampled > 0);
}

TEST_CASE("fixtures") {
    for (const char* name : {"m-gen-4", "m-gen-8", "m-gen-9", "t-gen-4", "t-gen-8", "t-gen-9",
                             "not-gen-4", "not-gen-9"}) {
        Fixture f = load_fixture(name);
        FixtureReport rep = verify_fixture(f);
        INFO(name);
        for (const auto& c : rep.checks) {
            INFO(c.what, " ", c.detail);
            CHECK(c.passed);
        }
        CHECK(rep.all_passed());
    }
    CHECK_THROWS_AS(load_fixture("nope"), Error);

    // JSON round trip
    Fixture f = load_fixture("t-gen-9");
    Fixture back = fixture_from_json(fixture_to_json(f));
    CHECK(back.space == f.space);
    CHECK(back.subspaces.size() == f.subspaces.size());
    CHECK(verify_fixture(back).all_passed());
    CHECK_THROWS_AS(fixture_from_json("{}"), Error);
    CHECK_THROWS_AS(fixture_from_json("not json"), Error);
}

TEST_CASE("orthogonal construction through the hyperbolic step") {
    // n = 4, d = 0 exercises the x_{2n-1} = x_{2n} section arm
    PolarModel m(FormSpec::standard("Qplus(4,4)"), Budget::large());
    OrthGensetReport rep = orth_q2_genset(m);
    CHECK(rep.target == 28);  // C(8,2)
    CHECK(rep.set.size() == 28);
    CHECK(rep.rational_claimed);
    CHECK(rep.all_rational);
    Geometry g = build_grassmannian(m, 2);
    CHECK(is_generating(g, rep.set.ids()));
}
