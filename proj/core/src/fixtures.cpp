#include "polargrass/fixtures.hpp"

#include <sstream>

#include "json.hpp"
#include "polargrass/gensets.hpp"

namespace polargrass {

namespace {

using Rows = std::vector<std::vector<std::string>>;

Rows rows(std::initializer_list<std::initializer_list<const char*>> rs) {
    Rows out;
    for (auto& r : rs) {
        std::vector<std::string> row;
        for (const char* t : r) row.emplace_back(t);
        out.push_back(std::move(row));
    }
    return out;
}

Fixture mgen(int q) {
    Fixture f;
    f.name = "m-gen-" + std::to_string(q);
    f.space = "Qparab(3," + std::to_string(q) + ")";
    f.subspaces = {
        {"l_eps", rows({{"0", "e", "e^-1", "-e", "0", "-1", "1"}, {"1", "1", "0", "0", "e", "-e^-1", "0"}})},
        {"t", rows({{"1", "0", "0", "0", "e", "0", "0"}, {"0", "e", "0", "0", "0", "-1", "0"}})},
        {"t1", rows({{"1", "0", "0", "0", "0", "0", "0"}, {"0", "0", "0", "0", "1", "0", "0"}})},
        {"t2", rows({{"0", "1", "0", "0", "0", "0", "0"}, {"0", "0", "0", "0", "0", "1", "0"}})},
        {"s", rows({{"0", "0", "e^-1", "-e", "0", "0", "1"}, {"1", "1", "0", "0", "e", "-e^-1", "0"}})},
        {"s1", rows({{"0", "0", "e^-1", "-e", "0", "0", "1"}, {"1", "0", "0", "0", "e", "0", "0"}})},
        {"s2", rows({{"0", "0", "e^-1", "-e", "0", "0", "1"}, {"0", "1", "0", "0", "0", "-e^-1", "0"}})},
        {"s11", rows({{"0", "0", "e^-1", "-e", "e^2", "0", "1"}, {"1", "0", "0", "0", "0", "0", "0"}})},
        {"s12", rows({{"e", "0", "e^-1", "-e", "0", "0", "1"}, {"0", "0", "0", "0", "1", "0", "0"}})},
        {"s21", rows({{"0", "0", "e^-1", "-e", "0", "-e^-1", "1"}, {"0", "1", "0", "0", "0", "0", "0"}})},
        {"s22", rows({{"0", "1", "e^-1", "-e", "0", "0", "1"}, {"0", "0", "0", "0", "0", "1", "0"}})},
    };
    f.memberships = {{"t", "s", "l_eps"}, {"s", "s1", "s2"}, {"s1", "s11", "s12"}, {"s2", "s21", "s22"}};
    f.rational_point_claims = {"s11", "s12", "s21", "s22", "t1", "t2"};
    f.opposite_pair = {"t1", "t2"};
    f.nonrational_meet = {{"t", "t1"}, {"t", "t2"}};
    return f;
}

Fixture tgen4() {
    Fixture f;
    f.name = "t-gen-4";
    f.space = "Qparab(3,4)";
    f.subspaces = {
        {"l_eps", rows({{"0", "e", "e^-1", "-e", "0", "-1", "1"}, {"1", "1", "0", "0", "e", "-e^-1", "0"}})},
        {"l1", rows({{"1", "0", "0", "1", "1", "1", "1"}, {"1", "e^2", "e", "e", "0", "1", "0"}})},
        {"l2", rows({{"1", "1", "1", "0", "0", "0", "1"}, {"1", "0", "1", "1", "e^2", "e", "0"}})},
    };
    f.memberships = {{"l_eps", "l1", "l2"}};
    f.rational_point_claims = {"l1", "l2"};
    return f;
}

Fixture tgen8() {
    Fixture f;
    f.name = "t-gen-8";
    f.space = "Qparab(3,8)";
    f.subspaces = {
        {"l_eps", rows({{"0", "e", "e^-1", "-e", "0", "-1", "1"}, {"1", "1", "0", "0", "e", "-e^-1", "0"}})},
        {"l1", rows({{"0", "0", "1", "e^4", "1", "e^5", "1"}, {"1", "e", "e^4", "e^4", "e^4", "0", "0"}})},
        {"l2", rows({{"e^5", "0", "e^2", "e^3", "e", "e^3", "1"}, {"0", "1", "e", "e", "e^6", "e^3", "0"}})},
        {"l11", rows({{"0", "0", "1", "1", "1", "0", "1"}, {"1", "e", "e^4", "e^4", "e^4", "0", "0"}})},
        {"l12", rows({{"0", "0", "0", "1", "0", "1", "0"}, {"1", "e", "e^4", "e^4", "e^4", "0", "0"}})},
        {"l21", rows({{"1", "0", "1", "0", "1", "0", "0"}, {"0", "1", "e", "e", "e^6", "e^3", "0"}})},
        {"l22", rows({{"0", "1", "1", "1", "0", "0", "1"}, {"0", "1", "e", "e", "e^6", "e^3", "0"}})},
    };
    f.memberships = {{"l_eps", "l1", "l2"}, {"l1", "l11", "l12"}, {"l2", "l21", "l22"}};
    f.rational_point_claims = {"l11", "l12", "l21", "l22"};
    return f;
}

Fixture tgen9() {
    Fixture f;
    f.name = "t-gen-9";
    f.space = "Qparab(3,9)";
    f.subspaces = {
        {"l_eps", rows({{"0", "e", "e^-1", "-e", "0", "-1", "1"}, {"1", "1", "0", "0", "e", "-e^-1", "0"}})},
        {"l1", rows({{"0", "e^7", "e^7", "e^7", "e^5", "-1", "1"}, {"1", "1", "0", "0", "e", "e^3", "0"}})},
        {"l2", rows({{"0", "e^5", "e^7", "e^2", "e^2", "-1", "1"}, {"1", "1", "0", "0", "e", "e^3", "0"}})},
        {"l11", rows({{"0", "e^3", "e^3", "e^3", "e^6", "e^3", "1"}, {"1", "-1", "1", "1", "0", "0", "0"}})},
        {"l12", rows({{"0", "-1", "-1", "-1", "1", "1", "1"}, {"1", "e^5", "e^6", "e^6", "1", "e^2", "0"}})},
        {"l21", rows({{"1", "-1", "1", "0", "0", "0", "1"}, {"1", "e^5", "e^2", "e^2", "1", "e^2", "0"}})},
        {"l22", rows({{"-1", "1", "0", "-1", "0", "0", "1"}, {"0", "1", "-1", "-1", "e^5", "e^7", "0"}})},
    };
    f.memberships = {{"l_eps", "l1", "l2"}, {"l1", "l11", "l12"}, {"l2", "l21", "l22"}};
    f.rational_point_claims = {"l11", "l12", "l21", "l22"};
    return f;
}

Fixture notgen(int q) {
    Fixture f;
    f.name = "not-gen-" + std::to_string(q);
    f.space = "Qplus(3," + std::to_string(q) + ")";
    f.subspaces = {
        {"l", rows({{"1", "0", "e", "0", "0", "0"}, {"0", "e", "0", "-1", "0", "0"}})},
        {"X1", rows({{"1", "0", "e", "0", "0", "0"}, {"0", "e", "0", "-1", "0", "0"}, {"0", "0", "0", "0", "1", "0"}})},
        {"X2", rows({{"1", "0", "e", "0", "0", "0"}, {"0", "e", "0", "-1", "0", "0"}, {"0", "0", "0", "0", "0", "1"}})},
    };
    f.no_rational_point_claims = {"l"};
    f.exactly_one_rational_claims = {"X1", "X2"};
    return f;
}

}  // namespace

Fixture load_fixture(const std::string& name) {
    if (name == "m-gen" || name == "m-gen-4") return mgen(4);
    if (name == "m-gen-8") return mgen(8);
    if (name == "m-gen-9") return mgen(9);
    if (name == "t-gen-4") return tgen4();
    if (name == "t-gen-8") return tgen8();
    if (name == "t-gen-9") return tgen9();
    if (name == "not-gen" || name == "not-gen-4") return notgen(4);
    if (name == "not-gen-8") return notgen(8);
    if (name == "not-gen-9") return notgen(9);
    throw Error("unknown fixture '" + name + "'");
}

namespace {
constexpr const char* kFixtureVersion = "polargrass-fixture-1";
}

std::string fixture_to_json(const Fixture& f) {
    nlohmann::json j;
    j["version"] = kFixtureVersion;
    j["name"] = f.name;
    j["space"] = f.space;
    j["sub_degree"] = f.sub_degree;
    nlohmann::json subs = nlohmann::json::object();
    for (const auto& [name, rws] : f.subspaces) subs[name] = rws;
    j["subspaces"] = subs;
    nlohmann::json mems = nlohmann::json::array();
    for (const auto& m : f.memberships) mems.push_back({m.target, m.a, m.b});
    j["memberships"] = mems;
    j["rational_point_claims"] = f.rational_point_claims;
    j["no_rational_point_claims"] = f.no_rational_point_claims;
    j["exactly_one_rational_claims"] = f.exactly_one_rational_claims;
    if (!f.opposite_pair.first.empty())
        j["opposite_pair"] = {f.opposite_pair.first, f.opposite_pair.second};
    nlohmann::json meets = nlohmann::json::array();
    for (const auto& [a, b] : f.nonrational_meet) meets.push_back({a, b});
    j["nonrational_meet"] = meets;
    return j.dump(2);
}

Fixture fixture_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception&) {
        throw Error("fixture bundle is not valid JSON");
    }
    if (j.value("version", "") != kFixtureVersion)
        throw Error("fixture bundle version mismatch (expected " + std::string(kFixtureVersion) + ")");
    Fixture f;
    f.name = j.value("name", "unnamed");
    f.space = j.at("space").get<std::string>();
    f.sub_degree = j.value("sub_degree", 1);
    for (const auto& [name, rws] : j.at("subspaces").items()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : rws) {
            std::vector<std::string> r;
            for (const auto& tok : row) r.push_back(tok.get<std::string>());
            rows.push_back(std::move(r));
        }
        f.subspaces.emplace_back(name, std::move(rows));
    }
    for (const auto& m : j.value("memberships", nlohmann::json::array()))
        f.memberships.push_back({m.at(0).get<std::string>(), m.at(1).get<std::string>(),
                                 m.at(2).get<std::string>()});
    for (const auto& s : j.value("rational_point_claims", nlohmann::json::array()))
        f.rational_point_claims.push_back(s.get<std::string>());
    for (const auto& s : j.value("no_rational_point_claims", nlohmann::json::array()))
        f.no_rational_point_claims.push_back(s.get<std::string>());
    for (const auto& s : j.value("exactly_one_rational_claims", nlohmann::json::array()))
        f.exactly_one_rational_claims.push_back(s.get<std::string>());
    if (j.contains("opposite_pair"))
        f.opposite_pair = {j["opposite_pair"].at(0).get<std::string>(),
                           j["opposite_pair"].at(1).get<std::string>()};
    for (const auto& m : j.value("nonrational_meet", nlohmann::json::array()))
        f.nonrational_meet.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
    return f;
}

namespace {

std::vector<Vec> subspace_points(const Field& F, const Subspace& s) {
    std::vector<Vec> out;
    int k = s.rank(), n = s.ambient();
    for_each_projective_point(F, k, [&](const code_t* t) {
        Vec v(n, 0);
        for (int i = 0; i < k; ++i) {
            if (t[i] == 0) continue;
            for (int j = 0; j < n; ++j) v[j] = F.add(v[j], F.mul(t[i], s.at(i, j)));
        }
        out.push_back(normalize_point(F, v));
    });
    return out;
}

bool vec_rational(const Field& F, int sub, const Vec& v) {
    for (code_t c : v)
        if (!F.in_subfield(c, sub)) return false;
    return true;
}

}  // namespace

FixtureReport verify_fixture(const Fixture& f) {
    FormSpec form = FormSpec::standard(f.space);
    const Field& F = form.field();
    int N = form.dim();
    FixtureReport rep;
    rep.name = f.name;

    std::vector<std::pair<std::string, Subspace>> named;
    for (const auto& [name, rws] : f.subspaces) {
        std::vector<Vec> vrows;
        for (const auto& row : rws) {
            if (static_cast<int>(row.size()) != N)
                throw Error("fixture row has wrong length in " + f.name);
            Vec v;
            for (const auto& tok : row) v.push_back(F.parse_element(tok));
            vrows.push_back(std::move(v));
        }
        Subspace s = Subspace::span(F, N, vrows);
        FixtureCheck c;
        c.what = name + " has the stated rank";
        c.passed = (s.rank() == static_cast<int>(rws.size()));
        rep.checks.push_back(c);
        named.emplace_back(name, std::move(s));
    }
    auto get = [&](const std::string& n) -> const Subspace& {
        for (const auto& [nm, s] : named)
            if (nm == n) return s;
        throw Error("fixture subspace '" + n + "' not found");
    };

    for (const auto& [name, s] : named) {
        bool sing = true;
        for (int i = 0; i < s.rank() && sing; ++i) {
            if (form.eval(s.row(i)) != 0) sing = false;
            for (int j = i + 1; j < s.rank() && sing; ++j)
                if (form.pair(s.row(i), s.row(j)) != 0) sing = false;
        }
        FixtureCheck c;
        c.what = name + " is totally singular";
        c.passed = sing;
        rep.checks.push_back(c);
    }

    for (const auto& mb : f.memberships) {
        const Subspace& a = get(mb.a);
        const Subspace& b = get(mb.b);
        const Subspace& t = get(mb.target);
        Subspace x = intersect(a, b);
        Subspace z = sum(a, b);
        bool collinear = (x.rank() == a.rank() - 1) && (z.rank() == a.rank() + 1);
        if (collinear) {
            // Z must be totally singular for the pencil to be a line
            for (int i = 0; i < z.rank() && collinear; ++i) {
                if (form.eval(z.row(i)) != 0) collinear = false;
                for (int j = i + 1; j < z.rank() && collinear; ++j)
                    if (form.pair(z.row(i), z.row(j)) != 0) collinear = false;
            }
        }
        bool member = collinear && t.contains(x) && z.contains(t) && t.rank() == a.rank();
        FixtureCheck c;
        c.what = mb.target + " lies on the pencil of " + mb.a + " and " + mb.b;
        c.passed = member;
        if (!member) c.detail = collinear ? "membership fails" : "generators are not collinear";
        rep.checks.push_back(c);
    }

    for (const auto& nm : f.rational_point_claims) {
        const Subspace& s = get(nm);
        bool has = false;
        for (const auto& v : subspace_points(F, s))
            if (vec_rational(F, f.sub_degree, v)) { has = true; break; }
        FixtureCheck c;
        c.what = nm + " contains an F0-rational point";
        c.passed = has;
        rep.checks.push_back(c);
    }
    for (const auto& nm : f.no_rational_point_claims) {
        const Subspace& s = get(nm);
        bool has = false;
        for (const auto& v : subspace_points(F, s))
            if (vec_rational(F, f.sub_degree, v)) { has = true; break; }
        FixtureCheck c;
        c.what = nm + " has no F0-rational point";
        c.passed = !has;
        rep.checks.push_back(c);
    }
    for (const auto& nm : f.exactly_one_rational_claims) {
        const Subspace& s = get(nm);
        int cnt = 0;
        for (const auto& v : subspace_points(F, s))
            if (vec_rational(F, f.sub_degree, v)) ++cnt;
        FixtureCheck c;
        c.what = nm + " has exactly one F0-rational point";
        c.passed = (cnt == 1);
        c.detail = "count " + std::to_string(cnt);
        rep.checks.push_back(c);
    }

    if (!f.opposite_pair.first.empty()) {
        const Subspace& a = get(f.opposite_pair.first);
        const Subspace& b = get(f.opposite_pair.second);
        std::vector<code_t> pm(4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) pm[static_cast<size_t>(i) * 2 + j] = form.pair(a.row(i), b.row(j));
        FixtureCheck c;
        c.what = f.opposite_pair.first + " and " + f.opposite_pair.second + " are opposite";
        c.passed = (rref_inplace(F, pm.data(), 2, 2) == 2);
        rep.checks.push_back(c);
    }

    for (const auto& [line, opposite] : f.nonrational_meet) {
        Subspace meet = intersect(get(line), get(opposite));
        FixtureCheck c;
        c.what = line + " meets " + opposite + " in a single non-K-rational point";
        c.passed = (meet.rank() == 1) && !k_rational(F, f.sub_degree, meet.row(0));
        rep.checks.push_back(c);
    }
    return rep;
}

}  // namespace polargrass
