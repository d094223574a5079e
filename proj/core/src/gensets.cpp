#include "polargrass/gensets.hpp"

#include <algorithm>
#include <cstring>

namespace polargrass {

namespace {

code_t apply_cov(const Field& F, const Vec& phi, const code_t* v) {
    code_t acc = 0;
    for (size_t j = 0; j < phi.size(); ++j)
        if (phi[j] != 0 && v[j] != 0) acc = F.add(acc, F.mul(phi[j], v[j]));
    return acc;
}

// point IDs of a line, ascending
std::vector<long> line_point_ids(const PolarModel& m, long line_id) {
    const Field& F = m.field();
    int N = m.dim(), q = F.order();
    std::vector<code_t> rows(static_cast<size_t>(2) * N);
    m.sk(2).rows_of(line_id, rows.data());
    std::vector<long> out;
    Vec v(rows.begin() + N, rows.end());
    out.push_back(m.point_id(v));
    for (int b = 0; b < q; ++b) {
        for (int j = 0; j < N; ++j) v[j] = F.add(rows[j], F.mul(static_cast<code_t>(b), rows[static_cast<size_t>(N) + j]));
        out.push_back(m.point_id(v));
    }
    for (long id : out)
        if (id < 0) throw Error("line point missing from the model (internal)");
    std::sort(out.begin(), out.end());
    return out;
}

bool subspace_contains_vec(const Field& F, const std::vector<code_t>& rows, int k, int n,
                           const code_t* v) {
    Vec w(v, v + n);
    reduce_against(F, rows.data(), k, n, w.data());
    return std::all_of(w.begin(), w.end(), [](code_t c) { return c == 0; });
}

// the functional row values (phi(r_i))_i for the rows of a table entry
void cov_on_rows(const Field& F, const Vec& phi, const std::vector<code_t>& rows, int k, int n,
                 code_t* out) {
    for (int i = 0; i < k; ++i) out[i] = apply_cov(F, phi, rows.data() + static_cast<size_t>(i) * n);
}

bool two_rows_independent(const Field& F, const code_t* a, const code_t* b, int k) {
    // rank of the 2 x k matrix [a; b]
    std::vector<code_t> m(static_cast<size_t>(2) * k);
    std::copy(a, a + k, m.begin());
    std::copy(b, b + k, m.begin() + k);
    return rref_inplace(F, m.data(), 2, k) == 2;
}

Vec hyperplane_covector_of_span(const Field& F, const Subspace& u) {
    if (u.rank() != u.ambient() - 1) throw Error("span is not a linear hyperplane");
    auto ker = kernel_basis(F, u.rows().data(), u.rank(), u.ambient());
    if (ker.size() != 1) throw Error("hyperplane covector not unique (internal)");
    return ker[0];
}

}  // namespace

void GenSet::add(long id, const std::string& tag) {
    auto it = std::lower_bound(elements.begin(), elements.end(), id);
    if (it != elements.end() && *it == id) return;
    tags.insert(tags.begin() + (it - elements.begin()), tag);
    elements.insert(it, id);
}

bool GenSet::contains(long id) const {
    return std::binary_search(elements.begin(), elements.end(), id);
}

GenSet apartment(const PolarModel& model) {
    const Field& F = model.field();
    int n = model.rank(), N = model.dim();
    const auto& pairs = model.witt().pairs;
    GenSet out;
    out.model = &model;
    out.k = n;
    const SubspaceTable& top = model.sk(n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<Vec> rows;
        for (int i = 0; i < n; ++i) rows.push_back((mask >> i) & 1 ? pairs[i].second : pairs[i].first);
        Subspace s = Subspace::span(F, N, rows);
        long id = (s.rank() == n) ? top.find(s) : -1;
        if (id < 0) throw Error("frame clique span is not a maximal singular subspace (internal)");
        out.add(id, "apartment");
    }
    if (out.size() != (1u << n)) throw Error("apartment has fewer than 2^n members (internal)");
    return out;
}

GenSet genset_k2(const PolarModel& m, const Hyperplane& h, long p0, long l0) {
    const Field& F = m.field();
    int N = m.dim();
    if (m.rank() <= 2) throw Error("the k=2 construction needs rank n > 2");
    if (h.contains(p0)) throw Error("hypothesis violated: p0 lies in H");
    const SubspaceTable& lines = m.sk(2);
    Vec phi_p0 = m.form().pair_functional(m.point_vec(p0));

    std::vector<code_t> rows(static_cast<size_t>(2) * N);
    lines.rows_of(l0, rows.data());
    code_t a[2], b[2];
    cov_on_rows(F, h.covector, rows, 2, N, a);
    cov_on_rows(F, phi_p0, rows, 2, N, b);
    if (a[0] == 0 && a[1] == 0) throw Error("hypothesis violated: l0 lies in H");
    if (b[0] == 0 && b[1] == 0) throw Error("hypothesis violated: l0 lies in p0^perp");
    if (!two_rows_independent(F, a, b, 2))
        throw Error("hypothesis violated: H cap l0 equals p0^perp cap l0");

    GenSet out;
    out.model = &m;
    out.k = 2;
    const code_t* p0v = m.point(p0);
    for (long i = 0; i < lines.size(); ++i) {
        lines.rows_of(i, rows.data());
        code_t av[2];
        cov_on_rows(F, h.covector, rows, 2, N, av);
        if (av[0] == 0 && av[1] == 0) {
            out.add(i, "S2(H)");
            continue;
        }
        if (subspace_contains_vec(F, rows, 2, N, p0v)) out.add(i, "S2(p0)");
    }
    out.add(l0, "l0");
    return out;
}

long least_valid_l0(const PolarModel& m, const Hyperplane& h, long p0, bool require_rational,
                    int sub_degree) {
    const Field& F = m.field();
    int N = m.dim();
    const SubspaceTable& lines = m.sk(2);
    Vec phi_p0 = m.form().pair_functional(m.point_vec(p0));
    std::vector<code_t> rows(static_cast<size_t>(2) * N);
    for (long i = 0; i < lines.size(); ++i) {
        lines.rows_of(i, rows.data());
        if (require_rational) {
            bool rat = true;
            for (code_t c : rows)
                if (!F.in_subfield(c, sub_degree)) { rat = false; break; }
            if (!rat) continue;
        }
        code_t a[2], b[2];
        cov_on_rows(F, h.covector, rows, 2, N, a);
        cov_on_rows(F, phi_p0, rows, 2, N, b);
        if (a[0] == 0 && a[1] == 0) continue;
        if (b[0] == 0 && b[1] == 0) continue;
        if (two_rows_independent(F, a, b, 2)) return i;
    }
    throw Error("no admissible l0 found");
}

namespace {

// least k-subspace over Z whose intersections with the two covector
// hyperplanes are independent (so hatZ cap K1 cap K2 = Z)
long find_zhat(const PolarModel& m, const Vec& phi1, const Vec& phi2, const Subspace& z, int k) {
    const Field& F = m.field();
    int N = m.dim();
    const SubspaceTable& tab = m.sk(k);
    std::vector<code_t> rows(static_cast<size_t>(k) * N);
    std::vector<code_t> a(k), b(k);
    for (long i = 0; i < tab.size(); ++i) {
        tab.rows_of(i, rows.data());
        bool has_z = true;
        for (int r = 0; r < z.rank() && has_z; ++r)
            if (!subspace_contains_vec(F, rows, k, N, z.rows().data() + static_cast<size_t>(r) * N))
                has_z = false;
        if (!has_z) continue;
        cov_on_rows(F, phi1, rows, k, N, a.data());
        cov_on_rows(F, phi2, rows, k, N, b.data());
        if (two_rows_independent(F, a.data(), b.data(), k)) return i;
    }
    throw Error("no valid hat-Z over the given Z (flags a model bug)");
}

// closure check that `inner` (ambient subspaces) generates the (k-2)-
// Grassmannian of the polar space induced on W
void verify_inner(const PolarModel& m, const Subspace& w, const std::vector<Subspace>& inner,
                  int kk) {
    if (kk < 1) return;
    SubModel sub = m.induced(w);
    if (kk > sub.model->rank()) throw Error("inner generating set has k-2 above the sub-rank");
    Geometry g = build_grassmannian(*sub.model, kk);
    std::vector<long> seed;
    for (const auto& zs : inner) {
        Subspace pz = sub.project(zs);
        long id = sub.model->sk(kk).find(pz);
        if (id < 0) throw Error("inner generating set element is not a singular subspace of H cap p0^perp");
        seed.push_back(id);
    }
    if (!is_generating(g, seed))
        throw Error("inner generating set does not generate (H cap p0^perp)_{k-2}");
}

}  // namespace

GenSet genset_k(const PolarModel& m, const Hyperplane& h, long p0, int k,
                const std::vector<Subspace>& inner) {
    const Field& F = m.field();
    int N = m.dim(), n = m.rank();
    if (k < 2 || k >= n) throw Error("genset_k needs 2 <= k < n");
    if (h.contains(p0)) throw Error("hypothesis violated: p0 lies in H");
    Vec phi_p0 = m.form().pair_functional(m.point_vec(p0));

    // W = H cap p0^perp as a linear subspace
    std::vector<code_t> cons(static_cast<size_t>(2) * N);
    std::copy(h.covector.begin(), h.covector.end(), cons.begin());
    std::copy(phi_p0.begin(), phi_p0.end(), cons.begin() + N);
    Subspace w = Subspace::span(F, N, kernel_basis(F, cons.data(), 2, N));

    if (k == 2) {
        if (!(inner.size() == 1 && inner[0].rank() == 0))
            throw Error("for k = 2 the inner generating set is the empty subspace alone");
    } else {
        for (const auto& zs : inner)
            if (zs.rank() != k - 2) throw Error("inner elements must have rank k-2");
        verify_inner(m, w, inner, k - 2);
    }

    GenSet out;
    out.model = &m;
    out.k = k;
    const SubspaceTable& tab = m.sk(k);
    std::vector<code_t> rows(static_cast<size_t>(k) * N);
    std::vector<code_t> a(k);
    const code_t* p0v = m.point(p0);
    for (long i = 0; i < tab.size(); ++i) {
        tab.rows_of(i, rows.data());
        cov_on_rows(F, h.covector, rows, k, N, a.data());
        if (std::all_of(a.begin(), a.end(), [](code_t c) { return c == 0; })) {
            out.add(i, "S" + std::to_string(k) + "(H)");
            continue;
        }
        if (subspace_contains_vec(F, rows, k, N, p0v)) out.add(i, "S" + std::to_string(k) + "(p0)");
    }
    for (const auto& zs : inner) out.add(find_zhat(m, h.covector, phi_p0, zs, k), "hat-Z");
    return out;
}

GenSet genset_singular(const PolarModel& m, long q, long p0, int k,
                       const std::vector<Subspace>& inner) {
    const Field& F = m.field();
    int N = m.dim(), n = m.rank();
    if (k == n - 1)
        throw Error("refused for k = n-1: the geometry induced on S_k({q,p0}^perp) has no lines");
    if (k < 2 || k >= n) throw Error("genset_singular needs 2 <= k < n-1");
    if (m.collinear(q, p0)) throw Error("hypothesis violated: p0 lies in q^perp");

    Vec phi_q = m.form().pair_functional(m.point_vec(q));
    Vec phi_p0 = m.form().pair_functional(m.point_vec(p0));
    std::vector<code_t> cons(static_cast<size_t>(2) * N);
    std::copy(phi_q.begin(), phi_q.end(), cons.begin());
    std::copy(phi_p0.begin(), phi_p0.end(), cons.begin() + N);
    Subspace w = Subspace::span(F, N, kernel_basis(F, cons.data(), 2, N));

    if (k == 2) {
        if (!(inner.size() == 1 && inner[0].rank() == 0))
            throw Error("for k = 2 the inner generating set is the empty subspace alone");
    } else {
        for (const auto& zs : inner)
            if (zs.rank() != k - 2) throw Error("inner elements must have rank k-2");
        verify_inner(m, w, inner, k - 2);
    }

    GenSet out;
    out.model = &m;
    out.k = k;
    const SubspaceTable& tab = m.sk(k);
    std::vector<code_t> rows(static_cast<size_t>(k) * N);
    std::vector<code_t> a(k), b(k);
    const code_t* qv = m.point(q);
    const code_t* p0v = m.point(p0);
    for (long i = 0; i < tab.size(); ++i) {
        tab.rows_of(i, rows.data());
        if (subspace_contains_vec(F, rows, k, N, qv)) {
            out.add(i, "S" + std::to_string(k) + "(q)");
            continue;
        }
        cov_on_rows(F, phi_q, rows, k, N, a.data());
        cov_on_rows(F, phi_p0, rows, k, N, b.data());
        bool in_q = std::all_of(a.begin(), a.end(), [](code_t c) { return c == 0; });
        bool in_p = std::all_of(b.begin(), b.end(), [](code_t c) { return c == 0; });
        if (in_q && in_p) {
            out.add(i, "S" + std::to_string(k) + "({q,p0}-perp)");
            continue;
        }
        if (subspace_contains_vec(F, rows, k, N, p0v)) out.add(i, "S" + std::to_string(k) + "(p0)");
    }
    for (const auto& zs : inner) out.add(find_zhat(m, phi_q, phi_p0, zs, k), "hat-Z");
    return out;
}

std::vector<Subspace> tower_point_genset(const PolarModel& m) {
    const Field& F = m.field();
    int N = m.dim();
    const WittData& w = m.witt();
    std::vector<Subspace> out;
    std::vector<Vec> span_rows;
    for (const auto& uv : w.pairs) {
        out.push_back(Subspace::point(F, uv.first));
        out.push_back(Subspace::point(F, uv.second));
        span_rows.push_back(uv.first);
        span_rows.push_back(uv.second);
    }
    Subspace level = Subspace::span(F, N, span_rows);
    for (int j = 0; j < m.defect(); ++j) {
        std::vector<Vec> next_rows = span_rows;
        for (int t = 0; t <= j; ++t) next_rows.push_back(w.v0_basis[t]);
        Subspace next = Subspace::span(F, N, next_rows);
        long pick = -1;
        for (long p = 0; p < m.num_points(); ++p) {
            Vec v = m.point_vec(p);
            if (next.contains(v) && !level.contains(v)) { pick = p; break; }
        }
        if (pick < 0) throw Error("no singular point extends the tower level (internal)");
        out.push_back(Subspace::point(F, m.point_vec(pick)));
        level = next;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hermitian construction

namespace {

std::vector<Subspace> herm_rec(const PolarModel& m, int k);

// frame lines plus a twisted triple; n = 3, d = 0, k = 2
std::vector<Subspace> herm_base_n3_k2(const PolarModel& m) {
    const Field& F = m.field();
    int N = m.dim();
    const auto& pairs = m.witt().pairs;
    std::vector<Vec> frame;
    for (const auto& uv : pairs) {
        frame.push_back(uv.first);
        frame.push_back(uv.second);
    }
    std::vector<Subspace> base;
    for (size_t i = 0; i < frame.size(); ++i)
        for (size_t j = i + 1; j < frame.size(); ++j) {
            if (j == i + 1 && i % 2 == 0) continue;  // the hyperbolic pair itself
            if (m.form().pair(frame[i], frame[j]) != 0) continue;
            std::vector<Vec> rows{frame[i], frame[j]};
            base.push_back(Subspace::span(F, N, rows));
        }

    Geometry g = build_grassmannian(m, 2);
    long target = binomial(N, 2);
    for (int gc = 1; gc < F.order(); ++gc) {
        code_t gamma = static_cast<code_t>(gc);
        code_t delta = F.neg(F.inv(F.conj(gamma)));
        auto twisted = [&](int i, int j) {
            Vec u(N, 0), v(N, 0);
            for (int t = 0; t < N; ++t) {
                u[t] = F.add(pairs[i].first[t], F.mul(gamma, pairs[j].first[t]));
                v[t] = F.add(pairs[i].second[t], F.mul(delta, pairs[j].second[t]));
            }
            std::vector<Vec> rows{u, v};
            return Subspace::span(F, N, rows);
        };
        std::vector<Subspace> cand = base;
        cand.push_back(twisted(0, 1));
        cand.push_back(twisted(1, 2));
        cand.push_back(twisted(2, 0));
        std::vector<long> ids;
        bool ok = true;
        for (const auto& s : cand) {
            long id = m.sk(2).find(s);
            if (id < 0) { ok = false; break; }
            ids.push_back(id);
        }
        if (!ok) continue;
        std::vector<Vec> pl;
        for (const auto& s : cand) pl.push_back(plucker_coords(s));
        if (matrix_rank(F, pl) != target) continue;
        if (!is_generating(g, ids)) continue;
        return cand;
    }
    // search fallback
    std::vector<long> found = small_generating_set(g, target);
    std::vector<Subspace> out;
    for (long id : found) out.push_back(m.sk(2).get(id));
    return out;
}

std::vector<Subspace> herm_rec(const PolarModel& m, int k) {
    const Field& F = m.field();
    int N = m.dim(), n = m.rank(), d = m.defect();
    if (k == 0) return {Subspace(F, N)};
    if (k == 1) return tower_point_genset(m);
    if (k >= n) throw Error("hermitian recursion reached k >= n (internal)");

    if (d == 0) {
        if (k == n - 1) {
            if (n == 3 && k == 2) return herm_base_n3_k2(m);
            throw Error("unsupported Hermitian base case: k = n-1 > 2 at defect 0");
        }
        // singular-hyperplane recursion over q^perp
        long q = 0;
        long p0 = -1;
        for (long p = 1; p < m.num_points(); ++p)
            if (!m.collinear(q, p)) { p0 = p; break; }
        if (p0 < 0) throw Error("no point opposite q (internal)");
        Vec phi_q = m.form().pair_functional(m.point_vec(q));
        Vec phi_p0 = m.form().pair_functional(m.point_vec(p0));

        std::vector<Subspace> out;
        // S_k(q): k-spaces through q <-> (k-1)-spaces of Res(q)
        Residue rq = m.upper_residue(Subspace::point(F, m.point_vec(q)));
        for (const auto& s : herm_rec(*rq.model, k - 1)) out.push_back(rq.lift(s));
        // S_k({q,p0}^perp)
        std::vector<code_t> cons(static_cast<size_t>(2) * N);
        std::copy(phi_q.begin(), phi_q.end(), cons.begin());
        std::copy(phi_p0.begin(), phi_p0.end(), cons.begin() + N);
        Subspace wsub = Subspace::span(F, N, kernel_basis(F, cons.data(), 2, N));
        SubModel a = m.induced(wsub);
        for (const auto& s : herm_rec(*a.model, k)) out.push_back(a.lift(s));
        // S_k(p0)
        Residue rp = m.upper_residue(Subspace::point(F, m.point_vec(p0)));
        for (const auto& s : herm_rec(*rp.model, k - 1)) out.push_back(rp.lift(s));
        // hat-G over a generating set of the (k-2)-Grassmannian of {q,p0}^perp
        for (const auto& z : herm_rec(*a.model, k - 2)) {
            Subspace za = a.lift(z);
            long id = find_zhat(m, phi_q, phi_p0, za, k);
            out.push_back(m.sk(k).get(id));
        }
        return out;
    }

    // d > 0: nice-hyperplane tower step
    std::vector<Vec> urows;
    for (const auto& uv : m.witt().pairs) {
        urows.push_back(uv.first);
        urows.push_back(uv.second);
    }
    for (int t = 0; t + 1 < d; ++t) urows.push_back(m.witt().v0_basis[t]);
    Subspace u = Subspace::span(F, N, urows);
    Vec phi_k = hyperplane_covector_of_span(F, u);
    SubModel kprev = m.induced(u);

    long p0 = -1;
    for (long p = 0; p < m.num_points(); ++p)
        if (apply_cov(F, phi_k, m.point(p)) != 0) { p0 = p; break; }
    if (p0 < 0) throw Error("no point outside the tower hyperplane (internal)");
    Vec phi_p0 = m.form().pair_functional(m.point_vec(p0));

    std::vector<Subspace> out;
    for (const auto& s : herm_rec(*kprev.model, k)) out.push_back(kprev.lift(s));
    Residue rp = m.upper_residue(Subspace::point(F, m.point_vec(p0)));
    for (const auto& s : herm_rec(*rp.model, k - 1)) out.push_back(rp.lift(s));
    // K cap p0^perp
    std::vector<code_t> cons(static_cast<size_t>(2) * N);
    std::copy(phi_k.begin(), phi_k.end(), cons.begin());
    std::copy(phi_p0.begin(), phi_p0.end(), cons.begin() + N);
    Subspace wsub = Subspace::span(F, N, kernel_basis(F, cons.data(), 2, N));
    SubModel a = m.induced(wsub);
    for (const auto& z : herm_rec(*a.model, k - 2)) {
        Subspace za = a.lift(z);
        long id = find_zhat(m, phi_k, phi_p0, za, k);
        out.push_back(m.sk(k).get(id));
    }
    return out;
}

}  // namespace

HermitianGensetReport hermitian_genset(const PolarModel& m, int k) {
    if (m.form().kind() != FormKind::hermitian) throw Error("hermitian_genset needs a Hermitian model");
    int n = m.rank(), d = m.defect();
    if (k < 1 || k >= n) throw Error("hermitian_genset needs 1 <= k < n");
    HermitianGensetReport rep;
    rep.target = binomial(2 * n + d, k);
    rep.f4_flagged = (m.field().order() == 4 && k > 1);
    auto subs = herm_rec(m, k);
    GenSet gs;
    gs.model = &m;
    gs.k = k;
    for (const auto& s : subs) {
        long id = m.sk(k).find(s);
        if (id < 0) throw Error("constructed element is not a singular k-subspace (internal)");
        gs.add(id, "construction");
    }
    rep.constructed = static_cast<long>(gs.size());
    if (rep.constructed > rep.target && !rep.f4_flagged) {
        Geometry g = build_grassmannian(m, k);
        if (is_generating(g, gs.ids())) {
            auto trimmed = greedy_minimize(g, gs.ids());
            GenSet t;
            t.model = &m;
            t.k = k;
            for (long id : trimmed) t.add(id, "trimmed");
            gs = std::move(t);
            rep.trimmed = true;
        }
    }
    rep.set = std::move(gs);
    return rep;
}

// ---------------------------------------------------------------------------
// Orthogonal k=2 construction over F4, F8, F9

namespace {

// residue-generating lines through p0, preferring F0-rational ones
std::vector<long> lines_through_p0_genset(const PolarModel& m, long p0, bool prefer_rational,
                                          int sub_degree) {
    const Field& F = m.field();
    int N = m.dim();
    Residue res = m.upper_residue(Subspace::point(F, m.point_vec(p0)));
    Geometry rg = build_grassmannian(*res.model, 1);

    // candidates: all lines through p0, rational first when asked
    const SubspaceTable& lines = m.sk(2);
    std::vector<code_t> rows(static_cast<size_t>(2) * N);
    const code_t* p0v = m.point(p0);
    std::vector<long> rational, other;
    for (long i = 0; i < lines.size(); ++i) {
        lines.rows_of(i, rows.data());
        if (!subspace_contains_vec(F, rows, 2, N, p0v)) continue;
        bool rat = true;
        for (code_t c : rows)
            if (!F.in_subfield(c, sub_degree)) { rat = false; break; }
        (rat ? rational : other).push_back(i);
    }
    std::vector<long> cands;
    if (prefer_rational) {
        cands = rational;
        cands.insert(cands.end(), other.begin(), other.end());
    } else {
        cands = rational;
        cands.insert(cands.end(), other.begin(), other.end());
        std::sort(cands.begin(), cands.end());
    }

    auto project = [&](long lid) {
        Subspace s = lines.get(lid);
        Subspace pr = res.project(s);
        long id = res.model->point_id(normalize_point(F, pr.row(0)));
        if (id < 0) throw Error("residue projection missing (internal)");
        return id;
    };

    std::vector<long> picked;
    std::vector<long> picked_res;
    for (long c : cands) {
        long r = project(c);
        std::vector<long> trial = picked_res;
        trial.push_back(r);
        ClosureResult before = span_closure(rg, picked_res);
        ClosureResult after = span_closure(rg, trial);
        if (after.closed_count > before.closed_count) {
            picked.push_back(c);
            picked_res.push_back(r);
            if (after.generated_all) break;
        }
    }
    if (!is_generating(rg, picked_res)) throw Error("residue generating lines not found (internal)");
    // drop-one minimization, removing later picks first
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = picked.size(); i-- > 0;) {
            std::vector<long> trial_res;
            for (size_t j = 0; j < picked_res.size(); ++j)
                if (j != i) trial_res.push_back(picked_res[j]);
            if (is_generating(rg, trial_res)) {
                picked.erase(picked.begin() + i);
                picked_res.erase(picked_res.begin() + i);
                changed = true;
            }
        }
    }
    return picked;
}

std::vector<std::pair<Subspace, std::string>> orth_rec(const PolarModel& m, int sub_degree) {
    const Field& F = m.field();
    int N = m.dim(), n = m.rank(), d = m.defect();
    int p = F.characteristic();
    std::vector<std::pair<Subspace, std::string>> out;

    if (n == 3 && d == 1) {
        // base: a generating set of the prime-subfield line-Grassmannian
        PolarModel m0(FormSpec::standard("Qparab(3," + std::to_string(p) + ")"), m.budget());
        Geometry g0 = build_grassmannian(m0, 2);
        std::vector<long> ids = small_generating_set(g0, binomial(7, 2));
        for (long id : ids) {
            Subspace s0 = m0.sk(2).get(id);
            // prime-subfield codes coincide, so the rows transfer verbatim
            Subspace s = Subspace::span_raw(F, N, s0.rows().data(), 2);
            out.emplace_back(s, "base-F0");
        }
        return out;
    }

    // hyperplane section: last coordinate zero (d > 0) or x_{2n-1} = x_{2n} (d = 0)
    Vec phi(N, 0);
    std::vector<Vec> wrows;
    if (d > 0) {
        phi[N - 1] = 1;
        for (int i = 0; i + 1 < N; ++i) {
            Vec e(N, 0);
            e[i] = 1;
            wrows.push_back(e);
        }
    } else {
        phi[N - 2] = 1;
        phi[N - 1] = F.neg(1);
        for (int i = 0; i + 2 < N; ++i) {
            Vec e(N, 0);
            e[i] = 1;
            wrows.push_back(e);
        }
        Vec e(N, 0);
        e[N - 2] = e[N - 1] = 1;
        wrows.push_back(e);
    }
    Subspace w = Subspace::span(F, N, wrows);
    SubModel sub = m.induced(w);
    for (auto& [s, tag] : orth_rec(*sub.model, sub_degree)) out.emplace_back(sub.lift(s), tag);

    Hyperplane h = m.hyperplane_section(phi);
    // least rational singular point off H when d <= 1, else least point off H
    long p0 = -1;
    for (long pt = 0; pt < m.num_points(); ++pt) {
        if (h.contains(pt)) continue;
        if (d <= 1) {
            Vec v = m.point_vec(pt);
            bool rat = true;
            for (code_t c : v)
                if (!F.in_subfield(c, sub_degree)) { rat = false; break; }
            if (!rat) continue;
        }
        p0 = pt;
        break;
    }
    if (p0 < 0) {
        for (long pt = 0; pt < m.num_points(); ++pt)
            if (!h.contains(pt)) { p0 = pt; break; }
    }
    if (p0 < 0) throw Error("no point off the section hyperplane (internal)");

    for (long lid : lines_through_p0_genset(m, p0, d <= 1, sub_degree))
        out.emplace_back(m.sk(2).get(lid), "S2(p0)");
    long l0 = least_valid_l0(m, h, p0, d <= 1, sub_degree);
    out.emplace_back(m.sk(2).get(l0), "l0");
    return out;
}

}  // namespace

OrthGensetReport orth_q2_genset(const PolarModel& m) {
    const Field& F = m.field();
    int q = F.order();
    if (m.form().kind() != FormKind::quadratic) throw Error("orth_q2_genset needs a quadratic model");
    if (q != 4 && q != 8 && q != 9) throw Error("orth_q2_genset supports q in {4, 8, 9}");
    int n = m.rank(), d = m.defect();
    if (n < 3 || d > 2 || (n == 3 && d < 1))
        throw Error("orth_q2_genset needs n >= 3, d <= 2, and d >= 1 when n = 3");

    OrthGensetReport rep;
    rep.target = binomial(2 * n + d, 2);
    rep.rational_claimed = (d <= 1);
    auto subs = orth_rec(m, 1);
    GenSet gs;
    gs.model = &m;
    gs.k = 2;
    bool all_rat = true;
    for (const auto& [s, tag] : subs) {
        long id = m.sk(2).find(s);
        if (id < 0) throw Error("constructed element is not a singular line (internal)");
        gs.add(id, tag);
        if (!s.is_rational(1)) all_rat = false;
    }
    rep.all_rational = all_rat;
    rep.set = std::move(gs);
    return rep;
}

// ---------------------------------------------------------------------------
// Search

std::vector<long> small_generating_set(const Geometry& g, long target) {
    const PolarModel& m = *g.model;
    const Field& F = m.field();
    int N = m.dim();
    long cols = binomial(N, g.k);
    std::vector<long> seed;

    // phase 1: Pluecker-greedy until the image rank saturates
    {
        std::vector<Vec> rref_rows;
        auto try_add = [&](const Vec& v) {
            Vec w = v;
            for (const auto& r : rref_rows) {
                int piv = 0;
                while (r[piv] == 0) ++piv;
                if (w[piv] != 0) {
                    code_t c = w[piv];
                    for (int j = piv; j < static_cast<int>(w.size()); ++j)
                        w[j] = F.sub(w[j], F.mul(c, r[j]));
                }
            }
            int piv = -1;
            for (int j = 0; j < static_cast<int>(w.size()); ++j)
                if (w[j] != 0) { piv = j; break; }
            if (piv < 0) return false;
            code_t s = F.inv(w[piv]);
            for (int j = piv; j < static_cast<int>(w.size()); ++j) w[j] = F.mul(w[j], s);
            rref_rows.push_back(w);
            std::sort(rref_rows.begin(), rref_rows.end(), [](const Vec& a, const Vec& b) {
                int pa = 0, pb = 0;
                while (a[pa] == 0) ++pa;
                while (b[pb] == 0) ++pb;
                return pa < pb;
            });
            return true;
        };
        for (long i = 0; i < g.num_points && static_cast<long>(rref_rows.size()) < cols; ++i)
            if (try_add(plucker_coords(g.point_subspace(i)))) seed.push_back(i);
    }

    // phase 2: coverage completion
    ClosureResult cl = span_closure(g, seed);
    while (!cl.generated_all) {
        long add = -1;
        for (long i = 0; i < g.num_points; ++i)
            if (!cl.closed.test(i)) { add = i; break; }
        seed.push_back(add);
        cl = span_closure(g, seed);
    }

    // phase 3: greedy minimization
    std::vector<long> out = greedy_minimize(g, seed);
    std::sort(out.begin(), out.end());
    (void)target;
    return out;
}

// ---------------------------------------------------------------------------
// Subfield machinery

SubfieldContext make_subfield_context(const PolarModel& m, int sub_degree) {
    const Field& F = m.field();
    if (sub_degree < 1 || F.degree() % sub_degree != 0 || sub_degree == F.degree())
        throw Error("sub_degree must be a proper divisor of the field degree");
    SubfieldContext ctx;
    ctx.model = &m;
    ctx.sub_degree = sub_degree;
    ctx.rational_points = Bitset(m.num_points());
    for (long p = 0; p < m.num_points(); ++p) {
        const code_t* v = m.point(p);
        bool rat = true;
        for (int j = 0; j < m.dim(); ++j)
            if (!F.in_subfield(v[j], sub_degree)) { rat = false; break; }
        if (rat) ctx.rational_points.set(p);
    }
    const SubspaceTable& lines = m.sk(2);
    ctx.rational_line_mask = Bitset(lines.size());
    std::vector<code_t> rows(static_cast<size_t>(2) * m.dim());
    for (long i = 0; i < lines.size(); ++i) {
        lines.rows_of(i, rows.data());
        bool rat = true;
        for (code_t c : rows)
            if (!F.in_subfield(c, sub_degree)) { rat = false; break; }
        if (rat) {
            ctx.rational_lines.push_back(i);
            ctx.rational_line_mask.set(i);
        }
    }
    return ctx;
}

bool k_rational(const Field& F, int sub_degree, const Vec& v) {
    for (int s = sub_degree; s < F.degree(); ++s) {
        if (F.degree() % s != 0 || s % sub_degree != 0) continue;
        bool all = true;
        for (code_t c : v)
            if (!F.in_subfield(c, s)) { all = false; break; }
        if (all) return true;
    }
    return false;
}

long cor54_adjoin(const SubfieldContext& ctx, long l0, long l1) {
    const PolarModel& m = *ctx.model;
    const Field& F = m.field();
    int N = m.dim();
    if (m.defect() > 1) throw Error("cor54 adjunction needs defect d <= 1");
    if (!ctx.rational_line_mask.test(l0) || !ctx.rational_line_mask.test(l1))
        throw Error("the two lines must be F0-rational");
    std::vector<code_t> r0(static_cast<size_t>(2) * N), r1(static_cast<size_t>(2) * N);
    m.sk(2).rows_of(l0, r0.data());
    m.sk(2).rows_of(l1, r1.data());
    // opposite: the 2x2 pairing matrix between the lines is invertible
    std::vector<code_t> pm(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Vec a(r0.begin() + static_cast<size_t>(i) * N, r0.begin() + static_cast<size_t>(i + 1) * N);
            Vec b(r1.begin() + static_cast<size_t>(j) * N, r1.begin() + static_cast<size_t>(j + 1) * N);
            pm[static_cast<size_t>(i) * 2 + j] = m.form().pair(a, b);
        }
    if (rref_inplace(F, pm.data(), 2, 2) != 2) throw Error("the two lines are not opposite");

    for (long pid : line_point_ids(m, l0)) {
        Vec p = m.point_vec(pid);
        if (k_rational(F, ctx.sub_degree, p)) continue;
        // q = p^perp cap l1
        code_t f0 = 0, f1 = 0;
        {
            Vec a(r1.begin(), r1.begin() + N), b(r1.begin() + N, r1.end());
            f0 = m.form().pair(p, a);
            f1 = m.form().pair(p, b);
        }
        if (f0 == 0 && f1 == 0) throw Error("point is orthogonal to the opposite line (internal)");
        // q = f1 * row0 - f0 * row1
        Vec qv(N, 0);
        for (int j = 0; j < N; ++j)
            qv[j] = F.sub(F.mul(f1, r1[j]), F.mul(f0, r1[static_cast<size_t>(N) + j]));
        qv = normalize_point(F, qv);
        if (k_rational(F, ctx.sub_degree, qv)) continue;
        std::vector<Vec> trows{p, qv};
        Subspace t = Subspace::span(F, N, trows);
        long tid = m.sk(2).find(t);
        if (tid < 0) throw Error("adjoined span is not a singular line");
        return tid;
    }
    throw Error("no point of l0 with both ends non-K-rational");
}

bool gset_predicate(const SubfieldContext& ctx, const std::vector<long>& gset) {
    const PolarModel& m = *ctx.model;
    const Field& F = m.field();
    int N = m.dim();
    for (long id : gset)
        if (!ctx.rational_line_mask.test(id)) throw Error("gset elements must be rational lines");

    // (1) G generates the subfield Grassmannian
    int p = F.characteristic();
    std::string desc = m.descriptor();
    auto lp = desc.find('(');
    auto comma = desc.rfind(',');
    if (lp == std::string::npos || comma == std::string::npos)
        throw Error("gset predicate needs a standard model descriptor");
    std::string desc0 = desc.substr(0, comma + 1) + std::to_string(p) + ")";
    PolarModel m0(FormSpec::standard(desc0), m.budget());
    Geometry g0 = build_grassmannian(m0, 2);
    std::vector<long> seed0;
    std::vector<code_t> rows(static_cast<size_t>(2) * N);
    for (long id : gset) {
        m.sk(2).rows_of(id, rows.data());
        long id0 = m0.sk(2).find(pack_key(Field::predefined(p), rows.data(), 2, N));
        if (id0 < 0) throw Error("rational line does not restrict to the subfield model (internal)");
        seed0.push_back(id0);
    }
    if (!is_generating(g0, seed0)) return false;

    // (2) witness search over the closure of G in the full Grassmannian
    Geometry g = build_grassmannian(m, 2);
    ClosureResult cl = span_closure(g, gset);
    std::vector<code_t> ra(static_cast<size_t>(2) * N), rb(static_cast<size_t>(2) * N);
    for (size_t i = 0; i < ctx.rational_lines.size(); ++i) {
        long la = ctx.rational_lines[i];
        m.sk(2).rows_of(la, ra.data());
        for (size_t j = i + 1; j < ctx.rational_lines.size(); ++j) {
            long lb = ctx.rational_lines[j];
            m.sk(2).rows_of(lb, rb.data());
            std::vector<code_t> pm(4);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    Vec va(ra.begin() + static_cast<size_t>(a) * N,
                           ra.begin() + static_cast<size_t>(a + 1) * N);
                    Vec vb(rb.begin() + static_cast<size_t>(b) * N,
                           rb.begin() + static_cast<size_t>(b + 1) * N);
                    pm[static_cast<size_t>(a) * 2 + b] = m.form().pair(va, vb);
                }
            std::vector<code_t> pm2 = pm;
            if (rref_inplace(F, pm2.data(), 2, 2) != 2) continue;  // not opposite
            // for p in <la> non-K-rational, m = <p, p^perp cap lb> in the closure
            for (long pid : line_point_ids(m, la)) {
                Vec pv = m.point_vec(pid);
                if (k_rational(F, ctx.sub_degree, pv)) continue;
                Vec a0(rb.begin(), rb.begin() + N), a1(rb.begin() + N, rb.end());
                code_t f0 = m.form().pair(pv, a0), f1 = m.form().pair(pv, a1);
                if (f0 == 0 && f1 == 0) continue;
                Vec qv(N, 0);
                for (int t = 0; t < N; ++t)
                    qv[t] = F.sub(F.mul(f1, rb[t]), F.mul(f0, rb[static_cast<size_t>(N) + t]));
                qv = normalize_point(F, qv);
                if (k_rational(F, ctx.sub_degree, qv)) continue;
                std::vector<Vec> trows{pv, qv};
                Subspace t = Subspace::span(F, N, trows);
                long tid = m.sk(2).find(t);
                if (tid >= 0 && cl.closed.test(tid)) return true;
            }
        }
    }
    return false;
}

OmegaReport omega_obstruction(const PolarModel& m, int sub_degree) {
    const Field& F = m.field();
    int N = m.dim();
    if (m.form().kind() != FormKind::quadratic || m.rank() != 3 || m.defect() != 0)
        throw Error("the obstruction applies to hyperbolic Qplus(3,q) models");
    SubfieldContext ctx = make_subfield_context(m, sub_degree);
    const SubspaceTable& lines = m.sk(2);
    const SubspaceTable& planes = m.sk(3);

    OmegaReport rep;
    rep.total_lines = lines.size();
    rep.omega1 = Bitset(lines.size());
    rep.omega2 = Bitset(lines.size());
    rep.omega = Bitset(lines.size());

    for (long i = 0; i < lines.size(); ++i)
        for (long pid : line_point_ids(m, i))
            if (ctx.rational_points.test(pid)) {
                rep.omega1.set(i);
                break;
            }

    std::vector<code_t> zrows(static_cast<size_t>(3) * N);
    std::vector<code_t> yrows(static_cast<size_t>(2) * N);
    for (long zi = 0; zi < planes.size(); ++zi) {
        planes.rows_of(zi, zrows.data());
        bool rat = true;
        for (code_t c : zrows)
            if (!F.in_subfield(c, sub_degree)) { rat = false; break; }
        if (!rat) continue;
        for_each_rref(F, 2, 3, [&](const code_t* yc) {
            std::fill(yrows.begin(), yrows.end(), 0);
            for (int i = 0; i < 2; ++i)
                for (int t = 0; t < 3; ++t) {
                    code_t c = yc[static_cast<size_t>(i) * 3 + t];
                    if (c == 0) continue;
                    for (int j = 0; j < N; ++j)
                        yrows[static_cast<size_t>(i) * N + j] =
                            F.add(yrows[static_cast<size_t>(i) * N + j],
                                  F.mul(c, zrows[static_cast<size_t>(t) * N + j]));
                }
            rref_inplace(F, yrows.data(), 2, N);
            long id = lines.find(pack_key(F, yrows.data(), 2, N));
            if (id < 0) throw Error("plane line missing (internal)");
            rep.omega2.set(id);
        });
    }
    for (long i = 0; i < lines.size(); ++i)
        if (rep.omega1.test(i) || rep.omega2.test(i)) {
            rep.omega.set(i);
            ++rep.omega_size;
        }

    // the witness line <(1,0,e,0,0,0), (0,e,0,-1,0,0)>
    {
        code_t e = F.gen();
        Vec w0{1, 0, e, 0, 0, 0}, w1{0, e, 0, F.neg(1), 0, 0};
        std::vector<Vec> wr{w0, w1};
        Subspace wline = Subspace::span(F, N, wr);
        rep.witness_line = lines.find(wline);
        if (rep.witness_line < 0) throw Error("witness line is not a line of the quadric");
        rep.witness_outside = !rep.omega.test(rep.witness_line);

        // its two planes each carry exactly one rational point
        Residue res = m.upper_residue(wline);
        for (long i = 0; i < res.model->num_points(); ++i) {
            Subspace plane = res.lift(Subspace::point(F, res.model->point_vec(i)));
            int cnt = 0;
            // count rational points of the plane
            for (long p = 0; p < m.num_points(); ++p)
                if (ctx.rational_points.test(p) && plane.contains(m.point_vec(p))) ++cnt;
            rep.witness_plane_rational_points.push_back(cnt);
        }
    }

    // Omega is a subspace: scan all pencils
    Geometry g = build_grassmannian(m, 2);
    rep.omega_subspace = true;
    for (long l = 0; l < g.num_lines() && rep.omega_subspace; ++l) {
        auto mem = g.line(l);
        int inside = 0;
        for (auto y : mem)
            if (rep.omega.test(y)) ++inside;
        if (inside >= 2 && inside != static_cast<int>(mem.size())) rep.omega_subspace = false;
    }

    ClosureResult cl = span_closure(g, ctx.rational_lines);
    rep.closure_matches = (cl.closed == rep.omega);

    if (!rep.witness_outside || !rep.omega_subspace || !rep.closure_matches)
        throw Error("hyperbolic obstruction verification failed (internal error)");
    return rep;
}

}  // namespace polargrass
