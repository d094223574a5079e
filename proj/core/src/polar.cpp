#include "polargrass/polar.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <sstream>

namespace polargrass {

size_t Bitset::count() const {
    size_t c = 0;
    for (auto w : w_) c += static_cast<size_t>(std::popcount(w));
    return c;
}

Subspace SubspaceTable::get(long id) const {
    std::vector<code_t> rows(static_cast<size_t>(k) * n);
    rows_of(id, rows.data());
    Subspace s = Subspace::span_raw(*F, n, rows.data(), k);
    return s;
}

long SubspaceTable::find(const SubKey& key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return -1;
    return static_cast<long>(it - keys.begin());
}

PolarModel::PolarModel(FormSpec form, Budget budget)
    : form_(std::move(form)), witt_(witt_decompose(form_)), budget_(budget) {
    const Field& F = field();
    int N = dim();
    long scan = projective_point_count(F.order(), N);
    if (scan > budget_.max_scan)
        throw Error("instance too large: would scan " + std::to_string(scan) +
                    " projective points (budget " + std::to_string(budget_.max_scan) + ")");
    for_each_projective_point(F, N, [&](const code_t* v) {
        if (form_.eval(v) == 0) points_.insert(points_.end(), v, v + N);
    });

    long num = num_points();
    if (budget_.perp_cache && num <= budget_.perp_cache_limit && num > 0) {
        perp_stride_ = static_cast<size_t>((num + 63) / 64);
        perp_bits_.assign(perp_stride_ * num, 0);
        for (long a = 0; a < num; ++a) {
            perp_bits_[a * perp_stride_ + (a >> 6)] |= 1ull << (a & 63);
            for (long b = a + 1; b < num; ++b)
                if (form_.pair(point(a), point(b)) == 0) {
                    perp_bits_[a * perp_stride_ + (b >> 6)] |= 1ull << (b & 63);
                    perp_bits_[b * perp_stride_ + (a >> 6)] |= 1ull << (a & 63);
                }
        }
        perp_cached_ = true;
    }
}

Vec PolarModel::point_vec(long id) const {
    const code_t* p = point(id);
    return Vec(p, p + dim());
}

long PolarModel::point_id(const Vec& normalized) const {
    int N = dim();
    if (static_cast<int>(normalized.size()) != N) return -1;
    long lo = 0, hi = num_points();
    while (lo < hi) {
        long mid = (lo + hi) / 2;
        const code_t* p = point(mid);
        int cmp = 0;
        for (int j = 0; j < N; ++j) {
            if (p[j] != normalized[j]) { cmp = p[j] < normalized[j] ? -1 : 1; break; }
        }
        if (cmp == 0) return mid;
        if (cmp < 0) lo = mid + 1;
        else hi = mid;
    }
    return -1;
}

bool PolarModel::collinear(long a, long b) const {
    if (perp_cached_) return (perp_bits_[a * perp_stride_ + (b >> 6)] >> (b & 63)) & 1;
    return form_.pair(point(a), point(b)) == 0;
}

Bitset PolarModel::perp(long pid) const {
    long num = num_points();
    Bitset out(num);
    for (long b = 0; b < num; ++b)
        if (collinear(pid, b)) out.set(b);
    return out;
}

Bitset PolarModel::perp(const Subspace& s) const {
    long num = num_points();
    Bitset out(num);
    std::vector<Vec> phis;
    for (int i = 0; i < s.rank(); ++i) phis.push_back(form_.pair_functional(s.row(i)));
    for (long b = 0; b < num; ++b) {
        const code_t* v = point(b);
        bool ok = true;
        for (const auto& phi : phis) {
            code_t acc = 0;
            for (int j = 0; j < dim(); ++j)
                if (phi[j] != 0 && v[j] != 0) acc = field().add(acc, field().mul(phi[j], v[j]));
            if (acc != 0) { ok = false; break; }
        }
        if (ok) out.set(b);
    }
    return out;
}

const SubspaceTable& PolarModel::sk(int k) const {
    if (k < 1 || k > rank())
        throw Error("S_" + std::to_string(k) + " undefined: rank of the model is " +
                    std::to_string(rank()));
    auto it = sk_.find(k);
    if (it == sk_.end()) {
        build_sk(k);
        it = sk_.find(k);
    }
    return it->second;
}

void PolarModel::build_sk(int k) const {
    const Field& F = field();
    int N = dim();
    if (k == 1) {
        SubspaceTable t;
        t.F = &F;
        t.k = 1;
        t.n = N;
        long num = num_points();
        t.keys.reserve(num);
        for (long i = 0; i < num; ++i) t.keys.push_back(pack_key(F, point(i), 1, N));
        // points are enumerated in lexicographic order, so keys are sorted
        sk_.emplace(1, std::move(t));
        return;
    }
    const SubspaceTable& prev = sk(k - 1);
    SubspaceTable t;
    t.F = &F;
    t.k = k;
    t.n = N;

    std::vector<code_t> xrows(static_cast<size_t>(k - 1) * N);
    std::vector<code_t> yrows(static_cast<size_t>(k) * N);
    for (long xi = 0; xi < prev.size(); ++xi) {
        prev.rows_of(xi, xrows.data());
        // functional rows of X^perp
        std::vector<code_t> phis(static_cast<size_t>(k - 1) * N);
        for (int i = 0; i < k - 1; ++i) {
            Vec r(xrows.begin() + static_cast<size_t>(i) * N, xrows.begin() + static_cast<size_t>(i + 1) * N);
            Vec phi = form_.pair_functional(r);
            std::copy(phi.begin(), phi.end(), phis.begin() + static_cast<size_t>(i) * N);
        }
        auto ker = kernel_basis(F, phis.data(), k - 1, N);
        // complement of X inside X^perp
        std::vector<code_t> acc(xrows);
        int acc_rank = k - 1;
        std::vector<Vec> comp;
        for (const auto& kv : ker) {
            std::vector<code_t> trial(acc);
            trial.insert(trial.end(), kv.begin(), kv.end());
            int r = rref_inplace(F, trial.data(), acc_rank + 1, N);
            if (r > acc_rank) {
                acc = std::move(trial);
                acc.resize(static_cast<size_t>(r) * N);
                acc_rank = r;
                comp.push_back(kv);
            }
        }
        if (comp.empty()) continue;
        Subspace compsub = Subspace::span(F, N, comp);
        FormSpec induced = form_.restrict_to(compsub);
        int c = compsub.rank();
        for_each_projective_point(F, c, [&](const code_t* tt) {
            if (induced.eval(tt) != 0) return;
            // lift to ambient and canonicalize X + w
            std::fill(yrows.begin(), yrows.end(), 0);
            for (int i = 0; i < c; ++i) {
                if (tt[i] == 0) continue;
                for (int j = 0; j < N; ++j)
                    yrows[j] = F.add(yrows[j], F.mul(tt[i], compsub.at(i, j)));
            }
            std::copy(xrows.begin(), xrows.end(), yrows.begin() + N);
            int r = rref_inplace(F, yrows.data(), k, N);
            if (r != k) return;  // cannot happen: w outside X
            // emit once: X must be the canonical parent (the last k-1 rows)
            if (std::memcmp(yrows.data() + N, xrows.data(),
                            static_cast<size_t>(k - 1) * N * sizeof(code_t)) != 0)
                return;
            t.keys.push_back(pack_key(F, yrows.data(), k, N));
            if (static_cast<long>(t.keys.size()) > budget_.max_grass_points)
                throw Error("instance too large: S_" + std::to_string(k) + " of " + descriptor() +
                            " exceeds the budget of " + std::to_string(budget_.max_grass_points));
        });
    }
    std::sort(t.keys.begin(), t.keys.end());
    sk_.emplace(k, std::move(t));
}

void PolarModel::adopt_sk(int k, std::vector<SubKey> keys) const {
    if (k < 1 || k > rank()) throw Error("cached table level out of range");
    if (!std::is_sorted(keys.begin(), keys.end())) throw Error("cached table keys are not sorted");
    SubspaceTable t;
    t.F = &field();
    t.k = k;
    t.n = dim();
    t.keys = std::move(keys);
    sk_.insert_or_assign(k, std::move(t));
}

Hyperplane PolarModel::hyperplane_singular(long deep_point) const {
    Hyperplane h;
    h.kind = Hyperplane::Kind::singular;
    h.deep_point = deep_point;
    h.covector = form_.pair_functional(point_vec(deep_point));
    long num = num_points();
    h.members = Bitset(num);
    for (long b = 0; b < num; ++b)
        if (collinear(deep_point, b)) h.members.set(b);
    return h;
}

Hyperplane PolarModel::hyperplane_pole(const Vec& pole) const {
    if (static_cast<int>(pole.size()) != dim()) throw Error("pole has wrong length");
    if (form_.eval(pole.data()) == 0)
        throw Error("pole is a singular point; use the singular hyperplane kind");
    Vec phi = form_.pair_functional(pole);
    if (std::all_of(phi.begin(), phi.end(), [](code_t c) { return c == 0; }))
        throw Error("pole lies in the radical of the bilinearization: no hyperplane section");
    return hyperplane_section(phi);
}

Hyperplane PolarModel::hyperplane_section(const Vec& phi) const {
    const Field& F = field();
    int N = dim();
    if (static_cast<int>(phi.size()) != N) throw Error("covector has wrong length");
    if (std::all_of(phi.begin(), phi.end(), [](code_t c) { return c == 0; }))
        throw Error("zero covector");
    Hyperplane h;
    h.covector = phi;
    long num = num_points();
    h.members = Bitset(num);
    for (long b = 0; b < num; ++b) {
        const code_t* v = point(b);
        code_t acc = 0;
        for (int j = 0; j < N; ++j)
            if (phi[j] != 0 && v[j] != 0) acc = F.add(acc, F.mul(phi[j], v[j]));
        if (acc == 0) h.members.set(b);
    }
    // classify: restrict the form to ker(phi)
    auto wbasis = kernel_basis(F, phi.data(), 1, N);
    Subspace W = Subspace::span(F, N, wbasis);
    FormSpec sec = form_.restrict_to(W);
    Subspace rad = sec.radical();
    // a singular vector in the radical of the section makes it a cone
    Vec deep;
    bool is_cone = false;
    if (rad.rank() > 0) {
        for_each_projective_point(F, rad.rank(), [&](const code_t* tt) {
            if (is_cone) return;
            Vec v(W.rank(), 0);
            for (int i = 0; i < rad.rank(); ++i) {
                if (tt[i] == 0) continue;
                for (int j = 0; j < W.rank(); ++j) v[j] = F.add(v[j], F.mul(tt[i], rad.at(i, j)));
            }
            if (sec.eval(v.data()) == 0) {
                is_cone = true;
                deep.assign(N, 0);
                for (int i = 0; i < W.rank(); ++i)
                    if (v[i] != 0)
                        for (int j = 0; j < N; ++j) deep[j] = F.add(deep[j], F.mul(v[i], W.at(i, j)));
            }
        });
    }
    if (is_cone) {
        h.kind = Hyperplane::Kind::singular;
        h.deep_point = point_id(normalize_point(F, deep));
    } else {
        h.kind = Hyperplane::Kind::nondegenerate;
        WittData w = witt_decompose(sec);
        h.induced_rank = w.witt_index();
        h.induced_defect = w.defect();
    }
    return h;
}

std::vector<long> PolarModel::frame_points() const {
    std::vector<long> out;
    const Field& F = field();
    for (const auto& uv : witt_.pairs) out.push_back(point_id(normalize_point(F, uv.first)));
    for (const auto& uv : witt_.pairs) out.push_back(point_id(normalize_point(F, uv.second)));
    for (long id : out)
        if (id < 0) throw Error("frame point missing from the model (internal error)");
    return out;
}

Residue PolarModel::upper_residue(const Subspace& x) const {
    const Field& F = field();
    int N = dim();
    int k = x.rank();
    if (k < 1 || k >= rank())
        throw Error("upper residue undefined for rank " + std::to_string(k));
    std::vector<code_t> phis(static_cast<size_t>(k) * N);
    for (int i = 0; i < k; ++i) {
        Vec phi = form_.pair_functional(x.row(i));
        std::copy(phi.begin(), phi.end(), phis.begin() + static_cast<size_t>(i) * N);
    }
    auto ker = kernel_basis(F, phis.data(), k, N);
    // complement of X inside X^perp
    std::vector<code_t> acc(x.rows());
    int acc_rank = k;
    std::vector<Vec> comp;
    for (const auto& kv : ker) {
        std::vector<code_t> trial(acc);
        trial.insert(trial.end(), kv.begin(), kv.end());
        int r = rref_inplace(F, trial.data(), acc_rank + 1, N);
        if (r > acc_rank) {
            acc = std::move(trial);
            acc.resize(static_cast<size_t>(r) * N);
            acc_rank = r;
            comp.push_back(kv);
        }
    }
    Subspace compsub = Subspace::span(F, N, comp);
    Residue res;
    res.base = x;
    res.N = N;
    res.c = compsub.rank();
    res.comp = compsub.rows();
    res.model = std::make_shared<PolarModel>(form_.restrict_to(compsub), budget_);
    return res;
}

SubModel PolarModel::induced(const Subspace& w) const {
    SubModel sm;
    sm.N = dim();
    sm.c = w.rank();
    sm.embed = w.rows();
    sm.model = std::make_shared<PolarModel>(form_.restrict_to(w), budget_);
    return sm;
}

std::vector<long> PolarModel::hyperbolic_line(long a, long b) const {
    if (collinear(a, b)) throw Error("hyperbolic line needs non-collinear points");
    long num = num_points();
    if (num > 5000) throw Error("hyperbolic line computation is desk-scale only");
    std::vector<long> dperp;
    Bitset pa = perp(a), pb = perp(b);
    std::vector<long> common;
    for (long i = 0; i < num; ++i)
        if (pa.test(i) && pb.test(i)) common.push_back(i);
    std::vector<long> out;
    for (long z = 0; z < num; ++z) {
        bool all = true;
        for (long w : common)
            if (!collinear(z, w)) { all = false; break; }
        if (all) out.push_back(z);
    }
    return out;
}

Vec SubModel::to_ambient(const Vec& sub) const {
    const Field& F = model->field();
    Vec out(N, 0);
    for (int i = 0; i < c; ++i) {
        if (sub[i] == 0) continue;
        for (int j = 0; j < N; ++j)
            out[j] = F.add(out[j], F.mul(sub[i], embed[static_cast<size_t>(i) * N + j]));
    }
    return out;
}

Subspace SubModel::lift(const Subspace& sub) const {
    const Field& F = model->field();
    std::vector<Vec> rows;
    for (int i = 0; i < sub.rank(); ++i) rows.push_back(to_ambient(sub.row(i)));
    return Subspace::span(F, N, rows);
}

Subspace SubModel::project(const Subspace& ambient) const {
    const Field& F = model->field();
    std::vector<Vec> rows;
    for (int i = 0; i < ambient.rank(); ++i) {
        auto coords = solve_coords(F, embed.data(), c, N, ambient.row(i));
        if (!coords) throw Error("subspace does not lie in the submodel");
        rows.push_back(*coords);
    }
    return Subspace::span(F, c, rows);
}

Subspace Residue::lift(const Subspace& sub) const {
    const Field& F = model->field();
    std::vector<Vec> rows;
    for (int i = 0; i < base.rank(); ++i) rows.push_back(base.row(i));
    for (int i = 0; i < sub.rank(); ++i) {
        Vec out(N, 0);
        for (int j = 0; j < c; ++j) {
            code_t s = sub.at(i, j);
            if (s == 0) continue;
            for (int t = 0; t < N; ++t)
                out[t] = F.add(out[t], F.mul(s, comp[static_cast<size_t>(j) * N + t]));
        }
        rows.push_back(std::move(out));
    }
    return Subspace::span(F, N, rows);
}

Subspace Residue::project(const Subspace& ambient) const {
    const Field& F = model->field();
    // rows of [base; comp] span base + complement; the comp part of the
    // coordinates is the quotient image
    int m = base.rank() + c;
    std::vector<code_t> mat(static_cast<size_t>(m) * N);
    std::copy(base.rows().begin(), base.rows().end(), mat.begin());
    std::copy(comp.begin(), comp.end(), mat.begin() + static_cast<size_t>(base.rank()) * N);
    std::vector<Vec> rows;
    for (int i = 0; i < ambient.rank(); ++i) {
        auto coords = solve_coords(F, mat.data(), m, N, ambient.row(i));
        if (!coords) throw Error("subspace does not lie in base^perp");
        rows.emplace_back(coords->begin() + base.rank(), coords->end());
    }
    return Subspace::span(F, c, rows);
}

}  // namespace polargrass
