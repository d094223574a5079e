#include "polargrass/grassmann.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <thread>

namespace polargrass {

namespace {

// incremental exact rank via a growing RREF
struct RankAccum {
    const Field& F;
    int n;
    std::vector<Vec> rows;  // in RREF, pivot columns strictly increasing

    RankAccum(const Field& f, int cols) : F(f), n(cols) {}

    int pivot_of(const Vec& v) const {
        for (int j = 0; j < n; ++j)
            if (v[j] != 0) return j;
        return -1;
    }

    bool add(Vec v) {
        for (const auto& r : rows) {
            int p = pivot_of(r);
            if (v[p] != 0) {
                code_t c = v[p];
                for (int j = p; j < n; ++j) v[j] = F.sub(v[j], F.mul(c, r[j]));
            }
        }
        int p = pivot_of(v);
        if (p < 0) return false;
        code_t s = F.inv(v[p]);
        if (s != 1)
            for (int j = p; j < n; ++j) v[j] = F.mul(v[j], s);
        for (auto& r : rows)
            if (r[p] != 0) {
                code_t c = r[p];
                for (int j = p; j < n; ++j) r[j] = F.sub(r[j], F.mul(c, v[j]));
            }
        auto it = std::lower_bound(rows.begin(), rows.end(), p, [&](const Vec& r, int piv) {
            return pivot_of(r) < piv;
        });
        rows.insert(it, std::move(v));
        return true;
    }

    long rank() const { return static_cast<long>(rows.size()); }
};

// complement of the RREF rows `x` (kx x cols) inside the full space F^cols
void std_complement(const Field& F, const code_t* x, int kx, int cols, std::vector<Vec>& out) {
    out.clear();
    std::vector<code_t> acc(x, x + static_cast<size_t>(kx) * cols);
    int rank = kx;
    for (int i = 0; i < cols && rank < cols; ++i) {
        std::vector<code_t> trial(acc);
        trial.resize(static_cast<size_t>(rank + 1) * cols, 0);
        trial[static_cast<size_t>(rank) * cols + i] = 1;
        int r = rref_inplace(F, trial.data(), rank + 1, cols);
        if (r > rank) {
            acc = std::move(trial);
            acc.resize(static_cast<size_t>(r) * cols);
            rank = r;
            Vec e(cols, 0);
            e[i] = 1;
            out.push_back(std::move(e));
        }
    }
}

void build_pt_csr(Geometry& g) {
    g.pt_start.assign(g.num_points + 1, 0);
    for (std::uint32_t p : g.line_pts) ++g.pt_start[p + 1];
    for (size_t i = 1; i < g.pt_start.size(); ++i) g.pt_start[i] += g.pt_start[i - 1];
    g.pt_lines.resize(g.line_pts.size());
    std::vector<std::uint32_t> cursor(g.pt_start.begin(), g.pt_start.end() - 1);
    long nl = g.num_lines();
    for (long l = 0; l < nl; ++l)
        for (std::uint32_t i = g.line_start[l]; i < g.line_start[l + 1]; ++i)
            g.pt_lines[cursor[g.line_pts[i]]++] = static_cast<std::uint32_t>(l);
}

}  // namespace

Geometry build_grassmannian(const PolarModel& model, int k) {
    const Field& F = model.field();
    int N = model.dim();
    int n = model.rank();
    int q = F.order();
    if (k < 1 || k > n) throw Error("k must be between 1 and the rank " + std::to_string(n));

    Geometry g;
    g.model = &model;
    g.k = k;
    g.descriptor = model.descriptor() + ":k=" + std::to_string(k);
    g.num_points = model.sk(k).size();
    g.line_start.push_back(0);

    auto push_line = [&](std::vector<std::uint32_t>& members) {
        std::sort(members.begin(), members.end());
        g.line_pts.insert(g.line_pts.end(), members.begin(), members.end());
        g.line_start.push_back(static_cast<std::uint32_t>(g.line_pts.size()));
    };

    if (k == n) {
        // dual polar space: lines are the stars of the (n-1)-subspaces
        const SubspaceTable& prev = model.sk(n - 1);
        const SubspaceTable& top = model.sk(n);
        std::vector<code_t> xrows(static_cast<size_t>(n - 1) * N);
        std::vector<code_t> yrows(static_cast<size_t>(n) * N);
        size_t thin = 0;
        for (long xi = 0; xi < prev.size(); ++xi) {
            prev.rows_of(xi, xrows.data());
            std::vector<code_t> phis(static_cast<size_t>(n - 1) * N);
            for (int i = 0; i < n - 1; ++i) {
                Vec r(xrows.begin() + static_cast<size_t>(i) * N,
                      xrows.begin() + static_cast<size_t>(i + 1) * N);
                Vec phi = model.form().pair_functional(r);
                std::copy(phi.begin(), phi.end(), phis.begin() + static_cast<size_t>(i) * N);
            }
            auto ker = kernel_basis(F, phis.data(), n - 1, N);
            std::vector<code_t> acc(xrows);
            int acc_rank = n - 1;
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
            FormSpec induced = model.form().restrict_to(compsub);
            std::vector<std::uint32_t> members;
            for_each_projective_point(F, compsub.rank(), [&](const code_t* tt) {
                if (induced.eval(tt) != 0) return;
                std::fill(yrows.begin(), yrows.end(), 0);
                for (int i = 0; i < compsub.rank(); ++i) {
                    if (tt[i] == 0) continue;
                    for (int j = 0; j < N; ++j)
                        yrows[j] = F.add(yrows[j], F.mul(tt[i], compsub.at(i, j)));
                }
                std::copy(xrows.begin(), xrows.end(), yrows.begin() + N);
                rref_inplace(F, yrows.data(), n, N);
                long id = top.find(pack_key(F, yrows.data(), n, N));
                if (id < 0) throw Error("dual line member missing from S_n (internal)");
                members.push_back(static_cast<std::uint32_t>(id));
            });
            if (members.size() < 2) throw Error("star with fewer than two maximal subspaces (internal)");
            if (members.size() == 2) ++thin;
            push_line(members);
        }
        g.all_lines_thin = (thin == static_cast<size_t>(prev.size()) && thin > 0);
        build_pt_csr(g);
        return g;
    }

    // k < n: lines are the pencils { Y : X < Y < Z }
    const SubspaceTable& mid = model.sk(k);
    const SubspaceTable& upper = model.sk(k + 1);
    {
        // [k+1 choose 2]_q pencils per upper subspace, q+1 members each
        long qk1 = 1;
        for (int i = 0; i < k + 1; ++i) qk1 *= q;
        long per = ((qk1 - 1) * (qk1 / q - 1)) / ((static_cast<long>(q) * q - 1) * (q - 1));
        long est_incidence = upper.size() * per * (q + 1);
        if (est_incidence > 250'000'000)
            throw Error("explicit Grassmannian too large (" + std::to_string(est_incidence) +
                        " incidences); use the pencil closure engine");
    }
    std::vector<code_t> zrows(static_cast<size_t>(k + 1) * N);
    std::vector<code_t> yc(static_cast<size_t>(k) * (k + 1));
    std::vector<code_t> yrows(static_cast<size_t>(k) * N);
    std::vector<Vec> comp;
    for (long zi = 0; zi < upper.size(); ++zi) {
        upper.rows_of(zi, zrows.data());
        for_each_rref(F, k - 1, k + 1, [&](const code_t* xc) {
            // complement of X inside Z-coordinates
            std_complement(F, xc, k - 1, k + 1, comp);
            if (comp.size() != 2) throw Error("pencil complement is not 2-dimensional (internal)");
            std::vector<std::uint32_t> members;
            for_each_projective_point(F, 2, [&](const code_t* ab) {
                // w = a c1 + b c2 in Z-coordinates
                for (int j = 0; j < k + 1; ++j)
                    yc[j] = F.add(F.mul(ab[0], comp[0][j]), F.mul(ab[1], comp[1][j]));
                if (k >= 2)
                    std::copy(xc, xc + static_cast<size_t>(k - 1) * (k + 1), yc.begin() + (k + 1));
                // to ambient coordinates
                std::fill(yrows.begin(), yrows.end(), 0);
                for (int i = 0; i < k; ++i)
                    for (int t = 0; t < k + 1; ++t) {
                        code_t c = yc[static_cast<size_t>(i) * (k + 1) + t];
                        if (c == 0) continue;
                        for (int j = 0; j < N; ++j)
                            yrows[static_cast<size_t>(i) * N + j] =
                                F.add(yrows[static_cast<size_t>(i) * N + j],
                                      F.mul(c, zrows[static_cast<size_t>(t) * N + j]));
                    }
                rref_inplace(F, yrows.data(), k, N);
                long id = mid.find(pack_key(F, yrows.data(), k, N));
                if (id < 0) throw Error("pencil member missing from S_k (internal)");
                members.push_back(static_cast<std::uint32_t>(id));
            });
            if (static_cast<int>(members.size()) != q + 1)
                throw Error("pencil of unexpected size (internal)");
            push_line(members);
        });
    }
    build_pt_csr(g);
    return g;
}

namespace {
ClosureResult closure_impl(const Geometry& g, const std::vector<long>& seed, bool traced) {
    ClosureResult res;
    res.closed = Bitset(g.num_points);
    if (traced) res.trace.assign(g.num_points, -1);
    std::vector<std::uint8_t> counts(g.num_lines(), 0);
    std::vector<std::uint32_t> stack;
    for (long s : seed) {
        if (s < 0 || s >= g.num_points) throw Error("seed point out of range");
        if (!res.closed.test(s)) {
            res.closed.set(s);
            stack.push_back(static_cast<std::uint32_t>(s));
            ++res.closed_count;
        }
    }
    res.seed_size = res.closed_count;
    while (!stack.empty()) {
        std::uint32_t p = stack.back();
        stack.pop_back();
        ++res.processed;
        for (std::uint32_t l : g.lines_through(p)) {
            if (counts[l] >= 2) continue;
            if (++counts[l] == 2) {
                for (std::uint32_t m : g.line(l))
                    if (!res.closed.test(m)) {
                        res.closed.set(m);
                        if (traced) res.trace[m] = static_cast<std::int32_t>(l);
                        stack.push_back(m);
                        ++res.closed_count;
                    }
            }
        }
    }
    res.generated_all = (res.closed_count == g.num_points);
    return res;
}
}  // namespace

ClosureResult span_closure(const Geometry& g, const std::vector<long>& seed) {
    return closure_impl(g, seed, false);
}

ClosureResult span_closure_traced(const Geometry& g, const std::vector<long>& seed) {
    return closure_impl(g, seed, true);
}

ClosureResult span_closure_parallel(const Geometry& g, const std::vector<long>& seed, int threads) {
    if (threads < 1) threads = 1;
    ClosureResult res;
    res.closed = Bitset(g.num_points);
    std::unique_ptr<std::atomic<std::uint8_t>[]> counts(new std::atomic<std::uint8_t>[g.num_lines()]);
    for (long l = 0; l < g.num_lines(); ++l) counts[l].store(0, std::memory_order_relaxed);
    std::vector<std::atomic<std::uint64_t>> closed((g.num_points + 63) / 64);
    for (auto& w : closed) w.store(0, std::memory_order_relaxed);

    std::vector<std::uint32_t> frontier;
    auto try_close = [&](std::uint32_t p) {
        std::uint64_t bit = 1ull << (p & 63);
        std::uint64_t old = closed[p >> 6].fetch_or(bit, std::memory_order_relaxed);
        return (old & bit) == 0;
    };
    for (long s : seed) {
        if (s < 0 || s >= g.num_points) throw Error("seed point out of range");
        if (try_close(static_cast<std::uint32_t>(s))) frontier.push_back(static_cast<std::uint32_t>(s));
    }
    res.seed_size = static_cast<long>(frontier.size());
    long total_closed = res.seed_size;

    while (!frontier.empty()) {
        res.processed += static_cast<long>(frontier.size());
        std::vector<std::vector<std::uint32_t>> next(threads);
        std::vector<std::thread> pool;
        size_t chunk = (frontier.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            size_t lo = std::min(frontier.size(), t * chunk), hi = std::min(frontier.size(), lo + chunk);
            pool.emplace_back([&, t, lo, hi] {
                for (size_t i = lo; i < hi; ++i) {
                    std::uint32_t p = frontier[i];
                    for (std::uint32_t l : g.lines_through(p)) {
                        std::uint8_t old = counts[l].fetch_add(1, std::memory_order_relaxed);
                        if (old == 1) {
                            for (std::uint32_t m : g.line(l))
                                if (try_close(m)) next[t].push_back(m);
                        }
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        frontier.clear();
        for (auto& v : next) {
            total_closed += static_cast<long>(v.size());
            frontier.insert(frontier.end(), v.begin(), v.end());
        }
    }
    for (long p = 0; p < g.num_points; ++p)
        if ((closed[p >> 6].load(std::memory_order_relaxed) >> (p & 63)) & 1) res.closed.set(p);
    res.closed_count = total_closed;
    res.generated_all = (total_closed == g.num_points);
    return res;
}

bool is_generating(const Geometry& g, const std::vector<long>& seed) {
    return span_closure(g, seed).generated_all;
}

std::vector<long> greedy_minimize(const Geometry& g, const std::vector<long>& seed) {
    if (!is_generating(g, seed)) throw Error("greedy_minimize requires a generating seed");
    std::vector<long> cur(seed);
    std::sort(cur.begin(), cur.end(), std::greater<long>());
    cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < cur.size(); ++i) {
            std::vector<long> trial;
            trial.reserve(cur.size() - 1);
            for (size_t j = 0; j < cur.size(); ++j)
                if (j != i) trial.push_back(cur[j]);
            if (is_generating(g, trial)) {
                cur = std::move(trial);
                changed = true;
                --i;
            }
        }
    }
    return cur;
}

bool is_irredundant(const Geometry& g, const std::vector<long>& seed) {
    for (size_t i = 0; i < seed.size(); ++i) {
        std::vector<long> trial;
        for (size_t j = 0; j < seed.size(); ++j)
            if (j != i) trial.push_back(seed[j]);
        if (is_generating(g, trial)) return false;
    }
    return true;
}

PluckerCertificate plucker_rank_table(const PolarModel& model, int k) {
    const Field& F = model.field();
    int n = model.rank(), N = model.dim();
    if (k >= n) throw Error("Pluecker rank certificate requires k < n (P_n is not fully embedded)");
    if (k < 1) throw Error("k must be positive");
    const SubspaceTable& tab = model.sk(k);
    long cols = binomial(N, k);
    RankAccum acc(F, static_cast<int>(cols));
    for (long i = 0; i < tab.size(); ++i) {
        acc.add(plucker_coords(tab.get(i)));
        if (acc.rank() == cols) break;  // rank cannot grow further
    }
    PluckerCertificate cert;
    cert.rank = acc.rank();

    // sampled line check: images of collinear triples stay collinear
    const SubspaceTable& upper = model.sk(k + 1);
    long step = std::max<long>(1, upper.size() / 200);
    long checked = 0;
    bool ok = true;
    std::vector<code_t> zrows(static_cast<size_t>(k + 1) * N);
    for (long zi = 0; zi < upper.size() && ok; zi += step) {
        upper.rows_of(zi, zrows.data());
        // canonical parent X = last k-1 rows of Z; first two rows span a complement
        const code_t* xrows = zrows.data() + 2 * static_cast<size_t>(N);
        std::vector<Vec> tri;
        for (int variant = 0; variant < 3; ++variant) {
            std::vector<code_t> yrows(static_cast<size_t>(k) * N, 0);
            for (int j = 0; j < N; ++j) {
                code_t a = variant == 1 ? 0 : zrows[j];
                code_t b = variant == 0 ? 0 : zrows[static_cast<size_t>(N) + j];
                yrows[j] = F.add(a, b);
            }
            if (k >= 2)
                std::copy(xrows, xrows + static_cast<size_t>(k - 1) * N, yrows.begin() + N);
            Subspace y = Subspace::span_raw(F, N, yrows.data(), k);
            tri.push_back(plucker_coords(y));
        }
        if (matrix_rank(F, tri) != 2) ok = false;
        ++checked;
    }
    cert.line_check_passed = ok;
    cert.lines_checked = checked;
    return cert;
}

PluckerCertificate plucker_rank(const Geometry& g) { return plucker_rank_table(*g.model, g.k); }

long natural_rank(const PolarModel& model) {
    const Field& F = model.field();
    int N = model.dim();
    RankAccum acc(F, N);
    for (long i = 0; i < model.num_points(); ++i) {
        acc.add(model.point_vec(i));
        if (acc.rank() == N) break;
    }
    return acc.rank();
}

// ---------------------------------------------------------------------------
// PencilClosure

namespace {
inline std::uint64_t key_fp(const SubKey& k) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : k) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
    }
    return h | 1;  // never zero: zero fingerprint marks an empty slot
}
}  // namespace

PencilClosure::PencilClosure(const PolarModel& model) : model_(&model), N_(model.dim()) {
    const Field& F = model.field();
    int q = F.order();
    ppp_ = q * q + q + 1;
    const SubspaceTable& lines = model.sk(2);
    const SubspaceTable& planes = model.sk(3);

    // open-addressing hash over line keys
    std::uint64_t cap = 1;
    while (cap < 2 * static_cast<std::uint64_t>(lines.size())) cap <<= 1;
    hash_mask_ = cap - 1;
    hash_fp_.assign(cap, 0);
    hash_id_.assign(cap, 0);
    for (long i = 0; i < lines.size(); ++i) {
        std::uint64_t fp = key_fp(lines.keys[i]);
        std::uint64_t slot = fp & hash_mask_;
        while (hash_fp_[slot] != 0) slot = (slot + 1) & hash_mask_;
        hash_fp_[slot] = fp;
        hash_id_[slot] = static_cast<std::uint32_t>(i);
    }

    // per-plane sorted point IDs; combinations of RREF rows with a leading 1
    // are already normalized representatives
    plane_pts_.assign(static_cast<size_t>(planes.size()) * ppp_, 0);
    std::vector<code_t> zrows(static_cast<size_t>(3) * N_);
    Vec v(N_);
    for (long zi = 0; zi < planes.size(); ++zi) {
        planes.rows_of(zi, zrows.data());
        const code_t* r0 = zrows.data();
        const code_t* r1 = zrows.data() + N_;
        const code_t* r2 = zrows.data() + 2 * N_;
        std::uint32_t* out = &plane_pts_[static_cast<size_t>(zi) * ppp_];
        int cnt = 0;
        auto emit = [&](const Vec& vv) {
            long pid = model.point_id(vv);
            if (pid < 0) throw Error("plane point missing from the model (internal)");
            out[cnt++] = static_cast<std::uint32_t>(pid);
        };
        v.assign(r2, r2 + N_);
        emit(v);
        for (int b = 0; b < q; ++b) {
            for (int j = 0; j < N_; ++j) v[j] = F.add(r1[j], F.mul(static_cast<code_t>(b), r2[j]));
            emit(v);
        }
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c) {
                for (int j = 0; j < N_; ++j)
                    v[j] = F.add(r0[j], F.add(F.mul(static_cast<code_t>(b), r1[j]),
                                              F.mul(static_cast<code_t>(c), r2[j])));
                emit(v);
            }
        std::sort(out, out + ppp_);
    }

    // line -> planes CSR, built plane-major
    yz_start_.assign(lines.size() + 1, 0);
    std::vector<code_t> yrows(static_cast<size_t>(2) * N_);
    auto each_plane_line = [&](long zi, auto&& fn) {
        planes.rows_of(zi, zrows.data());
        for_each_rref(F, 2, 3, [&](const code_t* yc) {
            std::fill(yrows.begin(), yrows.end(), 0);
            for (int i = 0; i < 2; ++i)
                for (int t = 0; t < 3; ++t) {
                    code_t c = yc[static_cast<size_t>(i) * 3 + t];
                    if (c == 0) continue;
                    for (int j = 0; j < N_; ++j)
                        yrows[static_cast<size_t>(i) * N_ + j] =
                            F.add(yrows[static_cast<size_t>(i) * N_ + j],
                                  F.mul(c, zrows[static_cast<size_t>(t) * N_ + j]));
                }
            rref_inplace(F, yrows.data(), 2, N_);
            long id = find_line(pack_key(F, yrows.data(), 2, N_));
            if (id < 0) throw Error("plane line missing from S_2 (internal)");
            fn(id);
        });
    };
    for (long zi = 0; zi < planes.size(); ++zi)
        each_plane_line(zi, [&](long id) { ++yz_start_[id + 1]; });
    for (size_t i = 1; i < yz_start_.size(); ++i) yz_start_[i] += yz_start_[i - 1];
    yz_.resize(yz_start_.back());
    std::vector<std::uint32_t> cursor(yz_start_.begin(), yz_start_.end() - 1);
    for (long zi = 0; zi < planes.size(); ++zi)
        each_plane_line(zi, [&](long id) { yz_[cursor[id]++] = static_cast<std::uint32_t>(zi); });
}

long PencilClosure::num_points() const { return model_->sk(2).size(); }

long PencilClosure::find_line(const SubKey& key) const {
    const SubspaceTable& lines = model_->sk(2);
    std::uint64_t fp = key_fp(key);
    std::uint64_t slot = fp & hash_mask_;
    while (hash_fp_[slot] != 0) {
        if (hash_fp_[slot] == fp) {
            std::uint32_t id = hash_id_[slot];
            if (lines.keys[id] == key) return id;
        }
        slot = (slot + 1) & hash_mask_;
    }
    return -1;
}

ClosureResult PencilClosure::closure(const std::vector<long>& seed) const {
    const Field& F = model_->field();
    int q = F.order();
    const SubspaceTable& lines = model_->sk(2);
    const SubspaceTable& planes = model_->sk(3);
    long nb = lines.size();
    size_t nflags = static_cast<size_t>(planes.size()) * ppp_;

    ClosureResult res;
    res.closed = Bitset(nb);
    std::vector<std::uint8_t> counts(nflags, 0);
    Bitset fired(nflags);
    std::vector<std::uint32_t> stack;
    for (long s : seed) {
        if (s < 0 || s >= nb) throw Error("seed point out of range");
        if (!res.closed.test(s)) {
            res.closed.set(s);
            stack.push_back(static_cast<std::uint32_t>(s));
            ++res.closed_count;
        }
    }
    res.seed_size = res.closed_count;

    std::vector<code_t> yrows(static_cast<size_t>(2) * N_);
    std::vector<code_t> zrows(static_cast<size_t>(3) * N_);
    std::vector<code_t> mrows(static_cast<size_t>(2) * N_);
    Vec pv(N_);
    std::vector<std::uint32_t> ypts(q + 1);

    while (!stack.empty()) {
        std::uint32_t y = stack.back();
        stack.pop_back();
        ++res.processed;
        lines.rows_of(y, yrows.data());
        const code_t* yr0 = yrows.data();
        const code_t* yr1 = yrows.data() + N_;
        // the q+1 point IDs of this line; RREF combinations are normalized
        int np = 0;
        pv.assign(yr1, yr1 + N_);
        {
            long pid = model_->point_id(pv);
            if (pid < 0) throw Error("line point missing from the model (internal)");
            ypts[np++] = static_cast<std::uint32_t>(pid);
        }
        for (int b = 0; b < q; ++b) {
            for (int j = 0; j < N_; ++j) pv[j] = F.add(yr0[j], F.mul(static_cast<code_t>(b), yr1[j]));
            long pid = model_->point_id(pv);
            if (pid < 0) throw Error("line point missing from the model (internal)");
            ypts[np++] = static_cast<std::uint32_t>(pid);
        }
        for (std::uint32_t zi_i = yz_start_[y]; zi_i < yz_start_[y + 1]; ++zi_i) {
            std::uint32_t zi = yz_[zi_i];
            const std::uint32_t* zpts = &plane_pts_[static_cast<size_t>(zi) * ppp_];
            bool zloaded = false;
            int zpiv[3] = {0, 0, 0};
            for (int pi = 0; pi < np; ++pi) {
                const std::uint32_t* pos = std::lower_bound(zpts, zpts + ppp_, ypts[pi]);
                size_t flag = static_cast<size_t>(zi) * ppp_ + (pos - zpts);
                if (fired.test(flag)) continue;
                if (++counts[flag] < 2) continue;
                fired.set(flag);
                // close the whole pencil: the lines through this point inside plane zi
                if (!zloaded) {
                    planes.rows_of(zi, zrows.data());
                    for (int i = 0; i < 3; ++i) {
                        int j = 0;
                        while (zrows[static_cast<size_t>(i) * N_ + j] == 0) ++j;
                        zpiv[i] = j;
                    }
                    zloaded = true;
                }
                const code_t* pvec = model_->point(ypts[pi]);
                // plane coordinates of the point: entries at the pivot columns
                code_t xc[3] = {pvec[zpiv[0]], pvec[zpiv[1]], pvec[zpiv[2]]};
                int lead = 0;
                while (xc[lead] == 0) ++lead;
                // complement directions: the two other RREF rows of the plane
                int c1 = lead == 0 ? 1 : 0;
                int c2 = lead == 2 ? 1 : 2;
                const code_t* zc1 = zrows.data() + static_cast<size_t>(c1) * N_;
                const code_t* zc2 = zrows.data() + static_cast<size_t>(c2) * N_;
                for (int ab = 0; ab <= q; ++ab) {
                    // w = zc1 + b*zc2 for b in F, plus w = zc2
                    if (ab == q) {
                        std::copy(zc2, zc2 + N_, mrows.begin());
                    } else {
                        code_t b = static_cast<code_t>(ab);
                        for (int j = 0; j < N_; ++j) mrows[j] = F.add(zc1[j], F.mul(b, zc2[j]));
                    }
                    std::copy(pvec, pvec + N_, mrows.begin() + N_);
                    rref_inplace(F, mrows.data(), 2, N_);
                    long mid = find_line(pack_key(F, mrows.data(), 2, N_));
                    if (mid < 0) throw Error("pencil member missing from S_2 (internal)");
                    if (!res.closed.test(mid)) {
                        res.closed.set(mid);
                        stack.push_back(static_cast<std::uint32_t>(mid));
                        ++res.closed_count;
                    }
                }
            }
        }
    }
    res.generated_all = (res.closed_count == nb);
    return res;
}

}  // namespace polargrass
