#include "polargrass/forms.hpp"

#include <algorithm>
#include <sstream>

namespace polargrass {

namespace {

std::string coeff_tag(const Field& F, const std::vector<code_t>& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (code_t x : c) {
        h ^= x;
        h *= 1099511628211ull;
    }
    h ^= F.hash();
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string vec_str(const Field& F, const Vec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << F.show(v[i]);
    os << ")";
    return os.str();
}

// absolute trace to the prime field
code_t abs_trace(const Field& F, code_t x) {
    code_t t = 0, y = x;
    for (int i = 0; i < F.degree(); ++i) {
        t = F.add(t, y);
        y = F.pow(y, F.characteristic());
    }
    return t;
}

// trace of the quadratic extension F / F0, F0 = GF(p^{e/2})
code_t rel_trace(const Field& F, code_t x) { return F.add(x, F.conj(x)); }

}  // namespace

FormSpec FormSpec::quadratic(const Field& F, int N, std::vector<code_t> upper) {
    if (static_cast<int>(upper.size()) != N * N) throw Error("coefficient matrix must be N x N");
    FormSpec f;
    f.kind_ = FormKind::quadratic;
    f.F_ = &F;
    f.n_ = N;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < i; ++j)
            if (upper[static_cast<size_t>(i) * N + j] != 0)
                throw Error("quadratic coefficient matrix must be upper triangular");
    f.c_ = std::move(upper);
    f.descriptor_ = "quadratic:" + F.descriptor() + ":N" + std::to_string(N) + ":" + coeff_tag(F, f.c_);
    f.bilin_.assign(static_cast<size_t>(N) * N, 0);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            code_t c = f.c_[static_cast<size_t>(i) * N + j];
            if (c == 0) continue;
            f.bilin_[static_cast<size_t>(i) * N + j] = F.add(f.bilin_[static_cast<size_t>(i) * N + j], c);
            f.bilin_[static_cast<size_t>(j) * N + i] = F.add(f.bilin_[static_cast<size_t>(j) * N + i], c);
        }
    f.check_nondegenerate();
    return f;
}

FormSpec FormSpec::hermitian(const Field& F, int N, std::vector<code_t> gram) {
    if (!F.has_conjugation()) throw Error("Hermitian form needs a quadratic field extension");
    if (static_cast<int>(gram.size()) != N * N) throw Error("Gram matrix must be N x N");
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (gram[static_cast<size_t>(j) * N + i] != F.conj(gram[static_cast<size_t>(i) * N + j]))
                throw Error("Gram matrix is not sigma-Hermitian");
    FormSpec f;
    f.kind_ = FormKind::hermitian;
    f.F_ = &F;
    f.n_ = N;
    f.c_ = std::move(gram);
    f.descriptor_ = "hermitian:" + F.descriptor() + ":N" + std::to_string(N) + ":" + coeff_tag(F, f.c_);
    f.check_nondegenerate();
    return f;
}

code_t FormSpec::eval(const code_t* x) const {
    const Field& F = *F_;
    code_t acc = 0;
    if (kind_ == FormKind::quadratic) {
        for (int i = 0; i < n_; ++i) {
            code_t xi = x[i];
            if (xi == 0) continue;
            const code_t* row = &c_[static_cast<size_t>(i) * n_];
            code_t s = 0;
            for (int j = i; j < n_; ++j)
                if (row[j] != 0 && x[j] != 0) s = F.add(s, F.mul(row[j], x[j]));
            acc = F.add(acc, F.mul(xi, s));
        }
        return acc;
    }
    return pair(x, x);
}

code_t FormSpec::pair(const code_t* x, const code_t* y) const {
    const Field& F = *F_;
    code_t acc = 0;
    const std::vector<code_t>& m = kind_ == FormKind::quadratic ? bilin_ : c_;
    for (int i = 0; i < n_; ++i) {
        code_t xi = x[i];
        if (xi == 0) continue;
        const code_t* row = &m[static_cast<size_t>(i) * n_];
        code_t s = 0;
        for (int j = 0; j < n_; ++j)
            if (row[j] != 0 && y[j] != 0) s = F.add(s, F.mul(row[j], y[j]));
        if (kind_ == FormKind::hermitian) xi = F.conj(xi);
        acc = F.add(acc, F.mul(xi, s));
    }
    return acc;
}

code_t FormSpec::eval(const Vec& x) const {
    if (static_cast<int>(x.size()) != n_) throw Error("vector length does not match the form");
    return eval(x.data());
}

code_t FormSpec::bilinearize(const Vec& x, const Vec& y) const {
    if (kind_ != FormKind::quadratic)
        throw Error("bilinearization is defined for quadratic forms only");
    return pair(x, y);
}

Vec FormSpec::pair_functional(const Vec& x) const {
    const Field& F = *F_;
    const std::vector<code_t>& m = kind_ == FormKind::quadratic ? bilin_ : c_;
    Vec phi(n_, 0);
    for (int i = 0; i < n_; ++i) {
        code_t xi = x[i];
        if (xi == 0) continue;
        if (kind_ == FormKind::hermitian) xi = F.conj(xi);
        const code_t* row = &m[static_cast<size_t>(i) * n_];
        for (int j = 0; j < n_; ++j)
            if (row[j] != 0) phi[j] = F.add(phi[j], F.mul(xi, row[j]));
    }
    return phi;
}

code_t FormSpec::pair(const Vec& x, const Vec& y) const {
    if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
        throw Error("vector length does not match the form");
    return pair(x.data(), y.data());
}

Subspace FormSpec::radical() const {
    const Field& F = *F_;
    // v in Rad iff pair(v, e_j) = 0 for all j
    if (kind_ == FormKind::quadratic) {
        // rows of the system: bilin^T (v * bilin = 0)
        std::vector<code_t> m(static_cast<size_t>(n_) * n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m[static_cast<size_t>(j) * n_ + i] = bilin_[static_cast<size_t>(i) * n_ + j];
        auto ker = kernel_basis(F, m.data(), n_, n_);
        return Subspace::span(F, n_, ker);
    }
    // sigma(v) in the left kernel of the Gram matrix
    std::vector<code_t> m(static_cast<size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m[static_cast<size_t>(j) * n_ + i] = c_[static_cast<size_t>(i) * n_ + j];
    auto ker = kernel_basis(F, m.data(), n_, n_);
    for (auto& v : ker)
        for (auto& x : v) x = F.conj(x);
    return Subspace::span(F, n_, ker);
}

void FormSpec::check_nondegenerate() const {
    Subspace rad = radical();
    if (rad.rank() == 0) return;
    if (kind_ == FormKind::hermitian || F_->characteristic() != 2)
        throw Error("degenerate form: radical vector " + vec_str(*F_, rad.row(0)));
    // characteristic 2, quadratic: the form must not vanish on the radical
    bool bad = false;
    Vec witness;
    for_each_projective_point(*F_, rad.rank(), [&](const code_t* t) {
        if (bad) return;
        Vec v(n_, 0);
        for (int i = 0; i < rad.rank(); ++i)
            if (t[i] != 0)
                for (int j = 0; j < n_; ++j) v[j] = F_->add(v[j], F_->mul(t[i], rad.at(i, j)));
        if (eval(v.data()) == 0) { bad = true; witness = v; }
    });
    if (bad) throw Error("degenerate polar space: singular radical vector " + vec_str(*F_, witness));
}

std::pair<int, int> FormSpec::subdefects() const {
    WittData w = witt_decompose(*this);
    return {w.d1, w.d2};
}

FormSpec FormSpec::restrict_to(const Subspace& basis) const {
    const Field& F = *F_;
    int k = basis.rank();
    std::vector<code_t> m(static_cast<size_t>(k) * k, 0);
    if (kind_ == FormKind::quadratic) {
        for (int i = 0; i < k; ++i) {
            Vec bi = basis.row(i);
            m[static_cast<size_t>(i) * k + i] = eval(bi.data());
            for (int j = i + 1; j < k; ++j) {
                Vec bj = basis.row(j);
                m[static_cast<size_t>(i) * k + j] = pair(bi.data(), bj.data());
            }
        }
        FormSpec f;
        f.kind_ = FormKind::quadratic;
        f.F_ = &F;
        f.n_ = k;
        f.c_ = std::move(m);
        f.bilin_.assign(static_cast<size_t>(k) * k, 0);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                code_t c = f.c_[static_cast<size_t>(i) * k + j];
                if (c == 0) continue;
                f.bilin_[static_cast<size_t>(i) * k + j] = F.add(f.bilin_[static_cast<size_t>(i) * k + j], c);
                f.bilin_[static_cast<size_t>(j) * k + i] = F.add(f.bilin_[static_cast<size_t>(j) * k + i], c);
            }
        f.descriptor_ = "restricted:" + descriptor_;
        return f;  // restrictions may be degenerate; callers decide
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Vec bi = basis.row(i), bj = basis.row(j);
            m[static_cast<size_t>(i) * k + j] = pair(bi.data(), bj.data());
        }
    FormSpec f;
    f.kind_ = FormKind::hermitian;
    f.F_ = &F;
    f.n_ = k;
    f.c_ = std::move(m);
    f.descriptor_ = "restricted:" + descriptor_;
    return f;
}

FormSpec FormSpec::standard(const std::string& descriptor) {
    std::string s = descriptor;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    auto lp = s.find('(');
    auto rp = s.rfind(')');
    if (lp == std::string::npos || rp == std::string::npos || rp < lp)
        throw Error("bad space descriptor '" + descriptor + "'");
    std::string name = s.substr(0, lp);
    std::vector<int> args;
    {
        std::istringstream is(s.substr(lp + 1, rp - lp - 1));
        std::string tok;
        while (std::getline(is, tok, ',')) args.push_back(std::stoi(tok));
    }
    auto set_pairs = [](std::vector<code_t>& c, int N, int n) {
        for (int i = 0; i < n; ++i) c[static_cast<size_t>(2 * i) * N + 2 * i + 1] = 1;
    };
    if (name == "Qplus" || name == "Qparab" || name == "Qminus") {
        if (args.size() != 2) throw Error(name + " expects (n, q)");
        int n = args[0], q = args[1];
        if (n < 1) throw Error("Witt index must be >= 1");
        const Field& F = Field::predefined(q);
        int d = name == "Qplus" ? 0 : (name == "Qparab" ? 1 : 2);
        int N = 2 * n + d;
        std::vector<code_t> c(static_cast<size_t>(N) * N, 0);
        set_pairs(c, N, n);
        if (name == "Qparab") c[static_cast<size_t>(N - 1) * N + N - 1] = 1;
        if (name == "Qminus") {
            code_t lam, mu;
            if (F.characteristic() == 2) {
                // t^2 + t + delta with absolute trace(delta) = 1
                lam = 1;
                mu = 0;
                for (int x = 0; x < q; ++x)
                    if (abs_trace(F, static_cast<code_t>(x)) != 0) { mu = static_cast<code_t>(x); break; }
                if (mu == 0) throw Error("no trace-one element (unreachable)");
            } else {
                // t^2 - nu for the least non-square nu
                std::vector<bool> sq(q, false);
                for (int x = 0; x < q; ++x) sq[F.mul(static_cast<code_t>(x), static_cast<code_t>(x))] = true;
                code_t nu = 0;
                for (int x = 2; x < q; ++x)
                    if (!sq[x]) { nu = static_cast<code_t>(x); break; }
                if (nu == 0) throw Error("no non-square in " + F.descriptor());
                lam = 0;
                mu = F.neg(nu);
            }
            c[static_cast<size_t>(N - 2) * N + N - 2] = 1;
            c[static_cast<size_t>(N - 2) * N + N - 1] = lam;
            c[static_cast<size_t>(N - 1) * N + N - 1] = mu;
            // sanity: t^2 + lam t + mu must have no root
            for (int t = 0; t < q; ++t) {
                code_t ct = static_cast<code_t>(t);
                code_t v = F.add(F.add(F.mul(ct, ct), F.mul(lam, ct)), mu);
                if (v == 0) throw Error("elliptic polynomial is reducible (unreachable)");
            }
        }
        FormSpec f = FormSpec::quadratic(F, N, std::move(c));
        f.descriptor_ = name + "(" + std::to_string(n) + "," + std::to_string(q) + ")";
        return f;
    }
    if (name == "H") {
        if (args.size() != 3) throw Error("H expects (n, d, q0)");
        int n = args[0], d = args[1], q0 = args[2];
        if (n < 1 || d < 0) throw Error("H(n,d,q0) needs n >= 1, d >= 0");
        if (d > 1) throw Error("no anisotropic Hermitian form of dimension " + std::to_string(d) +
                               " over a finite field (d <= 1)");
        const Field& F = Field::predefined(q0 * q0);
        int N = 2 * n + d;
        std::vector<code_t> g(static_cast<size_t>(N) * N, 0);
        for (int i = 0; i < n; ++i) {
            g[static_cast<size_t>(2 * i) * N + 2 * i + 1] = 1;
            g[static_cast<size_t>(2 * i + 1) * N + 2 * i] = 1;
        }
        if (d == 1) g[static_cast<size_t>(N - 1) * N + N - 1] = 1;
        FormSpec f = FormSpec::hermitian(F, N, std::move(g));
        f.descriptor_ = "H(" + std::to_string(n) + "," + std::to_string(d) + "," + std::to_string(q0) + ")";
        return f;
    }
    throw Error("unknown space descriptor '" + descriptor + "'");
}

namespace {

// lexicographically least normalized vector of the row space of `basis`
// satisfying `pred`, or nullopt
template <typename Pred>
std::optional<Vec> least_vector(const Field& F, const Subspace& basis, Pred&& pred) {
    int k = basis.rank(), n = basis.ambient();
    if (k == 0) return std::nullopt;
    std::optional<Vec> best;
    for_each_projective_point(F, k, [&](const code_t* t) {
        Vec v(n, 0);
        for (int i = 0; i < k; ++i) {
            if (t[i] == 0) continue;
            for (int j = 0; j < n; ++j) v[j] = F.add(v[j], F.mul(t[i], basis.at(i, j)));
        }
        v = normalize_point(F, std::move(v));
        if (!pred(v)) return;
        if (!best || v < *best) best = v;
    });
    return best;
}

}  // namespace

WittData witt_decompose(const FormSpec& f) {
    const Field& F = f.field();
    int N = f.dim();
    WittData w;

    // explicit degeneracy report
    {
        Subspace rad = f.radical();
        if (rad.rank() > 0) {
            if (f.kind() == FormKind::hermitian || F.characteristic() != 2)
                throw Error("degenerate form: radical vector " + vec_str(F, rad.row(0)));
            auto zero = least_vector(F, rad, [&](const Vec& v) { return f.eval(v.data()) == 0; });
            if (zero) throw Error("degenerate polar space: radical vector " + vec_str(F, *zero));
        }
        w.radical = rad.rank() > 0 ? rad : Subspace(F, N);
    }

    std::vector<Vec> id(N, Vec(N, 0));
    for (int i = 0; i < N; ++i) id[i][i] = 1;
    Subspace W = Subspace::span(F, N, id);

    while (W.rank() > 0) {
        auto u = least_vector(F, W, [&](const Vec& v) { return f.eval(v.data()) == 0; });
        if (!u) break;  // anisotropic remainder
        auto v = least_vector(F, W, [&](const Vec& x) { return f.pair(u->data(), x.data()) != 0; });
        if (!v) throw Error("degenerate form: radical vector " + vec_str(F, *u));
        code_t c = f.pair(u->data(), v->data());
        Vec vv = *v;
        if (c != 1) {
            code_t s = F.inv(c);
            for (auto& x : vv) x = F.mul(x, s);
        }
        if (f.kind() == FormKind::quadratic) {
            code_t qv = f.eval(vv.data());
            if (qv != 0) {
                code_t lam = F.neg(qv);
                for (int j = 0; j < N; ++j) vv[j] = F.add(vv[j], F.mul(lam, (*u)[j]));
            }
        } else {
            code_t hv = f.eval(vv.data());
            if (hv != 0) {
                code_t lam = 0;
                bool found = false;
                for (int x = 0; x < F.order() && !found; ++x)
                    if (rel_trace(F, static_cast<code_t>(x)) == F.neg(hv)) {
                        lam = static_cast<code_t>(x);
                        found = true;
                    }
                if (!found) throw Error("trace equation unsolvable (unreachable)");
                for (int j = 0; j < N; ++j) vv[j] = F.add(vv[j], F.mul(lam, (*u)[j]));
            }
        }
        w.pairs.emplace_back(*u, vv);
        // W := W cap u^perp cap vv^perp
        int k = W.rank();
        std::vector<code_t> rows(static_cast<size_t>(2) * k, 0);
        for (int j = 0; j < k; ++j) {
            Vec bj = W.row(j);
            rows[j] = f.pair(u->data(), bj.data());
            rows[static_cast<size_t>(k) + j] = f.pair(vv.data(), bj.data());
        }
        auto ker = kernel_basis(F, rows.data(), 2, k);
        std::vector<Vec> new_basis;
        for (const auto& t : ker) {
            Vec x(N, 0);
            for (int i = 0; i < k; ++i) {
                if (t[i] == 0) continue;
                for (int j = 0; j < N; ++j) x[j] = F.add(x[j], F.mul(t[i], W.at(i, j)));
            }
            new_basis.push_back(std::move(x));
        }
        W = Subspace::span(F, N, new_basis);
    }
    for (int i = 0; i < W.rank(); ++i) w.v0_basis.push_back(W.row(i));

    int n = w.witt_index(), d = w.defect();
    if (2 * n + d != N) throw Error("Witt decomposition bookkeeping error");
    w.d1 = (f.kind() == FormKind::quadratic && F.characteristic() == 2) ? w.radical.rank() : 0;
    w.d2 = d - w.d1;
    return w;
}

std::vector<Subspace> split_anisotropic(const FormSpec& f, const WittData& w, int m) {
    const Field& F = f.field();
    if (f.kind() != FormKind::quadratic || F.characteristic() != 2)
        throw Error("anisotropic splitting applies to quadratic forms in characteristic 2");
    if (2 * m > w.d2) throw Error("requested " + std::to_string(m) + " planes but d2 = " + std::to_string(w.d2));
    int N = f.dim();
    std::vector<Subspace> planes;
    if (m == 0) return planes;

    // V0' := complement of the radical inside V0
    Subspace V0 = Subspace::span(F, N, w.v0_basis);
    std::vector<Vec> comp;
    {
        std::vector<Vec> acc;
        for (int i = 0; i < w.radical.rank(); ++i) acc.push_back(w.radical.row(i));
        for (int i = 0; i < V0.rank(); ++i) {
            Vec cand = V0.row(i);
            auto trial = acc;
            trial.push_back(cand);
            if (matrix_rank(F, trial) > static_cast<int>(acc.size())) {
                acc.push_back(cand);
                comp.push_back(cand);
            }
        }
    }
    Subspace W = Subspace::span(F, N, comp);
    for (int t = 0; t < m; ++t) {
        auto v1 = least_vector(F, W, [](const Vec&) { return true; });
        if (!v1) throw Error("anisotropic splitting ran out of space");
        auto w1 = least_vector(F, W, [&](const Vec& x) { return f.pair(v1->data(), x.data()) != 0; });
        if (!w1) throw Error("no non-orthogonal partner in V0' (unexpected)");
        std::vector<Vec> pv{*v1, *w1};
        planes.push_back(Subspace::span(F, N, pv));
        int k = W.rank();
        std::vector<code_t> rows(static_cast<size_t>(2) * k, 0);
        for (int j = 0; j < k; ++j) {
            Vec bj = W.row(j);
            rows[j] = f.pair(v1->data(), bj.data());
            rows[static_cast<size_t>(k) + j] = f.pair(w1->data(), bj.data());
        }
        auto ker = kernel_basis(F, rows.data(), 2, k);
        std::vector<Vec> nb;
        for (const auto& tt : ker) {
            Vec x(N, 0);
            for (int i = 0; i < k; ++i) {
                if (tt[i] == 0) continue;
                for (int j = 0; j < N; ++j) x[j] = F.add(x[j], F.mul(tt[i], W.at(i, j)));
            }
            nb.push_back(std::move(x));
        }
        W = Subspace::span(F, N, nb);
    }
    return planes;
}

}  // namespace polargrass
