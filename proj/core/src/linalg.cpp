#include "polargrass/linalg.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace polargrass {

int rref_inplace(const Field& F, code_t* rows, int k, int n) {
    int r = 0;
    for (int col = 0; col < n && r < k; ++col) {
        int piv = -1;
        for (int i = r; i < k; ++i)
            if (rows[i * n + col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < n; ++j) std::swap(rows[piv * n + j], rows[r * n + j]);
        code_t s = F.inv(rows[r * n + col]);
        if (s != 1)
            for (int j = col; j < n; ++j) rows[r * n + j] = F.mul(rows[r * n + j], s);
        for (int i = 0; i < k; ++i) {
            if (i == r) continue;
            code_t c = rows[i * n + col];
            if (c == 0) continue;
            for (int j = col; j < n; ++j)
                rows[i * n + j] = F.sub(rows[i * n + j], F.mul(c, rows[r * n + j]));
        }
        ++r;
    }
    return r;
}

void reduce_against(const Field& F, const code_t* rows, int k, int n, code_t* v) {
    for (int i = 0; i < k; ++i) {
        int piv = -1;
        for (int j = 0; j < n; ++j)
            if (rows[i * n + j] != 0) { piv = j; break; }
        if (piv < 0) continue;
        code_t c = v[piv];
        if (c == 0) continue;
        for (int j = piv; j < n; ++j) v[j] = F.sub(v[j], F.mul(c, rows[i * n + j]));
    }
}

int key_bits_per_code(const Field& F) {
    return F.order() <= 16 ? 4 : (F.order() <= 256 ? 8 : 9);
}

namespace {
inline void key_shift_left(SubKey& key, int b) {
    key[0] = (key[0] << b) | (key[1] >> (64 - b));
    key[1] = (key[1] << b) | (key[2] >> (64 - b));
    key[2] <<= b;
}
}  // namespace

SubKey pack_key(const Field& F, const code_t* rows, int k, int n) {
    int bits = key_bits_per_code(F);
    int total = k * n;
    if (total * bits + 8 > 192) throw Error("subspace too large to pack (k*n over key budget)");
    SubKey key{0, 0, 0};
    for (int i = 0; i < total; ++i) {
        key_shift_left(key, bits);
        key[2] |= rows[i];
    }
    key_shift_left(key, 8);
    key[2] |= static_cast<std::uint64_t>((k << 4) | n);
    return key;
}

void unpack_key(const Field& F, const SubKey& key, code_t* rows, int k, int n) {
    int bits = key_bits_per_code(F);
    int total = k * n;
    std::uint64_t mask = (1ull << bits) - 1;
    SubKey w = key;
    // strip the (k, n) tag, then read codes back to front
    std::uint64_t carry_bits = 8;
    auto shift_right = [&](int b) {
        w[2] = (w[2] >> b) | (w[1] << (64 - b));
        w[1] = (w[1] >> b) | (w[0] << (64 - b));
        w[0] >>= b;
    };
    shift_right(static_cast<int>(carry_bits));
    for (int i = total - 1; i >= 0; --i) {
        rows[i] = static_cast<code_t>(w[2] & mask);
        shift_right(bits);
    }
}

Subspace Subspace::span_raw(const Field& F, int ambient, const code_t* rows, int k) {
    Subspace s(F, ambient);
    s.rows_.assign(rows, rows + static_cast<size_t>(k) * ambient);
    s.rank_ = rref_inplace(F, s.rows_.data(), k, ambient);
    s.rows_.resize(static_cast<size_t>(s.rank_) * ambient);
    return s;
}

Subspace Subspace::span(const Field& F, int ambient, std::span<const Vec> rows) {
    std::vector<code_t> buf;
    buf.reserve(rows.size() * ambient);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != ambient)
            throw Error("row length does not match the ambient dimension");
        buf.insert(buf.end(), r.begin(), r.end());
    }
    return span_raw(F, ambient, buf.data(), static_cast<int>(rows.size()));
}

Subspace Subspace::point(const Field& F, const Vec& v) {
    return span(F, static_cast<int>(v.size()), std::span<const Vec>(&v, 1));
}

bool Subspace::contains(const Vec& v) const {
    Vec w = v;
    reduce_against(*F_, rows_.data(), rank_, n_, w.data());
    return std::all_of(w.begin(), w.end(), [](code_t c) { return c == 0; });
}

bool Subspace::contains(const Subspace& other) const {
    for (int i = 0; i < other.rank(); ++i)
        if (!contains(other.row(i))) return false;
    return true;
}

bool Subspace::is_rational(int sub_degree) const {
    for (code_t c : rows_)
        if (!F_->in_subfield(c, sub_degree)) return false;
    return true;
}

std::string Subspace::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rank_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < n_; ++j) os << (j ? "," : "") << F_->show(at(i, j));
    }
    os << "]";
    return os.str();
}

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw Error("sum of subspaces in different ambient spaces");
    std::vector<code_t> buf = a.rows();
    buf.insert(buf.end(), b.rows().begin(), b.rows().end());
    return Subspace::span_raw(a.field(), a.ambient(), buf.data(), a.rank() + b.rank());
}

// Zassenhaus: rref of [A|A; B|0]; rows with zero left half carry the
// intersection in their right half.
Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw Error("intersection of subspaces in different ambient spaces");
    const Field& F = a.field();
    int n = a.ambient();
    int k = a.rank() + b.rank();
    std::vector<code_t> buf(static_cast<size_t>(k) * 2 * n, 0);
    for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < n; ++j) {
            buf[static_cast<size_t>(i) * 2 * n + j] = a.at(i, j);
            buf[static_cast<size_t>(i) * 2 * n + n + j] = a.at(i, j);
        }
    for (int i = 0; i < b.rank(); ++i)
        for (int j = 0; j < n; ++j) buf[static_cast<size_t>(a.rank() + i) * 2 * n + j] = b.at(i, j);
    int r = rref_inplace(F, buf.data(), k, 2 * n);
    std::vector<code_t> inter;
    for (int i = 0; i < r; ++i) {
        bool left_zero = true;
        for (int j = 0; j < n; ++j)
            if (buf[static_cast<size_t>(i) * 2 * n + j] != 0) { left_zero = false; break; }
        if (left_zero)
            inter.insert(inter.end(), buf.begin() + static_cast<size_t>(i) * 2 * n + n,
                         buf.begin() + static_cast<size_t>(i + 1) * 2 * n);
    }
    return Subspace::span_raw(F, n, inter.data(), static_cast<int>(inter.size()) / n);
}

int matrix_rank(const Field& F, std::span<const Vec> rows) {
    if (rows.empty()) return 0;
    int n = static_cast<int>(rows[0].size());
    std::vector<code_t> buf;
    buf.reserve(rows.size() * n);
    for (const auto& r : rows) buf.insert(buf.end(), r.begin(), r.end());
    return rref_inplace(F, buf.data(), static_cast<int>(rows.size()), n);
}

Vec normalize_point(const Field& F, Vec v) {
    for (code_t c : v)
        if (c != 0) {
            if (c != 1) {
                code_t s = F.inv(c);
                for (auto& x : v) x = F.mul(x, s);
            }
            return v;
        }
    return v;
}

std::vector<std::array<int, 4>> column_subsets(int n, int k) {
    if (k > 4) throw Error("pluecker coordinates implemented for k <= 4");
    std::vector<std::array<int, 4>> out;
    std::array<int, 4> c{0, 0, 0, 0};
    for (int i = 0; i < k; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

namespace {
code_t det_small(const Field& F, code_t* m, int k) {
    code_t d = 1;
    for (int col = 0; col < k; ++col) {
        int piv = -1;
        for (int i = col; i < k; ++i)
            if (m[i * k + col] != 0) { piv = i; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            for (int j = 0; j < k; ++j) std::swap(m[piv * k + j], m[col * k + j]);
            d = F.neg(d);
        }
        d = F.mul(d, m[col * k + col]);
        code_t s = F.inv(m[col * k + col]);
        for (int i = col + 1; i < k; ++i) {
            code_t c = F.mul(m[i * k + col], s);
            if (c == 0) continue;
            for (int j = col; j < k; ++j)
                m[i * k + j] = F.sub(m[i * k + j], F.mul(c, m[col * k + j]));
        }
    }
    return d;
}
}  // namespace

Vec plucker_coords(const Subspace& s) {
    if (s.rank() == 0) throw Error("pluecker coordinates of the empty subspace");
    const Field& F = s.field();
    int k = s.rank(), n = s.ambient();
    auto subsets = column_subsets(n, k);
    Vec out;
    out.reserve(subsets.size());
    std::array<code_t, 16> m;
    for (const auto& cols : subsets) {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m[i * k + j] = s.at(i, cols[j]);
        out.push_back(det_small(F, m.data(), k));
    }
    return out;
}

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<Vec> kernel_basis(const Field& F, const code_t* rows, int k, int n) {
    std::vector<code_t> m(rows, rows + static_cast<size_t>(k) * n);
    int r = rref_inplace(F, m.data(), k, n);
    std::vector<int> pivot_col(r), col_pivot(n, -1);
    for (int i = 0; i < r; ++i) {
        int j = 0;
        while (m[static_cast<size_t>(i) * n + j] == 0) ++j;
        pivot_col[i] = j;
        col_pivot[j] = i;
    }
    std::vector<Vec> basis;
    for (int f = 0; f < n; ++f) {
        if (col_pivot[f] >= 0) continue;
        Vec x(n, 0);
        x[f] = 1;
        for (int i = 0; i < r; ++i) x[pivot_col[i]] = F.neg(m[static_cast<size_t>(i) * n + f]);
        basis.push_back(std::move(x));
    }
    return basis;
}

long projective_point_count(int q, int m) {
    long total = 0, power = 1;
    for (int i = 0; i < m; ++i) { total += power; power *= q; }
    return total;
}

std::optional<Vec> solve_coords(const Field& F, const code_t* m_rows, int m, int n, const Vec& t) {
    // Gaussian elimination on the transposed augmented system [M^T | t^T].
    std::vector<code_t> a(static_cast<size_t>(n) * (m + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) a[static_cast<size_t>(i) * (m + 1) + j] = m_rows[static_cast<size_t>(j) * n + i];
        a[static_cast<size_t>(i) * (m + 1) + m] = t[i];
    }
    int r = rref_inplace(F, a.data(), n, m + 1);
    Vec x(m, 0);
    for (int i = 0; i < r; ++i) {
        int piv = -1;
        for (int j = 0; j <= m; ++j)
            if (a[static_cast<size_t>(i) * (m + 1) + j] != 0) { piv = j; break; }
        if (piv == m) return std::nullopt;  // inconsistent
        if (piv < 0) continue;
        x[piv] = a[static_cast<size_t>(i) * (m + 1) + m];
    }
    return x;
}

void for_each_rref(const Field& F, int k, int n, const std::function<void(const code_t*)>& fn) {
    if (k == 0 || k > n) {
        if (k == 0) {
            std::vector<code_t> empty;
            fn(empty.data());
        }
        return;
    }
    int q = F.order();
    std::vector<int> piv(k);
    std::vector<code_t> rows(static_cast<size_t>(k) * n);
    // iterate pivot-column combinations in lexicographic order
    for (int i = 0; i < k; ++i) piv[i] = i;
    while (true) {
        // free positions: (i, j) with j > piv[i], j not a pivot column
        std::vector<std::pair<int, int>> free_pos;
        for (int i = 0; i < k; ++i)
            for (int j = piv[i] + 1; j < n; ++j) {
                bool is_piv = false;
                for (int t = 0; t < k; ++t)
                    if (piv[t] == j) { is_piv = true; break; }
                if (!is_piv) free_pos.emplace_back(i, j);
            }
        std::vector<code_t> vals(free_pos.size(), 0);
        while (true) {
            std::fill(rows.begin(), rows.end(), 0);
            for (int i = 0; i < k; ++i) rows[static_cast<size_t>(i) * n + piv[i]] = 1;
            for (size_t f = 0; f < free_pos.size(); ++f)
                rows[static_cast<size_t>(free_pos[f].first) * n + free_pos[f].second] = vals[f];
            fn(rows.data());
            size_t f = vals.size();
            while (f > 0 && vals[f - 1] == static_cast<code_t>(q - 1)) vals[--f] = 0;
            if (f == 0) break;
            ++vals[f - 1];
        }
        int i = k - 1;
        while (i >= 0 && piv[i] == n - k + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
}

}  // namespace polargrass
