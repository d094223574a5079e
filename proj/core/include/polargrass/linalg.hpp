#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "polargrass/gf.hpp"

namespace polargrass {

using Vec = std::vector<code_t>;

/// In-place Gauss-Jordan to reduced row echelon form (pivots 1, zeros above
/// and below, pivot columns strictly increasing). Rows are compacted to the
/// front of the buffer; returns the rank.
int rref_inplace(const Field& F, code_t* rows, int k, int n);

/// Reduces v against an RREF matrix in place (v -= combination of rows).
void reduce_against(const Field& F, const code_t* rows, int k, int n, code_t* v);

/// Packed canonical key of an RREF matrix; total payload must fit 184 bits.
/// Packing is big-endian, so comparing keys as uint64 triples (word 0 first)
/// agrees with lexicographic comparison of the row-major code sequence.
using SubKey = std::array<std::uint64_t, 3>;
int key_bits_per_code(const Field& F);
SubKey pack_key(const Field& F, const code_t* rows, int k, int n);
void unpack_key(const Field& F, const SubKey& key, code_t* rows, int k, int n);

struct SubKeyHash {
    std::size_t operator()(const SubKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto v : k) { h ^= v; h *= 1099511628211ull; }
        return static_cast<std::size_t>(h);
    }
};

/// A subspace of V(n, F) held as its canonical RREF basis. Two subspaces are
/// equal iff their canonical matrices are identical.
class Subspace {
public:
    Subspace() = default;
    Subspace(const Field& F, int ambient) : F_(&F), n_(ambient) {}

    /// Canonicalizes the given spanning rows; dependent rows are dropped.
    /// An all-zero input yields the rank-0 subspace (the empty subspace).
    static Subspace span(const Field& F, int ambient, std::span<const Vec> rows);
    static Subspace span_raw(const Field& F, int ambient, const code_t* rows, int k);
    static Subspace point(const Field& F, const Vec& v);

    const Field& field() const { return *F_; }
    int ambient() const { return n_; }
    int rank() const { return rank_; }
    bool empty() const { return rank_ == 0; }
    const std::vector<code_t>& rows() const { return rows_; }
    code_t at(int i, int j) const { return rows_[static_cast<size_t>(i) * n_ + j]; }
    Vec row(int i) const { return Vec(rows_.begin() + static_cast<size_t>(i) * n_,
                                      rows_.begin() + static_cast<size_t>(i + 1) * n_); }
    /// The lexicographically least normalized vector of the subspace.
    Vec min_point() const { return row(rank_ - 1); }

    bool contains(const Vec& v) const;
    bool contains(const Subspace& other) const;
    SubKey key() const { return pack_key(*F_, rows_.data(), rank_, n_); }

    bool operator==(const Subspace& o) const {
        return n_ == o.n_ && rank_ == o.rank_ && rows_ == o.rows_;
    }
    bool operator<(const Subspace& o) const { return rows_ < o.rows_; }

    /// All entries of the canonical basis lie in GF(p^sub_degree).
    bool is_rational(int sub_degree) const;

    std::string str() const;

private:
    const Field* F_ = nullptr;
    int n_ = 0;
    int rank_ = 0;
    std::vector<code_t> rows_;  // rank_ x n_, RREF
};

Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);

int matrix_rank(const Field& F, std::span<const Vec> rows);

/// Normalizes a projective representative: first nonzero coordinate 1.
Vec normalize_point(const Field& F, Vec v);

/// Lexicographic k-subsets of {0..n-1}; the Pluecker column order.
std::vector<std::array<int, 4>> column_subsets(int n, int k);

/// Pluecker coordinates: the k x k minors of the canonical basis in
/// lexicographic column order. Length C(n, k). Rejects rank-0 input.
Vec plucker_coords(const Subspace& s);

long binomial(int n, int k);

/// Basis of the right null space { x : A x^T = 0 } of a k x n matrix.
std::vector<Vec> kernel_basis(const Field& F, const code_t* rows, int k, int n);

/// Solves x * M = t for a m x n matrix M of full row rank; nullopt when t is
/// not in the row space.
std::optional<Vec> solve_coords(const Field& F, const code_t* m_rows, int m, int n, const Vec& t);

/// Visits every RREF matrix of rank k with n columns (all k-subspaces of
/// F^n). fn(const code_t* rows) receives a k x n row-major buffer.
void for_each_rref(const Field& F, int k, int n, const std::function<void(const code_t*)>& fn);

/// Number of points of PG(m-1, q).
long projective_point_count(int q, int m);

/// Visits the normalized representatives (first nonzero coordinate 1) of all
/// points of PG(m-1, F) in lexicographic order of the coordinate tuple.
/// fn(const code_t* v) is called with a buffer of length m.
template <typename Fn>
void for_each_projective_point(const Field& F, int m, Fn&& fn) {
    std::vector<code_t> v(m, 0);
    int q = F.order();
    for (int pivot = m - 1; pivot >= 0; --pivot) {
        std::fill(v.begin(), v.end(), 0);
        v[pivot] = 1;
        while (true) {
            fn(static_cast<const code_t*>(v.data()));
            int j = m - 1;
            while (j > pivot && v[j] == static_cast<code_t>(q - 1)) { v[j] = 0; --j; }
            if (j == pivot) break;
            ++v[j];
        }
    }
}

}  // namespace polargrass
