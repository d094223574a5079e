#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "polargrass/forms.hpp"

namespace polargrass {

struct Budget {
    long max_scan = 5'000'000;          // projective points scanned per enumeration
    long max_grass_points = 200'000;    // points of any one Grassmannian / S_k table
    bool perp_cache = true;             // auto-skipped above perp_cache_limit points
    long perp_cache_limit = 20'000;

    static Budget large() {
        Budget b;
        b.max_scan = 1'000'000'000;
        b.max_grass_points = 100'000'000;
        return b;
    }
};

/// Bitset over dense point or line IDs.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(size_t n) : n_(n), w_((n + 63) / 64, 0) {}
    void set(size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
    void reset(size_t i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    size_t size() const { return n_; }
    size_t count() const;
    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }

private:
    size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Sorted table of the totally singular k-subspaces of a model, keyed by the
/// packed canonical RREF matrix; IDs are positions in key order.
struct SubspaceTable {
    const Field* F = nullptr;
    int k = 0, n = 0;
    std::vector<SubKey> keys;  // ascending

    long size() const { return static_cast<long>(keys.size()); }
    void rows_of(long id, code_t* out) const { unpack_key(*F, keys[id], out, k, n); }
    Subspace get(long id) const;
    long find(const SubKey& key) const;  // -1 when absent
    long find(const Subspace& s) const { return find(s.key()); }
};

/// A hyperplane of the polar space, realized as the section by a linear
/// hyperplane ker(phi) of PG(V). Singular kind: the section is x^perp for a
/// (deep) singular point x. Nondegenerate kind: the induced polar space is
/// non-degenerate, with its rank and defect reported.
struct Hyperplane {
    enum class Kind { singular, nondegenerate };
    Kind kind = Kind::singular;
    Vec covector;
    long deep_point = -1;                        // singular kind
    int induced_rank = -1, induced_defect = -1;  // nondegenerate kind
    Bitset members;                              // over point IDs
    bool contains(long pid) const { return members.test(pid); }
};

class PolarModel;

/// The polar space induced on a proper subspace W of the ambient space
/// (used for nice subspaces and hyperplane sections).
struct SubModel {
    std::shared_ptr<PolarModel> model;  // on V(dim W, F)
    std::vector<code_t> embed;          // c x N: sub coordinates -> ambient
    int c = 0, N = 0;

    Vec to_ambient(const Vec& sub) const;
    Subspace lift(const Subspace& sub) const;
    Subspace project(const Subspace& ambient) const;  // requires ambient within span
};

/// The upper residue of a totally singular subspace X, realized as the polar
/// space on X^perp / X.
struct Residue {
    std::shared_ptr<PolarModel> model;  // rank n - k
    Subspace base;                      // X
    std::vector<code_t> comp;           // c x N complement of X inside X^perp
    int c = 0, N = 0;

    /// <X, rows * comp> as an ambient subspace.
    Subspace lift(const Subspace& sub) const;
    /// Quotient image of an ambient Y with X subset Y subset X^perp.
    Subspace project(const Subspace& ambient) const;
};

/// The polar space P(f): singular points with dense IDs, collinearity, S_k
/// tables, hyperplanes, residues and frames. Immutable after construction.
class PolarModel {
public:
    explicit PolarModel(FormSpec form, Budget budget = {});

    const FormSpec& form() const { return form_; }
    const Field& field() const { return form_.field(); }
    const WittData& witt() const { return witt_; }
    int dim() const { return form_.dim(); }
    int rank() const { return witt_.witt_index(); }
    int defect() const { return witt_.defect(); }
    const Budget& budget() const { return budget_; }
    std::string descriptor() const { return form_.descriptor(); }

    long num_points() const { return static_cast<long>(points_.size()) / dim(); }
    const code_t* point(long id) const { return &points_[static_cast<size_t>(id) * dim()]; }
    Vec point_vec(long id) const;
    long point_id(const Vec& normalized) const;  // -1 when absent

    bool collinear(long a, long b) const;
    /// Points collinear with every point of S (the perp of S), including S.
    Bitset perp(const Subspace& s) const;
    Bitset perp(long pid) const;

    /// Totally singular k-subspaces, built on first use: S_1 are the points.
    const SubspaceTable& sk(int k) const;
    /// Installs a precomputed (cached) table; keys must be sorted.
    void adopt_sk(int k, std::vector<SubKey> keys) const;
    bool has_sk(int k) const { return sk_.count(k) > 0; }

    Hyperplane hyperplane_singular(long deep_point) const;
    /// Pole section p^perp for a non-singular projective point p.
    Hyperplane hyperplane_pole(const Vec& pole) const;
    /// Section by the kernel of an arbitrary nonzero covector, classified.
    Hyperplane hyperplane_section(const Vec& covector) const;

    /// IDs of [u_1],...,[u_n],[v_1],...,[v_n] from the Witt decomposition.
    std::vector<long> frame_points() const;

    Residue upper_residue(const Subspace& x) const;
    SubModel induced(const Subspace& w) const;

    /// Hyperbolic line {a, b}^perp-perp for non-collinear points a, b.
    std::vector<long> hyperbolic_line(long a, long b) const;

private:
    void build_sk(int k) const;

    FormSpec form_;
    WittData witt_;
    Budget budget_;
    std::vector<code_t> points_;  // num x N, lexicographic order
    bool perp_cached_ = false;
    std::vector<std::uint64_t> perp_bits_;  // num x ceil(num/64)
    size_t perp_stride_ = 0;
    mutable std::map<int, SubspaceTable> sk_;
};

}  // namespace polargrass
