#pragma once

#include <string>
#include <vector>

#include "polargrass/grassmann.hpp"

namespace polargrass {

/// A tagged generating set: element IDs into model->sk(k), with one
/// provenance tag per element.
struct GenSet {
    const PolarModel* model = nullptr;
    int k = 0;
    std::vector<long> elements;
    std::vector<std::string> tags;

    void add(long id, const std::string& tag);
    bool contains(long id) const;
    size_t size() const { return elements.size(); }
    const std::vector<long>& ids() const { return elements; }
};

/// The 2^n maximal singular subspaces spanned by the maximal cliques of a
/// frame (an apartment of the dual polar space).
GenSet apartment(const PolarModel& model);

/// S_2(H) u S_2(p0) u {l0}. Validates the hypotheses and names the failed
/// one: p0 not in H; l0 not within H or p0^perp; H cap l0 != p0^perp cap l0.
GenSet genset_k2(const PolarModel& m, const Hyperplane& h, long p0, long l0);

/// S_k(H) u S_k(p0) u hat-G, for 2 <= k < n. `inner` is a generating set of
/// the (k-2)-Grassmannian of H cap p0^perp given by ambient subspaces; for
/// k = 2 pass a single empty subspace. Each hat-Z is the least k-subspace
/// over Z meeting H cap p0^perp exactly in Z.
GenSet genset_k(const PolarModel& m, const Hyperplane& h, long p0, int k,
                const std::vector<Subspace>& inner);

/// S_k(q) u S_k({q,p0}^perp) u S_k(p0) u hat-G for the singular hyperplane
/// q^perp. Refused for k = n-1 (the inner geometry has no lines there).
GenSet genset_singular(const PolarModel& m, long q, long p0, int k,
                       const std::vector<Subspace>& inner);

/// Least line ID satisfying the genset_k2 hypotheses for (h, p0); optionally
/// restricted to F0-rational lines.
long least_valid_l0(const PolarModel& m, const Hyperplane& h, long p0,
                    bool require_rational = false, int sub_degree = 1);

/// 2n+d points generating the polar space: a frame plus one point per level
/// of the nice-subspace tower.
std::vector<Subspace> tower_point_genset(const PolarModel& m);

struct HermitianGensetReport {
    GenSet set;
    long target = 0;          // binomial(2n+d, k)
    long constructed = 0;     // size before any trimming
    bool trimmed = false;
    bool f4_flagged = false;  // |F| = 4 and k > 1: optimality claim withheld
};

/// The recursive generating-set construction for Hermitian k-Grassmannians,
/// k < n, of size binomial(2n+d, k).
HermitianGensetReport hermitian_genset(const PolarModel& m, int k);

struct OrthGensetReport {
    GenSet set;
    long target = 0;            // binomial(2n+d, 2)
    bool rational_claimed = false;
    bool all_rational = false;
};

/// The recursive generating-set construction for line-Grassmannians of
/// orthogonal polar spaces over F4, F8, F9 (n >= 3, d <= 2, d >= 1 if n = 3);
/// F0-rational whenever d <= 1.
OrthGensetReport orth_q2_genset(const PolarModel& m);

/// Deterministic search for a generating set of size `target` in a small
/// geometry: Pluecker-guided greedy seeding plus coverage completion and
/// greedy minimization. Returns the found set (possibly larger than target).
std::vector<long> small_generating_set(const Geometry& g, long target);

struct SubfieldContext {
    const PolarModel* model = nullptr;
    int sub_degree = 1;
    Bitset rational_points;       // over point IDs
    std::vector<long> rational_lines;  // ascending sk(2) IDs
    Bitset rational_line_mask;
};

SubfieldContext make_subfield_context(const PolarModel& m, int sub_degree);

/// Is any proper subfield K with F0 <= K < F fixing this element?
bool k_rational(const Field& F, int sub_degree, const Vec& v);

/// The adjoined line t = <p, p^perp cap l1> of Cor 5.4(a): p is the least
/// point of l0 such that neither p nor its partner is K-rational for any
/// proper intermediate subfield K. Returns the sk(2) ID of t.
long cor54_adjoin(const SubfieldContext& ctx, long l0, long l1);

/// True iff G (rational lines) generates the subfield Grassmannian AND the
/// two-opposite-lines witness exists in the closure of G.
bool gset_predicate(const SubfieldContext& ctx, const std::vector<long>& g);

struct OmegaReport {
    Bitset omega1, omega2, omega;  // over line IDs
    long witness_line = -1;
    bool witness_outside = false;
    bool omega_subspace = false;
    bool closure_matches = false;
    std::vector<int> witness_plane_rational_points;
    long omega_size = 0, total_lines = 0;
    bool all_verified() const {
        return witness_outside && omega_subspace && closure_matches;
    }
};

/// The obstruction of the hyperbolic non-generation theorem on Qplus(3,q):
/// Omega1 (lines meeting the rational subquadric), Omega2 (lines in rational
/// planes), the witness line, and the subspace/closure verifications.
/// Throws on verification failure.
OmegaReport omega_obstruction(const PolarModel& m, int sub_degree);

}  // namespace polargrass
