#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polargrass/polar.hpp"

namespace polargrass {

/// An immutable point-line geometry with dense IDs and CSR incidence both
/// ways. Points are the totally singular k-subspaces of a model; lines are
/// pencils (k < n) or stars of (n-1)-subspaces (k = n, the dual polar space).
struct Geometry {
    const PolarModel* model = nullptr;
    int k = 0;
    long num_points = 0;
    std::vector<std::uint32_t> line_start;  // lines + 1
    std::vector<std::uint32_t> line_pts;
    std::vector<std::uint32_t> pt_start;    // points + 1
    std::vector<std::uint32_t> pt_lines;
    bool all_lines_thin = false;
    std::string descriptor;

    long num_lines() const { return static_cast<long>(line_start.size()) - 1; }
    std::span<const std::uint32_t> line(long l) const {
        return {line_pts.data() + line_start[l], line_pts.data() + line_start[l + 1]};
    }
    std::span<const std::uint32_t> lines_through(long p) const {
        return {pt_lines.data() + pt_start[p], pt_lines.data() + pt_start[p + 1]};
    }
    Subspace point_subspace(long p) const { return model->sk(k).get(p); }
};

/// Builds P_k with explicit incidence. k = 1 reproduces the polar space.
Geometry build_grassmannian(const PolarModel& model, int k);

struct ClosureResult {
    Bitset closed;
    bool generated_all = false;
    long seed_size = 0;
    long processed = 0;  // worklist pops
    long closed_count = 0;
    /// When traced: the line that first forced each point (-1 for seed
    /// points and unreached points). Empty unless requested.
    std::vector<std::int32_t> trace;
};

ClosureResult span_closure(const Geometry& g, const std::vector<long>& seed);
/// Same fixpoint, recording the forcing line per point.
ClosureResult span_closure_traced(const Geometry& g, const std::vector<long>& seed);
/// Partitioned-frontier variant with atomic counters; the fixpoint is
/// schedule-independent, so the result equals the sequential one.
ClosureResult span_closure_parallel(const Geometry& g, const std::vector<long>& seed, int threads = 2);

bool is_generating(const Geometry& g, const std::vector<long>& seed);

/// Removes elements in descending ID order while the rest still generates.
/// The result generates and no single further removal does.
std::vector<long> greedy_minimize(const Geometry& g, const std::vector<long>& seed);

/// True when no single-element removal keeps the seed generating.
bool is_irredundant(const Geometry& g, const std::vector<long>& seed);

struct PluckerCertificate {
    long rank = 0;
    bool line_check_passed = false;  // sampled collinearity preservation
    long lines_checked = 0;
};

/// Exact rank over F of the Pluecker images of all points of P_k (k < n).
/// Valid as a gr lower bound only when line_check_passed.
PluckerCertificate plucker_rank_table(const PolarModel& model, int k);
PluckerCertificate plucker_rank(const Geometry& g);

/// Rank of the natural (point-coordinate) embedding of P_1.
long natural_rank(const PolarModel& model);

/// Memory-lean closure engine for the line Grassmannian P_2: lines of P_2
/// are the pencils (point of Z, plane Z) and are never materialized as CSR.
/// Point IDs agree with build_grassmannian(model, 2).
class PencilClosure {
public:
    explicit PencilClosure(const PolarModel& model);

    long num_points() const;                 // |S_2|
    long num_pencils() const { return static_cast<long>(plane_pts_.size()); }
    ClosureResult closure(const std::vector<long>& seed) const;

private:
    long find_line(const SubKey& key) const;

    const PolarModel* model_;
    int N_;
    int ppp_;                                 // points per plane
    std::vector<std::uint32_t> plane_pts_;    // |S_3| x ppp, point IDs ascending
    std::vector<std::uint32_t> yz_start_;     // line -> planes CSR
    std::vector<std::uint32_t> yz_;
    std::vector<std::uint64_t> hash_fp_;      // open addressing: key fingerprint
    std::vector<std::uint32_t> hash_id_;
    std::uint64_t hash_mask_ = 0;
};

struct RankCertificate {
    long upper = -1;
    std::string upper_method;
    bool closure_verified = false;
    long lower = -1;
    std::string lower_method;  // "plucker" | "natural" | "cited" | "none"
    bool pinned() const { return upper >= 0 && upper == lower; }
};

}  // namespace polargrass
