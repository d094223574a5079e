#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polargrass/linalg.hpp"

namespace polargrass {

enum class FormKind { quadratic, hermitian };

/// A non-degenerate quadratic or sigma-Hermitian form on V(N, F).
///
/// Quadratic: upper-triangular coefficient matrix C, q(x) = sum_{i<=j} C[i][j] x_i x_j.
/// Hermitian: Gram matrix M with M[j][i] = sigma(M[i][j]), h(x,y) = sum x_i^sigma M[i][j] y_j.
/// Non-degeneracy (empty polar-space radical) is verified at construction.
class FormSpec {
public:
    static FormSpec quadratic(const Field& F, int N, std::vector<code_t> upper);
    static FormSpec hermitian(const Field& F, int N, std::vector<code_t> gram);

    /// Qplus(n,q) | Qparab(n,q) | Qminus(n,q) | H(n,d,q0).
    static FormSpec standard(const std::string& descriptor);

    FormKind kind() const { return kind_; }
    const Field& field() const { return *F_; }
    int dim() const { return n_; }
    const std::vector<code_t>& coeffs() const { return c_; }
    std::string descriptor() const { return descriptor_; }

    /// q(x), or h(x,x) for Hermitian.
    code_t eval(const code_t* x) const;
    code_t eval(const Vec& x) const;

    /// The pairing that defines collinearity: the bilinearization
    /// f(x,y) = q(x+y) - q(x) - q(y) for quadratic forms, h(x,y) for Hermitian.
    code_t pair(const code_t* x, const code_t* y) const;
    code_t pair(const Vec& x, const Vec& y) const;

    /// The bilinearization of a quadratic form; rejects Hermitian input.
    code_t bilinearize(const Vec& x, const Vec& y) const;

    bool is_singular_point(const code_t* x) const { return eval(x) == 0; }

    /// Coefficients of the linear functional pair(x, .) as a covector.
    Vec pair_functional(const Vec& x) const;

    /// Radical of the bilinearization (nonzero only for quadratic, char 2).
    Subspace radical() const;
    /// (d1, d2) sub-defects; (0, d) outside characteristic 2 quadratic.
    std::pair<int, int> subdefects() const;

    /// Form induced on the row space of `basis` (k rows), as a form in dim k.
    FormSpec restrict_to(const Subspace& basis) const;

private:
    FormSpec() = default;
    void check_nondegenerate() const;

    FormKind kind_ = FormKind::quadratic;
    const Field* F_ = nullptr;
    int n_ = 0;
    std::vector<code_t> c_;       // N*N: upper-tri coeffs or Gram
    std::vector<code_t> bilin_;   // N*N: C + C^T (quadratic only)
    std::string descriptor_;
};

/// Witt decomposition (hyperbolic pairs + anisotropic complement).
struct WittData {
    std::vector<std::pair<Vec, Vec>> pairs;  // (u_i, v_i), q(u)=q(v)=0, f(u,v)=1
    std::vector<Vec> v0_basis;               // anisotropic complement
    Subspace radical;                        // Rad(f) for char-2 quadratic, else rank 0
    int witt_index() const { return static_cast<int>(pairs.size()); }
    int defect() const { return static_cast<int>(v0_basis.size()); }
    int d1 = 0;  // parabolic sub-defect (dim of radical)
    int d2 = 0;  // elliptic sub-defect
};

/// Deterministic greedy decomposition; throws naming a radical vector if the
/// form is degenerate.
WittData witt_decompose(const FormSpec& f);

/// Splits the complement V0' of the radical in V0 into m mutually orthogonal
/// 2-dimensional subspaces (characteristic 2, quadratic, 2m <= d2).
std::vector<Subspace> split_anisotropic(const FormSpec& f, const WittData& w, int m);

}  // namespace polargrass
