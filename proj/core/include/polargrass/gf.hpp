#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polargrass {

/// Error type for all user-facing failures (bad input, budget, verification).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

using code_t = std::uint16_t;

/// A small finite field GF(p^e), q = p^e <= 512, with full lookup tables.
///
/// Elements are integer codes in [0, q): the code is the base-p packing of
/// the polynomial coefficients, so the residue class of x has code p.
/// Instances are immutable and interned; use Field::get or Field::predefined
/// and keep `const Field&` references.
class Field {
public:
    /// Interned accessor. `modulus` has e+1 coefficients c0..ce over GF(p),
    /// monic (ce = 1). Empty modulus picks the pinned default for (p, e).
    static const Field& get(int p, int e, std::vector<int> modulus = {});

    /// Pinned desk-scale fields: F2, F3, F4 (x^2+x+1), F8 (x^3+x+1),
    /// F9 (x^2-x-1), and defaults for other prime powers <= 512.
    static const Field& predefined(int q);

    /// Parses "F<q>" or "GF(p,e,[c0,c1,...,1])".
    static const Field& from_descriptor(std::string_view desc);

    int characteristic() const { return p_; }
    int degree() const { return e_; }
    int order() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }
    std::string descriptor() const;
    std::uint64_t hash() const { return hash_; }

    code_t add(code_t a, code_t b) const { return add_[a * q_ + b]; }
    code_t sub(code_t a, code_t b) const { return add_[a * q_ + neg_[b]]; }
    code_t neg(code_t a) const { return neg_[a]; }
    code_t mul(code_t a, code_t b) const { return mul_[a * q_ + b]; }
    code_t inv(code_t a) const;
    code_t div(code_t a, code_t b) const { return mul(a, inv(b)); }
    code_t pow(code_t a, long n) const;

    code_t zero() const { return 0; }
    code_t one() const { return 1; }
    /// The residue class of x (the distinguished generator epsilon).
    code_t gen() const { return static_cast<code_t>(e_ > 1 ? p_ : (p_ > 2 ? 2 : 1)); }

    /// sigma: x -> x^{p^{e/2}}, the conjugation of the quadratic extension
    /// GF(p^e) / GF(p^{e/2}). Requires even e.
    bool has_conjugation() const { return e_ % 2 == 0; }
    code_t conj(code_t a) const;

    /// Subfield GF(p^s) for s | e, as the fixed points of x -> x^{p^s}.
    std::vector<code_t> subfield_elements(int sub_degree) const;
    bool in_subfield(code_t a, int sub_degree) const;

    /// Multiplicative order of a nonzero element.
    int mult_order(code_t a) const;

    /// Renders an element: prime-field digits, or epsilon powers
    /// ("0", "1", "e", "e^5", ...) when gen() generates the unit group.
    std::string show(code_t a) const;
    /// Parses "0", "1", "-1", "2", "e", "-e", "e^5", "e^-1", "-e^-1".
    code_t parse_element(std::string_view token) const;

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    Field(int p, int e, std::vector<int> modulus);

    int p_, e_, q_;
    std::vector<int> modulus_;
    std::uint64_t hash_;
    std::vector<code_t> add_, mul_;   // q*q tables
    std::vector<code_t> neg_, inv_;   // q tables; inv_[0] unused
    std::vector<code_t> frob_;        // x^{p^{e/2}} when e even, else empty
    std::vector<int> log_;            // discrete log base gen(), -1 if not cyclic gen
    bool gen_is_primitive_ = false;
};

bool is_prime(int n);

}  // namespace polargrass
