#pragma once

#include "fieldent/precision.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace fieldent {

using rational = boost::multiprecision::cpp_rational;

// H(ρ) = ρ ∫ F(x) F(x + ρ ê) d³x for the unit-radius profile with integer
// exponent δ. On [0, 2] this is a polynomial with rational coefficients;
// it is extended to negative ρ as an odd function and vanishes for
// |ρ| ≥ 2. H, H' and H'' are the field-field, field-momentum and
// momentum-momentum commutator functions of two instantaneous modes
// separated by ρ in time, and the kernel of every vacuum correlation.
class AutocorrelationPolynomial {
public:
    explicit AutocorrelationPolynomial(int delta);

    int delta() const { return delta_; }

    // Coefficients in ascending powers of ρ.
    const std::vector<rational>& coefficients() const { return rho_coeffs_; }
    // Coefficients in ascending powers of y = 2 − ρ.
    const std::vector<rational>& coefficients_at_two() const { return y_coeffs_; }

    // k-th derivative (k = 0, 1, 2) of the odd extension, unit radius.
    // The expansion about ρ = 2 is used for |ρ| ≥ 1 so the high-order zero
    // at the support edge is resolved without cancellation.
    template <class T>
    T evaluate(const T& rho, int k) const;

private:
    template <class T>
    struct Table {
        std::vector<T> rho[3]; // derivative k in powers of ρ
        std::vector<T> y[3];   // derivative k (in y) in powers of y
    };
    template <class T>
    Table<T> build_table() const;
    const Table<mp_real>& mp_table() const;

    int delta_;
    std::vector<rational> rho_coeffs_;
    std::vector<rational> y_coeffs_;
    Table<double> double_table_;
    mutable std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
    mutable std::shared_ptr<std::map<unsigned, Table<mp_real>>> mp_tables_ =
        std::make_shared<std::map<unsigned, Table<mp_real>>>();
};

// Exact rational coefficient list of H for integer δ, ascending in ρ.
std::vector<rational> autocorrelation_coefficients(int delta);

// Re-expand a polynomial about ρ = 2 (ascending powers of 2 − ρ).
std::vector<rational> reexpand_at_two(const std::vector<rational>& c);

} // namespace fieldent
