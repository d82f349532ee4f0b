#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

namespace fieldent {

using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

struct PrecisionContext {
    unsigned working_bits = 128;
    double target_rel_tol = 1e-20;

    // Gram-Schmidt and covariance assembly.
    static PrecisionContext high() { return {128, 1e-20}; }
    // Harvesting sweeps and double-precision oracles.
    static PrecisionContext standard() { return {53, 1e-10}; }

    void validate() const;
    // Decimal digits needed to print a value of this precision losslessly.
    int output_digits() const;
    // Decimal digits carried by mp_real at this precision.
    unsigned mp_digits10() const;
};

// Sets the thread-local default precision of mp_real for the lifetime of
// the object. Every worker thread must install its own.
class ScopedPrecision {
public:
    explicit ScopedPrecision(const PrecisionContext& ctx);
    explicit ScopedPrecision(unsigned digits10);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

template <class T>
inline constexpr bool is_mp_v = std::is_same_v<T, mp_real>;

// Machine epsilon of the type at the current precision.
template <class T>
T epsilon_of() {
    if constexpr (is_mp_v<T>)
        return std::numeric_limits<mp_real>::epsilon();
    else
        return std::numeric_limits<T>::epsilon();
}

template <class T>
T pi_of() {
    return boost::math::constants::pi<T>();
}

inline double to_double(double x) { return x; }
inline double to_double(const mp_real& x) { return x.convert_to<double>(); }

std::string format_real(double x, int digits);
std::string format_real(const mp_real& x, int digits);

} // namespace fieldent

namespace Eigen {
template <>
struct NumTraits<fieldent::mp_real> : GenericNumTraits<fieldent::mp_real> {
    using Real = fieldent::mp_real;
    using NonInteger = fieldent::mp_real;
    using Literal = fieldent::mp_real;
    using Nested = fieldent::mp_real;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 4,
        MulCost = 8
    };
    static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
    static Real dummy_precision() { return 1000 * epsilon(); }
    static Real highest() { return (std::numeric_limits<Real>::max)(); }
    static Real lowest() { return (std::numeric_limits<Real>::lowest)(); }
    static Real infinity() { return std::numeric_limits<Real>::infinity(); }
    static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
    static int digits10() { return static_cast<int>(Real::default_precision()); }
};
} // namespace Eigen
