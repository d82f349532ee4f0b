#include "fieldent/precision.hpp"

#include "fieldent/errors.hpp"

#include <cstdio>
#include <sstream>

namespace fieldent {

void PrecisionContext::validate() const {
    if (working_bits < 53)
        throw DomainError("working precision must be at least 53 bits");
    if (!(target_rel_tol > 0.0 && target_rel_tol < 1.0))
        throw DomainError("target_rel_tol must lie in (0, 1)");
}

int PrecisionContext::output_digits() const {
    return static_cast<int>(std::ceil(working_bits * std::log10(2.0))) + 1;
}

unsigned PrecisionContext::mp_digits10() const {
    return static_cast<unsigned>(std::ceil(working_bits * std::log10(2.0)));
}

ScopedPrecision::ScopedPrecision(const PrecisionContext& ctx) : ScopedPrecision(ctx.mp_digits10()) {}

ScopedPrecision::ScopedPrecision(unsigned digits10) : saved_(mp_real::default_precision()) {
    mp_real::default_precision(digits10);
}

ScopedPrecision::~ScopedPrecision() { mp_real::default_precision(saved_); }

std::string format_real(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string format_real(const mp_real& x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

} // namespace fieldent
