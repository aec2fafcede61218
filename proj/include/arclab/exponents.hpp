#pragma once

#include <string>

namespace arclab {

/// r_d = 1 + 3 + ... + (d-1) for even d, 2 + 4 + ... + (d-1) for odd d.
int staircase_exponent(int d);

struct ExponentCheck {
    bool ok = false;
    std::string reason;
};

/// The free-index count argument: M quasi-free indices plus the free count
/// equals d, and at least floor(k/2) + 1 indices are free, so
/// M + floor(k/2) <= d - 1.
ExponentCheck check_band_count_bound(int d, int k, int m_quasi_free);

/// Validates an (r1, r2, s1, s2) quadruple:
///   r1 + r2 = d(d-1)/2,  s1 + s2 = d,  s2/q_d' - r2/q_d - 1 > 0.
ExponentCheck validate_mlf_quadruple(int d, double r1, double r2, double s1, double s2);

struct ExponentRecord {
    int d = 0;
    int r_d = 0;
    bool r_d_at_least_d_minus_1 = false;
    int k = 0;
    int m_quasi_free = 0;
    bool band_count_ok = false;
};

/// r_d bookkeeping plus the band-count bound in one record.
ExponentRecord exponent_bookkeeping(int d, int k, int m_quasi_free);

}  // namespace arclab
