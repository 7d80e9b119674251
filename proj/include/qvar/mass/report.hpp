#pragma once

#include <iosfwd>
#include <vector>

#include "qvar/mass/mass.hpp"

namespace qvar::mass {

/// Columns: k, form, mu, expected, s_direct, e_residual, diagonal, l_sym2,
/// fourier_tail, quadrature_delta, psi. Numbers use round-trip precision.
void write_csv(std::ostream& out, const std::vector<MassReport>& rows);
std::vector<MassReport> read_csv(std::istream& in);

}  // namespace qvar::mass
