#include "qvar/mass/report.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qvar/error.hpp"
#include "qvar/format.hpp"

namespace qvar::mass {

namespace {

constexpr const char* kHeader =
    "k,form,mu,expected,s_direct,e_residual,diagonal,l_sym2,fourier_tail,quadrature_delta,psi";

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  require(used == s.size(), ErrorKind::io, "bad number in mass CSV: " + s);
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<MassReport>& rows) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << r.form_index << ',' << format_sci(r.mu) << ',' << format_sci(r.expected) << ','
        << format_sci(r.s_direct) << ',' << format_sci(r.e_residual) << ',' << format_sci(r.diagonal) << ','
        << format_sci(r.l_sym2) << ',' << format_sci(r.fourier_tail) << ',' << format_sci(r.quadrature_delta)
        << ',' << r.psi_id << '\n';
  }
}

std::vector<MassReport> read_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == kHeader, ErrorKind::io, "mass CSV header mismatch");
  std::vector<MassReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < 10 && std::getline(ss, cell, ','); ++i) cells.push_back(cell);
    std::getline(ss, cell);
    cells.push_back(cell);
    require(cells.size() == 11, ErrorKind::io, "mass CSV row has wrong arity");
    MassReport r;
    r.k = std::stoi(cells[0]);
    r.form_index = std::stoi(cells[1]);
    r.mu = to_double(cells[2]);
    r.expected = to_double(cells[3]);
    r.s_direct = to_double(cells[4]);
    r.e_residual = to_double(cells[5]);
    r.diagonal = to_double(cells[6]);
    r.l_sym2 = to_double(cells[7]);
    r.fourier_tail = to_double(cells[8]);
    r.quadrature_delta = to_double(cells[9]);
    r.psi_id = cells[10];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qvar::mass
