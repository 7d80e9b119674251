#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qvar/error.hpp"
#include "qvar/forms/eigenform.hpp"
#include "qvar/mass/mass.hpp"
#include "qvar/mass/report.hpp"
#include "qvar/testfn/bump.hpp"
#include "qvar/testfn/transforms.hpp"
#include "support.hpp"

using namespace qvar;
using namespace qvar::mass;
using testfn::Bump;
using testfn::BumpKind;

namespace {

const Bump kPsi = Bump::canonical(2.0, BumpKind::psi_symmetric);

}  // namespace

TEST_SUITE("mass") {

TEST_CASE("expected mass") {
  CHECK(std::abs(expected(kPsi) - 3.0 / M_PI * testfn::mellin(kPsi, 0.0).real()) < 1e-12);
  CHECK(std::abs(expected(kPsi.scaled(-2.5)) + 2.5 * expected(kPsi)) < 1e-14);
  CHECK(std::abs(expected(Bump::mean_zero(2.0, 3.0))) < 1e-13);
}

TEST_CASE("mass of the discriminant") {
  const auto& f = test::weight_data(12).forms[0];
  const double m = mu(f, kPsi);
  CHECK(std::abs(m - mu_tanh_sinh(f, kPsi)) < 1e-8 * std::abs(m));
  CHECK(m > 0.0);
  CHECK(std::abs(mu(f, kPsi.scaled(2.0)) - 2.0 * m) < 1e-12 * std::abs(m));
}

TEST_CASE("quadrature routes agree across weights") {
  for (int k : {24, 48, 96})
    for (const auto& f : test::weight_data(k).forms) {
      const double m = mu(f, kPsi);
      CHECK_MESSAGE(std::abs(m - mu_tanh_sinh(f, kPsi)) < 1e-8 * std::abs(m), "k=" << k);
    }
}

TEST_CASE("pair decomposition") {
  for (int k : {12, 36, 60})
    for (const auto& f : test::weight_data(k).forms) {
      const MuResult m = mu_detail(f, kPsi);
      const PairSplit split = pair_split(f, kPsi, m);
      CHECK(std::abs(split.off_diagonal + split.diagonal - m.value) < 1e-9 * std::abs(m.value));
      CHECK(std::abs(split.off_diagonal) <= split.abs_off_diagonal);
      const MassReport r = mass_report(f, kPsi);
      CHECK(std::abs(r.s_direct + r.e_residual + r.expected - r.mu) < 1e-12 * std::abs(r.mu));
    }
}

TEST_CASE("eigen-data truncation does not move the mass") {
  const auto longer = forms::eigenforms(24, 4000);
  const auto& shorter = test::weight_data(24);
  for (std::size_t i = 0; i < longer.forms.size(); ++i) {
    const double a = mu(longer.forms[i], kPsi), b = mu(shorter.forms[i], kPsi);
    CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
  }
}

TEST_CASE("fourier truncation") {
  const FourierCut cut = fourier_truncation(60, kPsi);
  CHECK(cut.n > 0);
  CHECK(cut.relative_tail < 1e-12);
  CHECK(fourier_truncation(60, kPsi, 1e-6).n <= cut.n);
}

TEST_CASE("shifted-convolution approximation") {
  for (int k = 12; k <= 60; k += 4)
    for (const auto& f : test::weight_data(k).forms) {
      const ShiftedApprox a = s_psi_approx_detail(f, kPsi);
      CHECK(std::abs(a.positive_shifts - a.negative_shifts) <= 1e-12 * std::max(1.0, std::abs(a.positive_shifts)));
      CHECK(a.tail_bound < 1e-10);
    }
  // psi(k / (2 pi (2n + l))) vanishes for every admissible n, l
  const auto& f = test::weight_data(12).forms[0];
  CHECK(s_psi_approx(f, Bump::window(5.0, 10.0)) == 0.0);
}

TEST_CASE("shifted-convolution residual bound") {
  for (int k = 12; k <= 60; k += 4)
    for (const auto& f : test::weight_data(k).forms) {
      const double r = std::abs(s_psi_direct(f, kPsi) - s_psi_approx(f, kPsi));
      CHECK_MESSAGE(r <= 10.0 * std::pow(k, -0.45), "k=" << k << " residual " << r);
    }
}

TEST_CASE("missing L-value is reported") {
  forms::Eigenform f = test::weight_data(12).forms[0];
  f.l_sym2 = 0.0;
  f.a1_sq = 0.0;
  CHECK_THROWS_AS(mu(f, kPsi), Error);
  CHECK_THROWS_AS(s_psi_approx(f, kPsi), Error);
}

TEST_CASE("report csv round trip") {
  std::vector<MassReport> rows;
  for (int k : {12, 24})
    for (const auto& f : test::weight_data(k).forms) rows.push_back(mass_report(f, kPsi));
  std::stringstream io;
  write_csv(io, rows);
  const auto back = read_csv(io);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].k == rows[i].k);
    CHECK(back[i].form_index == rows[i].form_index);
    CHECK(back[i].mu == rows[i].mu);
    CHECK(back[i].expected == rows[i].expected);
    CHECK(back[i].s_direct == rows[i].s_direct);
    CHECK(back[i].e_residual == rows[i].e_residual);
    CHECK(back[i].l_sym2 == rows[i].l_sym2);
    CHECK(back[i].psi_id == rows[i].psi_id);
  }
}

}
