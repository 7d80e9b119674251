#pragma once

// Minimal RAII handle over mpfr_t with explicit precision. Only the
// operations needed by eigenvector extraction are exposed.

#include <gmpxx.h>
#include <mpfr.h>

namespace qvar::forms::detail {

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  MpReal(mpfr_prec_t prec, double x) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  MpReal(mpfr_prec_t prec, const mpz_class& z) { mpfr_init2(v_, prec); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  MpReal(mpfr_prec_t prec, const mpq_class& q) { mpfr_init2(v_, prec); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  MpReal(const MpReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  MpReal& operator+=(const MpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator-=(const MpReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator*=(const MpReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator/=(const MpReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend MpReal operator+(MpReal a, const MpReal& b) { return a += b; }
  friend MpReal operator-(MpReal a, const MpReal& b) { return a -= b; }
  friend MpReal operator*(MpReal a, const MpReal& b) { return a *= b; }
  friend MpReal operator/(MpReal a, const MpReal& b) { return a /= b; }

  MpReal abs() const { MpReal r(*this); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
  int cmpabs(const MpReal& o) const { return mpfr_cmpabs(v_, o.v_); }

 private:
  mpfr_t v_;
};

}  // namespace qvar::forms::detail
