#include <cmath>

#include "qvar/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define QVAR_HAVE_AVX2 1
#else
#define QVAR_HAVE_AVX2 0
#endif

namespace qvar::simd::avx2 {

#if QVAR_HAVE_AVX2

namespace {

// exp on |x| <= 708 with Cody-Waite reduction by ln 2 and a degree-13
// Taylor polynomial on |r| <= ln2/2. Inputs below -708 flush to zero.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634074)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.90821492927058770002e-10), r);

  static constexpr double c[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,      1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,         0.5,
      1.0,                1.0};
  __m256d p = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));

  const __m128i ni = _mm256_cvtpd_epi32(n);
  __m256i e = _mm256_cvtepi32_epi64(ni);
  e = _mm256_add_epi64(e, _mm256_set1_epi64x(1023));
  e = _mm256_slli_epi64(e, 52);
  const __m256d scale = _mm256_castsi256_pd(e);
  return _mm256_andnot_pd(under, _mm256_mul_pd(p, scale));
}

// sin and cos for |x| <= 1e5: three-part pi/2 reduction, fdlibm kernels.
inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(0.63661977236758134308)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(1.57079632673412561417e+00), x);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(6.07710050650619224932e-11), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(2.02226624879595063154e-21), r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(1.58969099521155010221e-10);
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507602534068634195e-08));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573137070700676789e-06));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698298579493134e-04));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332248946124e-03));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666324348e-01));
  const __m256d sn = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

  __m256d pc = _mm256_set1_pd(-1.13596475577881948265e-11);
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757232129817482790e-09));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573143513906633035e-07));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872894767294178e-05));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888741095749e-03));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666666019037e-02));
  const __m256d hz = _mm256_mul_pd(z, _mm256_set1_pd(0.5));
  const __m256d w = _mm256_sub_pd(_mm256_set1_pd(1.0), hz);
  const __m256d cs = _mm256_add_pd(
      w, _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                         _mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), w), hz)));

  const __m256i qi = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(q));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, one), one));
  const __m256d sin_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, two), two));
  const __m256d cos_neg = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(qi, one), two), two));
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d sv = _mm256_blendv_pd(sn, cs, swap);
  __m256d cv = _mm256_blendv_pd(cs, sn, swap);
  s_out = _mm256_xor_pd(sv, _mm256_and_pd(sin_neg, sign));
  c_out = _mm256_xor_pd(cv, _mm256_and_pd(cos_neg, sign));
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

constexpr double kTrigRange = 1.0e5;

}  // namespace

bool compiled() noexcept { return true; }

TrigSums damped_trig_sums(std::span<const double> amp, std::span<const double> x, double sigma,
                          double omega) {
  const std::size_t n = amp.size();
  __m256d acc_c = _mm256_setzero_pd();
  __m256d acc_s = _mm256_setzero_pd();
  const __m256d vs = _mm256_set1_pd(sigma);
  const __m256d vw = _mm256_set1_pd(omega);
  const __m256d range = _mm256_set1_pd(kTrigRange);
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  double tail_c = 0.0, tail_s = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + j);
    __m256d a = _mm256_loadu_pd(amp.data() + j);
    if (sigma != 0.0) a = _mm256_mul_pd(a, exp_pd(_mm256_mul_pd(vs, xv)));
    const __m256d arg = _mm256_mul_pd(vw, xv);
    if (_mm256_movemask_pd(_mm256_cmp_pd(_mm256_and_pd(arg, absmask), range, _CMP_GT_OQ))) {
      for (std::size_t i = j; i < j + 4; ++i) {
        const double ai = sigma == 0.0 ? amp[i] : amp[i] * std::exp(sigma * x[i]);
        tail_c += ai * std::cos(omega * x[i]);
        tail_s += ai * std::sin(omega * x[i]);
      }
      continue;
    }
    __m256d s, c;
    sincos_pd(arg, s, c);
    acc_c = _mm256_fmadd_pd(a, c, acc_c);
    acc_s = _mm256_fmadd_pd(a, s, acc_s);
  }
  if (j < n) {
    alignas(32) double xa[4] = {0, 0, 0, 0};
    alignas(32) double aa[4] = {0, 0, 0, 0};
    for (std::size_t i = j; i < n; ++i) {
      xa[i - j] = x[i];
      aa[i - j] = amp[i];
    }
    const __m256d xv = _mm256_load_pd(xa);
    __m256d a = _mm256_load_pd(aa);
    if (sigma != 0.0) a = _mm256_mul_pd(a, exp_pd(_mm256_mul_pd(vs, xv)));
    const __m256d arg = _mm256_mul_pd(vw, xv);
    if (_mm256_movemask_pd(_mm256_cmp_pd(_mm256_and_pd(arg, absmask), range, _CMP_GT_OQ))) {
      for (std::size_t i = j; i < n; ++i) {
        const double ai = sigma == 0.0 ? amp[i] : amp[i] * std::exp(sigma * x[i]);
        tail_c += ai * std::cos(omega * x[i]);
        tail_s += ai * std::sin(omega * x[i]);
      }
    } else {
      __m256d s, c;
      sincos_pd(arg, s, c);
      acc_c = _mm256_fmadd_pd(a, c, acc_c);
      acc_s = _mm256_fmadd_pd(a, s, acc_s);
    }
  }
  return {hsum(acc_c) + tail_c, hsum(acc_s) + tail_s};
}

double exp_dot(std::span<const double> amp, std::span<const double> expo) {
  const std::size_t n = amp.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d e = exp_pd(_mm256_loadu_pd(expo.data() + j));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(amp.data() + j), e, acc);
  }
  if (j < n) {
    alignas(32) double ea[4] = {-1000, -1000, -1000, -1000};
    alignas(32) double aa[4] = {0, 0, 0, 0};
    for (std::size_t i = j; i < n; ++i) {
      ea[i - j] = expo[i];
      aa[i - j] = amp[i];
    }
    acc = _mm256_fmadd_pd(_mm256_load_pd(aa), exp_pd(_mm256_load_pd(ea)), acc);
  }
  return hsum(acc);
}

void exp_into(std::span<const double> expo, std::span<double> out) {
  const std::size_t n = expo.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) _mm256_storeu_pd(out.data() + j, exp_pd(_mm256_loadu_pd(expo.data() + j)));
  if (j < n) {
    alignas(32) double ea[4] = {0, 0, 0, 0};
    alignas(32) double oa[4];
    for (std::size_t i = j; i < n; ++i) ea[i - j] = expo[i];
    _mm256_store_pd(oa, exp_pd(_mm256_load_pd(ea)));
    for (std::size_t i = j; i < n; ++i) out[i] = oa[i - j];
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + j), _mm256_loadu_pd(b.data() + j), acc);
  double tail = 0.0;
  for (; j < n; ++j) tail += a[j] * b[j];
  return hsum(acc) + tail;
}

#else

bool compiled() noexcept { return false; }
TrigSums damped_trig_sums(std::span<const double> amp, std::span<const double> x, double sigma,
                          double omega) {
  return scalar::damped_trig_sums(amp, x, sigma, omega);
}
double exp_dot(std::span<const double> amp, std::span<const double> expo) {
  return scalar::exp_dot(amp, expo);
}
void exp_into(std::span<const double> expo, std::span<double> out) { scalar::exp_into(expo, out); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }

#endif

}  // namespace qvar::simd::avx2
