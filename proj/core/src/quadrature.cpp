#include "probcon/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "probcon/errors.hpp"

namespace probcon {

namespace {

// 15-point Kronrod nodes and weights on [-1,1] (positive half), with the
// embedded 7-point Gauss weights. QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double lo, hi;
  double value;
  double error;
};

Segment gauss_kronrod_15(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  auto eval = [&](double x) {
    double v = f(x);
    if (!std::isfinite(v)) {
      throw IntegrationError("adaptive_quadrature: non-finite integrand value", x);
    }
    return v;
  };

  double fc = eval(center);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  double resabs = kWgk[7] * std::abs(fc);

  double fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    double dx = half * kXgk[j];
    double f1 = eval(center - dx);
    double f2 = eval(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    result_kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) { // odd Kronrod indices are the Gauss nodes
      result_gauss += kWg[j / 2] * (f1 + f2);
    }
  }

  double mean = 0.5 * result_kronrod;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  }

  double value = result_kronrod * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);

  double err = std::abs((result_kronrod - result_gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min();
  if (resabs > tiny / (50.0 * eps)) {
    err = std::max(err, 50.0 * eps * resabs);
  }
  return Segment{lo, hi, value, err};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0)) throw std::domain_error("QuadratureConfig: abs_tol must be > 0");
  if (max_subdivisions < 1) throw std::domain_error("QuadratureConfig: max_subdivisions must be >= 1");
  if (!(truncation_T > 0.0)) throw std::domain_error("QuadratureConfig: truncation_T must be > 0");
}

QuadratureOutcome adaptive_quadrature(const std::function<double(double)>& f,
                                      double lo, double hi,
                                      const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(std::isfinite(lo) && std::isfinite(hi))) {
    throw std::domain_error("adaptive_quadrature: non-finite interval");
  }

  std::vector<Segment> segments;
  segments.push_back(gauss_kronrod_15(f, lo, hi));

  QuadratureOutcome out;
  out.subdivisions = 0;

  auto total_error = [&] {
    double e = 0.0;
    for (const auto& s : segments) e += s.error;
    return e;
  };

  while (total_error() > cfg.abs_tol && out.subdivisions < cfg.max_subdivisions) {
    auto worst = std::max_element(
        segments.begin(), segments.end(),
        [](const Segment& a, const Segment& b) { return a.error < b.error; });
    Segment seg = *worst;
    segments.erase(worst);
    double mid = 0.5 * (seg.lo + seg.hi);
    if (mid <= seg.lo || mid >= seg.hi) { // interval exhausted at machine precision
      segments.push_back(seg);
      break;
    }
    segments.push_back(gauss_kronrod_15(f, seg.lo, mid));
    segments.push_back(gauss_kronrod_15(f, mid, seg.hi));
    ++out.subdivisions;
  }

  out.value = 0.0;
  for (const auto& s : segments) out.value += s.value;
  out.error_estimate = total_error();
  out.converged = out.error_estimate <= cfg.abs_tol;
  return out;
}

}  // namespace probcon
