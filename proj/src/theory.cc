// Copyright 2026 The Triad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "triad/theory.h"

#include <cmath>
#include <sstream>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>

#include "format.h"

namespace triad {
namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void validate(const Params& params) {
  if (!in_unit_interval(params.p)) {
    std::ostringstream msg;
    msg << "p must lie in (0, 1], got " << params.p;
    throw ParamsError(ParamsError::Kind::kOutOfRange, msg.str());
  }
  if (!in_unit_interval(params.r) || !in_unit_interval(params.q)) {
    std::ostringstream msg;
    msg << "r and q must lie in [0, 1], got r=" << params.r
        << " q=" << params.q;
    throw ParamsError(ParamsError::Kind::kOutOfRange, msg.str());
  }
  if (params.p == 0.0) {
    throw ParamsError(ParamsError::Kind::kNoVertexBirths,
                      "p must be positive: with p = 0 no vertex is ever "
                      "added and beta is undefined");
  }
  const bool scale_free =
      params.r > 0.0 || (params.q > 0.0 && params.p < 1.0);
  if (!scale_free) {
    throw ParamsError(ParamsError::Kind::kNotScaleFree,
                      "scale-free condition violated: need r > 0, or q > 0 "
                      "and p < 1 (alpha would be 0)");
  }
}

Coefficients coefficients(const Params& params) {
  validate(params);
  const double p = params.p;
  Coefficients c;
  c.alpha = (2.0 / 3.0) * p * params.r + (1.0 - p) * params.q;
  c.beta = (2.0 * p * (1.0 - params.r) +
            3.0 * (1.0 - p) * (1.0 - params.q)) /
           p;
  return c;
}

TheoreticalDistribution::TheoreticalDistribution(Coefficients coeffs,
                                                 std::vector<double> x,
                                                 std::vector<double> y,
                                                 double exponent,
                                                 double tail_constant)
    : coeffs_(coeffs),
      x_(std::move(x)),
      y_(std::move(y)),
      exponent_(exponent),
      tail_constant_(tail_constant) {}

TheoreticalDistribution xw_recursion(const Coefficients& coeffs,
                                     std::uint64_t w_max) {
  if (w_max < 1) throw std::invalid_argument("w_max must be >= 1");
  const double a = coeffs.alpha;
  const double b = coeffs.beta;

  std::vector<double> x(w_max);
  x[0] = 1.0 / (a + b + 1.0);
  for (std::uint64_t w = 2; w <= w_max; ++w) {
    const double wd = static_cast<double>(w);
    x[w - 1] = x[w - 2] * (a * (wd - 1.0) + b) / (a * wd + b + 1.0);
  }

  std::vector<double> y(w_max + 1);
  y[0] = 1.0;
  for (std::uint64_t w = 1; w <= w_max; ++w) {
    const double wd = static_cast<double>(w);
    y[w] = y[w - 1] * (a * wd + b) / (a * wd + b + 1.0);
  }

  const TailAsymptotics tail = tail_asymptotics(coeffs);
  return TheoreticalDistribution(coeffs, std::move(x), std::move(y),
                                 tail.exponent, tail.constant);
}

double xw_closed_form(const Coefficients& coeffs, std::uint64_t w) {
  if (w < 1) throw std::invalid_argument("w must be >= 1");
  const double a = coeffs.alpha;
  const double shift = coeffs.beta / a;
  // Gamma(w + beta/a) / Gamma(w + (beta+1)/a + 1)
  const double ratio = boost::math::tgamma_delta_ratio(
      static_cast<double>(w) + shift, 1.0 / a + 1.0);
  return tail_asymptotics(coeffs).constant * ratio;
}

TailAsymptotics tail_asymptotics(const Coefficients& coeffs) {
  const double a = coeffs.alpha;
  TailAsymptotics t;
  t.exponent = 1.0 + 1.0 / a;
  // Gamma(1 + (beta+1)/a) / Gamma(1 + beta/a) is the reciprocal of
  // Gamma(1 + beta/a) / Gamma(1 + beta/a + 1/a).
  t.constant =
      1.0 / (a * boost::math::tgamma_delta_ratio(1.0 + coeffs.beta / a,
                                                 1.0 / a));
  return t;
}

ScalingFactors scaling_factors(double alpha, std::uint64_t n_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("scaling factors need 0 < alpha < 1");
  }
  ScalingFactors s;
  s.alpha = alpha;
  s.b.resize(n_max);
  s.e.resize(n_max);
  double b = 1.0;
  double e = 1.0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double nd = static_cast<double>(n);
    b *= nd / (nd + alpha);
    e *= nd / (nd - alpha);
    s.b[n - 1] = b;
    s.e[n - 1] = e;
  }
  return s;
}

double b_closed_form(double alpha, std::uint64_t n) {
  return boost::math::tgamma_delta_ratio(static_cast<double>(n) + 1.0,
                                         alpha) *
         boost::math::tgamma(1.0 + alpha);
}

double e_closed_form(double alpha, std::uint64_t n) {
  return boost::math::tgamma(1.0 - alpha) /
         boost::math::tgamma_delta_ratio(
             static_cast<double>(n) + 1.0 - alpha, alpha);
}

void write_distribution_csv(std::ostream& out,
                            const TheoreticalDistribution& dist) {
  out << "w,x_w,y_w\n";
  for (std::uint64_t w = 1; w <= dist.w_max(); ++w) {
    out << w << ',' << internal::format_double(dist.x(w)) << ','
        << internal::format_double(dist.y(w)) << '\n';
  }
}

}  // namespace triad
