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

#ifndef TRIAD_THEORY_H_
#define TRIAD_THEORY_H_

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace triad {

// Model inputs.
//   p: probability that a step adds a new vertex, in (0, 1].
//   r: probability of the preferential (edge-weighted) rule at new-vertex
//      steps, in [0, 1].
//   q: probability of the preferential (triangle-weighted) rule at steps
//      where three old vertices interact, in [0, 1].
struct Params {
  double p = 1.0;
  double r = 1.0;
  double q = 0.0;

  friend bool operator==(const Params&, const Params&) = default;
};

class ParamsError : public std::invalid_argument {
 public:
  enum class Kind {
    kOutOfRange,
    // p == 0: no vertex is ever born and beta is undefined.
    kNoVertexBirths,
    // Neither preferential rule can fire, so alpha == 0.
    kNotScaleFree,
  };

  ParamsError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Throws ParamsError if `params` is outside the model's domain or if the
// scale-free condition (r > 0, or q > 0 and p < 1) fails.
void validate(const Params& params);

// alpha = (2/3) p r + (1 - p) q
// beta  = [2 p (1 - r) + 3 (1 - p)(1 - q)] / p
//
// The probability that a vertex of weight w joins the interaction of step n
// is alpha * w / n + beta * p / V_{n-1}.
struct Coefficients {
  double alpha = 0.0;
  double beta = 0.0;
};

Coefficients coefficients(const Params& params);

// Limit fractions x_w of vertices with weight w, and tail remainders
// y_w = sum_{v > w} x_v with y_0 = 1.
class TheoreticalDistribution {
 public:
  TheoreticalDistribution(Coefficients coeffs, std::vector<double> x,
                          std::vector<double> y, double exponent,
                          double tail_constant);

  const Coefficients& coeffs() const { return coeffs_; }
  std::uint64_t w_max() const { return x_.size(); }

  // 1 <= w <= w_max()
  double x(std::uint64_t w) const { return x_.at(w - 1); }
  // 0 <= w <= w_max()
  double y(std::uint64_t w) const { return y_.at(w); }

  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

  // 1 + 1/alpha
  double exponent() const { return exponent_; }
  // C in x_w ~ C w^{-exponent}
  double tail_constant() const { return tail_constant_; }

 private:
  Coefficients coeffs_;
  std::vector<double> x_;
  std::vector<double> y_;
  double exponent_;
  double tail_constant_;
};

// x_1 = 1/(alpha+beta+1), x_w = x_{w-1} (alpha(w-1)+beta)/(alpha w+beta+1).
// The y sequence is built independently as the running product
// prod_{j<=w} (alpha j + beta)/(alpha j + beta + 1).
TheoreticalDistribution xw_recursion(const Coefficients& coeffs,
                                     std::uint64_t w_max);

// Gamma-ratio closed form of x_w; independent of the recursion.
double xw_closed_form(const Coefficients& coeffs, std::uint64_t w);

struct TailAsymptotics {
  double exponent = 0.0;
  double constant = 0.0;
};

// exponent = 1 + 1/alpha,
// C = Gamma(1 + (beta+1)/alpha) / (alpha Gamma(1 + beta/alpha)).
TailAsymptotics tail_asymptotics(const Coefficients& coeffs);

// b_n = prod_{i<=n} (1 + alpha/i)^{-1},  e_n = prod_{i<=n} (1 - alpha/i)^{-1}.
struct ScalingFactors {
  double alpha = 0.0;
  std::vector<double> b;  // b[n - 1] = b_n
  std::vector<double> e;  // e[n - 1] = e_n

  double b_at(std::uint64_t n) const { return b.at(n - 1); }
  double e_at(std::uint64_t n) const { return e.at(n - 1); }
};

// Requires 0 < alpha < 1; throws std::invalid_argument otherwise.
ScalingFactors scaling_factors(double alpha, std::uint64_t n_max);

// Gamma(n+1) Gamma(1+alpha) / Gamma(n+1+alpha); equals b_n.
double b_closed_form(double alpha, std::uint64_t n);
// Gamma(1-alpha) Gamma(n+1) / Gamma(n+1-alpha); equals e_n.
double e_closed_form(double alpha, std::uint64_t n);

// CSV with header "w,x_w,y_w".
void write_distribution_csv(std::ostream& out,
                            const TheoreticalDistribution& dist);

}  // namespace triad

#endif  // TRIAD_THEORY_H_
