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
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

namespace triad {
namespace {

// Parameter sets with distinct (alpha, beta) regimes.
const Params kParamSets[] = {
    {1.0, 1.0, 0.0}, {0.5, 0.5, 0.5}, {1.0, 0.5, 0.0}, {0.3, 0.9, 0.8},
    {0.8, 0.7, 0.2}, {0.5, 1.0, 1.0},
};

TEST(Coefficients, DirectSubstitution) {
  const Coefficients a = coefficients({1.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(a.alpha, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(a.beta, 0.0);

  const Coefficients b = coefficients({0.5, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(b.alpha, 5.0 / 12.0);
  EXPECT_DOUBLE_EQ(b.beta, 5.0 / 2.0);
}

TEST(Coefficients, RejectsNonScaleFree) {
  try {
    coefficients({0.5, 0.0, 0.0});
    FAIL() << "expected ParamsError";
  } catch (const ParamsError& e) {
    EXPECT_EQ(e.kind(), ParamsError::Kind::kNotScaleFree);
    EXPECT_NE(std::string(e.what()).find("scale-free condition"),
              std::string::npos);
  }
  // p = 1 makes q irrelevant.
  EXPECT_THROW(coefficients({1.0, 0.0, 1.0}), ParamsError);
}

TEST(Coefficients, RejectsZeroP) {
  try {
    coefficients({0.0, 0.5, 0.5});
    FAIL() << "expected ParamsError";
  } catch (const ParamsError& e) {
    EXPECT_EQ(e.kind(), ParamsError::Kind::kNoVertexBirths);
  }
}

TEST(Coefficients, RejectsOutOfRange) {
  for (Params bad : {Params{1.5, 0.5, 0.5}, Params{-0.1, 0.5, 0.5},
                     Params{0.5, 1.2, 0.5}, Params{0.5, 0.5, -1.0},
                     Params{std::nan(""), 0.5, 0.5}}) {
    try {
      coefficients(bad);
      FAIL() << "expected ParamsError";
    } catch (const ParamsError& e) {
      EXPECT_EQ(e.kind(), ParamsError::Kind::kOutOfRange);
    }
  }
}

TEST(Coefficients, GridBounds) {
  int valid = 0;
  for (int pi = 1; pi <= 10; ++pi) {
    for (int ri = 0; ri <= 10; ++ri) {
      for (int qi = 0; qi <= 10; ++qi) {
        const Params params{pi / 10.0, ri / 10.0, qi / 10.0};
        Coefficients c;
        try {
          c = coefficients(params);
        } catch (const ParamsError&) {
          continue;
        }
        ++valid;
        EXPECT_GT(c.alpha, 0.0);
        EXPECT_LT(c.alpha, 1.0);
        EXPECT_LE(c.alpha, 1.0 - params.p / 3.0 + 1e-15);
        EXPECT_GE(c.beta, 0.0);
      }
    }
  }
  EXPECT_GE(valid, 1000);
}

TEST(XwRecursion, HandValues) {
  const TheoreticalDistribution d = xw_recursion({2.0 / 3.0, 0.0}, 3);
  EXPECT_NEAR(d.x(1), 3.0 / 5.0, 1e-15);
  EXPECT_NEAR(d.x(2), 6.0 / 35.0, 1e-15);
  EXPECT_NEAR(d.x(3), 8.0 / 105.0, 1e-15);
  EXPECT_EQ(d.y(0), 1.0);
  EXPECT_DOUBLE_EQ(d.exponent(), 2.5);

  const TheoreticalDistribution e = xw_recursion({5.0 / 12.0, 5.0 / 2.0}, 1);
  EXPECT_NEAR(e.x(1), 12.0 / 47.0, 1e-15);
  EXPECT_THROW(xw_recursion({0.5, 1.0}, 0), std::invalid_argument);
}

TEST(XwRecursion, TelescopingRemainders) {
  for (const Params& params : kParamSets) {
    const TheoreticalDistribution d = xw_recursion(coefficients(params), 100000);
    double previous = 1.0;
    for (std::uint64_t w = 1; w <= d.w_max(); ++w) {
      EXPECT_NEAR(d.x(w), d.y(w - 1) - d.y(w), 1e-12 * d.y(w - 1)) << w;
      ASSERT_LT(d.y(w), previous);
      previous = d.y(w);
    }
    EXPECT_GT(d.y(100000), 0.0);
    EXPECT_LT(d.y(100000), d.y(10000));
    EXPECT_LT(d.y(10000), d.y(1000));
  }
}

TEST(XwRecursion, PositiveAndEventuallyDecreasing) {
  for (const Params& params : kParamSets) {
    const TheoreticalDistribution d = xw_recursion(coefficients(params), 2000);
    for (std::uint64_t w = 1; w <= d.w_max(); ++w) ASSERT_GT(d.x(w), 0.0);
    for (std::uint64_t w = 100; w < d.w_max(); ++w) ASSERT_LT(d.x(w + 1), d.x(w));
  }
}

TEST(XwClosedForm, MatchesSmallValues) {
  EXPECT_NEAR(xw_closed_form({2.0 / 3.0, 0.0}, 1), 3.0 / 5.0, 1e-12);
  EXPECT_NEAR(xw_closed_form({2.0 / 3.0, 0.0}, 2), 6.0 / 35.0, 1e-12);
}

TEST(XwClosedForm, AgreesWithRecursion) {
  for (const Params& params : kParamSets) {
    const Coefficients c = coefficients(params);
    const TheoreticalDistribution d = xw_recursion(c, 10000);
    for (std::uint64_t w = 1; w <= 10000; ++w) {
      ASSERT_NEAR(xw_closed_form(c, w) / d.x(w), 1.0, 1e-10) << "w=" << w;
    }
  }
}

TEST(XwClosedForm, ApproachesPowerLaw) {
  const Coefficients c{2.0 / 3.0, 0.0};
  const TailAsymptotics tail = tail_asymptotics(c);
  const double w = 10000.0;
  EXPECT_NEAR(xw_closed_form(c, 10000) / (tail.constant * std::pow(w, -2.5)),
              1.0, 1e-3);
}

TEST(TailAsymptotics, ExponentAndConstant) {
  EXPECT_DOUBLE_EQ(tail_asymptotics({2.0 / 3.0, 0.0}).exponent, 2.5);
  EXPECT_NEAR(tail_asymptotics({5.0 / 12.0, 5.0 / 2.0}).exponent, 17.0 / 5.0,
              1e-14);
  // Gamma(5/2) / (2/3) = (3 sqrt(pi) / 4) * (3 / 2).
  const double expected = 9.0 * std::sqrt(std::numbers::pi) / 8.0;
  EXPECT_NEAR(tail_asymptotics({2.0 / 3.0, 0.0}).constant, expected, 1e-12);
  EXPECT_NEAR(expected, 1.99401, 1e-5);
}

TEST(TailAsymptotics, LogLogSlope) {
  for (const Params& params : kParamSets) {
    const TheoreticalDistribution d = xw_recursion(coefficients(params), 10000);
    // Ordinary least squares on (log w, log x_w), written out here so the
    // check does not depend on the analysis module.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::uint64_t w = 100; w <= 10000; ++w) {
      const double lx = std::log(static_cast<double>(w));
      const double ly = std::log(d.x(w));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    EXPECT_NEAR(slope / -d.exponent(), 1.0, 0.01);
  }
}

TEST(ScalingFactors, SingleFactors) {
  const ScalingFactors s = scaling_factors(2.0 / 3.0, 1);
  EXPECT_NEAR(s.b_at(1), 3.0 / 5.0, 1e-15);
  EXPECT_NEAR(s.e_at(1), 3.0, 1e-14);
  EXPECT_NEAR(scaling_factors(0.5, 2).b_at(2), 8.0 / 15.0, 1e-15);
}

TEST(ScalingFactors, RejectsAlphaOutsideUnitInterval) {
  EXPECT_THROW(scaling_factors(1.0, 10), std::invalid_argument);
  EXPECT_THROW(scaling_factors(0.0, 10), std::invalid_argument);
}

TEST(ScalingFactors, GammaAsymptotics) {
  const double alpha = 2.0 / 3.0;
  const ScalingFactors s = scaling_factors(alpha, 10000);
  EXPECT_NEAR(s.b_at(10000) * std::pow(10000.0, alpha) / std::tgamma(1 + alpha),
              1.0, 1e-3);
}

TEST(ScalingFactors, RecurrenceMatchesGammaForm) {
  for (double alpha : {2.0 / 3.0, 5.0 / 12.0, 0.05, 0.95}) {
    const ScalingFactors s = scaling_factors(alpha, 1000000);
    for (std::uint64_t n = 1; n <= 1000000; n += (n < 1000 ? 1 : 997)) {
      ASSERT_NEAR(s.b_at(n) / b_closed_form(alpha, n), 1.0, 1e-10) << n;
      ASSERT_NEAR(s.e_at(n) / e_closed_form(alpha, n), 1.0, 1e-10) << n;
    }
    EXPECT_NEAR(s.b_at(1000000) / b_closed_form(alpha, 1000000), 1.0, 1e-10);
  }
}

TEST(ScalingFactors, MonotoneAndProductBounded) {
  for (double alpha : {2.0 / 3.0, 0.3, 0.9}) {
    const ScalingFactors s = scaling_factors(alpha, 100000);
    // b_n e_n = prod (1 - alpha^2/i^2)^{-1}, increasing towards
    // Gamma(1-alpha) Gamma(1+alpha) = pi alpha / sin(pi alpha).
    const double limit =
        std::numbers::pi * alpha / std::sin(std::numbers::pi * alpha);
    double prev_b = 1.0, prev_e = 1.0, prev_be = 1.0;
    for (std::uint64_t n = 1; n <= 100000; ++n) {
      const double b = s.b_at(n), e = s.e_at(n);
      ASSERT_LT(b, prev_b);
      ASSERT_GT(b, 0.0);
      ASSERT_GT(e, prev_e);
      ASSERT_GE(b * e, prev_be * (1 - 1e-15));
      ASSERT_LE(b * e, limit * (1 + 1e-12));
      prev_b = b;
      prev_e = e;
      prev_be = b * e;
    }
    EXPECT_NEAR(prev_be / limit, 1.0, 1e-4);
  }
}

TEST(DistributionCsv, Format) {
  std::ostringstream out;
  write_distribution_csv(out, xw_recursion({2.0 / 3.0, 0.0}, 2));
  EXPECT_EQ(out.str(),
            "w,x_w,y_w\n1,0.6000000000000001,0.4\n2,0.17142857142857146,"
            "0.2285714285714286\n");
}

}  // namespace
}  // namespace triad
