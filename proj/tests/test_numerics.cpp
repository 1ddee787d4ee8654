// Copyright 2026 The DBF-MA Authors
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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "dbfma/quadrature.hpp"
#include "dbfma/rng.hpp"

using namespace dbfma;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    for (std::size_t n = 1; n <= 40; ++n) {
        const QuadratureRule q = gauss_legendre(n, 0.0, 2.0);
        REQUIRE(q.nodes.size() == n);
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(q.nodes[i] > q.nodes[i - 1]);
        }
        for (std::size_t d = 0; d <= 2 * n - 1 && d <= 30; ++d) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sum += q.weights[i] * std::pow(q.nodes[i], static_cast<double>(d));
            }
            const double exact = std::pow(2.0, static_cast<double>(d + 1)) / static_cast<double>(d + 1);
            CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("gauss-legendre known nodes") {
    const QuadratureRule q = gauss_legendre(2);
    CHECK(q.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(q.weights[0] == doctest::Approx(1.0));
    const QuadratureRule q3 = gauss_legendre(3);
    CHECK(q3.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q3.weights[1] == doctest::Approx(8.0 / 9.0));
    const QuadratureRule q32 = gauss_legendre(32, -1, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
        s += q32.weights[i] * std::cos(q32.nodes[i]);
    }
    CHECK(s == doctest::Approx(2 * std::sin(1.0)).epsilon(1e-14));
}

TEST_CASE("counter rng streams are reproducible and distinct") {
    CounterRng a(7, 3);
    CounterRng b(7, 3);
    CounterRng c(7, 4);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
        seen.insert(x);
    }
    CHECK(seen.size() == 1000);
    CHECK(a.counter() == 1000);
    // Draw i is a pure function of (seed, stream, i).
    CounterRng d(7, 3);
    for (int i = 0; i < 499; ++i) {
        d.next_u64();
    }
    CounterRng e(7, 3);
    for (int i = 0; i < 499; ++i) {
        e.uniform();
    }
    CHECK(d.next_u64() == e.next_u64());
}

TEST_CASE("property: counter rng moments") {
    CounterRng rng(9, 0);
    const int n = 200000;
    double su = 0;
    double sn = 0;
    double sn2 = 0;
    double sn4 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(sn / n) < 4 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(sn2 / n - 1) < 4 * std::sqrt(2.0 / n));
    CHECK(std::abs(sn4 / n - 3) < 4 * std::sqrt(96.0 / n));
}
