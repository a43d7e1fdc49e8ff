// Copyright 2026 The dpcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Helpers shared by the test binaries: exact literals and seeded generators of
// small random kernels, populations and models.

#ifndef DPCAUSAL_TESTS_TEST_SUPPORT_H_
#define DPCAUSAL_TESTS_TEST_SUPPORT_H_

#include <map>
#include <random>
#include <string>
#include <vector>

#include "dpcausal/mechanisms.h"
#include "dpcausal/rational.h"
#include "dpcausal/sem.h"

namespace dpcausal::testing {

inline Rational Q(const char* text) { return ParseRational(text); }
inline RatioBound RB(const char* text) { return RatioBound::Parse(text); }

inline int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Nonnegative integer weights over `width` cells, normalised. With
// allow_zero some cells may be 0; at least one is positive.
inline std::vector<Rational> RandomRow(std::mt19937_64& rng, int width,
                                       bool allow_zero = true) {
  std::vector<int> w(width);
  int total = 0;
  while (total == 0) {
    total = 0;
    for (int& x : w) {
      x = Uniform(rng, allow_zero ? 0 : 1, 4);
      total += x;
    }
  }
  std::vector<Rational> row;
  for (int x : w) row.push_back(Rational(x, total));
  for (auto& r : row) r.canonicalize();
  return row;
}

inline FiniteDomain Digits(int size, const std::string& prefix = "") {
  std::vector<std::string> v;
  for (int k = 0; k < size; ++k) v.push_back(prefix + std::to_string(k));
  return FiniteDomain(v);
}

// n data points over {0..m-1} (null "0"), `outputs` output values.
inline MechanismKernel RandomKernel(std::mt19937_64& rng, int n, int m, int outputs) {
  long count = 1;
  for (int k = 0; k < n; ++k) count *= m;
  const bool allow_zero = Uniform(rng, 0, 3) == 0;
  std::vector<std::vector<Rational>> rows;
  for (long r = 0; r < count; ++r) rows.push_back(RandomRow(rng, outputs, allow_zero));
  return MechanismKernel(n, Digits(m), "0", Digits(outputs, "o"), std::move(rows));
}

// Kernel with random n in 1..3 and sizes kept within desk-scale limits.
inline MechanismKernel RandomSmallKernel(std::mt19937_64& rng) {
  const int n = Uniform(rng, 1, 3);
  const int m = Uniform(rng, 2, 3);
  const int outputs = Uniform(rng, 2, 4);
  return RandomKernel(rng, n, m, outputs);
}

inline Dist RandomDist(std::mt19937_64& rng, std::vector<std::string> names,
                       std::vector<FiniteDomain> domains, bool full_support) {
  const auto cells = EnumerateAssignments(domains);
  const auto row = RandomRow(rng, static_cast<int>(cells.size()), !full_support);
  std::map<Assignment, Rational> w;
  for (std::size_t k = 0; k < cells.size(); ++k) w.emplace(cells[k], row[k]);
  return Dist(std::move(names), std::move(domains), std::move(w));
}

// A population over the kernel's data points, named D_1..D_n.
inline Dist RandomPopulation(std::mt19937_64& rng, const MechanismKernel& kernel,
                             bool full_support) {
  std::vector<std::string> names;
  for (int i = 0; i < kernel.n(); ++i) names.push_back(DataPointName(i));
  return RandomDist(rng, names,
                    std::vector<FiniteDomain>(kernel.n(), kernel.data_domain()),
                    full_support);
}

// Random recursive model: `exogenous` roots then `endogenous` variables, each
// reading up to two earlier variables through a random kernel.
inline ProbabilisticSem RandomModel(std::mt19937_64& rng, int exogenous = 2,
                                    int endogenous = 3) {
  Sem sem;
  std::vector<std::string> names;
  for (int k = 0; k < exogenous; ++k) {
    names.push_back("U" + std::to_string(k));
    sem.AddVariable(names.back(), VariableKind::kExogenous, Digits(Uniform(rng, 2, 3)));
  }
  for (int k = 0; k < endogenous; ++k) {
    names.push_back("V" + std::to_string(k));
    sem.AddVariable(names.back(), VariableKind::kEndogenous, Digits(Uniform(rng, 2, 3)));
  }
  for (int k = exogenous; k < exogenous + endogenous; ++k) {
    std::vector<std::string> parents;
    for (int p = 0; p < k; ++p) {
      if (parents.size() < 2 && Uniform(rng, 0, 2) == 0) parents.push_back(names[p]);
    }
    long rows = 1;
    for (const auto& p : parents) rows *= sem.variable(sem.IndexOf(p)).domain.size();
    const int width = sem.variable(k).domain.size();
    std::vector<std::vector<Rational>> table;
    for (long r = 0; r < rows; ++r) table.push_back(RandomRow(rng, width));
    sem.SetEquation(names[k], parents, std::move(table));
  }
  std::vector<FiniteDomain> domains;
  for (int v : sem.Exogenous()) domains.push_back(sem.variable(v).domain);
  Dist exo = RandomDist(rng, sem.ExogenousNames(), domains, Uniform(rng, 0, 1) == 0);
  return MakeProbabilisticSem(std::move(sem), std::move(exo));
}

}  // namespace dpcausal::testing

#endif  // DPCAUSAL_TESTS_TEST_SUPPORT_H_
