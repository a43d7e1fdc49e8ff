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


#include "dpcausal/mechanisms.h"

#include <set>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

Rational Power(const Rational& base, int exponent) {
  Rational out = 1;
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

FiniteDomain PosNegNull() { return FiniteDomain({"pos", "neg", "null"}); }

FiniteDomain ZeroOneTwo() { return FiniteDomain({"0", "1", "2"}); }

void RequirePositiveN(int n) {
  if (n < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "a mechanism needs at least one data point, got n = " +
                    std::to_string(n));
  }
}

std::vector<FiniteDomain> Repeat(const FiniteDomain& d, int n) {
  return std::vector<FiniteDomain>(n, d);
}

}  // namespace

MechanismKernel::MechanismKernel(int n, FiniteDomain data_domain,
                                 std::string null_value,
                                 FiniteDomain output_domain,
                                 std::vector<std::vector<Rational>> rows)
    : n_(n),
      data_domain_(std::move(data_domain)),
      null_value_(std::move(null_value)),
      output_domain_(std::move(output_domain)),
      rows_(std::move(rows)) {
  RequirePositiveN(n_);
  if (!data_domain_.Find(null_value_)) {
    throw Error(ErrorKind::kValueOutOfDomain,
                "null value \"" + null_value_ + "\" is not in the data domain");
  }
  long expected = 1;
  for (int k = 0; k < n_; ++k) expected *= data_domain_.size();
  if (static_cast<long>(rows_.size()) != expected) {
    throw Error(ErrorKind::kDomainMismatch,
                "kernel has " + std::to_string(rows_.size()) + " rows, expected " +
                    std::to_string(expected));
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (static_cast<int>(rows_[r].size()) != output_domain_.size()) {
      throw Error(ErrorKind::kDomainMismatch,
                  "kernel row " + std::to_string(r) + " has " +
                      std::to_string(rows_[r].size()) + " entries, expected " +
                      std::to_string(output_domain_.size()));
    }
    Rational sum = 0;
    for (auto& p : rows_[r]) {
      p.canonicalize();
      if (sgn(p) < 0) {
        throw Error(ErrorKind::kInvalidKernel,
                    "kernel row " + std::to_string(r) + " has a negative entry");
      }
      sum += p;
    }
    if (sum != 1) {
      throw Error(ErrorKind::kInvalidKernel,
                  "kernel row " + std::to_string(r) + " sums to " +
                      FormatRational(sum) + ", not 1");
    }
  }
}

Database MechanismKernel::DatabaseAt(int index) const {
  Database d(n_, 0);
  const int m = data_domain_.size();
  for (int k = n_ - 1; k >= 0; --k) {
    d[k] = index % m;
    index /= m;
  }
  return d;
}

int MechanismKernel::IndexOf(const Database& database) const {
  if (static_cast<int>(database.size()) != n_) {
    throw Error(ErrorKind::kInvalidArgument, "database has the wrong length");
  }
  int index = 0;
  for (int v : database) {
    if (v < 0 || v >= data_domain_.size()) {
      throw Error(ErrorKind::kValueOutOfDomain, "database value out of domain");
    }
    index = index * data_domain_.size() + v;
  }
  return index;
}

const std::vector<Rational>& MechanismKernel::Row(const Database& database) const {
  return rows_[IndexOf(database)];
}

const Rational& MechanismKernel::Probability(const Database& database,
                                             int output) const {
  return Row(database).at(output);
}

std::string MechanismKernel::DatabaseLabel(const Database& database) const {
  std::string out = "(";
  for (std::size_t k = 0; k < database.size(); ++k) {
    if (k > 0) out += ",";
    out += data_domain_.value(database[k]);
  }
  return out + ")";
}

Database WithCoordinate(Database database, int i, int value) {
  database.at(i) = value;
  return database;
}

MechanismKernel RandomizedResponseKernel(int n, const Rational& q) {
  RequirePositiveN(n);
  const Rational half(1, 2);
  if (!(q > half && q < 1)) {
    throw Error(ErrorKind::kBiasOutOfRange,
                "truth bias must satisfy 1/2 < q < 1, got " + FormatRational(q));
  }
  const FiniteDomain data = PosNegNull();
  const FiniteDomain answers({"pos", "neg"});
  const auto tuples = EnumerateAssignments(Repeat(answers, n));
  std::vector<std::string> labels;
  for (const auto& t : tuples) {
    if (n == 1) {
      labels.push_back(answers.value(t[0]));
      continue;
    }
    std::string s = "(";
    for (int k = 0; k < n; ++k) s += (k ? "," : "") + answers.value(t[k]);
    labels.push_back(s + ")");
  }
  std::vector<std::vector<Rational>> rows;
  for (const auto& db : EnumerateAssignments(Repeat(data, n))) {
    std::vector<Rational> row;
    for (const auto& t : tuples) {
      Rational p = 1;
      for (int k = 0; k < n; ++k) {
        if (db[k] == 2) {
          p *= half;
        } else {
          p *= (db[k] == t[k]) ? q : Rational(1 - q);
        }
      }
      row.push_back(p);
    }
    rows.push_back(std::move(row));
  }
  return MechanismKernel(n, data, "null", FiniteDomain(labels), std::move(rows));
}

MechanismKernel GeometricCountKernel(int n, const Rational& r) {
  RequirePositiveN(n);
  if (!(r > 0 && r < 1)) {
    throw Error(ErrorKind::kRatioOutOfRange,
                "decay ratio must satisfy 0 < r < 1, got " + FormatRational(r));
  }
  const FiniteDomain data = PosNegNull();
  std::vector<std::string> counts;
  for (int j = 0; j <= n; ++j) counts.push_back(std::to_string(j));
  const Rational interior = (1 - r) / (1 + r);
  std::vector<std::vector<Rational>> rows;
  for (const auto& db : EnumerateAssignments(Repeat(data, n))) {
    int c = 0;
    for (int v : db) c += (v == 0);
    std::vector<Rational> row(n + 1);
    for (int j = 0; j <= n; ++j) {
      if (j == 0) {
        row[j] = Power(r, c) / (1 + r);
      } else if (j == n) {
        row[j] = Power(r, n - c) / (1 + r);
      } else {
        row[j] = interior * Power(r, j > c ? j - c : c - j);
      }
    }
    rows.push_back(std::move(row));
  }
  return MechanismKernel(n, data, "null", FiniteDomain(counts), std::move(rows));
}

MechanismKernel JointHiddenValueKernel() {
  const Rational half(1, 2);
  std::vector<std::vector<Rational>> rows;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == 2 && b == 2) {
        rows.push_back({Rational(1), Rational(0)});
      } else {
        rows.push_back({half, half});
      }
    }
  }
  return MechanismKernel(2, ZeroOneTwo(), "0", FiniteDomain({"0", "1"}),
                         std::move(rows));
}

MechanismKernel HiddenValueKernel() {
  const Rational half(1, 2);
  return MechanismKernel(1, ZeroOneTwo(), "0", FiniteDomain({"0", "1"}),
                         {{half, half}, {half, half}, {Rational(1), Rational(0)}});
}

MechanismKernel ConstantKernel(int n, FiniteDomain data_domain,
                               std::string null_value, FiniteDomain output_domain,
                               std::vector<Rational> row) {
  RequirePositiveN(n);
  long count = 1;
  for (int k = 0; k < n; ++k) count *= data_domain.size();
  std::vector<std::vector<Rational>> rows(count, row);
  return MechanismKernel(n, std::move(data_domain), std::move(null_value),
                         std::move(output_domain), std::move(rows));
}

std::string AttributeName(int i) { return "R_" + std::to_string(i + 1); }
std::string DataPointName(int i) { return "D_" + std::to_string(i + 1); }

Sem BuildCanonicalSem(const MechanismKernel& kernel,
                      const std::vector<AttributeEquation>& attribute_equations) {
  const int n = kernel.n();
  std::set<std::string> attributes;
  std::set<std::string> data_points;
  for (int i = 0; i < n; ++i) {
    attributes.insert(AttributeName(i));
    data_points.insert(DataPointName(i));
  }
  std::set<std::string> endogenous_attributes;
  std::set<std::string> manipulated;
  for (const auto& eq : attribute_equations) {
    const bool is_attribute = attributes.count(eq.target) > 0;
    if (!is_attribute && data_points.count(eq.target) == 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "attribute equations may only target R_i or D_i, got \"" +
                      eq.target + "\"");
    }
    for (const auto& p : eq.parents) {
      if (attributes.count(p) == 0) {
        throw Error(ErrorKind::kInvalidArgument,
                    "equation for \"" + eq.target + "\" may only read R_j, got \"" +
                        p + "\"");
      }
    }
    auto& bucket = is_attribute ? endogenous_attributes : manipulated;
    if (!bucket.insert(eq.target).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "two equations target \"" + eq.target + "\"");
    }
  }

  Sem sem;
  const FiniteDomain& data = kernel.data_domain();
  for (int i = 0; i < n; ++i) {
    const auto name = AttributeName(i);
    sem.AddVariable(name,
                    endogenous_attributes.count(name) ? VariableKind::kEndogenous
                                                      : VariableKind::kExogenous,
                    data);
  }
  for (int i = 0; i < n; ++i) {
    sem.AddVariable(DataPointName(i), VariableKind::kEndogenous, data);
  }
  std::vector<std::string> labels;
  for (int k = 0; k < kernel.num_databases(); ++k) {
    labels.push_back(kernel.DatabaseLabel(kernel.DatabaseAt(k)));
  }
  sem.AddVariable(kDatabaseName, VariableKind::kEndogenous, FiniteDomain(labels));
  sem.AddVariable(kOutputName, VariableKind::kEndogenous, kernel.output_domain());

  for (const auto& eq : attribute_equations) {
    sem.SetEquation(eq.target, eq.parents, eq.rows);
  }
  for (int i = 0; i < n; ++i) {
    if (manipulated.count(DataPointName(i))) continue;
    sem.SetDeterministicEquation(DataPointName(i), {AttributeName(i)},
                                 [](std::span<const int> v) { return v[0]; });
  }
  std::vector<std::string> points;
  for (int i = 0; i < n; ++i) points.push_back(DataPointName(i));
  sem.SetDeterministicEquation(kDatabaseName, points, [&](std::span<const int> v) {
    return kernel.IndexOf(Database(v.begin(), v.end()));
  });
  sem.SetEquation(kOutputName, {kDatabaseName}, kernel.rows());
  Validate(sem);
  return sem;
}

ProbabilisticSem BuildCanonicalModel(
    const MechanismKernel& kernel,
    const std::vector<AttributeEquation>& attribute_equations, Dist exogenous) {
  return MakeProbabilisticSem(BuildCanonicalSem(kernel, attribute_equations),
                              std::move(exogenous));
}

namespace {

Dist Rename(const MechanismKernel& kernel, const Dist& population,
            std::string (*name)(int)) {
  if (population.num_variables() != kernel.n()) {
    throw Error(ErrorKind::kDomainMismatch,
                "population has " + std::to_string(population.num_variables()) +
                    " variables, the mechanism has " + std::to_string(kernel.n()) +
                    " data points");
  }
  std::vector<std::string> names;
  for (int i = 0; i < kernel.n(); ++i) {
    if (!(population.domains()[i] == kernel.data_domain())) {
      throw Error(ErrorKind::kDomainMismatch,
                  "population variable \"" + population.names()[i] +
                      "\" does not range over the data domain");
    }
    names.push_back(name(i));
  }
  return Dist(names, population.domains(), population.weights());
}

}  // namespace

ProbabilisticSem BuildCanonicalModel(const MechanismKernel& kernel,
                                     const Dist& population) {
  return BuildCanonicalModel(kernel, {}, Rename(kernel, population, AttributeName));
}

Dist AsDataPopulation(const MechanismKernel& kernel, const Dist& population) {
  return Rename(kernel, population, DataPointName);
}

ClassicResult ComputeClassicEpsilon(const MechanismKernel& kernel) {
  ClassicResult result;
  const int m = kernel.data_domain().size();
  const int outputs = kernel.output_domain().size();
  for (int i = 0; i < kernel.n(); ++i) {
    for (int idx = 0; idx < kernel.num_databases(); ++idx) {
      const Database d = kernel.DatabaseAt(idx);
      const auto& row = kernel.rows()[idx];
      for (int alt = 0; alt < m; ++alt) {
        if (alt == d[i]) continue;
        const auto& other = kernel.Row(WithCoordinate(d, i, alt));
        for (int o = 0; o < outputs; ++o) {
          const auto ratio = RatioBound::Of(row[o], other[o]);
          if (!ratio || !(*ratio > result.ratio)) continue;
          result.ratio = *ratio;
          result.witness = NeighborWitness{i, d, alt, o};
        }
      }
    }
  }
  return result;
}

}  // namespace dpcausal
