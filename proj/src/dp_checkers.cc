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


#include "dpcausal/dp_checkers.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

constexpr DefinitionId kAll[] = {
    DefinitionId::kClassic,
    DefinitionId::kStrongAdversaryUniversal,
    DefinitionId::kStrongAdversaryOneDist,
    DefinitionId::kBayesian0,
    DefinitionId::kIndependentBayesian0,
    DefinitionId::kWholeDbIntervention,
    DefinitionId::kWholeDbUniversal,
    DefinitionId::kSinglePointIntervention,
    DefinitionId::kSinglePointUniversal,
};

// Running supremum; the first strict improvement wins ties.
struct Best {
  RatioBound value;
  std::optional<CheckWitness> witness;

  void Offer(const std::optional<RatioBound>& ratio, const CheckWitness& w) {
    if (ratio && *ratio > value) {
      value = *ratio;
      witness = w;
    }
  }
  void Merge(const Best& other) {
    if (other.value > value) *this = other;
  }
};

struct Tally {
  Best best;
  long skipped = 0;
  long fast = 0;
  long mismatches = 0;
};

CheckReport Finish(DefinitionId definition, const RatioBound& target,
                   const Tally& tally) {
  CheckReport report;
  report.definition = definition;
  report.target_ratio = target;
  report.achieved = tally.best.value;
  report.pass = tally.best.value <= target;
  report.witness = tally.best.witness;
  report.skipped_comparisons = tally.skipped;
  report.fast_path_queries = tally.fast;
  report.fast_path_mismatches = tally.mismatches;
  return report;
}

int OutputVariable(const MechanismKernel& kernel) { return 2 * kernel.n() + 1; }
int PointVariable(int i, const MechanismKernel& kernel) { return kernel.n() + i; }

// Fr[O = .] under `dist`, a distribution over all canonical variables.
std::vector<Rational> OutputRow(const MechanismKernel& kernel, const Dist& dist) {
  std::vector<Rational> row(kernel.output_domain().size(), Rational(0));
  const int o = OutputVariable(kernel);
  for (const auto& [a, w] : dist.weights()) row[a[o]] += w;
  return row;
}

std::vector<std::string> PointNames(const MechanismKernel& kernel) {
  std::vector<std::string> out;
  for (int i = 0; i < kernel.n(); ++i) out.push_back(DataPointName(i));
  return out;
}

std::vector<Intervention> WholeDatabase(const MechanismKernel& kernel,
                                        const Database& d) {
  std::vector<Intervention> out;
  for (int i = 0; i < kernel.n(); ++i) {
    out.push_back({DataPointName(i), kernel.data_domain().value(d[i])});
  }
  return out;
}

Dist PointMassPopulation(const MechanismKernel& kernel, const Database& d) {
  std::vector<std::string> names;
  for (int i = 0; i < kernel.n(); ++i) names.push_back(AttributeName(i));
  return Dist::PointMass(names,
                         std::vector<FiniteDomain>(kernel.n(), kernel.data_domain()),
                         d);
}

Dist UniformPopulation(const MechanismKernel& kernel) {
  std::vector<std::string> names;
  for (int i = 0; i < kernel.n(); ++i) names.push_back(AttributeName(i));
  return Dist::Uniform(names,
                       std::vector<FiniteDomain>(kernel.n(), kernel.data_domain()));
}

bool IsProduct(const Dist& points) {
  std::vector<Dist> marginals;
  for (const auto& name : points.names()) marginals.push_back(points.Marginal({name}));
  for (const auto& a : EnumerateAssignments(points.domains())) {
    Rational product = 1;
    for (std::size_t k = 0; k < a.size(); ++k) product *= marginals[k].Weight({a[k]});
    if (product != points.Weight(a)) return false;
  }
  return true;
}

// Strong adversary for one population, Bayesian-zero and its independent
// variant, all by conditioning the lifted canonical model.
Tally AssociativeCore(DefinitionId definition, const MechanismKernel& kernel,
                      const ProbabilisticSem& psem, const std::string& label) {
  Tally tally;
  const Dist joint = Lift(psem);
  const int n = kernel.n();
  const int m = kernel.data_domain().size();
  const int outputs = kernel.output_domain().size();

  if (definition == DefinitionId::kStrongAdversaryOneDist) {
    // Fr[O = . | D = d], or nothing when Fr[D = d] = 0.
    std::vector<std::optional<std::vector<Rational>>> rows(kernel.num_databases());
    for (int idx = 0; idx < kernel.num_databases(); ++idx) {
      const Database d = kernel.DatabaseAt(idx);
      const auto is_d = [&](const Assignment& a) {
        for (int j = 0; j < n; ++j) {
          if (a[PointVariable(j, kernel)] != d[j]) return false;
        }
        return true;
      };
      try {
        rows[idx] = OutputRow(kernel, Condition(joint, is_d));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kZeroProbabilityEvent) throw;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int idx = 0; idx < kernel.num_databases(); ++idx) {
        const Database d = kernel.DatabaseAt(idx);
        for (int alt = 0; alt < m; ++alt) {
          if (alt == d[i]) continue;
          const int other = kernel.IndexOf(WithCoordinate(d, i, alt));
          if (!rows[idx] || !rows[other]) {
            ++tally.skipped;
            continue;
          }
          for (int o = 0; o < outputs; ++o) {
            tally.best.Offer(RatioBound::Of((*rows[idx])[o], (*rows[other])[o]),
                             CheckWitness{i, d, d[i], alt, o, label, std::nullopt});
          }
        }
      }
    }
    return tally;
  }

  // Fr[O = . | D_i = v], indexed [i][v].
  std::vector<std::vector<std::optional<std::vector<Rational>>>> rows(
      n, std::vector<std::optional<std::vector<Rational>>>(m));
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < m; ++v) {
      const int var = PointVariable(i, kernel);
      try {
        rows[i][v] = OutputRow(
            kernel, Condition(joint, [&](const Assignment& a) { return a[var] == v; }));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kZeroProbabilityEvent) throw;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < m; ++v) {
      for (int alt = 0; alt < m; ++alt) {
        if (alt == v) continue;
        if (!rows[i][v] || !rows[i][alt]) {
          ++tally.skipped;
          continue;
        }
        for (int o = 0; o < outputs; ++o) {
          tally.best.Offer(RatioBound::Of((*rows[i][v])[o], (*rows[i][alt])[o]),
                           CheckWitness{i, std::nullopt, v, alt, o, label, std::nullopt});
        }
      }
    }
  }
  return tally;
}

// Whole-database and single-point interventions. The interventional output
// distributions come from closed forms (the kernel row; the data-point
// marginal mixed through the kernel) and, with cross_check, are re-derived by
// lifting the intervened submodel.
Tally CausalCore(DefinitionId definition, const MechanismKernel& kernel,
                 const ProbabilisticSem& psem, const std::string& label,
                 const std::optional<Database>& point, bool cross_check) {
  Tally tally;
  const int n = kernel.n();
  const int m = kernel.data_domain().size();
  const int outputs = kernel.output_domain().size();

  if (definition == DefinitionId::kWholeDbIntervention ||
      definition == DefinitionId::kWholeDbUniversal) {
    for (int idx = 0; idx < kernel.num_databases(); ++idx) {
      ++tally.fast;
      if (!cross_check) continue;
      const Database d = kernel.DatabaseAt(idx);
      const auto slow =
          OutputRow(kernel, InterventionalJoint(psem, WholeDatabase(kernel, d)));
      if (slow != kernel.rows()[idx]) ++tally.mismatches;
    }
    for (int i = 0; i < n; ++i) {
      for (int idx = 0; idx < kernel.num_databases(); ++idx) {
        const Database d = kernel.DatabaseAt(idx);
        for (int alt = 0; alt < m; ++alt) {
          if (alt == d[i]) continue;
          const auto& row = kernel.rows()[idx];
          const auto& alt_row = kernel.Row(WithCoordinate(d, i, alt));
          for (int o = 0; o < outputs; ++o) {
            tally.best.Offer(RatioBound::Of(row[o], alt_row[o]),
                             CheckWitness{i, d, d[i], alt, o, label, point});
          }
        }
      }
    }
    return tally;
  }

  const Dist points = Lift(psem).Marginal(PointNames(kernel));
  // Fr[O = . | do(D_i = v)], indexed [i][v].
  std::vector<std::vector<std::vector<Rational>>> rows(
      n, std::vector<std::vector<Rational>>(m));
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < m; ++v) {
      std::vector<Rational> fast(outputs, Rational(0));
      for (const auto& [d, w] : points.weights()) {
        const auto& row = kernel.Row(WithCoordinate(d, i, v));
        for (int o = 0; o < outputs; ++o) fast[o] += w * row[o];
      }
      ++tally.fast;
      if (cross_check) {
        const auto slow = OutputRow(
            kernel, InterventionalJoint(
                        psem, {{DataPointName(i), kernel.data_domain().value(v)}}));
        if (slow != fast) ++tally.mismatches;
      }
      rows[i][v] = std::move(fast);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < m; ++v) {
      for (int alt = 0; alt < m; ++alt) {
        if (alt == v) continue;
        for (int o = 0; o < outputs; ++o) {
          tally.best.Offer(RatioBound::Of(rows[i][v][o], rows[i][alt][o]),
                           CheckWitness{i, std::nullopt, v, alt, o, label, point});
        }
      }
    }
  }
  return tally;
}

void RequireDefinition(DefinitionId definition,
                       std::initializer_list<DefinitionId> allowed,
                       const char* checker) {
  for (auto a : allowed) {
    if (a == definition) return;
  }
  throw Error(ErrorKind::kInvalidArgument,
              std::string(checker) + " cannot evaluate \"" +
                  std::string(DefinitionName(definition)) + "\"");
}

}  // namespace

std::string_view DefinitionName(DefinitionId id) {
  switch (id) {
    case DefinitionId::kClassic: return "classic";
    case DefinitionId::kStrongAdversaryUniversal: return "strong_adversary_universal";
    case DefinitionId::kStrongAdversaryOneDist: return "strong_adversary_one_dist";
    case DefinitionId::kBayesian0: return "bayesian0";
    case DefinitionId::kIndependentBayesian0: return "independent_bayesian0";
    case DefinitionId::kWholeDbIntervention: return "whole_db_intervention";
    case DefinitionId::kWholeDbUniversal: return "whole_db_universal";
    case DefinitionId::kSinglePointIntervention: return "single_point_intervention";
    case DefinitionId::kSinglePointUniversal: return "single_point_universal";
  }
  return "unknown";
}

DefinitionId ParseDefinition(std::string_view name) {
  for (auto id : kAll) {
    if (DefinitionName(id) == name) return id;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown definition \"" + std::string(name) + "\"");
}

const std::vector<DefinitionId>& AllDefinitions() {
  static const std::vector<DefinitionId> all(std::begin(kAll), std::end(kAll));
  return all;
}

bool NeedsPopulation(DefinitionId id) {
  switch (id) {
    case DefinitionId::kStrongAdversaryOneDist:
    case DefinitionId::kBayesian0:
    case DefinitionId::kIndependentBayesian0:
    case DefinitionId::kWholeDbIntervention:
    case DefinitionId::kSinglePointIntervention:
      return true;
    default:
      return false;
  }
}

CheckReport CheckClassic(const MechanismKernel& kernel, const RatioBound& target) {
  const ClassicResult classic = ComputeClassicEpsilon(kernel);
  Tally tally;
  tally.best.value = classic.ratio;
  if (classic.witness) {
    const auto& w = *classic.witness;
    tally.best.witness = CheckWitness{w.coordinate, w.database,
                                      w.database[w.coordinate], w.alternative,
                                      w.output, "", std::nullopt};
  }
  return Finish(DefinitionId::kClassic, target, tally);
}

CheckReport CheckAssociative(DefinitionId definition, const MechanismKernel& kernel,
                             const std::vector<AttributeEquation>& attribute_equations,
                             const Dist& exogenous, const RatioBound& target,
                             const CheckOptions& options) {
  RequireDefinition(definition,
                    {DefinitionId::kStrongAdversaryOneDist, DefinitionId::kBayesian0,
                     DefinitionId::kIndependentBayesian0},
                    "CheckAssociative");
  const ProbabilisticSem psem =
      BuildCanonicalModel(kernel, attribute_equations, exogenous);
  std::vector<std::string> notes;
  if (definition == DefinitionId::kIndependentBayesian0) {
    if (!IsProduct(Lift(psem).Marginal(PointNames(kernel)))) {
      throw Error(ErrorKind::kNotAProductDistribution,
                  "population over the data points is not a product distribution");
    }
    notes.push_back(
        "independence read as full mutual independence of the data points");
  }
  const Tally tally = AssociativeCore(definition, kernel, psem, options.population_label);
  CheckReport report = Finish(definition, target, tally);
  report.notes = std::move(notes);
  return report;
}

CheckReport CheckAssociative(DefinitionId definition, const MechanismKernel& kernel,
                             const Dist& population, const RatioBound& target,
                             const CheckOptions& options) {
  const ProbabilisticSem psem = BuildCanonicalModel(kernel, population);
  return CheckAssociative(definition, kernel, {}, psem.exogenous, target, options);
}

CheckReport CheckStrongAdversaryUniversal(const MechanismKernel& kernel,
                                          const RatioBound& target) {
  const ProbabilisticSem psem = BuildCanonicalModel(kernel, {}, UniformPopulation(kernel));
  const Tally tally = AssociativeCore(DefinitionId::kStrongAdversaryOneDist, kernel,
                                      psem, "uniform");
  CheckReport report = Finish(DefinitionId::kStrongAdversaryUniversal, target, tally);
  report.reduction =
      "uniform full-support population: every conditional is a kernel row";
  return report;
}

CheckReport CheckCausal(DefinitionId definition, const MechanismKernel& kernel,
                        const std::vector<AttributeEquation>& attribute_equations,
                        const Dist& exogenous, const RatioBound& target,
                        const CheckOptions& options) {
  RequireDefinition(definition,
                    {DefinitionId::kWholeDbIntervention,
                     DefinitionId::kSinglePointIntervention},
                    "CheckCausal");
  const ProbabilisticSem psem =
      BuildCanonicalModel(kernel, attribute_equations, exogenous);
  return Finish(definition, target,
                CausalCore(definition, kernel, psem, options.population_label,
                           std::nullopt, options.cross_check));
}

CheckReport CheckCausal(DefinitionId definition, const MechanismKernel& kernel,
                        const Dist& population, const RatioBound& target,
                        const CheckOptions& options) {
  const ProbabilisticSem psem = BuildCanonicalModel(kernel, population);
  return CheckCausal(definition, kernel, {}, psem.exogenous, target, options);
}

CheckReport CheckUniversalCausal(DefinitionId definition,
                                 const MechanismKernel& kernel,
                                 const RatioBound& target,
                                 const CheckOptions& options) {
  RequireDefinition(definition,
                    {DefinitionId::kWholeDbUniversal, DefinitionId::kSinglePointUniversal},
                    "CheckUniversalCausal");
  Tally total;
  for (int idx = 0; idx < kernel.num_databases(); ++idx) {
    const Database point = kernel.DatabaseAt(idx);
    const ProbabilisticSem psem =
        BuildCanonicalModel(kernel, {}, PointMassPopulation(kernel, point));
    const Tally t = CausalCore(definition, kernel, psem,
                               "point mass at " + kernel.DatabaseLabel(point), point,
                               options.cross_check);
    total.best.Merge(t.best);
    total.fast += t.fast;
    total.mismatches += t.mismatches;
  }
  CheckReport report = Finish(definition, target, total);
  report.reduction = "point masses on every database";
  return report;
}

CheckReport RunCheck(DefinitionId definition, const MechanismKernel& kernel,
                     const std::optional<Dist>& population,
                     const RatioBound& target, const CheckOptions& options) {
  if (NeedsPopulation(definition) != population.has_value()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(DefinitionName(definition)) +
                    (population ? " takes no population" : " needs a population"));
  }
  switch (definition) {
    case DefinitionId::kClassic:
      return CheckClassic(kernel, target);
    case DefinitionId::kStrongAdversaryUniversal:
      return CheckStrongAdversaryUniversal(kernel, target);
    case DefinitionId::kStrongAdversaryOneDist:
    case DefinitionId::kBayesian0:
    case DefinitionId::kIndependentBayesian0:
      return CheckAssociative(definition, kernel, *population, target, options);
    case DefinitionId::kWholeDbIntervention:
    case DefinitionId::kSinglePointIntervention:
      return CheckCausal(definition, kernel, *population, target, options);
    case DefinitionId::kWholeDbUniversal:
    case DefinitionId::kSinglePointUniversal:
      return CheckUniversalCausal(definition, kernel, target, options);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown definition");
}

FalsificationResult FalsifyBayesian0(const MechanismKernel& kernel,
                                     const RatioBound& target, int budget) {
  if (budget < 1) {
    throw Error(ErrorKind::kInvalidArgument, "search budget must be at least 1");
  }
  FalsificationResult result;
  if (!CheckClassic(kernel, target).pass) {
    result.family = "none: the classic check already fails at this target";
    return result;
  }
  const std::vector<std::string> names = PointNames(kernel);
  const std::vector<FiniteDomain> domains(kernel.n(), kernel.data_domain());
  const auto attempt = [&](std::map<Assignment, Rational> weights) {
    ++result.candidates_examined;
    Dist population(names, domains, std::move(weights));
    CheckOptions options;
    options.cross_check = false;
    options.population_label = "witness";
    CheckReport report =
        CheckAssociative(DefinitionId::kBayesian0, kernel, population, target, options);
    if (report.pass) return false;
    result.found = true;
    result.population = std::move(population);
    result.report = std::move(report);
    return true;
  };

  const int top = std::max(2, budget);
  result.family = "two-point mixtures of databases";
  for (int a = 0; a < kernel.num_databases(); ++a) {
    for (int b = a + 1; b < kernel.num_databases(); ++b) {
      for (int m = 2; m <= top; ++m) {
        for (int k = 1; k < m; ++k) {
          if (std::gcd(k, m) != 1) continue;
          std::map<Assignment, Rational> w;
          w.emplace(kernel.DatabaseAt(a), Rational(k, m));
          w.emplace(kernel.DatabaseAt(b), Rational(m - k, m));
          if (attempt(std::move(w))) return result;
        }
      }
    }
  }

  result.family = "i.i.d. product populations";
  const int values = kernel.data_domain().size();
  for (int m = 1; m <= budget; ++m) {
    // Every split of m into `values` nonnegative parts.
    std::vector<int> parts(values, 0);
    std::function<bool(int, int)> split = [&](int k, int left) {
      if (k == values - 1) {
        parts[k] = left;
        if (std::gcd(std::accumulate(parts.begin(), parts.end(), 0,
                                     [](int g, int p) { return std::gcd(g, p); }),
                     m) != 1) {
          return false;  // Same point as a smaller denominator.
        }
        std::map<Assignment, Rational> w;
        for (const auto& d : EnumerateAssignments(domains)) {
          Rational p = 1;
          for (int v : d) p *= Rational(parts[v], m);
          if (sgn(p) > 0) w.emplace(d, p);
        }
        return attempt(std::move(w));
      }
      for (int take = 0; take <= left; ++take) {
        parts[k] = take;
        if (split(k + 1, left - take)) return true;
      }
      return false;
    };
    if (split(0, m)) return result;
  }
  result.family = "two-point mixtures of databases, then i.i.d. product populations";
  return result;
}

std::optional<RatioBound> ReplayWitness(
    const CheckReport& report, const MechanismKernel& kernel,
    const std::optional<ProbabilisticSem>& canonical) {
  if (!report.witness) return std::nullopt;
  const CheckWitness& w = *report.witness;
  const Event output{{{kOutputName, kernel.output_domain().value(w.output)}}};
  const auto& data = kernel.data_domain();
  const auto model = [&]() -> ProbabilisticSem {
    if (NeedsPopulation(report.definition)) {
      if (!canonical) {
        throw Error(ErrorKind::kInvalidArgument,
                    "replaying this witness needs the checked model");
      }
      return *canonical;
    }
    if (w.point) return BuildCanonicalModel(kernel, {}, PointMassPopulation(kernel, *w.point));
    return BuildCanonicalModel(kernel, {}, UniformPopulation(kernel));
  }();
  const auto require_database = [&]() -> const Database& {
    if (!w.database) {
      throw Error(ErrorKind::kInvalidArgument, "witness lacks its database");
    }
    return *w.database;
  };
  const auto database_event = [&](const Database& d) {
    Event e;
    for (int j = 0; j < kernel.n(); ++j) {
      e.equalities.emplace_back(DataPointName(j), data.value(d[j]));
    }
    return e;
  };

  Rational num;
  Rational den;
  switch (report.definition) {
    case DefinitionId::kClassic:
    case DefinitionId::kWholeDbIntervention:
    case DefinitionId::kWholeDbUniversal: {
      const Database& d = require_database();
      const Database other = WithCoordinate(d, w.coordinate, w.alternative);
      num = Query(model, output, WholeDatabase(kernel, d));
      den = Query(model, output, WholeDatabase(kernel, other));
      break;
    }
    case DefinitionId::kStrongAdversaryUniversal:
    case DefinitionId::kStrongAdversaryOneDist: {
      const Database& d = require_database();
      const Database other = WithCoordinate(d, w.coordinate, w.alternative);
      num = Query(model, output, {}, database_event(d));
      den = Query(model, output, {}, database_event(other));
      break;
    }
    case DefinitionId::kBayesian0:
    case DefinitionId::kIndependentBayesian0: {
      const std::string point = DataPointName(w.coordinate);
      num = Query(model, output, {}, Event{{{point, data.value(w.value)}}});
      den = Query(model, output, {}, Event{{{point, data.value(w.alternative)}}});
      break;
    }
    case DefinitionId::kSinglePointIntervention:
    case DefinitionId::kSinglePointUniversal: {
      const std::string point = DataPointName(w.coordinate);
      num = Query(model, output, {{point, data.value(w.value)}});
      den = Query(model, output, {{point, data.value(w.alternative)}});
      break;
    }
  }
  return RatioBound::Of(num, den);
}

}  // namespace dpcausal
