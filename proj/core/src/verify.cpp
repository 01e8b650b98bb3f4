#include "petro/verify.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace petro::verify {

using classify::Cmp;
using classify::negate_constraint;

CaseExplosionError::CaseExplosionError(std::uint64_t explored_, std::uint64_t ceiling_)
    : std::runtime_error("coverage case split exceeded the ceiling of " +
                         std::to_string(ceiling_) + " cases (explored " +
                         std::to_string(explored_) + ")"),
      explored(explored_),
      ceiling(ceiling_) {}

// ---------------------------------------------------------------------------
// Fourier-Motzkin over the normalized simplex (2 free variables)
// ---------------------------------------------------------------------------

namespace {

constexpr int kTotal = 100;  // normalized axis sum

// a*x + b*y REL c  after substituting z = 100 - x - y
struct Row {
  enum class Rel : std::uint8_t { le, lt, eq };
  Rational a, b, c;
  Rel rel = Rel::le;
};

Row to_row(const LinearConstraint& constraint, const std::array<std::string, 3>& axes) {
  std::array<Rational, 3> coef{};
  for (const auto& [var, value] : constraint.terms) {
    auto it = std::find(axes.begin(), axes.end(), var);
    if (it == axes.end()) {
      throw std::logic_error("constraint references non-axis variable '" + var + "'");
    }
    coef[static_cast<std::size_t>(it - axes.begin())] += value;
  }
  Rational rhs = constraint.relative ? constraint.rhs * kTotal : constraint.rhs;

  Row row;
  row.a = coef[0] - coef[2];
  row.b = coef[1] - coef[2];
  row.c = rhs - Rational(kTotal) * coef[2];
  switch (constraint.cmp) {
    case Cmp::le:
      row.rel = Row::Rel::le;
      break;
    case Cmp::lt:
      row.rel = Row::Rel::lt;
      break;
    case Cmp::eq:
      row.rel = Row::Rel::eq;
      break;
    case Cmp::ge:
    case Cmp::gt:
      row.a = -row.a;
      row.b = -row.b;
      row.c = -row.c;
      row.rel = constraint.cmp == Cmp::ge ? Row::Rel::le : Row::Rel::lt;
      break;
  }
  return row;
}

// var <= / >= alpha + beta * other
struct Bound {
  Rational alpha, beta;
  bool strict = false;
};

struct FmElimination {
  int var = 0;  // 0 = x, 1 = y
  std::vector<Bound> uppers, lowers;
};

struct EqSubstitution {
  int var = 0;  // var = coeff * other + constant
  Rational coeff, constant;
};

// Picks a value inside exact numeric bounds; nullopt when the interval is
// empty (cannot happen after a consistent elimination, kept as a guard).
std::optional<Rational> pick_value(const std::vector<std::pair<Rational, bool>>& lowers,
                                   const std::vector<std::pair<Rational, bool>>& uppers) {
  std::optional<std::pair<Rational, bool>> lo, hi;
  for (const auto& [value, strict] : lowers) {
    if (!lo || value > lo->first || (value == lo->first && strict)) lo = {value, strict};
  }
  for (const auto& [value, strict] : uppers) {
    if (!hi || value < hi->first || (value == hi->first && strict)) hi = {value, strict};
  }
  if (!lo && !hi) return Rational(0);
  if (!hi) return lo->second ? lo->first + 1 : lo->first;
  if (!lo) return hi->second ? hi->first - 1 : hi->first;
  if (lo->first < hi->first) return (lo->first + hi->first) / 2;
  if (lo->first == hi->first && !lo->second && !hi->second) return lo->first;
  return std::nullopt;
}

bool row_constant_holds(const Row& row) {
  switch (row.rel) {
    case Row::Rel::le:
      return row.c >= 0;
    case Row::Rel::lt:
      return row.c > 0;
    case Row::Rel::eq:
      return row.c == 0;
  }
  return false;
}

std::optional<std::array<Rational, 2>> solve_rows(std::vector<Row> rows) {
  std::vector<EqSubstitution> eq_steps;
  std::array<bool, 2> eliminated{false, false};

  // Equalities are eliminated by substitution first, which keeps the
  // strictness bookkeeping of the elimination itself trivial.
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].rel != Row::Rel::eq) continue;
      Row eq = rows[i];
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
      if (eq.a == 0 && eq.b == 0) {
        if (eq.c != 0) return std::nullopt;
      } else {
        int var = eq.a != 0 ? 0 : 1;
        Rational pivot = var == 0 ? eq.a : eq.b;
        Rational other = var == 0 ? eq.b : eq.a;
        EqSubstitution sub{var, -other / pivot, eq.c / pivot};
        for (Row& row : rows) {
          Rational coef = var == 0 ? row.a : row.b;
          if (coef == 0) continue;
          Rational& other_coef = var == 0 ? row.b : row.a;
          other_coef += coef * sub.coeff;
          row.c -= coef * sub.constant;
          (var == 0 ? row.a : row.b) = 0;
        }
        eq_steps.push_back(std::move(sub));
        eliminated[static_cast<std::size_t>(var)] = true;
      }
      progress = true;
      break;
    }
  }

  // Fourier-Motzkin elimination, y then x.
  std::vector<FmElimination> fm_steps;
  for (int var : {1, 0}) {
    if (eliminated[static_cast<std::size_t>(var)]) continue;
    FmElimination step;
    step.var = var;
    std::vector<Row> rest;
    for (const Row& row : rows) {
      Rational coef = var == 0 ? row.a : row.b;
      Rational other_coef = var == 0 ? row.b : row.a;
      if (coef == 0) {
        rest.push_back(row);
        continue;
      }
      Bound bound{row.c / coef, -other_coef / coef, row.rel == Row::Rel::lt};
      if (coef > 0) {
        step.uppers.push_back(std::move(bound));
      } else {
        step.lowers.push_back(std::move(bound));
      }
    }
    for (const Bound& lo : step.lowers) {
      for (const Bound& up : step.uppers) {
        // lo.alpha + lo.beta*other  <=  up.alpha + up.beta*other
        Row combined;
        Rational other_coef = lo.beta - up.beta;
        (var == 1 ? combined.a : combined.b) = other_coef;
        combined.c = up.alpha - lo.alpha;
        combined.rel = (lo.strict || up.strict) ? Row::Rel::lt : Row::Rel::le;
        rest.push_back(std::move(combined));
      }
    }
    rows = std::move(rest);
    fm_steps.push_back(std::move(step));
    eliminated[static_cast<std::size_t>(var)] = true;
  }

  for (const Row& row : rows) {
    if (row.a != 0 || row.b != 0) {
      throw std::logic_error("elimination left a non-constant row");
    }
    if (!row_constant_holds(row)) return std::nullopt;
  }

  // Back-substitution, in reverse elimination order.
  std::array<Rational, 2> point{Rational(0), Rational(0)};
  for (auto it = fm_steps.rbegin(); it != fm_steps.rend(); ++it) {
    const Rational& other = point[static_cast<std::size_t>(1 - it->var)];
    std::vector<std::pair<Rational, bool>> lowers, uppers;
    for (const Bound& b : it->lowers) lowers.emplace_back(b.alpha + b.beta * other, b.strict);
    for (const Bound& b : it->uppers) uppers.emplace_back(b.alpha + b.beta * other, b.strict);
    auto value = pick_value(lowers, uppers);
    if (!value) return std::nullopt;
    point[static_cast<std::size_t>(it->var)] = *value;
  }
  for (auto it = eq_steps.rbegin(); it != eq_steps.rend(); ++it) {
    const Rational& other = point[static_cast<std::size_t>(1 - it->var)];
    point[static_cast<std::size_t>(it->var)] = it->coeff * other + it->constant;
  }
  return point;
}

bool point_satisfies(const Point& p, const LinearConstraint& c,
                     const std::array<std::string, 3>& axes) {
  Rational lhs(0);
  for (const auto& [var, coeff] : c.terms) {
    auto it = std::find(axes.begin(), axes.end(), var);
    lhs += coeff * p[static_cast<std::size_t>(it - axes.begin())];
  }
  Rational rhs = c.relative ? c.rhs * (p[0] + p[1] + p[2]) : c.rhs;
  switch (c.cmp) {
    case Cmp::lt:
      return lhs < rhs;
    case Cmp::le:
      return lhs <= rhs;
    case Cmp::eq:
      return lhs == rhs;
    case Cmp::ge:
      return lhs >= rhs;
    case Cmp::gt:
      return lhs > rhs;
  }
  return false;
}

}  // namespace

std::optional<Point> feasible(const ConstraintSystem& system) {
  std::vector<Row> rows;
  rows.reserve(system.constraints.size() + 3);
  for (const auto& c : system.constraints) rows.push_back(to_row(c, system.axes));
  // simplex domain: x >= 0, y >= 0, z >= 0 (i.e. x + y <= 100)
  rows.push_back({Rational(-1), Rational(0), Rational(0), Row::Rel::le});
  rows.push_back({Rational(0), Rational(-1), Rational(0), Row::Rel::le});
  rows.push_back({Rational(1), Rational(1), Rational(kTotal), Row::Rel::le});

  auto solved = solve_rows(std::move(rows));
  if (!solved) return std::nullopt;

  Point witness{(*solved)[0], (*solved)[1], Rational(kTotal) - (*solved)[0] - (*solved)[1]};
  for (const auto& c : system.constraints) {
    if (!point_satisfies(witness, c, system.axes)) {
      throw std::logic_error("feasibility witness fails exact re-check: " +
                             classify::render_constraint(c));
    }
  }
  if (witness[0] < 0 || witness[1] < 0 || witness[2] < 0) {
    throw std::logic_error("feasibility witness left the simplex");
  }
  return witness;
}

// ---------------------------------------------------------------------------
// Disjointness
// ---------------------------------------------------------------------------

void check_disjoint(const Diagram& diagram, VerificationReport& report) {
  for (const auto& field : diagram.fields) {
    ConstraintSystem system{diagram.axes, field.constraints};
    if (!feasible(system)) report.infeasible_fields.push_back(field.name);
  }
  report.disjoint_ok = true;
  for (std::size_t i = 0; i < diagram.fields.size(); ++i) {
    for (std::size_t j = i + 1; j < diagram.fields.size(); ++j) {
      ConstraintSystem joint{diagram.axes, diagram.fields[i].constraints};
      joint.constraints.insert(joint.constraints.end(),
                               diagram.fields[j].constraints.begin(),
                               diagram.fields[j].constraints.end());
      if (auto witness = feasible(joint)) {
        report.disjoint_ok = false;
        report.violations.push_back(
            {diagram.fields[i].name, diagram.fields[j].name, *witness});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

namespace {

struct CoverageSearch {
  const Diagram& diagram;
  const VerifyOptions& options;
  VerificationReport& report;
  std::vector<LinearConstraint> negated;

  // The complement of each field is a disjunction of negated constraints;
  // their product is explored depth first, pruning any branch whose partial
  // conjunction is already infeasible.
  void dfs(std::size_t field_index) {
    ++report.cases_explored;
    if (report.cases_explored > options.case_ceiling) {
      throw CaseExplosionError(report.cases_explored, options.case_ceiling);
    }
    auto witness = feasible({diagram.axes, negated});
    if (!witness) return;
    if (field_index == diagram.fields.size()) {
      report.coverage_ok = false;
      if (report.gaps.size() < options.max_witnesses) report.gaps.push_back({*witness});
      return;
    }
    for (const auto& constraint : diagram.fields[field_index].constraints) {
      for (const auto& neg : negate_constraint(constraint)) {
        negated.push_back(neg);
        dfs(field_index + 1);
        negated.pop_back();
      }
    }
  }
};

}  // namespace

void check_coverage(const Diagram& diagram, VerificationReport& report,
                    const VerifyOptions& options) {
  report.coverage_ok = true;
  CoverageSearch search{diagram, options, report};
  search.dfs(0);
}

VerificationReport verify_diagram(const Diagram& diagram, const VerifyOptions& options) {
  VerificationReport report;
  report.diagram = diagram.name;
  report.stamp = classify::diagram_stamp(diagram);
  check_disjoint(diagram, report);
  check_coverage(diagram, report, options);
  return report;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::json point_json(const Point& p) {
  return nlohmann::json::array(
      {to_ratio_string(p[0]), to_ratio_string(p[1]), to_ratio_string(p[2])});
}

}  // namespace

std::string report_to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& report : reports) {
    nlohmann::json j;
    j["diagram"] = report.diagram;
    j["stamp"] = report.stamp;
    j["infeasible_fields"] = report.infeasible_fields;
    j["disjointness"] = report.disjoint_ok ? "ok" : "violated";
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : report.violations) {
      violations.push_back({{"field_a", v.field_a},
                            {"field_b", v.field_b},
                            {"witness", point_json(v.witness)}});
    }
    j["violations"] = violations;
    j["coverage"] = report.coverage_ok ? "ok" : "gaps";
    nlohmann::json gaps = nlohmann::json::array();
    for (const auto& g : report.gaps) gaps.push_back({{"witness", point_json(g.witness)}});
    j["gaps"] = gaps;
    j["cases_explored"] = report.cases_explored;
    j["ok"] = report.ok();
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace petro::verify
