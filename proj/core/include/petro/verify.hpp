#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "petro/classify.hpp"
#include "petro/rational.hpp"

namespace petro::verify {

using classify::Diagram;
using classify::DiagramField;
using classify::LinearConstraint;

// ---------------------------------------------------------------------------
// Exact feasibility over the normalized simplex
// ---------------------------------------------------------------------------

// Constraints over a fixed axis triple with the implicit domain
//   x, y, z >= 0,  x + y + z = 100.
// Relative constraints are resolved against the normalized total 100.
struct ConstraintSystem {
  std::array<std::string, 3> axes;
  std::vector<LinearConstraint> constraints;
};

using Point = std::array<Rational, 3>;

// Exact decision by Fourier-Motzkin elimination with strict/non-strict
// bookkeeping. A system feasible only on an excluded open boundary is
// Infeasible. A returned witness satisfies every constraint exactly.
std::optional<Point> feasible(const ConstraintSystem& system);

// ---------------------------------------------------------------------------
// Partition properties
// ---------------------------------------------------------------------------

struct PairViolation {
  std::string field_a;
  std::string field_b;
  Point witness;  // lies in both fields
};

struct CoverageGap {
  Point witness;  // lies in no field
};

struct VerificationReport {
  std::string diagram;
  std::string stamp;  // content hash of the verified diagram
  std::vector<std::string> infeasible_fields;
  bool disjoint_ok = false;
  std::vector<PairViolation> violations;
  bool coverage_ok = false;
  std::vector<CoverageGap> gaps;
  std::uint64_t cases_explored = 0;

  bool ok() const { return disjoint_ok && coverage_ok && infeasible_fields.empty(); }
};

struct CaseExplosionError : std::runtime_error {
  CaseExplosionError(std::uint64_t explored, std::uint64_t ceiling);
  std::uint64_t explored;
  std::uint64_t ceiling;
};

struct VerifyOptions {
  std::uint64_t case_ceiling = 1'000'000;
  std::size_t max_witnesses = 100;
};

// Pairwise disjointness: for every unordered field pair, decides feasibility
// of the conjoined system; ok iff all pairs are infeasible.
void check_disjoint(const Diagram& diagram, VerificationReport& report);

// Exhaustive coverage: decides emptiness of simplex \ union(fields) by exact
// case split over negated constraints, each case decided by `feasible`.
void check_coverage(const Diagram& diagram, VerificationReport& report,
                    const VerifyOptions& options = {});

VerificationReport verify_diagram(const Diagram& diagram,
                                  const VerifyOptions& options = {});

std::string report_to_json(const std::vector<VerificationReport>& reports);

}  // namespace petro::verify
