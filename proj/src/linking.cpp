#include "kclink/linking.hpp"

#include <cmath>
#include <numbers>

#include "kclink/compensated_sum.hpp"

namespace kclink {

namespace {

// Relative slack for u^2(x) - u^2(y) when the lab alone determines the
// reference value and the two are equal up to rounding.
constexpr double kRadicandSlack = 1e-12;

// Quadratic form of one linking lab's residuals (da, db) with the inverse of
// its 2x2 covariance matrix.
double linking_term(const LabResult& lab, double da, double db) {
  const double va = *lab.u_a * *lab.u_a;
  const double vb = *lab.u_b * *lab.u_b;
  const double cov = lab.covariance();
  const double det = va * vb - cov * cov;
  return (vb * da * da - 2.0 * cov * da * db + va * db * db) / det;
}

double lab_term(const LabResult& lab, double y_a, double y_b) {
  if (lab.is_linking()) return linking_term(lab, *lab.value_a - y_a, *lab.value_b - y_b);
  if (lab.value_a) {
    const double r = (*lab.value_a - y_a) / *lab.u_a;
    return r * r;
  }
  const double r = (*lab.value_b - y_b) / *lab.u_b;
  return r * r;
}

}  // namespace

const DegreeOfEquivalence* LinkingResult::find_doe(std::string_view label,
                                                   Standard standard) const {
  for (const auto& doe : does) {
    if (doe.label == label && doe.standard == standard) return &doe;
  }
  return nullptr;
}

AuxQuantities compute_aux(const ComparisonDataset& dataset) {
  CompensatedSum a, b, c, s1, s2;
  for (const LabResult& lab : dataset.labs()) {
    if (lab.is_linking()) {
      const double va = *lab.u_a * *lab.u_a;
      const double vb = *lab.u_b * *lab.u_b;
      const double cov = lab.covariance();
      const double det = va * vb - cov * cov;
      if (!(det > 0.0)) {
        throw InconsistencyError("lab '" + lab.label + "' has a singular covariance matrix");
      }
      a += vb / det;
      b += va / det;
      c += cov / det;
      s1 += (vb * *lab.value_a - cov * *lab.value_b) / det;
      s2 += (va * *lab.value_b - cov * *lab.value_a) / det;
    } else if (lab.value_a) {
      const double w = 1.0 / (*lab.u_a * *lab.u_a);
      a += w;
      s1 += w * *lab.value_a;
    } else {
      const double w = 1.0 / (*lab.u_b * *lab.u_b);
      b += w;
      s2 += w * *lab.value_b;
    }
  }
  AuxQuantities aux{a.value(), b.value(), c.value(), s1.value(), s2.value()};
  if (!(aux.a > 0.0 && aux.b > 0.0 && aux.determinant() > 0.0)) {
    throw InconsistencyError("auxiliary sums are not positive definite (a*b - c^2 <= 0)");
  }
  return aux;
}

KcrvEstimate compute_kcrv(const AuxQuantities& aux) {
  const double det = aux.determinant();
  if (!(aux.a > 0.0 && aux.b > 0.0 && det > 0.0)) {
    throw InconsistencyError("auxiliary sums are not positive definite (a*b - c^2 <= 0)");
  }
  KcrvEstimate k;
  if (aux.c == 0.0) {
    // Decoupled groups: the plain weighted means, so each side depends only on
    // its own data, bit for bit.
    k.y_a = aux.s1 / aux.a;
    k.y_b = aux.s2 / aux.b;
    k.u_a = 1.0 / std::sqrt(aux.a);
    k.u_b = 1.0 / std::sqrt(aux.b);
    return k;
  }
  k.y_a = (aux.b * aux.s1 + aux.c * aux.s2) / det;
  k.y_b = (aux.c * aux.s1 + aux.a * aux.s2) / det;
  k.u_a = std::sqrt(aux.b / det);
  k.u_b = std::sqrt(aux.a / det);
  k.cov_ab = aux.c / det;
  k.r_tilde = aux.c / std::sqrt(aux.a * aux.b);
  return k;
}

std::vector<DegreeOfEquivalence> compute_doe(const ComparisonDataset& dataset,
                                             const KcrvEstimate& kcrv) {
  std::vector<DegreeOfEquivalence> out;
  out.reserve(dataset.total_n());
  for (Standard standard : {Standard::A, Standard::B}) {
    const double y = kcrv.value(standard);
    const double uy2 = kcrv.uncertainty(standard) * kcrv.uncertainty(standard);
    for (const LabResult& lab : dataset.labs()) {
      if (!lab.measures(standard)) continue;
      const double ux = lab.uncertainty(standard);
      // Cov(y, x) = u^2(y) for every x of the same standard, hence the minus.
      double radicand = ux * ux - uy2;
      if (radicand < 0.0) {
        if (radicand < -kRadicandSlack * ux * ux) {
          throw InconsistencyError("negative variance for the degree of equivalence of lab '" +
                                   lab.label + "' (standard " + std::string(to_string(standard)) +
                                   ")");
        }
        radicand = 0.0;
      }
      out.push_back({lab.label, standard, lab.value(standard) - y, std::sqrt(radicand)});
    }
  }
  return out;
}

double chi_square(const ComparisonDataset& dataset, double y_a, double y_b) {
  CompensatedSum sum;
  for (const LabResult& lab : dataset.labs()) sum += lab_term(lab, y_a, y_b);
  return sum.value();
}

ConformityReport compute_q2(const ComparisonDataset& dataset, const KcrvEstimate& kcrv) {
  ConformityReport report;
  report.q2 = chi_square(dataset, kcrv.y_a, kcrv.y_b);
  report.dof = static_cast<int>(dataset.total_n()) - 2;
  if (report.dof > 0) {
    report.ratio = report.q2 / report.dof;
    report.passed = report.q2 <= static_cast<double>(report.dof);
  } else {
    report.passed = report.q2 <= kZeroDofTolerance;
  }
  return report;
}

std::vector<LabContribution> q2_contributions(const ComparisonDataset& dataset,
                                              const KcrvEstimate& kcrv) {
  std::vector<LabContribution> out;
  out.reserve(dataset.labs().size());
  for (const LabResult& lab : dataset.labs()) {
    out.push_back({lab.label, lab_term(lab, kcrv.y_a, kcrv.y_b)});
  }
  return out;
}

double posterior_density(double y_a, double y_b, const KcrvEstimate& kcrv) {
  const double r = kcrv.r_tilde;
  const double one_minus_r2 = 1.0 - r * r;
  const double za = (y_a - kcrv.y_a) / kcrv.u_a;
  const double zb = (y_b - kcrv.y_b) / kcrv.u_b;
  const double quad = (za * za - 2.0 * r * za * zb + zb * zb) / one_minus_r2;
  const double norm = 2.0 * std::numbers::pi * kcrv.u_a * kcrv.u_b * std::sqrt(one_minus_r2);
  return std::exp(-0.5 * quad) / norm;
}

LinkingResult link(const ComparisonDataset& dataset) {
  LinkingResult result;
  result.aux = compute_aux(dataset);
  result.kcrv = compute_kcrv(result.aux);
  result.does = compute_doe(dataset, result.kcrv);
  result.conformity = compute_q2(dataset, result.kcrv);
  result.warnings = dataset.warnings();
  if (result.conformity.dof <= 0) {
    result.warnings.emplace_back(
        "no degrees of freedom (N = 2): the conformity test only checks q^2 = 0");
  }
  return result;
}

}  // namespace kclink
