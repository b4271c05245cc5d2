#pragma once

// Carrier and support of Delta, and the hypothesis checklists that predict
// whether X_alpha is dense in H(b) within the supported symbol families.

#include <cmath>
#include <string>
#include <vector>

#include "hbspace/circle_sets.hpp"
#include "hbspace/symbol.hpp"

namespace hbspace {

inline constexpr double carrier_epsilon = 1e-9;

struct CarrierSupport {
  CircleSet carrier = CircleSet::empty();  // E = {Delta > 0}
  CircleSet support = CircleSet::empty();  // F = closed support of Delta
  bool declared = false;
};

/// E and F from a declared carrier, or from grid runs of {Delta > 1e-9}.
inline CarrierSupport carrier_and_support(const DeltaWeight& d) {
  CarrierSupport out;
  if (d.declared) {
    out.declared = true;
    out.carrier = d.carrier;
    switch (d.carrier.kind()) {
      case CircleSet::Kind::arcs:
      case CircleSet::Kind::cantor: out.support = d.carrier; break;
      case CircleSet::Kind::cantor_complement: out.support = CircleSet::full(); break;
    }
    return out;
  }
  const std::size_t M = d.size();
  const double h = 1.0 / static_cast<double>(M);
  std::vector<bool> on(M), filled(M);
  for (std::size_t j = 0; j < M; ++j) on[j] = d.delta[j] > carrier_epsilon;
  for (std::size_t j = 0; j < M; ++j)
    filled[j] = on[j] || (on[(j + M - 1) % M] && on[(j + 1) % M]);
  auto cells = [&](const std::vector<bool>& mask) {
    std::vector<Arc> arcs;
    for (std::size_t j = 0; j < M; ++j)
      if (mask[j]) arcs.push_back({(static_cast<double>(j) - 0.5) * h, (static_cast<double>(j) + 0.5) * h});
    return CircleSet::from_arcs(arcs);
  };
  out.carrier = cells(on);
  out.support = cells(filled);
  return out;
}

// ---------------------------------------------------------------------------
// Corollary checklists

enum class Prediction { dense, not_dense, indeterminate, outside_family };

inline const char* to_string(Prediction p) {
  switch (p) {
    case Prediction::dense: return "dense";
    case Prediction::not_dense: return "not-dense";
    case Prediction::indeterminate: return "indeterminate";
    case Prediction::outside_family: return "outside-family";
  }
  return "?";
}

struct ChecklistItem {
  std::string name;
  bool held = false;
  std::string detail;
};

struct CorollaryVerdict {
  bool hyp_2_1 = false;
  bool hyp_2_3 = false;
  bool recipe_2_4 = false;
  bool conflict = false;
  Prediction prediction = Prediction::indeterminate;
  std::vector<ChecklistItem> checklist;
};

struct LogIntegrability {
  std::vector<double> values;  // trapezoid values at M, 2M, 4M
  bool divergent = false;
};

/// int_E log(1 - |b0|^2) dm by the trapezoid rule with floor clamp, refined twice.
inline LogIntegrability log_integrability(const SymbolSpec& spec, const CircleSet& E, std::size_t M) {
  LogIntegrability out;
  const double cs2 = std::norm(spec.scale);
  const double floor_log = std::log(log_floor_value);
  for (std::size_t m = M; m <= 4 * M; m *= 2) {
    std::vector<double> v(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(m);
      if (!E.contains(t)) continue;
      const double w2 = spec.outer.one_minus_square(t);
      const double d2 = cs2 == 1.0 ? w2 : 1.0 - cs2 * (1.0 - w2);
      v[j] = d2 > log_floor_value ? std::log(d2) : floor_log;
    }
    out.values.push_back(pairwise_sum(v) / static_cast<double>(m));
  }
  out.divergent = out.values[2] < -50.0 && out.values[2] < out.values[1] && out.values[1] < out.values[0];
  return out;
}

namespace detail {

// Mass of a Cantor part whose stage arcs (depth <= 12) have midpoints outside the set.
inline double cantor_mass_outside(const CantorPart& c, const CircleSet& S) {
  const int depth = std::min(c.support.depth, 12);
  const std::vector<Arc> arcs = cantor_arcs(c.support, depth);
  const double each = c.mass / static_cast<double>(arcs.size());
  std::vector<double> m;
  for (const Arc& a : arcs)
    if (!S.contains(a.midpoint())) m.push_back(each);
  return pairwise_sum(m);
}

}  // namespace detail

inline CorollaryVerdict corollary_classifier(const SymbolSpec& spec, double alpha, std::size_t M = 1024) {
  if (!(alpha > 0.0)) throw DomainError("corollary classification needs alpha > 0");
  spec.validate();
  CorollaryVerdict v;
  const SymbolSample s = symbol_eval(spec, M);
  const CarrierSupport cs = carrier_and_support(s.delta);
  const CircleSet& E = cs.carrier;
  const CircleSet& F = cs.support;
  const double measure_E = E.measure();

  // HYP-2.1
  const BCSubsetFlag flag = contains_bc_subset_flag(E);
  const bool outside = E.measure() > 0.0 && flag.answer == TriState::outside_family;
  v.hyp_2_1 = measure_E > 0.0 && flag.answer == TriState::no;
  v.checklist.push_back({"HYP-2.1 carrier has positive measure", measure_E > 0.0,
                         "|E| = " + std::to_string(measure_E)});
  v.checklist.push_back({"HYP-2.1 carrier contains no positive-measure Beurling-Carleson set",
                         flag.answer == TriState::no, flag.explanation});

  // HYP-2.3
  const MeasureDecomposition dec = decompose_measure(spec.singular);
  std::vector<double> off_f;
  for (const CantorPart& c : dec.k_candidate.cantor_parts) off_f.push_back(detail::cantor_mass_outside(c, F));
  const double k_off_f = pairwise_sum(off_f);
  v.hyp_2_3 = k_off_f > 0.0;
  v.checklist.push_back({"HYP-2.3 K-candidate mass off the support F", v.hyp_2_3,
                         "nu_K-candidate(T \\ F) ~ " + std::to_string(k_off_f)});

  // RECIPE-2.4
  bool pieces_ok = true;
  std::string pieces = "no carrier";
  switch (E.kind()) {
    case CircleSet::Kind::arcs:
      pieces = E.is_empty() ? "empty carrier" : std::to_string(E.arcs().size()) + " arcs, each Beurling-Carleson";
      break;
    case CircleSet::Kind::cantor_complement:
      pieces = "countably many gap arcs, each Beurling-Carleson";
      break;
    case CircleSet::Kind::cantor: {
      const EntropyVerdict ev = classify_cantor_entropy(E.schedule());
      pieces_ok = measure_E > 0.0 && ev.classification != EntropyClass::divergent;
      pieces = ev.reason;
      break;
    }
  }
  v.checklist.push_back({"RECIPE-2.4 (i) carrier is a union of positive-measure Beurling-Carleson sets",
                         pieces_ok, pieces});
  bool integrable = true;
  if (!E.is_empty()) {
    const LogIntegrability li = log_integrability(spec, E, M);
    integrable = !li.divergent;
    v.checklist.push_back({"RECIPE-2.4 (i) log(1 - |b0|^2) integrable on the carrier", integrable,
                           "trapezoid values " + std::to_string(li.values[0]) + ", " +
                               std::to_string(li.values[1]) + ", " + std::to_string(li.values[2])});
  } else {
    v.checklist.push_back({"RECIPE-2.4 (i) log(1 - |b0|^2) integrable on the carrier", true, "empty carrier"});
  }
  std::vector<double> off_e;
  for (const CantorPart& c : dec.k_candidate.cantor_parts) off_e.push_back(detail::cantor_mass_outside(c, E));
  const double k_off_e = pairwise_sum(off_e);
  v.checklist.push_back({"RECIPE-2.4 (ii) K-candidate vanishes off the carrier", k_off_e == 0.0,
                         "nu_K-candidate(T \\ E) ~ " + std::to_string(k_off_e)});
  v.checklist.push_back({"RECIPE-2.4 (iii) C-part arbitrary", true,
                         std::to_string(dec.c_part.atoms.size()) + " atoms, " +
                             std::to_string(dec.c_part.cantor_parts.size()) + " Cantor parts"});
  v.checklist.push_back({"RECIPE-2.4 (iv) Blaschke product finite", true,
                         std::to_string(spec.blaschke_zeros.size()) + " zeros"});
  v.recipe_2_4 = pieces_ok && integrable && k_off_e == 0.0;

  if (outside) {
    v.prediction = Prediction::outside_family;
    return v;
  }
  v.conflict = v.recipe_2_4 && (v.hyp_2_1 || v.hyp_2_3);
  if (v.conflict)
    v.prediction = Prediction::indeterminate;
  else if (v.recipe_2_4)
    v.prediction = Prediction::dense;
  else if (v.hyp_2_1 || v.hyp_2_3)
    v.prediction = Prediction::not_dense;
  else
    v.prediction = Prediction::indeterminate;
  return v;
}

}  // namespace hbspace
