#pragma once

// Closed subsets of the circle (finite arc unions and Cantor-stage sets),
// singular measures carried by them, Beurling-Carleson entropy and the
// C/K decomposition of singular measures.
//
// Positions on the circle are measured in turns: t in [0, 1) stands for
// exp(2 pi i t). Arc lengths are normalized so that |T| = 1.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hbspace/core.hpp"

namespace hbspace {

/// Closed arc [start, end] in turns, 0 <= end - start <= 1. Wraps through 0 when end > 1.
struct Arc {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool contains(double t, double tol = 0.0) const {
    if (length() >= 1.0) return true;
    const double off = wrap_turn(t - start);
    return off <= length() + tol || off >= 1.0 - tol;
  }
  double midpoint() const { return wrap_turn(0.5 * (start + end)); }
  /// Circular distance from t to the arc (0 inside).
  double distance(double t) const {
    if (contains(t)) return 0.0;
    return std::min(turn_distance(t, start), turn_distance(t, end));
  }
};

// ---------------------------------------------------------------------------
// Cantor-stage sets

/// Generation rule for a symmetric Cantor-type set inside a base arc.
///
/// At stage k every surviving arc of length l is cut into m_k equal subarcs
/// separated by m_k - 1 equal gaps; the gaps take the fraction rho_k of l.
///  - fixed:        rho_k = ratio,                m_k = 2
///  - power:        rho_k = ratio * k^(-exponent), m_k = 2
///  - superbranch:  rho_k = ratio,                m_k - 1 = exp(branch_scale * growth^k)
struct CantorSchedule {
  enum class Kind { fixed, power, superbranch };

  Kind kind = Kind::fixed;
  double ratio = 1.0 / 3.0;
  double exponent = 0.0;
  double growth = 2.0;
  double branch_scale = 1.0;
  Arc base{0.0, 1.0};
  int depth = 12;

  static CantorSchedule middle_thirds(Arc base = {0.0, 1.0}, int depth = 12) {
    CantorSchedule s;
    s.base = base;
    s.depth = depth;
    return s;
  }

  static CantorSchedule power_law(double rho0, double p, Arc base = {0.0, 1.0}, int depth = 12) {
    CantorSchedule s;
    s.kind = Kind::power;
    s.ratio = rho0;
    s.exponent = p;
    s.base = base;
    s.depth = depth;
    return s;
  }

  static CantorSchedule super_branching(double rho, double q, double c, Arc base = {0.0, 1.0},
                                        int depth = 12) {
    CantorSchedule s;
    s.kind = Kind::superbranch;
    s.ratio = rho;
    s.growth = q;
    s.branch_scale = c;
    s.base = base;
    s.depth = depth;
    return s;
  }

  void validate() const {
    if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("cantor ratio must lie in (0, 1)");
    if (!(base.length() > 0.0 && base.length() <= 1.0))
      throw DomainError("cantor base arc must have length in (0, 1]");
    if (depth < 0) throw DomainError("cantor depth must be nonnegative");
    if (kind == Kind::power && !(exponent >= 0.0)) throw DomainError("power exponent must be >= 0");
    if (kind == Kind::superbranch && !(growth > 1.0 && branch_scale > 0.0))
      throw DomainError("superbranch schedule needs growth > 1 and branch_scale > 0");
  }

  bool binary() const { return kind != Kind::superbranch; }

  double removed_fraction(int k) const {
    if (kind == Kind::power) return ratio * std::pow(static_cast<double>(k), -exponent);
    return ratio;
  }

  /// log(m_k - 1), the log of the number of gaps cut into each arc at stage k.
  double log_gaps_per_arc(int k) const {
    if (kind == Kind::superbranch) return branch_scale * std::pow(growth, k);
    return 0.0;
  }

  /// log m_k.
  double log_branching(int k) const {
    const double x = log_gaps_per_arc(k);
    return x + std::log1p(std::exp(-x));
  }
};

/// Per-stage bookkeeping, all lengths in log form so that astronomically small
/// gaps stay representable.
struct CantorStage {
  int stage = 0;
  double log_arc_length = 0.0;   // surviving arc length after this stage
  double log_arc_count = 0.0;
  double log_gap_length = 0.0;   // gaps created at this stage
  double measure_before = 0.0;   // |E_{k-1}|
  double measure_after = 0.0;    // |E_k|
  double contribution = 0.0;     // sum over the new gaps of |A| log(1/|A|)
};

inline std::vector<CantorStage> cantor_stages(const CantorSchedule& s, int depth) {
  s.validate();
  std::vector<CantorStage> out;
  out.reserve(static_cast<std::size_t>(depth));
  double log_len = std::log(s.base.length());
  double log_count = 0.0;
  double measure = s.base.length();
  for (int k = 1; k <= depth; ++k) {
    const double rho = s.removed_fraction(k);
    CantorStage st;
    st.stage = k;
    st.measure_before = measure;
    st.log_gap_length = std::log(rho) + log_len - s.log_gaps_per_arc(k);
    st.contribution = measure * rho * (-st.log_gap_length);
    log_len = std::log1p(-rho) + log_len - s.log_branching(k);
    log_count += s.log_branching(k);
    measure *= (1.0 - rho);
    st.log_arc_length = log_len;
    st.log_arc_count = log_count;
    st.measure_after = measure;
    out.push_back(st);
  }
  return out;
}

/// Lebesgue measure of the limit set.
inline double cantor_limit_measure(const CantorSchedule& s) {
  s.validate();
  if (s.kind != CantorSchedule::Kind::power || s.exponent <= 1.0) return 0.0;
  // sum log(1 - rho_k) to K, tail approximated by -rho0 K^(1-p)/(p-1)
  constexpr int K = 200000;
  std::vector<double> logs(K);
  for (int k = 1; k <= K; ++k) logs[k - 1] = std::log1p(-s.removed_fraction(k));
  const double tail = -s.ratio * std::pow(static_cast<double>(K), 1.0 - s.exponent) / (s.exponent - 1.0);
  return s.base.length() * std::exp(pairwise_sum(logs) + tail);
}

enum class EntropyClass { finite, convergent, divergent };

inline const char* to_string(EntropyClass c) {
  switch (c) {
    case EntropyClass::finite: return "finite";
    case EntropyClass::convergent: return "convergent";
    case EntropyClass::divergent: return "divergent";
  }
  return "?";
}

struct EntropyVerdict {
  EntropyClass classification = EntropyClass::convergent;
  std::optional<double> limit;
  std::string reason;
};

inline double arc_entropy_term(double len) {
  return len > 0.0 && len < 1.0 ? len * std::log(1.0 / len) : 0.0;
}

/// Limit classification of the complement entropy of a Cantor-stage set,
/// decided from the schedule parameters rather than from partial sums.
inline EntropyVerdict classify_cantor_entropy(const CantorSchedule& s) {
  s.validate();
  const double L = s.base.length();
  const double outside = arc_entropy_term(1.0 - L);
  EntropyVerdict v;
  switch (s.kind) {
    case CantorSchedule::Kind::fixed: {
      const double rho = s.ratio;
      const double q = (1.0 - rho) / 2.0;
      v.classification = EntropyClass::convergent;
      v.limit = outside + L * (-std::log(rho * L) - std::log(q) * (1.0 - rho) / rho);
      v.reason = "fixed ratio: stage contributions decay geometrically with ratio 1 - rho";
      break;
    }
    case CantorSchedule::Kind::power: {
      const double p = s.exponent;
      if (p > 2.0) {
        v.classification = EntropyClass::convergent;
        v.reason = "rho_k ~ k^-p with p > 2: stage contributions ~ k^(1-p) are summable";
      } else if (p > 1.0) {
        v.classification = EntropyClass::divergent;
        v.reason = "rho_k ~ k^-p with 1 < p <= 2: stage contributions ~ k^(1-p) are not summable";
      } else if (p == 1.0) {
        v.classification = EntropyClass::divergent;
        v.reason = "rho_k = rho0/k with rho0 < 1: stage contributions ~ k^(-rho0) are not summable";
      } else if (p == 0.0) {
        v.classification = EntropyClass::convergent;
        const double rho = s.ratio;
        const double q = (1.0 - rho) / 2.0;
        v.limit = outside + L * (-std::log(rho * L) - std::log(q) * (1.0 - rho) / rho);
        v.reason = "constant ratio: geometric stage contributions";
      } else {
        v.classification = EntropyClass::convergent;
        v.reason = "rho_k ~ k^-p with p < 1: surviving measure decays like exp(-c k^(1-p))";
      }
      break;
    }
    case CantorSchedule::Kind::superbranch: {
      const double r = s.growth * (1.0 - s.ratio);
      v.classification = r >= 1.0 ? EntropyClass::divergent : EntropyClass::convergent;
      v.reason = "doubly exponential branching: stage contributions ~ (growth (1 - rho))^k, ratio " +
                 std::to_string(r);
      break;
    }
  }
  return v;
}

/// Membership of t (turns) in the stage-`depth` set of a binary schedule.
inline bool cantor_stage_contains(const CantorSchedule& s, double t, int depth) {
  if (!s.binary()) throw DomainError("membership is only realized for binary schedules");
  const double L = s.base.length();
  double x = wrap_turn(t - s.base.start);
  if (L < 1.0 && x > L) return false;
  x /= L;  // relative position in [0, 1]
  for (int k = 1; k <= depth; ++k) {
    const double rho = s.removed_fraction(k);
    const double a = (1.0 - rho) / 2.0;
    if (x <= a) {
      x /= a;
    } else if (x >= 1.0 - a) {
      x = (x - (1.0 - a)) / a;
    } else {
      return false;
    }
  }
  return true;
}

/// Distance in turns from t to the limit set (exact up to the stage-`depth` arc length).
inline double cantor_distance(const CantorSchedule& s, double t, int depth) {
  if (!s.binary()) throw DomainError("distance is only realized for binary schedules");
  const double L = s.base.length();
  const double x0 = wrap_turn(t - s.base.start);
  if (L < 1.0 && x0 > L) return std::min(x0 - L, 1.0 - x0);
  double lo = 0.0;  // current arc [lo, lo + len] in absolute offset units
  double len = L;
  for (int k = 1; k <= depth; ++k) {
    const double rho = s.removed_fraction(k);
    const double a = (1.0 - rho) / 2.0 * len;
    const double x = x0 - lo;
    if (x <= a) {
      len = a;
    } else if (x >= len - a) {
      lo += len - a;
      len = a;
    } else {
      double d = std::min(x - a, len - a - x);
      if (L >= 1.0) d = std::min(d, std::min(x0, 1.0 - x0));
      return d;
    }
  }
  return 0.0;
}

/// The 2^depth arcs of the stage-`depth` set of a binary schedule.
inline std::vector<Arc> cantor_arcs(const CantorSchedule& s, int depth) {
  if (!s.binary()) throw DomainError("arc lists are only realized for binary schedules");
  if (depth > 22) throw DomainError("cantor arc list depth capped at 22");
  std::vector<Arc> cur{{s.base.start, s.base.start + s.base.length()}};
  for (int k = 1; k <= depth; ++k) {
    const double rho = s.removed_fraction(k);
    std::vector<Arc> next;
    next.reserve(cur.size() * 2);
    for (const Arc& a : cur) {
      const double sub = (1.0 - rho) / 2.0 * a.length();
      next.push_back({a.start, a.start + sub});
      next.push_back({a.end - sub, a.end});
    }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// CircleSet

class CircleSet {
 public:
  enum class Kind { arcs, cantor, cantor_complement };

  static CircleSet empty() { return CircleSet(Kind::arcs); }
  static CircleSet full() { return from_arcs({{0.0, 1.0}}); }

  static CircleSet from_arcs(std::vector<Arc> arcs) {
    CircleSet out(Kind::arcs);
    std::vector<Arc> pieces;
    for (const Arc& a : arcs) {
      if (!(a.length() >= 0.0) || !std::isfinite(a.start) || !std::isfinite(a.end))
        throw DomainError("arc must satisfy start <= end");
      if (a.length() >= 1.0) {
        out.arcs_ = {{0.0, 1.0}};
        return out;
      }
      const double s = wrap_turn(a.start);
      const double e = s + a.length();
      if (e <= 1.0) {
        pieces.push_back({s, e});
      } else {
        pieces.push_back({s, 1.0});
        pieces.push_back({0.0, e - 1.0});
      }
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Arc& x, const Arc& y) { return x.start < y.start; });
    for (const Arc& p : pieces) {
      if (!out.arcs_.empty() && p.start <= out.arcs_.back().end)
        out.arcs_.back().end = std::max(out.arcs_.back().end, p.end);
      else
        out.arcs_.push_back(p);
    }
    return out;
  }

  static CircleSet cantor(const CantorSchedule& s) {
    s.validate();
    CircleSet out(Kind::cantor);
    out.schedule_ = s;
    return out;
  }

  static CircleSet cantor_complement(const CantorSchedule& s) {
    s.validate();
    CircleSet out(Kind::cantor_complement);
    out.schedule_ = s;
    return out;
  }

  Kind kind() const { return kind_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const CantorSchedule& schedule() const { return schedule_; }

  bool is_empty() const { return kind_ == Kind::arcs && arcs_.empty(); }
  bool is_full() const {
    return kind_ == Kind::arcs && arcs_.size() == 1 && arcs_[0].length() >= 1.0;
  }

  double measure() const {
    switch (kind_) {
      case Kind::arcs: {
        std::vector<double> l;
        for (const Arc& a : arcs_) l.push_back(a.length());
        return pairwise_sum(l);
      }
      case Kind::cantor: return cantor_limit_measure(schedule_);
      case Kind::cantor_complement: return 1.0 - cantor_limit_measure(schedule_);
    }
    return 0.0;
  }

  /// Membership; Cantor sets are resolved at their schedule depth.
  bool contains(double t) const {
    switch (kind_) {
      case Kind::arcs:
        for (const Arc& a : arcs_)
          if (a.contains(t)) return true;
        return false;
      case Kind::cantor: return cantor_stage_contains(schedule_, t, schedule_.depth);
      case Kind::cantor_complement: return !cantor_stage_contains(schedule_, t, schedule_.depth);
    }
    return false;
  }

  /// Circular distance (turns) from t to the set.
  double distance(double t) const {
    switch (kind_) {
      case Kind::arcs: {
        if (arcs_.empty()) return 0.5;
        double d = 1.0;
        for (const Arc& a : arcs_) d = std::min(d, a.distance(t));
        return d;
      }
      case Kind::cantor: return cantor_distance(schedule_, t, schedule_.depth);
      case Kind::cantor_complement:
        return 0.0;  // the gaps are dense in the base arc
    }
    return 0.0;
  }

  /// Complementary open arcs of a finite arc union (wrapping arcs may end past 1).
  std::vector<Arc> complementary_arcs() const {
    if (kind_ != Kind::arcs) throw DomainError("complementary arcs need a finite arc union");
    std::vector<Arc> out;
    if (arcs_.empty()) return out;
    for (std::size_t i = 0; i + 1 < arcs_.size(); ++i)
      if (arcs_[i + 1].start > arcs_[i].end) out.push_back({arcs_[i].end, arcs_[i + 1].start});
    const double wrap = arcs_.front().start + 1.0 - arcs_.back().end;
    if (wrap > 0.0) out.push_back({arcs_.back().end, arcs_.front().start + 1.0});
    return out;
  }

  /// True when the closed arc a lies inside the set (Cantor sets: at schedule depth).
  bool contains_arc(const Arc& a) const {
    switch (kind_) {
      case Kind::arcs:
        for (const Arc& b : arcs_) {
          if (b.length() >= 1.0) return true;
          const double off = wrap_turn(a.start - b.start);
          if (off + a.length() <= b.length() + 1e-15) return true;
        }
        return false;
      case Kind::cantor:
      case Kind::cantor_complement: return false;
    }
    return false;
  }

  /// True when the closed arc a does not meet the set.
  bool disjoint_from_arc(const Arc& a) const {
    switch (kind_) {
      case Kind::arcs:
        for (const Arc& b : arcs_) {
          if (a.contains(b.start) || a.contains(b.end) || b.contains(a.start)) return false;
        }
        return true;
      case Kind::cantor: {
        const Arc base{schedule_.base.start, schedule_.base.start + schedule_.base.length()};
        return !(a.contains(base.start) || a.contains(base.end) || base.contains(a.start));
      }
      case Kind::cantor_complement: return false;
    }
    return false;
  }

 private:
  explicit CircleSet(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<Arc> arcs_;
  CantorSchedule schedule_;
};

inline const char* to_string(CircleSet::Kind k) {
  switch (k) {
    case CircleSet::Kind::arcs: return "arcs";
    case CircleSet::Kind::cantor: return "cantor";
    case CircleSet::Kind::cantor_complement: return "cantor-complement";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Beurling-Carleson entropy

struct BCReport {
  std::vector<double> partial_sums;  // nondecreasing
  EntropyClass classification = EntropyClass::finite;
  std::optional<double> limit;
  double measure = 0.0;
  std::string witness;
};

/// Entropy sum_k |A_k| log(1/|A_k|) of the complementary arcs of E.
///
/// Finite arc unions give an exact finite sum (partial sums over the arcs).
/// Cantor-stage sets give partial sums by stage, index 0 being the arc outside
/// the base, plus the schedule-determined limit classification.
inline BCReport bc_entropy(const CircleSet& E, std::optional<int> depth = std::nullopt) {
  BCReport r;
  r.measure = E.measure();
  switch (E.kind()) {
    case CircleSet::Kind::arcs: {
      double acc = 0.0;
      r.partial_sums.push_back(0.0);
      if (!E.is_empty()) {
        for (const Arc& a : E.complementary_arcs()) {
          acc += arc_entropy_term(a.length());
          r.partial_sums.push_back(acc);
        }
      }
      r.classification = EntropyClass::finite;
      r.limit = acc;
      r.witness = E.is_empty() ? "empty set: complement is the whole circle"
                               : std::to_string(r.partial_sums.size() - 1) + " complementary arcs";
      break;
    }
    case CircleSet::Kind::cantor: {
      const CantorSchedule& s = E.schedule();
      const int d = depth.value_or(s.depth);
      double acc = arc_entropy_term(1.0 - s.base.length());
      r.partial_sums.push_back(acc);
      for (const CantorStage& st : cantor_stages(s, d)) {
        acc += st.contribution;
        r.partial_sums.push_back(acc);
      }
      const EntropyVerdict v = classify_cantor_entropy(s);
      r.classification = v.classification;
      r.limit = v.limit;
      r.witness = v.reason;
      break;
    }
    case CircleSet::Kind::cantor_complement: {
      // Not closed; its closure is the whole circle when the Cantor set is nowhere dense.
      r.partial_sums = {0.0};
      r.classification = EntropyClass::finite;
      r.limit = 0.0;
      r.witness = "open complement of a Cantor set: entropy of its closure (the circle)";
      break;
    }
  }
  return r;
}

enum class TriState { yes, no, outside_family };

inline const char* to_string(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    case TriState::outside_family: return "outside-family";
  }
  return "?";
}

struct BCSubsetFlag {
  TriState answer = TriState::outside_family;
  std::string explanation;
};

/// Does E contain (up to null sets) a Beurling-Carleson set of positive measure?
/// Decided within the supported families only.
inline BCSubsetFlag contains_bc_subset_flag(const CircleSet& E) {
  BCSubsetFlag f;
  switch (E.kind()) {
    case CircleSet::Kind::arcs:
      if (E.measure() > 0.0) {
        f.answer = TriState::yes;
        f.explanation = "a nondegenerate arc is a Beurling-Carleson set of positive measure";
      } else {
        f.answer = TriState::no;
        f.explanation = "set of measure zero";
      }
      return f;
    case CircleSet::Kind::cantor_complement:
      f.answer = TriState::yes;
      f.explanation = "the complement of a Cantor set contains its gaps, which are arcs";
      return f;
    case CircleSet::Kind::cantor: {
      const double m = E.measure();
      if (m <= 0.0) {
        f.answer = TriState::no;
        f.explanation = "Cantor set of measure zero";
        return f;
      }
      const EntropyVerdict v = classify_cantor_entropy(E.schedule());
      if (v.classification == EntropyClass::convergent) {
        f.answer = TriState::yes;
        f.explanation = "fat Cantor set with convergent complement entropy is itself Beurling-Carleson";
      } else if (E.schedule().kind == CantorSchedule::Kind::power) {
        f.answer = TriState::no;
        f.explanation =
            "self-similar fat Cantor schedule with divergent entropy inside every stage arc "
            "(family rule)";
      } else {
        f.answer = TriState::outside_family;
        f.explanation = "no family rule for this schedule";
      }
      return f;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Singular measures

struct Atom {
  double theta = 0.0;  // radians
  double mass = 0.0;
};

/// Stagewise-uniform Cantor measure: every stage-k arc carries mass / (#arcs).
struct CantorPart {
  CantorSchedule support;
  double mass = 0.0;
};

struct SingularMeasureSpec {
  std::vector<Atom> atoms;
  std::vector<CantorPart> cantor_parts;

  bool empty() const { return atoms.empty() && cantor_parts.empty(); }

  double total_mass() const {
    std::vector<double> m;
    for (const Atom& a : atoms) m.push_back(a.mass);
    for (const CantorPart& c : cantor_parts) m.push_back(c.mass);
    return pairwise_sum(m);
  }

  void validate() const {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Atom& a = atoms[i];
      if (!(a.mass > 0.0) || !std::isfinite(a.mass) || !std::isfinite(a.theta))
        throw DomainError("atom masses must be finite and positive");
      for (std::size_t j = 0; j < i; ++j)
        if (turn_distance(a.theta / two_pi, atoms[j].theta / two_pi) == 0.0)
          throw DomainError("atom positions must be distinct");
    }
    for (const CantorPart& c : cantor_parts) {
      if (!(c.mass > 0.0) || !std::isfinite(c.mass))
        throw DomainError("cantor part masses must be finite and positive");
      c.support.validate();
      if (cantor_limit_measure(c.support) > 0.0)
        throw DomainError("a cantor part of a singular measure needs a support of measure zero");
    }
  }
};

/// Support of the measure as turns: atoms plus closed base arcs of the Cantor parts.
struct SupportPiece {
  Arc arc;
  bool atom = false;
};

inline std::vector<SupportPiece> support_pieces(const SingularMeasureSpec& nu) {
  std::vector<SupportPiece> out;
  for (const Atom& a : nu.atoms) {
    const double t = wrap_turn(a.theta / two_pi);
    out.push_back({{t, t}, true});
  }
  for (const CantorPart& c : nu.cantor_parts)
    out.push_back({{c.support.base.start, c.support.base.start + c.support.base.length()}, false});
  return out;
}

struct MeasureDecomposition {
  SingularMeasureSpec c_part;
  SingularMeasureSpec k_candidate;
  std::vector<std::string> report;
};

/// nu = nu_C + nu_K within the supported family. Atoms are always nu_C; a Cantor
/// part is nu_C when its support is Beurling-Carleson of measure zero and a
/// nu_K-candidate otherwise. The candidate label is relative to the family.
inline MeasureDecomposition decompose_measure(const SingularMeasureSpec& nu) {
  nu.validate();
  MeasureDecomposition d;
  for (const Atom& a : nu.atoms) {
    d.c_part.atoms.push_back(a);
    d.report.push_back("atom at theta=" + std::to_string(a.theta) +
                       " -> C (a point is a Beurling-Carleson set of measure zero)");
  }
  for (const CantorPart& c : nu.cantor_parts) {
    const EntropyVerdict v = classify_cantor_entropy(c.support);
    if (v.classification != EntropyClass::divergent) {
      d.c_part.cantor_parts.push_back(c);
      d.report.push_back("cantor part -> C (" + v.reason + ")");
    } else {
      d.k_candidate.cantor_parts.push_back(c);
      d.report.push_back("cantor part -> K-candidate (" + v.reason +
                         "; candidacy is relative to the supported family)");
    }
  }
  return d;
}

}  // namespace hbspace
