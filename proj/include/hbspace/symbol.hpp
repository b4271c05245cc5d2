#pragma once

// Symbols b = c * B * S_nu * b0 built from Blaschke zeros, a singular measure
// and an outer modulus profile, their boundary samples and the weight
// Delta = sqrt(1 - |b|^2).

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hbspace/circle_sets.hpp"
#include "hbspace/core.hpp"
#include "hbspace/fourier.hpp"

namespace hbspace {

// ---------------------------------------------------------------------------
// Outer modulus profiles

struct ArcValue {
  Arc arc;
  double value = 1.0;  // omega on the arc; omega = 1 elsewhere
};

/// Boundary modulus omega(t), t in turns, 0 <= omega <= 1.
///
/// Profiles are described by 1 - omega^2 (= Delta^2 for an outer symbol with
/// scale 1) so that weights extremely close to zero keep full precision.
struct OuterModulus {
  enum class Kind { constant, cos_half, arcs, bump, volberg, distance, cantor_set, samples };

  Kind kind = Kind::constant;
  double value = 1.0;            // constant; cantor_set: omega on K
  std::vector<ArcValue> arcs;    // arcs
  Arc bump_arc{0.0, 0.25};       // bump: Delta = amplitude * smooth bump supported on the arc
  double amplitude = 1.0;        // bump, volberg (Delta^2 scale)
  CantorSchedule cantor;         // volberg, distance, cantor_set: the set K
  double lambda = 1.0;           // volberg: Delta^2 = A exp(-(lambda / d)^gamma)
  double gamma = 1.0;
  double slope = 1.0;            // distance: Delta = min(1, slope * d)
  std::vector<double> samples;   // samples: omega at the M-grid nodes, linearly interpolated

  static OuterModulus constant(double v) {
    OuterModulus o;
    o.value = v;
    return o;
  }
  static OuterModulus cos_half() {
    OuterModulus o;
    o.kind = Kind::cos_half;
    return o;
  }
  static OuterModulus on_arcs(std::vector<ArcValue> a) {
    OuterModulus o;
    o.kind = Kind::arcs;
    o.arcs = std::move(a);
    return o;
  }
  static OuterModulus bump(Arc a, double amp) {
    OuterModulus o;
    o.kind = Kind::bump;
    o.bump_arc = a;
    o.amplitude = amp;
    return o;
  }
  static OuterModulus volberg(CantorSchedule K, double A, double lam, double gam) {
    OuterModulus o;
    o.kind = Kind::volberg;
    o.cantor = K;
    o.amplitude = A;
    o.lambda = lam;
    o.gamma = gam;
    return o;
  }
  static OuterModulus distance(CantorSchedule K, double c) {
    OuterModulus o;
    o.kind = Kind::distance;
    o.cantor = K;
    o.slope = c;
    return o;
  }
  static OuterModulus on_cantor_set(CantorSchedule K, double v) {
    OuterModulus o;
    o.kind = Kind::cantor_set;
    o.cantor = K;
    o.value = v;
    return o;
  }
  static OuterModulus from_samples(std::vector<double> s) {
    OuterModulus o;
    o.kind = Kind::samples;
    o.samples = std::move(s);
    return o;
  }

  bool analytic() const { return kind != Kind::samples; }

  void validate() const {
    auto check_omega = [](double w) {
      if (!std::isfinite(w) || w < 0.0) throw DomainError("outer modulus must be finite and >= 0");
      if (w > 1.0) throw DomainError("outer modulus exceeds 1");
    };
    switch (kind) {
      case Kind::constant: check_omega(value); break;
      case Kind::cos_half: break;
      case Kind::arcs:
        for (const ArcValue& a : arcs) {
          check_omega(a.value);
          if (!(a.arc.length() > 0.0 && a.arc.length() < 1.0))
            throw DomainError("profile arcs must have length in (0, 1)");
        }
        for (std::size_t i = 0; i < arcs.size(); ++i)
          for (std::size_t j = 0; j < i; ++j) {
            const Arc& x = arcs[i].arc;
            const Arc& y = arcs[j].arc;
            const bool meet = (x.contains(y.start) && turn_distance(y.start, x.end) > 0.0 &&
                               turn_distance(y.start, x.start) > 0.0) ||
                              (y.contains(x.start) && turn_distance(x.start, y.end) > 0.0 &&
                               turn_distance(x.start, y.start) > 0.0);
            if (meet) throw DomainError("profile arcs must not overlap");
          }
        break;
      case Kind::bump:
        if (!(amplitude >= 0.0 && amplitude <= 1.0)) throw DomainError("bump amplitude must be in [0, 1]");
        if (!(bump_arc.length() > 0.0 && bump_arc.length() <= 1.0))
          throw DomainError("bump arc must have positive length");
        break;
      case Kind::volberg:
        cantor.validate();
        if (!cantor.binary()) throw DomainError("volberg profile needs a binary Cantor schedule");
        if (!(amplitude > 0.0 && amplitude <= 1.0 && lambda > 0.0 && gamma > 0.0))
          throw DomainError("volberg profile needs 0 < A <= 1, lambda > 0, gamma > 0");
        break;
      case Kind::distance:
        cantor.validate();
        if (!cantor.binary()) throw DomainError("distance profile needs a binary Cantor schedule");
        if (!(slope > 0.0)) throw DomainError("distance profile slope must be positive");
        break;
      case Kind::cantor_set:
        cantor.validate();
        if (!cantor.binary()) throw DomainError("cantor_set profile needs a binary Cantor schedule");
        check_omega(value);
        break;
      case Kind::samples:
        if (samples.size() < 4) throw DomainError("sampled modulus needs at least 4 samples");
        for (double w : samples) check_omega(w);
        break;
    }
  }

  /// 1 - omega(t)^2.
  double one_minus_square(double t) const {
    t = wrap_turn(t);
    switch (kind) {
      case Kind::constant: return 1.0 - value * value;
      case Kind::cos_half: {
        const double s = std::sin(pi * t);
        return s * s;
      }
      case Kind::arcs: {
        constexpr double edge = 1e-14;
        for (const ArcValue& a : arcs) {
          const double d2 = 1.0 - a.value * a.value;
          if (turn_distance(t, a.arc.start) <= edge || turn_distance(t, a.arc.end) <= edge)
            return 0.5 * d2;  // jump: average of both sides
          if (a.arc.contains(t)) return d2;
        }
        return 0.0;
      }
      case Kind::bump: {
        const double L = bump_arc.length();
        const double x = wrap_turn(t - bump_arc.start) / L;
        if (x <= 0.0 || x >= 1.0) return 0.0;
        const double psi = std::exp(1.0 - 1.0 / (4.0 * x * (1.0 - x)));
        return amplitude * amplitude * psi * psi;
      }
      case Kind::volberg: {
        const double d = cantor_distance(cantor, t, cantor.depth);
        if (d <= 0.0) return 0.0;
        return amplitude * std::exp(-std::pow(lambda / d, gamma));
      }
      case Kind::distance: {
        const double d = std::min(1.0, slope * cantor_distance(cantor, t, cantor.depth));
        return d * d;
      }
      case Kind::cantor_set:
        return cantor_stage_contains(cantor, t, cantor.depth) ? 1.0 - value * value : 0.0;
      case Kind::samples: {
        const double n = static_cast<double>(samples.size());
        const double pos = t * n;
        const std::size_t i = static_cast<std::size_t>(std::floor(pos)) % samples.size();
        const std::size_t j = (i + 1) % samples.size();
        const double f = pos - std::floor(pos);
        const double w = (1.0 - f) * samples[i] + f * samples[j];
        return 1.0 - w * w;
      }
    }
    return 0.0;
  }

  double omega(double t) const { return std::sqrt(std::max(0.0, 1.0 - one_minus_square(t))); }

  /// log omega(t) clamped at log(log_floor_value).
  double log_omega(double t) const {
    const double d2 = one_minus_square(t);
    if (d2 >= 1.0) return std::log(log_floor_value);
    return std::max(0.5 * std::log1p(-d2), std::log(log_floor_value));
  }

  /// Declared carrier of 1 - omega^2, when the profile determines it exactly.
  std::optional<CircleSet> declared_carrier() const {
    switch (kind) {
      case Kind::constant: return value < 1.0 ? CircleSet::full() : CircleSet::empty();
      case Kind::cos_half: return CircleSet::full();  // up to the point t = 0
      case Kind::arcs: {
        std::vector<Arc> a;
        for (const ArcValue& v : arcs)
          if (v.value < 1.0) a.push_back(v.arc);
        return CircleSet::from_arcs(a);
      }
      case Kind::bump:
        return amplitude > 0.0 ? CircleSet::from_arcs({bump_arc}) : CircleSet::empty();
      case Kind::volberg:
      case Kind::distance: return CircleSet::cantor_complement(cantor);
      case Kind::cantor_set: return value < 1.0 ? CircleSet::cantor(cantor) : CircleSet::empty();
      case Kind::samples: return std::nullopt;
    }
    return std::nullopt;
  }
};

inline const char* to_string(OuterModulus::Kind k) {
  switch (k) {
    case OuterModulus::Kind::constant: return "constant";
    case OuterModulus::Kind::cos_half: return "cos_half";
    case OuterModulus::Kind::arcs: return "arcs";
    case OuterModulus::Kind::bump: return "bump";
    case OuterModulus::Kind::volberg: return "volberg";
    case OuterModulus::Kind::distance: return "distance";
    case OuterModulus::Kind::cantor_set: return "cantor_set";
    case OuterModulus::Kind::samples: return "samples";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Outer functions

/// Grid-sense outer function exp(h), h the Herglotz integral of log omega.
struct OuterFunction {
  std::vector<complex> log_series;  // Taylor coefficients of h
  DiskSeries taylor;                // Taylor coefficients of exp(h), degrees 0..M/2-1
  BoundaryGrid boundary;            // b0 on the M-grid, modulus equal to omega

  complex log_value(complex z) const {
    complex acc = 0.0;
    for (auto it = log_series.rbegin(); it != log_series.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
  complex operator()(complex z) const { return std::exp(log_value(z)); }
};

namespace detail {

inline void check_grid_size(std::size_t M) {
  if (M < 4 || M % 2 != 0) throw DomainError("grid size must be even and >= 4");
}

// Herglotz coefficients from Fourier coefficients a_k of the real log modulus.
inline std::vector<complex> herglotz_series(const std::vector<complex>& a, bool keep_nyquist) {
  const std::size_t M = a.size();
  std::vector<complex> h(keep_nyquist ? M / 2 + 1 : M / 2);
  h[0] = a[0].real();
  for (std::size_t k = 1; k < M / 2; ++k) h[k] = 2.0 * a[k];
  if (keep_nyquist) h[M / 2] = a[M / 2].real();
  return h;
}

}  // namespace detail

inline OuterFunction outer_from_modulus(const OuterModulus& w, std::size_t M) {
  detail::check_grid_size(M);
  w.validate();
  OuterFunction out;
  std::vector<double> logs(M);
  std::vector<complex> a;
  if (w.analytic()) {
    // half-shifted nodes keep profile zeros on grid nodes out of the clamp
    for (std::size_t j = 0; j < M; ++j)
      logs[j] = w.log_omega((static_cast<double>(j) + 0.5) / static_cast<double>(M));
    a = fourier_coefficients(std::span<const double>(logs));
    for (std::size_t k = 0; k < M; ++k) {
      const double f = static_cast<double>(signed_frequency(k, M));
      a[k] *= std::polar(1.0, -pi * f / static_cast<double>(M));
    }
    out.log_series = detail::herglotz_series(a, false);
  } else {
    for (std::size_t j = 0; j < M; ++j) logs[j] = w.log_omega(static_cast<double>(j) / static_cast<double>(M));
    a = fourier_coefficients(std::span<const double>(logs));
    out.log_series = detail::herglotz_series(a, true);
  }
  bool all_zero = true;
  for (double l : logs)
    if (l > std::log(log_floor_value)) all_zero = false;
  if (all_zero) throw DegenerateSymbolError("log omega is -inf on the whole circle; b0 would vanish");

  // boundary values: modulus omega exactly, phase from the conjugate function
  std::vector<complex> hc(M, 0.0);
  for (std::size_t k = 0; k < out.log_series.size(); ++k) hc[k] = out.log_series[k];
  const std::vector<complex> hv = synthesize(hc);
  std::vector<complex> bv(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(M);
    bv[j] = std::polar(w.omega(t), hv[j].imag());
  }
  out.boundary = BoundaryGrid(std::move(bv));

  // Taylor coefficients of exp(h) from a 4x oversampled boundary transform
  const std::size_t P = 4 * M;
  std::vector<complex> hp(P, 0.0);
  for (std::size_t k = 0; k < out.log_series.size(); ++k) hp[k] = out.log_series[k];
  std::vector<complex> ev = synthesize(hp);
  for (complex& z : ev) z = std::exp(z);
  auto c = fourier_coefficients(std::span<const complex>(ev));
  c.resize(M / 2);
  out.taylor = DiskSeries(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// Blaschke products

struct BlaschkeZero {
  complex z = 0.0;
  int multiplicity = 1;
};

inline void validate_zeros(const std::vector<BlaschkeZero>& zeros) {
  for (const BlaschkeZero& a : zeros) {
    if (!is_finite(a.z) || !(std::abs(a.z) < 1.0))
      throw DomainError("Blaschke zeros must lie in the open unit disk");
    if (a.multiplicity < 1) throw DomainError("Blaschke multiplicity must be >= 1");
  }
}

/// (|a|/a)(a - z)/(1 - conj(a) z), or z when a = 0.
inline complex blaschke_factor(complex a, complex z) {
  if (a == complex(0.0)) return z;
  return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
}

inline complex blaschke_value(const std::vector<BlaschkeZero>& zeros, complex z) {
  complex p = 1.0;
  for (const BlaschkeZero& a : zeros) {
    const complex f = blaschke_factor(a.z, z);
    for (int m = 0; m < a.multiplicity; ++m) p *= f;
  }
  return p;
}

inline std::vector<complex> blaschke_eval(const std::vector<BlaschkeZero>& zeros,
                                          std::span<const complex> points) {
  validate_zeros(zeros);
  std::vector<complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = blaschke_value(zeros, points[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Singular inner functions

namespace detail {

// (1/2pi) int_{2pi a}^{2pi b} (e^{iu} + z)/(e^{iu} - z) du, a < b in turns, |z| < 1
inline complex herglotz_arc_integral(double a, double b, complex z) {
  const complex ea = std::log(1.0 - z * std::polar(1.0, -two_pi * a));
  const complex eb = std::log(1.0 - z * std::polar(1.0, -two_pi * b));
  return (b - a) - complex(0.0, 2.0) * (eb - ea) / two_pi;
}

inline double support_distance(const SingularMeasureSpec& nu, double t) {
  double d = 1.0;
  for (const Atom& a : nu.atoms) d = std::min(d, turn_distance(t, a.theta / two_pi));
  for (const CantorPart& c : nu.cantor_parts) {
    const Arc base{c.support.base.start, c.support.base.start + c.support.base.length()};
    d = std::min(d, base.distance(t));
  }
  return d;
}

}  // namespace detail

/// log S_nu(z) = -int (zeta + z)/(zeta - z) dnu(zeta), |z| < 1.
inline complex singular_inner_log(const SingularMeasureSpec& nu, complex z) {
  if (!(std::abs(z) < 1.0)) {
    const double t = std::arg(z) / two_pi;
    if (std::abs(z) == 1.0 && detail::support_distance(nu, t) == 0.0)
      throw SingularityError("singular inner function evaluated on its support");
    throw DomainError("singular inner function is evaluated inside the disk only");
  }
  std::vector<complex> terms;
  for (const Atom& a : nu.atoms) {
    const complex zeta = std::polar(1.0, a.theta);
    terms.push_back(-a.mass * (zeta + z) / (zeta - z));
  }
  for (const CantorPart& c : nu.cantor_parts) {
    if (!c.support.binary()) throw DomainError("singular Cantor parts need a binary schedule");
    const std::vector<Arc> arcs = cantor_arcs(c.support, c.support.depth);
    const double each = c.mass / static_cast<double>(arcs.size());
    std::vector<complex> part(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i)
      part[i] = -each / arcs[i].length() * detail::herglotz_arc_integral(arcs[i].start, arcs[i].end, z);
    terms.push_back(pairwise_sum(part));
  }
  return pairwise_sum(terms);
}

inline std::vector<complex> singular_inner_eval(const SingularMeasureSpec& nu,
                                                std::span<const complex> points) {
  nu.validate();
  std::vector<complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = std::exp(singular_inner_log(nu, points[i]));
  return out;
}

// ---------------------------------------------------------------------------
// Symbols

struct SymbolSpec {
  std::vector<BlaschkeZero> blaschke_zeros;
  SingularMeasureSpec singular;
  OuterModulus outer;  // constant 1 by default
  complex scale = 1.0;

  void validate() const {
    validate_zeros(blaschke_zeros);
    singular.validate();
    for (const CantorPart& c : singular.cantor_parts)
      if (!c.support.binary()) throw DomainError("singular Cantor parts of a symbol need a binary schedule");
    outer.validate();
    if (!is_finite(scale) || std::abs(scale) > 1.0) throw DomainError("symbol scale must satisfy |c| <= 1");
  }

  bool has_outer() const {
    return !(outer.kind == OuterModulus::Kind::constant && outer.value == 1.0);
  }

  /// The inner factor B * S_nu of this symbol.
  SymbolSpec inner_part() const {
    SymbolSpec s;
    s.blaschke_zeros = blaschke_zeros;
    s.singular = singular;
    return s;
  }
};

/// Sampled weight Delta on the M-grid.
struct DeltaWeight {
  std::vector<double> delta;
  std::vector<double> delta2;
  CircleSet carrier = CircleSet::empty();
  bool declared = false;

  std::size_t size() const { return delta.size(); }
  BoundaryGrid grid() const {
    std::vector<complex> v(delta.begin(), delta.end());
    return BoundaryGrid(std::move(v));
  }
  double mass() const { return pairwise_sum(delta2) / static_cast<double>(delta2.size()); }
};

/// Phase of a singular inner factor on the circle, from the radius 1 - 10/M proxy.
inline complex singular_boundary_phase(const SingularMeasureSpec& nu, double theta, std::size_t M) {
  if (nu.empty()) return 1.0;
  const double r = 1.0 - 10.0 / static_cast<double>(M);
  const complex l = singular_inner_log(nu, std::polar(r, theta));
  return std::polar(1.0, l.imag());
}

/// Interior evaluator of a symbol; the outer factor is resolved on an M-grid.
class Symbol {
 public:
  Symbol(SymbolSpec spec, std::size_t M) : spec_(std::move(spec)), M_(M) {
    spec_.validate();
    if (spec_.has_outer()) outer_ = outer_from_modulus(spec_.outer, M);
  }

  const SymbolSpec& spec() const { return spec_; }
  std::size_t grid_size() const { return M_; }
  const std::optional<OuterFunction>& outer() const { return outer_; }

  complex operator()(complex z) const {
    if (!(std::abs(z) < 1.0)) throw DomainError("interior symbol evaluation needs |z| < 1");
    complex v = spec_.scale * blaschke_value(spec_.blaschke_zeros, z);
    if (!spec_.singular.empty()) v *= std::exp(singular_inner_log(spec_.singular, z));
    if (outer_) v *= (*outer_)(z);
    return v;
  }

  /// Inner factor B * S_nu at a boundary angle, singular part via the radial proxy.
  complex inner_boundary(double theta) const {
    complex v = blaschke_value(spec_.blaschke_zeros, std::polar(1.0, theta));
    return v * singular_boundary_phase(spec_.singular, theta, M_);
  }

 private:
  SymbolSpec spec_;
  std::size_t M_;
  std::optional<OuterFunction> outer_;
};

struct SymbolSample {
  BoundaryGrid b;
  DeltaWeight delta;
  double radius = 1.0;
  double extremality = 0.0;  // trapezoid value of int log(1 - |b|) dm with floor
  bool extreme = false;
  std::vector<std::size_t> guarded;  // nodes within 2 pi / M of the singular support
};

inline constexpr double extremality_threshold = -50.0;

/// Trapezoid proxy for int log(1 - |b|) dm from samples of 1 - |b|^2.
inline double extremality_value(std::span<const double> one_minus_b2) {
  std::vector<double> v(one_minus_b2.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double d2 = one_minus_b2[j];
    const double gap = d2 / (1.0 + std::sqrt(std::max(0.0, 1.0 - d2)));  // 1 - |b|
    v[j] = gap > log_floor_value ? std::log(gap) : std::log(log_floor_value);
  }
  return pairwise_sum(v) / static_cast<double>(v.size());
}

inline SymbolSample symbol_eval(const SymbolSpec& spec, std::size_t M, double r_eval = 1.0) {
  detail::check_grid_size(M);
  if (!(r_eval > 0.0 && r_eval <= 1.0)) throw DomainError("evaluation radius must lie in (0, 1]");
  spec.validate();
  SymbolSample out;
  out.radius = r_eval;
  std::vector<complex> b(M);
  std::vector<double> d2(M);
  const double cs = std::abs(spec.scale);

  if (r_eval == 1.0) {
    std::optional<OuterFunction> outer;
    if (spec.has_outer()) outer = outer_from_modulus(spec.outer, M);
    const double guard = 1.0 / static_cast<double>(M);
    for (std::size_t j = 0; j < M; ++j) {
      const double theta = BoundaryGrid::theta(j, M);
      const double t = static_cast<double>(j) / static_cast<double>(M);
      complex v = spec.scale * blaschke_value(spec.blaschke_zeros, std::polar(1.0, theta));
      if (!spec.singular.empty()) {
        if (detail::support_distance(spec.singular, t) <= guard) out.guarded.push_back(j);
        v *= singular_boundary_phase(spec.singular, theta, M);
      }
      if (outer) v *= outer->boundary[j];
      b[j] = v;
      // |b| = |c| omega a.e. on the circle
      const double w2 = spec.outer.one_minus_square(t);
      d2[j] = cs == 1.0 ? w2 : 1.0 - cs * cs * (1.0 - w2);
    }
  } else {
    const Symbol sym(spec, M);
    for (std::size_t j = 0; j < M; ++j) {
      b[j] = sym(std::polar(r_eval, BoundaryGrid::theta(j, M)));
      d2[j] = 1.0 - std::norm(b[j]);
    }
  }
  for (std::size_t j = 0; j < M; ++j) {
    if (d2[j] < -1e-12 || std::abs(b[j]) > 1.0 + 1e-12)
      throw NumericalInconsistency("|b| exceeds 1 at grid node " + std::to_string(j));
    d2[j] = std::clamp(d2[j], 0.0, 1.0);
  }
  out.b = BoundaryGrid(std::move(b));
  out.delta.delta2 = d2;
  out.delta.delta.resize(M);
  for (std::size_t j = 0; j < M; ++j) out.delta.delta[j] = std::sqrt(d2[j]);
  if (r_eval == 1.0) {
    if (cs < 1.0) {
      out.delta.carrier = CircleSet::full();
      out.delta.declared = true;
    } else if (auto c = spec.outer.declared_carrier()) {
      out.delta.carrier = *c;
      out.delta.declared = true;
    }
  }
  out.extremality = extremality_value(out.delta.delta2);
  out.extreme = out.extremality < extremality_threshold;
  return out;
}

}  // namespace hbspace
