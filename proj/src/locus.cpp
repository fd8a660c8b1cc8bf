#include "maskit/locus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maskit/families.hpp"

namespace maskit {

namespace {

struct Mat2 {
  cplx a, b, c, d;
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
};

Mat2 from(const Mobius& m) { return {m.a, m.b, m.c, m.d}; }
const Mat2 kId{1.0, 0.0, 0.0, 1.0};
const Mat2 kZero{0.0, 0.0, 0.0, 0.0};

double solve_tol(cplx target) { return 1e-11 * std::max(1.0, std::abs(target) / 2.0); }

}  // namespace

std::string to_string(Family f) { return f == Family::Maskit ? "maskit" : "koebe"; }

std::string to_string(SampleFlag f) {
  switch (f) {
    case SampleFlag::InsideM: return "inside";
    case SampleFlag::Cusp: return "cusp";
    case SampleFlag::Extended: return "extended";
  }
  return "?";
}

std::string SpecialPoint::label() const { return order == 0 ? "cusp" : "elliptic(" + std::to_string(order) + ")"; }

const SpecialPoint* RayTrace::special(int order) const {
  for (const auto& s : specials)
    if (s.order == order) return &s;
  return nullptr;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

TraceFunction TraceFunction::maskit(const Fraction& f) {
  TraceFunction tf;
  tf.family_ = Family::Maskit;
  tf.fraction_ = f;
  tf.letters_ = word(f).letters;
  return tf;
}

TraceFunction TraceFunction::koebe(int n, const Fraction& f) {
  if (n < 2) throw std::invalid_argument("koebe trace function: n must be >= 2");
  TraceFunction tf;
  tf.family_ = Family::Koebe;
  tf.n_ = n;
  tf.fraction_ = f;
  tf.letters_ = word(f).letters;
  return tf;
}

Mobius TraceFunction::X() const { return family_ == Family::Maskit ? maskit_S() : koebe_A(n_); }

Mobius TraceFunction::Y(cplx param) const {
  return family_ == Family::Maskit ? maskit_T(param) : koebe_C(n_, param);
}

Mobius TraceFunction::matrix(cplx param) const { return evaluate(letters_, X(), Y(param)); }

cplx TraceFunction::value(cplx param) const { return matrix(param).trace(); }

void TraceFunction::value_and_derivative(cplx param, cplx& value, cplx& deriv) const {
  const Mobius x = X(), y = Y(param);
  const Mat2 Xm = from(x), Xi = from(x.inverse()), Ym = from(y), Yi = from(y.inverse());
  Mat2 dY = family_ == Family::Maskit ? Mat2{cplx(0, -1), 0.0, 0.0, 0.0} : from(koebe_C_derivative(n_, param));
  Mat2 dYi = -(Yi * dY * Yi);
  Mat2 M = kId, D = kZero;
  for (char ch : letters_) {
    switch (ch) {
      case 'X': D = D * Xm; M = M * Xm; break;
      case 'x': D = D * Xi; M = M * Xi; break;
      case 'Y': D = D * Ym + M * dY; M = M * Ym; break;
      case 'y': D = D * Yi + M * dYi; M = M * Yi; break;
      default: break;
    }
  }
  value = M.a + M.d;
  deriv = D.a + D.d;
}

cplx TraceFunction::derivative(cplx param) const {
  cplx v, d;
  value_and_derivative(param, v, d);
  return d;
}

SolveResult solve_trace(const TraceFunction& tf, cplx target, cplx seed, int max_iter) {
  const double tol = solve_tol(target);
  cplx z = seed;
  cplx v, d;
  for (int it = 0; it <= max_iter; ++it) {
    tf.value_and_derivative(z, v, d);
    double res = std::abs(v - target);
    if (res <= tol) {
      // one polishing step when it helps
      cplx z2 = z - (v - target) / d;
      cplx v2 = tf.value(z2);
      if (std::abs(d) >= 1e-14 && std::abs(v2 - target) < res) {
        z = z2;
        res = std::abs(v2 - target);
      }
      return {z, res, it};
    }
    if (std::abs(d) < 1e-14)
      throw SolveError(SolveError::Reason::FlatDerivative, z, "trace derivative collapsed (possible branch point)");
    if (tf.family() == Family::Koebe && std::abs(z) < 1e-12)
      throw SolveError(SolveError::Reason::NoConvergence, z, "tau collapsed to 0");
    z -= (v - target) / d;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
  }
  throw SolveError(SolveError::Reason::NoConvergence, z, "Newton did not converge");
}

RaySeed seed_ray(const TraceFunction& tf, double height) {
  const Fraction& f = tf.fraction();
  if (f.is_infinite()) throw std::invalid_argument("no ray for 1/0");
  const double q = static_cast<double>(f.q), p = static_cast<double>(f.p);
  const int samples = 801;
  auto point = [&](double s) -> cplx {
    if (tf.family() == Family::Maskit) return cplx(s, height);
    return std::polar(height, s);
  };
  double center, half;
  if (tf.family() == Family::Maskit) {
    center = 2.0 * p / q;
    half = 1.0 / q;
  } else {
    center = -M_PI * p / (q * tf.n());
    half = M_PI / (2.0 * q * tf.n());
  }
  double best = std::numeric_limits<double>::quiet_NaN();
  double prev_s = center - half;
  double prev = tf.value(point(prev_s)).imag();
  for (int i = 1; i < samples; ++i) {
    double s = center - half + 2.0 * half * i / (samples - 1);
    double cur = tf.value(point(s)).imag();
    if (prev == 0.0 || prev * cur < 0.0) {
      // bisect the sign change
      double lo = prev_s, hi = s, flo = prev;
      for (int k = 0; k < 80 && flo != 0.0; ++k) {
        double mid = 0.5 * (lo + hi);
        double fm = tf.value(point(mid)).imag();
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double root = flo == 0.0 ? lo : 0.5 * (lo + hi);
      if (std::isnan(best) || std::abs(root - center) < std::abs(best - center)) best = root;
    }
    prev = cur;
    prev_s = s;
  }
  if (std::isnan(best)) throw std::runtime_error("seed_ray: no real-trace crossing near the asymptote");
  cplx z = point(best);
  double t = tf.value(z).real();
  SolveResult r = solve_trace(tf, t, z);
  return {r.param, tf.value(r.param).real()};
}

namespace {

struct Walker {
  const TraceFunction& tf;
  int sign;
  double step;
  cplx param;
  double t;  // current |trace|

  // Moves |trace| from t to target, calling emit at each accepted point.
  template <class Emit>
  void walk_to(double target, Emit&& emit) {
    double h = step * std::max(1.0, t);
    while (std::abs(t - target) > 0.0) {
      double dir = target < t ? -1.0 : 1.0;
      double hh = std::min(h, std::abs(target - t));
      double tn = t + dir * hh;
      if (std::abs(tn - target) < 1e-13 * std::max(1.0, target)) tn = target;
      cplx v, d;
      tf.value_and_derivative(param, v, d);
      if (std::abs(d) < 1e-14)
        throw SolveError(SolveError::Reason::FlatDerivative, param, "trace derivative collapsed (possible branch point)");
      cplx pred = param + cplx(sign * (tn - t)) / d;
      bool ok = false;
      SolveResult r;
      try {
        r = solve_trace(tf, sign * tn, pred, 30);
        double jump = std::abs(r.param - pred), move = std::abs(pred - param);
        ok = jump <= 0.5 * move + 1e-9 * (1.0 + std::abs(param));
      } catch (const SolveError& e) {
        if (e.reason == SolveError::Reason::FlatDerivative && hh < 1e-9) throw;
      }
      if (!ok) {
        h = hh / 2.0;
        if (h < 1e-12 * std::max(1.0, t)) throw SolveError(SolveError::Reason::NoConvergence, param, "continuation step underflow");
        continue;
      }
      param = r.param;
      t = tn;
      emit(t, param, r.residual);
      h = std::min(hh * 1.5, step * std::max(1.0, t));
    }
  }
};

}  // namespace

RayTrace trace_ray(const TraceFunction& tf, const RayOptions& opt) {
  RayTrace out;
  out.family = tf.family();
  out.n = tf.n();
  out.fraction = tf.fraction();
  RaySeed seed = seed_ray(tf, opt.seed_height);
  out.sign = seed.t >= 0 ? 1 : -1;
  Walker w{tf, out.sign, opt.step, seed.param, std::abs(seed.t)};
  double t_start = opt.t_start > 0 ? opt.t_start : std::abs(seed.t);
  double t_end = std::max(0.0, opt.t_end);

  std::vector<std::pair<double, int>> breaks;  // (|t|, order), order 0 = cusp
  if (2.0 < t_start && 2.0 >= t_end) breaks.emplace_back(2.0, 0);
  for (int n : opt.orders) {
    double tt = 2.0 * std::cos(M_PI / n);
    if (n >= 2 && tt < t_start && tt >= t_end) breaks.emplace_back(tt, n);
  }
  std::sort(breaks.begin(), breaks.end(), [](auto& a, auto& b) { return a.first > b.first; });

  auto flag_of = [](double at) {
    if (std::abs(at - 2.0) <= 1e-12) return SampleFlag::Cusp;
    return at > 2.0 ? SampleFlag::InsideM : SampleFlag::Extended;
  };
  auto record = [&](double at, cplx param, double res) {
    out.samples.push_back({out.sign * at, param, flag_of(at), res});
  };

  try {
    w.walk_to(t_start, [](double, cplx, double) {});
    out.samples.push_back({out.sign * w.t, w.param, flag_of(w.t), std::abs(tf.value(w.param) - out.sign * w.t)});
    for (auto [bt, order] : breaks) {
      w.walk_to(bt, record);
      SpecialPoint sp;
      sp.order = order;
      sp.target = out.sign * bt;
      SolveResult r = solve_trace(tf, sp.target, w.param);
      sp.param = r.param;
      sp.residual = r.residual;
      out.specials.push_back(sp);
    }
    w.walk_to(t_end, record);
  } catch (const SolveError& e) {
    out.complete = false;
    out.note = std::string(e.what()) + " near param " + std::to_string(e.last.real()) + "+" +
               std::to_string(e.last.imag()) + "i; the branch is not continued past this point";
  }
  return out;
}

RayTrace koebe_ray(int n, const Fraction& f0, double step) {
  // reduce mod n
  std::int64_t nq = static_cast<std::int64_t>(n) * f0.q;
  std::int64_t p = ((f0.p % nq) + nq) % nq;
  Fraction f(p, f0.q);
  TraceFunction tf = TraceFunction::koebe(n, f);
  RayOptions opt;
  opt.step = step;
  opt.t_end = 2.0;
  opt.seed_height = 3.0 * koebe_discreteness_radius(n) + 2.0;
  RayTrace rt = trace_ray(tf, opt);
  std::int64_t k = p / f.q;
  for (const RaySample& s : rt.samples) {
    double arg = std::arg(s.param * s.param);
    double excess;
    if (f.is_integral()) {
      excess = std::abs(wrap_angle(arg + 2.0 * M_PI * k / n));
      if (excess > 1e-9) rt.sector_ok = false;
    } else {
      double off = std::abs(wrap_angle(arg + 2.0 * M_PI * (k + 0.5) / n));
      excess = std::max(0.0, off - M_PI / n);
      if (off >= M_PI / n) rt.sector_ok = false;
    }
    rt.max_sector_excess = std::max(rt.max_sector_excess, excess);
  }
  return rt;
}

SpecialPoint find_cusp(const TraceFunction& tf) {
  RayOptions opt;
  opt.t_end = 2.0;
  RayTrace rt = trace_ray(tf, opt);
  if (const SpecialPoint* sp = rt.special(0)) return *sp;
  throw std::runtime_error("cusp not reached: " + rt.note);
}

SpecialPoint elliptic_point(const TraceFunction& tf, int order) {
  if (order < 2) throw std::invalid_argument("elliptic order must be >= 2");
  RayOptions opt;
  opt.orders = {order};
  opt.t_end = 2.0 * std::cos(M_PI / order);
  RayTrace rt = trace_ray(tf, opt);
  if (const SpecialPoint* sp = rt.special(order)) return *sp;
  throw std::runtime_error("elliptic point not reached: " + rt.note);
}

}  // namespace maskit
