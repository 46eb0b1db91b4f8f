#include "cbloch/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "cbloch/errors.hpp"

namespace cbloch {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double require_param(const std::map<std::string, double>& params, const std::string& key,
                     const std::string& family) {
  auto it = params.find(key);
  if (it == params.end())
    throw ValidationError("make_path: family '" + family + "' needs parameter '" + key + "'");
  return it->second;
}

void check_keys(const std::map<std::string, double>& params,
                const std::vector<std::string>& allowed, const std::string& family) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError("make_path: family '" + family + "' does not take parameter '" +
                            key + "'");
  }
}

void check_polar_range(double value, const std::string& name) {
  if (!(value > 0.0 && value < pi))
    throw ValidationError("make_path: " + name + " must lie strictly inside (0, pi)");
}

// adds an imaginary sin^2 bump, vanishing with its derivative at both ends of
// [a, b], to a real-angle segment
PathSegment add_bump(PathSegment seg, double beta, double gamma) {
  const double a = seg.t_start;
  const double w = seg.t_end - seg.t_start;
  auto bump = [a, w](double t, double amp) {
    const double s = std::sin(pi * (t - a) / w);
    return im * (amp * s * s);
  };
  auto bump_rate = [a, w](double t, double amp) {
    return im * (amp * (pi / w) * std::sin(2.0 * pi * (t - a) / w));
  };
  PathSegment out = seg;
  if (beta != 0.0) {
    auto theta = seg.theta;
    auto dtheta = seg.dtheta;
    out.theta = [theta, bump, beta](double t) { return theta(t) + bump(t, beta); };
    out.dtheta = [dtheta, bump_rate, beta](double t) { return dtheta(t) + bump_rate(t, beta); };
  }
  if (gamma != 0.0) {
    auto phi = seg.phi;
    auto dphi = seg.dphi;
    out.phi = [phi, bump, gamma](double t) { return phi(t) + bump(t, gamma); };
    out.dphi = [dphi, bump_rate, gamma](double t) { return dphi(t) + bump_rate(t, gamma); };
  }
  return out;
}

std::vector<PathSegment> circle_segments(double theta0, double phi0, double T) {
  PathSegment seg;
  seg.t_start = 0.0;
  seg.t_end = T;
  seg.theta = [theta0](double) { return Complex(theta0, 0.0); };
  seg.phi = [phi0, T](double t) { return Complex(phi0 + 2.0 * pi * t / T, 0.0); };
  seg.dtheta = [](double) { return Complex(0.0, 0.0); };
  seg.dphi = [T](double) { return Complex(2.0 * pi / T, 0.0); };
  return {seg};
}

std::vector<PathSegment> mlm_segments(double theta0, double phi0, double theta1, double T,
                                      double f1, double f2) {
  const double t1 = f1 * T;
  const double t2 = (f1 + f2) * T;

  PathSegment down;  // meridian from theta0 to theta1 at fixed phi0
  down.t_start = 0.0;
  down.t_end = t1;
  down.theta = [theta0, theta1, t1](double t) {
    return Complex(theta0 + (theta1 - theta0) * (t / t1), 0.0);
  };
  down.phi = [phi0](double) { return Complex(phi0, 0.0); };
  down.dtheta = [theta0, theta1, t1](double) { return Complex((theta1 - theta0) / t1, 0.0); };
  down.dphi = [](double) { return Complex(0.0, 0.0); };

  PathSegment lat;  // full latitude circle at theta1
  lat.t_start = t1;
  lat.t_end = t2;
  lat.theta = [theta1](double) { return Complex(theta1, 0.0); };
  lat.phi = [phi0, t1, t2](double t) {
    return Complex(phi0 + 2.0 * pi * (t - t1) / (t2 - t1), 0.0);
  };
  lat.dtheta = [](double) { return Complex(0.0, 0.0); };
  lat.dphi = [t1, t2](double) { return Complex(2.0 * pi / (t2 - t1), 0.0); };

  PathSegment up;  // meridian back to theta0, phi now advanced by 2 pi
  up.t_start = t2;
  up.t_end = T;
  up.theta = [theta0, theta1, t2, T](double t) {
    return Complex(theta1 + (theta0 - theta1) * ((t - t2) / (T - t2)), 0.0);
  };
  up.phi = [phi0](double) { return Complex(phi0 + 2.0 * pi, 0.0); };
  up.dtheta = [theta0, theta1, t2, T](double) {
    return Complex((theta0 - theta1) / (T - t2), 0.0);
  };
  up.dphi = [](double) { return Complex(0.0, 0.0); };

  return {down, lat, up};
}

}  // namespace

ComplexAnglePath::ComplexAnglePath(std::string family, std::map<std::string, double> params,
                                   std::vector<PathSegment> segments)
    : family_(std::move(family)), params_(std::move(params)), segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("ComplexAnglePath: no segments");
  for (const auto& seg : segments_) {
    if (!(seg.t_end > seg.t_start))
      throw ValidationError("ComplexAnglePath: segment must have t_end > t_start");
    if (!seg.theta || !seg.phi || !seg.dtheta || !seg.dphi)
      throw ValidationError("ComplexAnglePath: segment is missing a closed form");
  }
  const double span = segments_.back().t_end - segments_.front().t_start;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    if (std::abs(segments_[k].t_start - segments_[k - 1].t_end) > 1e-12 * span)
      throw ValidationError("ComplexAnglePath: segments must partition the time span");
  }
}

std::vector<double> ComplexAnglePath::junctions() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < segments_.size(); ++k) out.push_back(segments_[k].t_start);
  return out;
}

std::size_t ComplexAnglePath::segment_index(double t) const {
  const double slack = 1e-9 * duration();
  if (t < t0() - slack || t > tf() + slack)
    throw ValidationError("ComplexAnglePath: time outside [t0, tf]");
  for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
    if (t < segments_[k].t_end) return k;
  }
  return segments_.size() - 1;
}

std::string ComplexAnglePath::id() const {
  std::string out = family_;
  out += '(';
  bool first = true;
  for (const auto& [key, value] : params_) {
    if (!first) out += ',';
    first = false;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s=%.9g", key.c_str(), value);
    out += buf;
  }
  out += ')';
  return out;
}

ComplexAnglePath make_path(const std::string& family,
                           const std::map<std::string, double>& params) {
  if (family == "circle" || family == "complex-circle") {
    const bool complexified = family == "complex-circle";
    std::vector<std::string> allowed = {"theta0", "phi0", "T"};
    if (complexified) {
      allowed.push_back("beta");
      allowed.push_back("gamma");
    }
    check_keys(params, allowed, family);
    const double theta0 = require_param(params, "theta0", family);
    const double phi0 = get_param(params, "phi0", 0.0);
    const double T = get_param(params, "T", 1.0);
    if (!(T > 0.0)) throw ValidationError("make_path: T must be positive");
    check_polar_range(theta0, "theta0");
    auto segments = circle_segments(theta0, phi0, T);
    if (complexified) {
      const double beta = get_param(params, "beta", 0.0);
      const double gamma = get_param(params, "gamma", 0.0);
      segments[0] = add_bump(segments[0], beta, gamma);
    }
    return ComplexAnglePath(family, params, std::move(segments));
  }

  if (family == "mlm" || family == "complex-mlm") {
    const bool complexified = family == "complex-mlm";
    std::vector<std::string> allowed = {"theta0", "phi0", "theta1", "T", "f1", "f2"};
    if (complexified) {
      allowed.push_back("beta");
      allowed.push_back("gamma");
    }
    check_keys(params, allowed, family);
    const double theta0 = require_param(params, "theta0", family);
    const double theta1 = require_param(params, "theta1", family);
    const double phi0 = get_param(params, "phi0", 0.0);
    const double T = get_param(params, "T", 1.0);
    const double f1 = get_param(params, "f1", 1.0 / 3.0);
    const double f2 = get_param(params, "f2", 1.0 / 3.0);
    if (!(T > 0.0)) throw ValidationError("make_path: T must be positive");
    check_polar_range(theta0, "theta0");
    check_polar_range(theta1, "theta1");
    if (!(f1 > 0.0 && f2 > 0.0 && f1 + f2 < 1.0))
      throw ValidationError("make_path: segment fractions must satisfy f1, f2 > 0, f1 + f2 < 1");
    auto segments = mlm_segments(theta0, phi0, theta1, T, f1, f2);
    if (complexified) {
      const double beta = get_param(params, "beta", 0.0);
      const double gamma = get_param(params, "gamma", 0.0);
      for (auto& seg : segments) seg = add_bump(seg, beta, gamma);
    }
    return ComplexAnglePath(family, params, std::move(segments));
  }

  throw ValidationError("make_path: unknown family '" + family + "'");
}

std::vector<PathFamilyInfo> list_path_families() {
  return {
      {"circle", {"theta0"}, {"phi0", "T"}},
      {"mlm", {"theta0", "theta1"}, {"phi0", "T", "f1", "f2"}},
      {"complex-circle", {"theta0"}, {"phi0", "T", "beta", "gamma"}},
      {"complex-mlm", {"theta0", "theta1"}, {"phi0", "T", "f1", "f2", "beta", "gamma"}},
  };
}

PathSample sample(const ComplexAnglePath& path, double t) {
  const auto& seg = path.segments()[path.segment_index(t)];
  PathSample s = seg.eval(t);
  if (!std::isfinite(s.theta.real()) || !std::isfinite(s.theta.imag()) ||
      !std::isfinite(s.phi.real()) || !std::isfinite(s.phi.imag()) ||
      !std::isfinite(s.dtheta.real()) || !std::isfinite(s.dtheta.imag()) ||
      !std::isfinite(s.dphi.real()) || !std::isfinite(s.dphi.imag()))
    throw NumericalError("sample: non-finite trajectory value");
  return s;
}

double ClosureReport::max_residual() const {
  double r = std::max({im_theta_start, im_theta_end, im_phi_start, im_phi_end, theta_mismatch,
                       phi_mismatch_mod_2pi});
  if (derivatives_checked)
    r = std::max({r, im_dtheta_start, im_dtheta_end, im_dphi_start, im_dphi_end});
  return r;
}

ClosureReport validate_closure(const ComplexAnglePath& path, double tol,
                               bool check_derivative_realness) {
  const auto& first = path.segments().front();
  const auto& last = path.segments().back();
  const double t0 = path.t0();
  const double tf = path.tf();

  ClosureReport rep;
  rep.tol = tol;
  rep.im_theta_start = std::abs(first.theta(t0).imag());
  rep.im_theta_end = std::abs(last.theta(tf).imag());
  rep.im_phi_start = std::abs(first.phi(t0).imag());
  rep.im_phi_end = std::abs(last.phi(tf).imag());
  rep.theta_mismatch = std::abs(last.theta(tf) - first.theta(t0));

  Complex dphi_loop = last.phi(tf) - first.phi(t0);
  dphi_loop -= 2.0 * pi * std::round(dphi_loop.real() / (2.0 * pi));
  rep.phi_mismatch_mod_2pi = std::abs(dphi_loop);

  if (check_derivative_realness) {
    rep.derivatives_checked = true;
    rep.im_dtheta_start = std::abs(first.dtheta(t0).imag());
    rep.im_dtheta_end = std::abs(last.dtheta(tf).imag());
    rep.im_dphi_start = std::abs(first.dphi(t0).imag());
    rep.im_dphi_end = std::abs(last.dphi(tf).imag());
  }
  rep.pass = rep.max_residual() <= tol;
  return rep;
}

void require_closed(const ComplexAnglePath& path, double tol) {
  // value closure only: a path deviated by a constant (possibly complex)
  // azimuthal offset still closes even though its endpoints go non-real
  const auto& first = path.segments().front();
  const auto& last = path.segments().back();
  const double theta_gap = std::abs(last.theta(path.tf()) - first.theta(path.t0()));
  Complex phi_gap = last.phi(path.tf()) - first.phi(path.t0());
  phi_gap -= 2.0 * pi * std::round(phi_gap.real() / (2.0 * pi));
  if (theta_gap > tol || std::abs(phi_gap) > tol)
    throw ValidationError("path does not close: theta gap " + std::to_string(theta_gap) +
                          ", phi gap (mod 2pi) " + std::to_string(std::abs(phi_gap)));
}

ComplexAnglePath reparametrize(const ComplexAnglePath& path,
                               const std::function<double(double)>& g,
                               const std::function<double(double)>& g_dot) {
  const double a = path.t0();
  const double b = path.tf();
  const double span = b - a;
  if (std::abs(g(a) - a) > 1e-9 * span || std::abs(g(b) - b) > 1e-9 * span)
    throw ValidationError("reparametrize: g must fix both endpoints");
  for (int i = 0; i < 128; ++i) {
    const double u = a + span * i / 128.0;
    const double v = a + span * (i + 1) / 128.0;
    if (g(v) < g(u) - 1e-12 * span)
      throw ValidationError("reparametrize: g must be monotone nondecreasing");
  }

  auto g_inverse = [&g, a, b, span](double target) {
    double lo = a, hi = b;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * span; ++i) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<PathSegment> segs;
  double prev = a;
  const auto& orig = path.segments();
  for (std::size_t k = 0; k < orig.size(); ++k) {
    const double end = (k + 1 == orig.size()) ? b : g_inverse(orig[k].t_end);
    const double lo = orig[k].t_start;
    const double hi = orig[k].t_end;
    auto mapped = [g, lo, hi](double t) { return std::clamp(g(t), lo, hi); };
    PathSegment seg;
    seg.t_start = prev;
    seg.t_end = end;
    seg.theta = [f = orig[k].theta, mapped](double t) { return f(mapped(t)); };
    seg.phi = [f = orig[k].phi, mapped](double t) { return f(mapped(t)); };
    seg.dtheta = [f = orig[k].dtheta, mapped, g_dot](double t) { return f(mapped(t)) * g_dot(t); };
    seg.dphi = [f = orig[k].dphi, mapped, g_dot](double t) { return f(mapped(t)) * g_dot(t); };
    segs.push_back(std::move(seg));
    prev = end;
  }
  return ComplexAnglePath(path.family() + "-reparam", path.params(), std::move(segs));
}

ComplexAnglePath reparametrize_smoothstep(const ComplexAnglePath& path) {
  const double a = path.t0();
  const double span = path.duration();
  auto g = [a, span](double t) {
    const double s = (t - a) / span;
    return a + span * s * s * (3.0 - 2.0 * s);
  };
  auto g_dot = [a, span](double t) {
    const double s = (t - a) / span;
    return 6.0 * s * (1.0 - s);
  };
  return reparametrize(path, g, g_dot);
}

ComplexAnglePath shift_phi(const ComplexAnglePath& path, Complex offset) {
  std::vector<PathSegment> segs;
  for (const auto& seg : path.segments()) {
    PathSegment out = seg;
    out.phi = [f = seg.phi, offset](double t) { return f(t) + offset; };
    segs.push_back(std::move(out));
  }
  auto params = path.params();
  params["shift_re"] = offset.real();
  params["shift_im"] = offset.imag();
  return ComplexAnglePath(path.family() + "-shifted", std::move(params), std::move(segs));
}

}  // namespace cbloch
