#include "carroll/duality.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carroll/diff.hpp"
#include "carroll/errors.hpp"

namespace carroll::duality {

using state = std::array<double, 4>;

namespace {
constexpr double kOdeTol = 1e-13;
constexpr double kOverflow = 1e150;

void integrate(const DualityInput& in, state& y, double from, double to) {
  using namespace boost::numeric::odeint;
  if (from == to) return;
  auto rhs = [&](const state& s, state& ds, double x) {
    const double q = in.q(x);
    ds[0] = s[1];
    ds[1] = q * s[0];
    ds[2] = s[3];
    ds[3] = q * s[2];
  };
  auto stepper = make_controlled(kOdeTol, kOdeTol, runge_kutta_fehlberg78<state>());
  const double h0 = 1e-3 * (to - from);
  integrate_adaptive(stepper, rhs, y, from, to, h0);
  for (double v : y)
    if (!std::isfinite(v) || std::abs(v) > kOverflow)
      throw IntegrationError("solve_fundamental: solution exceeded overflow threshold");
}

double angle_step(double from, double to) { return std::remainder(to - from, 2.0 * std::numbers::pi); }
}  // namespace

double DualityInput::q(double x) const { return 2.0 * mass / (hbar * hbar) * (V_sch(x) - E_sch); }
double DualityInput::ic() const { return std::isnan(ic_point) ? a : ic_point; }
double DualityInput::anchor_point() const { return std::isnan(anchor) ? ic() : anchor; }

FundamentalSystem solve_fundamental(const DualityInput& in) {
  if (!(in.b > in.a)) throw InvalidArgument("solve_fundamental: need a < b");
  if (in.samples < 16) throw InvalidArgument("solve_fundamental: need >= 16 samples");
  if (!(in.E0 > 0)) throw InvalidArgument("DualityInput: E0 must be positive");
  const double x0 = in.ic();
  if (x0 < in.a || x0 > in.b) throw InvalidArgument("solve_fundamental: ic point outside [a, b]");

  FundamentalSystem s;
  const auto n = in.samples;
  const double h = (in.b - in.a) / static_cast<double>(n - 1);
  s.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.x[i] = in.a + static_cast<double>(i) * h;
  s.x.back() = in.b;
  s.y1.resize(n);
  s.dy1.resize(n);
  s.y2.resize(n);
  s.dy2.resize(n);
  auto store = [&](std::size_t i, const state& y) {
    s.y1[i] = y[0];
    s.dy1[i] = y[1];
    s.y2[i] = y[2];
    s.dy2[i] = y[3];
  };
  const state y0{in.ics.y1, in.ics.dy1, in.ics.y2, in.ics.dy2};
  const auto first_up = static_cast<std::size_t>(std::lower_bound(s.x.begin(), s.x.end(), x0) - s.x.begin());

  state y = y0;
  double cur = x0;
  for (std::size_t i = first_up; i < n; ++i) {
    integrate(in, y, cur, s.x[i]);
    cur = s.x[i];
    store(i, y);
  }
  y = y0;
  cur = x0;
  for (std::size_t i = first_up; i-- > 0;) {
    integrate(in, y, cur, s.x[i]);
    cur = s.x[i];
    store(i, y);
  }
  return s;
}

SchwarzianMap::SchwarzianMap(DualityInput in) : in_(std::move(in)), sys_(solve_fundamental(in_)) {
  const auto n = sys_.x.size();
  const double h = sys_.x[1] - sys_.x[0];
  auto node_of = [&](double x) {
    const double f = std::round((x - in_.a) / h);
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(n - 1)));
  };

  // Unwrap atan2(y1, y2) outward from the node nearest the ic point.
  theta_.assign(n, 0.0);
  const auto i0 = node_of(in_.ic());
  theta_[i0] = std::atan2(sys_.y1[i0], sys_.y2[i0]);
  for (std::size_t i = i0 + 1; i < n; ++i)
    theta_[i] = theta_[i - 1] + angle_step(theta_[i - 1], std::atan2(sys_.y1[i], sys_.y2[i]));
  for (std::size_t i = i0; i-- > 0;)
    theta_[i] = theta_[i + 1] + angle_step(theta_[i + 1], std::atan2(sys_.y1[i], sys_.y2[i]));

  const double w = sys_.wronskian(i0);
  if (w == 0.0) throw NoValidWindow("build_map: solutions are linearly dependent");
  orient_ = w < 0 ? 1 : -1;

  double ymax = 0.0;
  for (double v : sys_.y2) ymax = std::max(ymax, std::abs(v));
  const double floor = 1e-6 * ymax;
  const auto ia = node_of(in_.anchor_point());
  if (!(std::abs(sys_.y2[ia]) > floor)) throw NoValidWindow("build_map: y2 vanishes at the anchor");
  lo_ = hi_ = ia;
  // A zero of y2 between nodes shows up as a sign change.
  auto keeps = [&](std::size_t i, std::size_t j) {
    return std::abs(sys_.y2[j]) > floor && (sys_.y2[i] > 0) == (sys_.y2[j] > 0);
  };
  while (lo_ > 0 && keeps(lo_, lo_ - 1)) --lo_;
  while (hi_ + 1 < n && keeps(hi_, hi_ + 1)) ++hi_;
  if (hi_ - lo_ < 8 || sys_.x[hi_] - sys_.x[lo_] < in_.min_window)
    throw NoValidWindow("build_map: zero-free window shorter than requested");
}

std::pair<double, double> SchwarzianMap::valid_interval() const { return {sys_.x[lo_], sys_.x[hi_]}; }

std::pair<double, double> SchwarzianMap::tau_range() const {
  const double s = in_.hbar / in_.E0;
  const double a = s * theta_[lo_], b = s * theta_[hi_];
  return {std::min(a, b), std::max(a, b)};
}

std::size_t SchwarzianMap::nearest_node(double x) const {
  const double h = sys_.x[1] - sys_.x[0];
  const double f = std::round((x - in_.a) / h);
  return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(sys_.x.size() - 1)));
}

std::array<double, 4> SchwarzianMap::state_at(double x) const {
  const auto j = nearest_node(x);
  state y{sys_.y1[j], sys_.dy1[j], sys_.y2[j], sys_.dy2[j]};
  integrate(in_, y, sys_.x[j], x);
  return y;
}

double SchwarzianMap::tau_from_state(const std::array<double, 4>& s, std::size_t node) const {
  const double th = theta_[node] + angle_step(theta_[node], std::atan2(s[0], s[2]));
  return in_.hbar / in_.E0 * th;
}

double SchwarzianMap::sigma(double x) const {
  const auto s = state_at(x);
  return s[0] / s[2];
}

double SchwarzianMap::tau(double x) const { return tau_from_state(state_at(x), nearest_node(x)); }

double SchwarzianMap::dtau(double x) const {
  const auto s = state_at(x);
  return in_.hbar / in_.E0 * (s[1] * s[2] - s[0] * s[3]) / (s[0] * s[0] + s[2] * s[2]);
}

double SchwarzianMap::d2tau(double x) const {
  const auto s = state_at(x);
  const double R = s[0] * s[0] + s[2] * s[2];
  const double dR = 2.0 * (s[0] * s[1] + s[2] * s[3]);
  return -in_.hbar / in_.E0 * (s[1] * s[2] - s[0] * s[3]) * dR / (R * R);
}

std::vector<double> SchwarzianMap::tau_stencil(double x, double h, int m) const {
  std::vector<double> out(static_cast<std::size_t>(2 * m + 1));
  const auto c = static_cast<std::size_t>(m);
  const state s0 = state_at(x);
  out[c] = tau_from_state(s0, nearest_node(x));
  const double k = in_.hbar / in_.E0;
  for (int dir : {1, -1}) {
    state y = s0;
    double cur = x, th = std::atan2(y[0], y[2]), acc = out[c];
    for (int j = 1; j <= m; ++j) {
      const double nx = x + dir * j * h;
      integrate(in_, y, cur, nx);
      cur = nx;
      const double nt = std::atan2(y[0], y[2]);
      acc += k * angle_step(th, nt);
      th = nt;
      out[static_cast<std::size_t>(static_cast<int>(c) + dir * j)] = acc;
    }
  }
  return out;
}

std::vector<double> SchwarzianMap::sigma_stencil(double x, double h, int m) const {
  std::vector<double> out(static_cast<std::size_t>(2 * m + 1));
  const auto c = static_cast<std::size_t>(m);
  const state s0 = state_at(x);
  out[c] = s0[0] / s0[2];
  for (int dir : {1, -1}) {
    state y = s0;
    double cur = x;
    for (int j = 1; j <= m; ++j) {
      const double nx = x + dir * j * h;
      integrate(in_, y, cur, nx);
      cur = nx;
      out[static_cast<std::size_t>(static_cast<int>(c) + dir * j)] = y[0] / y[2];
    }
  }
  return out;
}

double SchwarzianMap::delta(double t) const {
  const auto [tlo, thi] = tau_range();
  if (!(t >= tlo && t <= thi)) throw SingularMap("delta: t outside the map's range");
  const double k = in_.hbar / in_.E0;
  // Node values k*theta are monotone in the window with orientation orient_.
  std::size_t lo = lo_, hi = hi_;
  auto key = [&](std::size_t i) { return orient_ * k * theta_[i]; };
  const double target = orient_ * t;
  while (hi - lo > 1) {
    const auto mid = (lo + hi) / 2;
    (key(mid) <= target ? lo : hi) = mid;
  }
  const double xa = sys_.x[lo], xb = sys_.x[hi];
  const double ta = key(lo), tb = key(hi);
  double x = tb > ta ? xa + (target - ta) / (tb - ta) * (xb - xa) : xa;
  for (int it = 0; it < 60; ++it) {
    const double f = tau(x) - t;
    const double dx = f / dtau(x);
    x = std::clamp(x - dx, xa, xb);
    if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

double SchwarzianMap::ddelta(double t) const { return 1.0 / dtau(delta(t)); }

double SchwarzianMap::d2delta(double t) const {
  const double x = delta(t);
  const double d1 = dtau(x);
  return -d2tau(x) / (d1 * d1 * d1);
}

SchwarzianMap build_map(const DualityInput& in) { return SchwarzianMap(in); }

double schwarzian(double d1, double d2, double d3) {
  const double r = d2 / d1;
  return d3 / d1 - 1.5 * r * r;
}

double verify_inverse_master(const SchwarzianMap& map, std::span<const double> xs, double h) {
  const auto& in = map.input();
  double worst = 0.0;
  for (double x : xs) {
    const auto st = map.tau_stencil(x, h, 4);
    const double d1 = fd1_6(st, 4, h), d2 = fd2_6(st, 4, h), d3 = fd3_6(st, 4, h);
    const double lhs = schwarzian(d1, d2, d3) + 2.0 * in.E0 * in.E0 / (in.hbar * in.hbar) * d1 * d1;
    const double rhs = -4.0 * in.mass / (in.hbar * in.hbar) * (in.V_sch(x) - in.E_sch);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double pure_schwarzian_residual(const SchwarzianMap& map, std::span<const double> xs, double h) {
  double worst = 0.0;
  for (double x : xs) {
    const auto st = map.sigma_stencil(x, h, 4);
    const double s = schwarzian(fd1_6(st, 4, h), fd2_6(st, 4, h), fd3_6(st, 4, h));
    worst = std::max(worst, std::abs(s + 2.0 * map.input().q(x)));
  }
  return worst;
}

std::vector<std::complex<double>> carroll_potential(const SchwarzianMap& map,
                                                    std::span<const double> ts) {
  const double hbar = map.input().hbar;
  std::vector<std::complex<double>> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const double x = map.delta(t);
    const double d1 = map.dtau(x), d2 = map.d2tau(x);
    if (!std::isfinite(d1) || !std::isfinite(d2) || d1 == 0.0)
      throw SingularMap("carroll_potential: delta' vanishes or is undefined");
    out.emplace_back(0.0, 0.5 * hbar * d2 / (d1 * d1));
  }
  return out;
}

std::complex<double> forward_potential(const SchwarzianMap& map, double t) {
  const auto& in = map.input();
  const double ht = 1e-3;
  const std::array<double, 5> ts{t - 2 * ht, t - ht, t, t + ht, t + 2 * ht};
  const auto v = carroll_potential(map, ts);
  const auto dv = (-v[4] + 8.0 * v[3] - 8.0 * v[1] + v[0]) / (12.0 * ht);
  const double d1 = map.dtau(map.delta(t));
  const std::complex<double> I{0.0, 1.0};
  return in.E_sch + (I * in.hbar * dv + v[2] * v[2] - in.E0 * in.E0) * d1 * d1 / (2.0 * in.mass);
}

namespace {
DualityInput channel(double mass, double Omega, double hbar, const CoupledOptions& o) {
  DualityInput in;
  in.V_sch = [=](double x) { return 0.5 * mass * Omega * Omega * x * x; };
  in.E_sch = o.energy_fraction * 0.5 * hbar * Omega;
  in.E0 = o.E0;
  in.mass = mass;
  in.hbar = hbar;
  in.a = -o.half_width;
  in.b = o.half_width;
  in.ic_point = 0.0;
  in.samples = o.samples;
  return in;
}
}  // namespace

CoupledOscillatorMap::CoupledOscillatorMap(const PhysParams& p, CoupledOptions opt)
    : wX_(p.omega),
      wxi_(std::sqrt(p.omega * p.omega + 2.0 * p.k_c / p.m)),
      X_(channel(2.0 * p.m, wX_, p.hbar, opt)),
      xi_(channel(0.5 * p.m, wxi_, p.hbar, opt)) {
  if (!(p.omega > 0)) throw InvalidArgument("coupled_oscillator_map: omega must be positive");
}

std::pair<double, double> CoupledOscillatorMap::mixed(double t1, double t2) const {
  const double X = X_.delta(0.5 * (t1 + t2));
  const double xi = xi_.delta(t1 - t2);
  return {X + 0.5 * xi, X - 0.5 * xi};
}

std::complex<double> CoupledOscillatorMap::potential(double t1, double t2) const {
  const double a = 0.5 * (t1 + t2), b = t1 - t2;
  return carroll_potential(X_, std::span<const double>(&a, 1))[0] +
         carroll_potential(xi_, std::span<const double>(&b, 1))[0];
}

CoupledOscillatorMap coupled_oscillator_map(const PhysParams& p, CoupledOptions opt) {
  return CoupledOscillatorMap(p, opt);
}

}  // namespace carroll::duality
