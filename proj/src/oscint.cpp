#include "rieszlab/oscint.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>

namespace rieszlab {

namespace {

// (G7, K15) nodes and weights.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, err;
};

Panel eval_panel(const std::function<double(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const double fc = f(c);
  double resk = wgk[7] * fc;
  double resg = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * xgk[j]);
    const double f2 = f(c + h * xgk[j]);
    resk += wgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += wg[(j - 1) / 2] * (f1 + f2);
  }
  Panel p;
  p.lo = lo;
  p.hi = hi;
  p.value = resk * h;
  p.err = std::fabs(resk - resg) * h;
  return p;
}

}  // namespace

QuadOutcome integrate_gk(const std::function<double(double)>& f, double lo, double hi,
                         double abs_tol, double init_width, int max_panels, Exec exec) {
  if (!(hi > lo)) return {};
  const long nseed =
      std::max<long>(1, static_cast<long>(std::ceil((hi - lo) / init_width)));
  const double w = (hi - lo) / static_cast<double>(nseed);
  std::vector<Panel> panels = indexed_map<Panel>(
      static_cast<std::size_t>(nseed), exec, [&](std::size_t i) {
        const double a = lo + w * static_cast<double>(i);
        const double b = (static_cast<long>(i) + 1 == nseed) ? hi : a + w;
        return eval_panel(f, a, b);
      });

  auto cmp = [&panels](std::size_t a, std::size_t b) {
    return panels[a].err < panels[b].err;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> worst(cmp);
  double total_err = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    total_err += panels[i].err;
    worst.push(i);
  }
  while (total_err > abs_tol && static_cast<int>(panels.size()) < max_panels &&
         !worst.empty()) {
    std::size_t idx = worst.top();
    worst.pop();
    Panel p = panels[idx];
    if (p.err <= 0.0) break;
    const double mid = 0.5 * (p.lo + p.hi);
    Panel a = eval_panel(f, p.lo, mid);
    Panel b = eval_panel(f, mid, p.hi);
    total_err += a.err + b.err - p.err;
    panels[idx] = a;
    worst.push(idx);
    panels.push_back(b);
    worst.push(panels.size() - 1);
  }
  QuadOutcome out;
  out.panels = static_cast<long>(panels.size());
  // Sum in interval order so the result is independent of refinement history
  // bookkeeping and of the thread count used for seeding.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  for (const Panel& p : panels) {
    out.value += p.value;
    out.err += p.err;
  }
  return out;
}

SpectralDensity::SpectralDensity(const Configuration& cfg, const Window& window) {
  length_ = window.length();
  const double c = window.center();
  xs_.reserve(cfg.size());
  ms_.reserve(cfg.size());
  for (const Atom& a : cfg.atoms()) {
    xs_.push_back(a.pos - c);
    ms_.push_back(static_cast<double>(a.mult));
    mass_ += static_cast<double>(a.mult);
    sum_mult_sq_ += static_cast<double>(a.mult) * static_cast<double>(a.mult);
  }
}

double SpectralDensity::operator()(double xi) const {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const double a = xi * xs_[i];
    re += ms_[i] * std::cos(a);
    im -= ms_[i] * std::sin(a);
  }
  const double lhat = (xi == 0.0) ? length_ : 2.0 * std::sin(0.5 * xi * length_) / xi;
  re -= lhat;
  return re * re + im * im;
}

namespace {

constexpr double kPanelEnd = 40.0;  // asymptotic expansion beyond; panels below

// J(p, w) = int_w^inf e^{iu} u^{-p} du for w >= kPanelEnd via integration by
// parts; the remainder after the last kept term is bounded by that term.
std::complex<double> asym_tail(double p, double w, double* err) {
  std::complex<double> sum = 0.0;
  double poch = 1.0;  // (p)_k
  double best = std::pow(w, 1.0 - p) / (p - 1.0);
  const std::complex<double> i_unit(0.0, 1.0);
  std::complex<double> coef = i_unit;  // i * (-i)^k; each by-parts step brings -i*(p+k)
  for (int k = 0; k < 60; ++k) {
    const double tmag = poch * std::pow(w, -p - static_cast<double>(k));
    if (tmag >= best) break;
    sum += coef * poch * std::pow(w, -p - static_cast<double>(k));
    best = tmag;
    if (best < 1e-18) break;
    poch *= p + static_cast<double>(k);
    coef *= -i_unit;
  }
  *err = best;
  return std::exp(std::complex<double>(0.0, w)) * sum;
}

// Both trig integrals over [a, b] with 1 < a < b <= kPanelEnd by direct
// panels; the integrand is smooth there.
void panel_trig(double p, double a, double b, double* cosint, double* sinint,
                double* err) {
  *cosint = 0.0;
  *sinint = 0.0;
  *err = 0.0;
  double lo = a;
  while (lo < b) {
    double hi = std::min(b, lo + 2.0);
    Panel pc = eval_panel([p](double u) { return std::cos(u) * std::pow(u, -p); }, lo, hi);
    Panel ps = eval_panel([p](double u) { return std::sin(u) * std::pow(u, -p); }, lo, hi);
    // one bisection level for an honest error estimate on steep panels
    if (pc.err + ps.err > 1e-15) {
      double mid = 0.5 * (lo + hi);
      Panel pc1 = eval_panel([p](double u) { return std::cos(u) * std::pow(u, -p); }, lo, mid);
      Panel pc2 = eval_panel([p](double u) { return std::cos(u) * std::pow(u, -p); }, mid, hi);
      Panel ps1 = eval_panel([p](double u) { return std::sin(u) * std::pow(u, -p); }, lo, mid);
      Panel ps2 = eval_panel([p](double u) { return std::sin(u) * std::pow(u, -p); }, mid, hi);
      pc.value = pc1.value + pc2.value;
      pc.err = pc1.err + pc2.err;
      ps.value = ps1.value + ps2.value;
      ps.err = ps1.err + ps2.err;
    }
    *cosint += pc.value;
    *sinint += ps.value;
    *err += pc.err + ps.err;
    lo = hi;
  }
}

// int_w^1 of cos(u) u^{-p} resp. sin(u) u^{-p} by termwise integration of the
// trig series; exact limit handling where an exponent vanishes.
double series_piece(double e, double w) {
  if (std::fabs(e) < 1e-9) return -std::log(w);
  return (1.0 - std::pow(w, e)) / e;
}

void series_below_one(double p, double w, double* cosint, double* sinint, double* err) {
  double c = 0.0, s = 0.0;
  double fact = 1.0;  // (2k)!
  for (int k = 0; k <= 12; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c += sign / fact * series_piece(2.0 * k + 1.0 - p, w);
    fact *= (2.0 * k + 1.0);  // now (2k+1)!
    s += sign / fact * series_piece(2.0 * k + 2.0 - p, w);
    fact *= (2.0 * k + 2.0);  // now (2k+2)!
  }
  *cosint = c;
  *sinint = s;
  *err = (1.0 - std::log(std::min(w, 1.0))) / 4.0e28;  // < 1/(26)! x scale
}

void trig_power_tail(double p, double w, double* cosv, double* sinv, double* err) {
  if (!(p > 1.0)) throw std::invalid_argument("trig_power_tail: need p > 1");
  if (!(w > 0.0)) throw std::invalid_argument("trig_power_tail: need w > 0");
  if (w >= kPanelEnd) {
    double e;
    std::complex<double> j = asym_tail(p, w, &e);
    *cosv = j.real();
    *sinv = j.imag();
    *err = 2.0 * e;
    return;
  }
  double e_asym;
  std::complex<double> j = asym_tail(p, kPanelEnd, &e_asym);
  double c = j.real(), s = j.imag(), err_total = 2.0 * e_asym;
  if (w < 1.0) {
    double cs, ss, es;
    series_below_one(p, w, &cs, &ss, &es);
    double cp, sp, ep;
    panel_trig(p, 1.0, kPanelEnd, &cp, &sp, &ep);
    c += cs + cp;
    s += ss + sp;
    err_total += es + ep;
  } else {
    double cp, sp, ep;
    panel_trig(p, w, kPanelEnd, &cp, &sp, &ep);
    c += cp;
    s += sp;
    err_total += ep;
  }
  *cosv = c;
  *sinv = s;
  *err = err_total;
}

}  // namespace

OscValue cos_power_tail(double p, double w) {
  double c, s, e;
  trig_power_tail(p, w, &c, &s, &e);
  return {c, e};
}

OscValue sin_power_tail(double p, double w) {
  double c, s, e;
  trig_power_tail(p, w, &c, &s, &e);
  return {s, e};
}

OscValue spectral_power_tail(const SpectralDensity& sd, double q, double Xi) {
  if (!(q > 1.0)) throw std::invalid_argument("spectral_power_tail: need q > 1");
  const auto& xs = sd.positions();
  const auto& ms = sd.mults();
  const double L = sd.length();
  OscValue out;

  // non-oscillatory diagonal
  out.value += sd.sum_mult_sq() * std::pow(Xi, 1.0 - q) / (q - 1.0);

  // atom-pair components at frequency |x_i - x_j|
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double d = std::fabs(xs[j] - xs[i]);
      const double coef = 2.0 * ms[i] * ms[j];
      if (d < 1e-14) {
        out.value += coef * std::pow(Xi, 1.0 - q) / (q - 1.0);
        continue;
      }
      const double scale = std::pow(d, q - 1.0);
      OscValue t = cos_power_tail(q, d * Xi);
      out.value += coef * scale * t.value;
      out.err += coef * scale * t.err;
    }
  }

  // atom against the window edges
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (double a : {0.5 * L + xs[i], 0.5 * L - xs[i]}) {
      if (a < 1e-14) continue;
      const double scale = std::pow(a, q);
      OscValue t = sin_power_tail(q + 1.0, a * Xi);
      out.value += -2.0 * ms[i] * scale * t.value;
      out.err += 2.0 * ms[i] * scale * t.err;
    }
  }

  // window self-interaction: 2(1 - cos(L xi)) xi^{-q-2}
  out.value += 2.0 * std::pow(Xi, -(q + 1.0)) / (q + 1.0);
  {
    const double scale = std::pow(L, q + 1.0);
    OscValue t = cos_power_tail(q + 2.0, L * Xi);
    out.value -= 2.0 * scale * t.value;
    out.err += 2.0 * scale * t.err;
  }
  return out;
}

QuadOutcome spectral_low_power(const SpectralDensity& sd, double q,
                               const QuadratureSettings& qs) {
  if (!(q < 3.0)) throw std::invalid_argument("spectral_low_power: need q < 3");
  if (q >= 1.0 && std::fabs(sd.mass() - sd.length()) > 1e-9)
    throw std::domain_error(
        "spectral_low_power: non-neutral configuration, integral diverges");
  const double alpha = 2.0 / (3.0 - q);
  const double t_hi = std::pow(qs.split_point, 1.0 / alpha);
  auto f = [&](double t) {
    const double xi = std::pow(t, alpha);
    return alpha * std::pow(t, alpha - 1.0) * std::pow(xi, -q) * sd(xi);
  };
  QuadOutcome r = integrate_gk(f, 0.0, t_hi, 0.25 * qs.abs_tol, t_hi / 16.0,
                               qs.max_panels, qs.exec);
  r.value *= 2.0;
  r.err *= 2.0;
  return r;
}

QuadOutcome spectral_high_power(const SpectralDensity& sd, double q,
                                const QuadratureSettings& qs) {
  const double width = std::min(1.0, 4.5 / std::max(1.0, sd.length()));
  auto f = [&](double xi) { return sd(xi) * std::pow(xi, -q); };
  double Xi = qs.xi_cutoff;
  QuadOutcome body;
  OscValue tail;
  for (int round = 0;; ++round) {
    body = integrate_gk(f, qs.split_point, Xi, 0.25 * qs.abs_tol, width,
                        qs.max_panels, qs.exec);
    tail = spectral_power_tail(sd, q, Xi);
    if (tail.err <= 0.25 * qs.abs_tol || round >= 4) break;
    Xi *= 2.0;
  }
  QuadOutcome out;
  out.value = 2.0 * (body.value + tail.value);
  out.err = 2.0 * (body.err + tail.err);
  out.panels = body.panels;
  return out;
}

QuadOutcome spectral_full_power(const SpectralDensity& sd, double q,
                                const QuadratureSettings& qs) {
  QuadOutcome lo = spectral_low_power(sd, q, qs);
  QuadOutcome hi = spectral_high_power(sd, q, qs);
  QuadOutcome out;
  out.value = lo.value + hi.value;
  out.err = lo.err + hi.err;
  out.panels = lo.panels + hi.panels;
  return out;
}

QuadOutcome spectral_exp_weight(const SpectralDensity& sd, const QuadratureSettings& qs,
                                bool above_split_only) {
  auto f = [&](double xi) { return 2.0 / (1.0 + xi * xi) * sd(xi); };
  const double width = std::min(1.0, 4.5 / std::max(1.0, sd.length()));
  QuadOutcome out;
  if (!above_split_only) {
    QuadOutcome lo =
        integrate_gk(f, 0.0, qs.split_point, 0.25 * qs.abs_tol,
                     std::min(width, qs.split_point / 8.0), qs.max_panels, qs.exec);
    out.value += lo.value;
    out.err += lo.err;
    out.panels += lo.panels;
  }
  double Xi = std::max(qs.xi_cutoff, 8.0);
  QuadOutcome body = integrate_gk(f, qs.split_point, Xi, 0.25 * qs.abs_tol, width,
                                  qs.max_panels, qs.exec);
  out.value += body.value;
  out.err += body.err;
  out.panels += body.panels;
  // geometric expansion of the weight beyond the cutoff
  double sign = 1.0;
  for (int k = 1; k <= 4; ++k) {
    OscValue t = spectral_power_tail(sd, 2.0 * k, Xi);
    out.value += sign * 2.0 * t.value;
    out.err += 2.0 * t.err;
    sign = -sign;
  }
  const double peak = sd.mass() + 2.0;  // |nu_hat| <= mass + |window hat|
  out.err += 2.0 * peak * peak * std::pow(Xi, -9.0) / (9.0 * (1.0 - 1.0 / (Xi * Xi)));
  out.value *= 2.0;
  out.err *= 2.0;
  return out;
}

QuadOutcome spectral_gauss_weight(const SpectralDensity& sd, const QuadratureSettings& qs) {
  const double sqrt2pi = 2.5066282746310005024;
  const double peak = sd.mass() + sd.length();
  double Xi = 8.0;
  while (peak * peak * sqrt2pi * std::exp(-0.5 * Xi * Xi) / Xi > 0.25 * qs.abs_tol &&
         Xi < 60.0)
    Xi += 4.0;
  auto f = [&](double xi) { return sqrt2pi * std::exp(-0.5 * xi * xi) * sd(xi); };
  const double width = std::min(1.0, 4.5 / std::max(1.0, sd.length()));
  QuadOutcome out = integrate_gk(f, 0.0, Xi, 0.25 * qs.abs_tol, width, qs.max_panels,
                                 qs.exec);
  out.err += peak * peak * sqrt2pi * std::exp(-0.5 * Xi * Xi) / Xi;
  out.value *= 2.0;
  out.err *= 2.0;
  return out;
}

}  // namespace rieszlab
