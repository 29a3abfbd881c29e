#include "imcf/integrate.hpp"

#include <cmath>
#include <limits>

#include "imcf/errors.hpp"
#include "imcf/smallmat.hpp"

namespace imcf {

BoundaryCondition BoundaryCondition::frozen(const DomainSpec& dom) {
  BoundaryCondition bc;
  if (dom.kind != DomainKind::Patch) return bc;
  bc.impose = [dom](double, Sym2Field& dg, Sym2Field& dh) {
    for (std::size_t p = 0; p < dg.npoints(); ++p) {
      if (!dom.on_boundary(p)) continue;
      for (int c = 0; c < dg.ncomp(); ++c) {
        dg.comp(c)[p] = 0.0;
        dh.comp(c)[p] = 0.0;
      }
    }
  };
  return bc;
}

double stable_dt(const SpacelikeState& st, const StepControl& ctrl) {
  const DomainSpec& dom = st.dom();
  int n = dom.n;
  double dt = ctrl.dt_max;

  Sym2Field ginv = inverse_metric(st.g);
  if (dom.kind != DomainKind::Homogeneous) {
    double lam = 0.0;
    for (std::size_t p = 0; p < ginv.npoints(); ++p) {
      double row = 0.0;
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(ginv(p, i, j));
        row = std::max(row, s);
      }
      lam = std::max(lam, row);
    }
    if (!std::isfinite(lam) || !(lam > 0.0))
      throw DegenerateMetric("non-finite inverse-metric bound in stable_dt");
    double dx2 = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dom.naxes(); ++a) dx2 = std::min(dx2, dom.spacing[a] * dom.spacing[a]);
    dt = std::min(dt, ctrl.cfl * dx2 / (2.0 * n * lam));
  }

  ScalarField A2 = norm_A2(st.h, ginv);
  double a2max = 0.0;
  for (std::size_t p = 0; p < A2.npoints(); ++p) a2max = std::max(a2max, A2(p));
  if (a2max > 0.0) dt = std::min(dt, ctrl.cfl / (4.0 * a2max));
  return dt;
}

namespace {

FlowRhs eval_rhs(const SpacelikeState& st, FlowVariant variant, const GaugeBackground* bg,
                 const BoundaryCondition& bc, double t_stage) {
  FlowRhs r;
  switch (variant) {
    case FlowVariant::Raw: r = rhs_raw(st); break;
    case FlowVariant::Simplified: r = rhs_simplified(st); break;
    case FlowVariant::GaugeFixed: r = rhs_gauge_fixed(st, *bg); break;
  }
  if (bc.impose) bc.impose(t_stage, r.dg, r.dh);
  return r;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

SpacelikeState blend(const SpacelikeState& base, double a, const FlowRhs& k) {
  SpacelikeState s = base;
  axpy(s.g.raw(), a, k.dg.raw());
  axpy(s.h.raw(), a, k.dh.raw());
  return s;
}

}  // namespace

SpacelikeState step(const SpacelikeState& st, FlowVariant variant, const GaugeBackground* bg,
                    double dt, StepMethod method, const BoundaryCondition& bc) {
  if (method == StepMethod::Euler) {
    FlowRhs k1 = eval_rhs(st, variant, bg, bc, st.t);
    SpacelikeState out = blend(st, dt, k1);
    out.t = st.t + dt;
    return out;
  }
  FlowRhs k1 = eval_rhs(st, variant, bg, bc, st.t);
  SpacelikeState s2 = blend(st, 0.5 * dt, k1);
  s2.t = st.t + 0.5 * dt;
  FlowRhs k2 = eval_rhs(s2, variant, bg, bc, s2.t);
  SpacelikeState s3 = blend(st, 0.5 * dt, k2);
  s3.t = st.t + 0.5 * dt;
  FlowRhs k3 = eval_rhs(s3, variant, bg, bc, s3.t);
  SpacelikeState s4 = blend(st, dt, k3);
  s4.t = st.t + dt;
  FlowRhs k4 = eval_rhs(s4, variant, bg, bc, s4.t);

  SpacelikeState out = st;
  double w = dt / 6.0;
  for (std::size_t i = 0; i < out.g.raw().size(); ++i)
    out.g.raw()[i] += w * (k1.dg.raw()[i] + 2.0 * k2.dg.raw()[i] + 2.0 * k3.dg.raw()[i] +
                           k4.dg.raw()[i]);
  for (std::size_t i = 0; i < out.h.raw().size(); ++i)
    out.h.raw()[i] += w * (k1.dh.raw()[i] + 2.0 * k2.dh.raw()[i] + 2.0 * k3.dh.raw()[i] +
                           k4.dh.raw()[i]);
  out.t = st.t + dt;
  return out;
}

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool positive_definite_everywhere(const Sym2Field& g) {
  int n = g.dom().n;
  int m2 = sym2_count(n);
  double a[sym2_count(kMaxDim)], L[kMaxDim * kMaxDim];
  for (std::size_t p = 0; p < g.npoints(); ++p) {
    for (int c = 0; c < m2; ++c) a[c] = g.comp(c)[p];
    if (!chol_packed(n, a, L)) return false;
  }
  return true;
}

}  // namespace

RunResult run_flow(const SpacelikeState& st0, FlowVariant variant, const StepControl& ctrl,
                   std::optional<GaugeData> gauge0, const BoundaryCondition& bc,
                   const RunHooks& hooks, const RunStart& start) {
  RunResult res;
  SpacelikeState st = st0;
  double t_end = ctrl.t_end;
  double eps_end = 1e-12 * std::max(1.0, std::abs(t_end));
  long gstep = start.step0;
  long nstep = 0;

  // Any SPD failure surfacing from diagnostics, stability control or stepping
  // terminates the run with PositivityLost rather than escaping.
  try {
    if (start.M_norm >= 0.0) {
      res.M_norm = start.M_norm;
    } else {
      Sym2Field ginv = inverse_metric(st.g);
      ScalarField A2 = norm_A2(st.h, ginv);
      double a2max = 0.0;
      for (std::size_t p = 0; p < A2.npoints(); ++p) a2max = std::max(a2max, A2(p));
      res.M_norm = std::sqrt(a2max);
    }

    GaugeBackground bg;
    VectorField V_prev;
    if (variant == FlowVariant::GaugeFixed) {
      bg = GaugeBackground::from_metric(gauge0->s);
      V_prev = deturck_vector(st.g, bg.s);
    }

    if (start.initial_record) res.records.push_back(make_record(st, res.M_norm));

    while (st.t < t_end - eps_end) {
      double dt = stable_dt(st, ctrl);
      if (!(dt > 0.0)) {
        res.reason = Termination::Instability;
        break;
      }
      if (st.t + dt > t_end) dt = t_end - st.t;

      SpacelikeState next = step(st, variant, variant == FlowVariant::GaugeFixed ? &bg : nullptr,
                                 dt, ctrl.method, bc);

      if (!all_finite(next.g.raw()) || !all_finite(next.h.raw())) {
        res.reason = Termination::Instability;
        break;
      }
      if (!positive_definite_everywhere(next.g)) {
        res.reason = Termination::PositivityLost;
        break;
      }

      if (variant == FlowVariant::GaugeFixed) {
        VectorField V_next = deturck_vector(next.g, bg.s);
        double ta = st.t, tb = next.t;
        auto V_of_t = [&](double tau) {
          double w = (tb > ta) ? (tau - ta) / (tb - ta) : 0.0;
          VectorField V = V_prev;
          for (std::size_t i = 0; i < V.raw().size(); ++i)
            V.raw()[i] = (1.0 - w) * V_prev.raw()[i] + w * V_next.raw()[i];
          return V;
        };
        gauge0->F = advance_diffeo(gauge0->F, V_of_t, ta, tb, 1);
        V_prev = std::move(V_next);
      }

      st = std::move(next);
      ++nstep;
      ++gstep;

      if (gstep % ctrl.record_every == 0) res.records.push_back(make_record(st, res.M_norm));
      if (ctrl.checkpoint_every > 0 && gstep % ctrl.checkpoint_every == 0 && hooks.checkpoint)
        hooks.checkpoint(st, gauge0 ? &*gauge0 : nullptr, gstep);
    }
  } catch (const NotPositiveDefinite&) {
    res.reason = Termination::PositivityLost;
  } catch (const DegenerateMetric&) {
    res.reason = Termination::Instability;
  } catch (const MapLeftDomain&) {
    res.reason = Termination::MapLeftDomainStop;
  }

  res.final_state = std::move(st);
  res.gauge = std::move(gauge0);
  res.steps = nstep;
  return res;
}

}  // namespace imcf
