"""Anatomy of the production curve.

The rate curve x(t) = x0*((eta+alpha^t0)/(eta+alpha^t))^2*alpha^(t-t0) is
the derivative of a logistic: production ramps up, peaks when alpha^t
crosses eta, and decays symmetrically on the log-time scale.  This demo
prints the landmark quantities for a synthetic field and shows how the
total area (URR) ties them together.
"""

import numpy as np

import hubbertfit as hf

params = hf.CurveParams(eta=0.05, alpha=0.8, x0=100.0, t0=0.0)

t_peak = hf.peak_time(params.eta, params.alpha)
t_inf1, t_inf2 = hf.inflection_times(params.eta, params.alpha)

print("curve parameters:", params)
print(f"peak time        : {t_peak:10.4f}")
print(f"peak rate        : {hf.peak_value(params):10.4f}")
print(f"inflections      : {t_inf1:10.4f}  {t_inf2:10.4f}")
print(f"total area (URR) : {hf.urr(params):10.4f}")

# the URR is the area over the whole real line; a wide trapezoid agrees
t = np.linspace(-80.0, 160.0, 2401)
x = hf.hubbert_value(t, params)
print(f"trapezoid area   : {np.trapezoid(x, t):10.4f}")

# the same physical curve on a calendar clock: shift times by 1980
eta_cal = hf.shift_parameters(params.eta, params.alpha, -1980.0)
print(f"calendar eta     : {eta_cal:10.4e}  (peak year "
      f"{hf.peak_time(eta_cal, params.alpha):.3f})")

print()
print(" t      rate")
for ti in (0, 5, 10, int(round(t_peak)), 20, 30, 50):
    print(f"{ti:3d}  {hf.hubbert_value(float(ti), params):9.3f}")
