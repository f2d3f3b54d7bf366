"""Fitting a post-peak production series and forecasting its decline.

Uses the bundled Norwegian crude snapshot (1980-2014, peak in 2001).
The URR figure bounds the alpha search interval before fitting; the
fitted model then forecasts the decline to 2040 with delta-method bands.
"""

from hubbertfit import datasets
import hubbertfit as hf

panel = datasets.load_norway()
print(f"observations: {panel.times[0][0]:.0f}-{panel.times[0][-1]:.0f}, "
      f"URR snapshot {datasets.NORWAY_URR:.0f}")

box = hf.build_box(panel, urr=datasets.NORWAY_URR)
print(f"alpha search interval: (0, {box.alpha_range[1]:.4f})")

fit = hf.fit(panel, urr=datasets.NORWAY_URR, seed=1)
eta, alpha, sigma = fit.theta_hat
print(f"\nestimates (clock shifted to {fit.time_shift_k:.0f}): "
      f"eta'={eta:.4f} alpha={alpha:.4f} sigma={sigma:.4f}")

peak = hf.estimate_peak(fit)
print(f"estimated peak year {peak.peak_time:.3f} "
      f"(observed peak 2001, rate 3226)")
print(f"estimated peak rate {peak.peak:.1f}")

fc = hf.forecast(fit, s=2014.0, x_s=1568.0, horizon_times=range(2015, 2041, 5))
print("\nyear   mean    95% band")
for t, m, lo, hi in zip(fc.times, fc.point, fc.lower, fc.upper):
    print(f"{t:.0f} {m:8.1f}   [{lo:8.1f}, {hi:8.1f}]")
