"""Compare the Cython and numpy kernel backends.

Times each hot loop directly and through the public call that uses it, and
checks that both backends return the same numbers.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import time

import numpy as np

from photmol import _kernels, boundstate, keldysh, tmatrix
from photmol.physics import WaveguideParams

NAMES = ("hilbert_remainder", "upwind_advect", "band_sums")


def use(backend):
    impl = _kernels.available_backends()[backend]
    for name in NAMES:
        setattr(_kernels, name, getattr(impl, name))


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def cases():
    spec = keldysh.lorentzian_spectral(0.05, 2e-3, -1.0, 1.0, 4001)
    v_e = 1e5
    params = WaveguideParams.from_ratio(2 * math.pi * 0.2)
    s = np.linspace(0.5, 150.0, 400) + 0j
    x = np.linspace(0.0, 1.0, 10_000)
    packet = np.exp(-((x - 0.2) / 0.01) ** 2) + 0j
    phase = np.exp(1j * np.where(np.abs(x - 0.5) < 0.01, 1e-3, 0.0))

    def upwind():
        a, b = packet.copy(), packet.copy()
        return _kernels.upwind_advect(a, b, phase, 1.0, 5_000)

    return {
        "upwind_advect kernel (1e4 cells x 5e3 steps)": upwind,
        "retarded_from_spectral (4001 pts)": lambda: keldysh.retarded_from_spectral(spec).values,
        "propagate_pair grid (1e4 cells)": lambda: np.array([boundstate.propagate_pair(4 * math.pi * v_e, v_e).theta_grid]),
        "band_integral (400 s, Lambda=1e2)": lambda: tmatrix.band_integral(s, 1.0, 100.0),
        "critical_temperature (control, no kernel)": lambda: np.array(
            [tmatrix.critical_temperature(params, "numeric").T_c_kelvin]),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = sorted(_kernels.available_backends())
    print(f"backends: {', '.join(backends)}")
    if "cython" not in backends:
        print("Cython extension not built; only the numpy timings are shown")
    rows = []
    for label, fn in cases().items():
        timings, outputs = {}, {}
        for backend in backends:
            use(backend)
            fn()  # warm caches
            timings[backend], outputs[backend] = best_of(fn, args.repeat)
        ref = outputs["python"]
        diff = max(float(np.max(np.abs(o - ref)) / max(np.max(np.abs(ref)), 1e-300)) for o in outputs.values())
        rows.append((label, timings, diff))
    use(_kernels.BACKEND)
    width = max(len(r[0]) for r in rows)
    head = f"{'case':<{width}}  " + "  ".join(f"{b:>10}" for b in backends) + "  speedup  max rel diff"
    print(head)
    print("-" * len(head))
    for label, timings, diff in rows:
        cols = "  ".join(f"{timings[b] * 1e3:8.2f}ms" for b in backends)
        speed = timings["python"] / timings["cython"] if "cython" in timings else 1.0
        print(f"{label:<{width}}  {cols}  {speed:6.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
