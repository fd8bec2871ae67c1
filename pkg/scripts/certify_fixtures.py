#!/usr/bin/env python3
"""Walk the hand-checked fixtures and print every computed quantity.

Useful as a quick end-to-end smoke check and as a worked example of the
library API.  Exits nonzero if any residual is out of tolerance.
"""

import cmath
import math
import sys

from cmvtrace import (
    band_edges,
    band_layout,
    dirichlet_points,
    dirichlet_weights,
    full_report,
    tilde_word,
    validate_word,
    weights_oracle,
)

LAMBDAS = (1.0 + 0j, -1.0 + 0j, 1j, cmath.exp(1j * math.pi / 5))


def show(word_label, word, lambdas=LAMBDAS, tolerance=1e-8) -> bool:
    print(f"== {word_label} ==")
    fin = tilde_word(word)
    print(f"  tilde word: {[f'{a:.6g}' for a in fin.alpha]}")
    pts = dirichlet_points(word)
    wts = dirichlet_weights(word, pts)
    for z, w in zip(pts, wts):
        print(f"  point {z:+.12f}  weight {w:.12f}")
    oracle = weights_oracle(word)
    drift = max(abs(a - b) for a, b in zip(wts, oracle.weights))
    print(f"  weight route disagreement: {drift:.3e}")
    plus, minus = band_edges(word)
    layout = band_layout(plus, minus, pts)
    for i, ((b0, b1), (g0, g1)) in enumerate(zip(layout.bands, layout.gaps)):
        tag = " (degenerate gap)" if layout.degenerate[i] else ""
        print(f"  band {b0:+.6f} .. {b1:+.6f}   gap -> point {layout.pairing[i]}{tag}")
    report = full_report(word, lambdas, tolerance=tolerance)
    for rec in report.records:
        if not rec.applicable:
            print(f"  {rec.formula_id:<6} not applicable ({rec.error})")
            continue
        lam = f" lambda={rec.lam:+.3f}" if rec.lam is not None else ""
        print(f"  {rec.formula_id:<6} residual {rec.residual:.3e}{lam}")
    print(f"  max residual {report.max_residual:.3e}  pass={report.passed}")
    print()
    return report.passed


def main() -> int:
    ok = True
    ok &= show("p=2 word (0.5, 0)", validate_word([0.5, 0.0]))
    ok &= show("p=4 word (0.5, 0, 0, 0.3i)", validate_word([0.5, 0.0, 0.0, 0.3j]))
    for p in (2, 4, 6, 8):
        ok &= show(f"free word p={p}", validate_word([0.0] * p))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
